"""Exception hierarchy shared by every k3quot module."""

from __future__ import annotations

from typing import Optional


class K3QuotError(Exception):
    """Base class; the CLI maps it to exit code 2."""


class AmbientMismatch(K3QuotError):
    """Two divisor classes live on different Hirzebruch surfaces."""

    def __init__(self, left_n: int, right_n: int):
        super().__init__(f"classes on F_{left_n} and F_{right_n} cannot be combined")
        self.left_n = left_n
        self.right_n = right_n


class ParseError(K3QuotError):
    """Malformed fixture or class text; ``line``/``column`` are 1-based."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)
        self.line = line
        self.column = column


class InvalidComponent(K3QuotError):
    """A branch component breaks multiplicity or irreducibility constraints."""


class UnknownClass(K3QuotError):
    def __init__(self, class_id: str):
        super().__init__(f"unknown class: {class_id}")
        self.class_id = class_id


class NotAdmissible(K3QuotError):
    def __init__(self, class_id: str):
        super().__init__(f"class {class_id} has no abelian K3 cover")
        self.class_id = class_id


class GroupMismatch(K3QuotError):
    """The stabilizers force one group and the curated table records another."""

    def __init__(self, class_id: str, forced: str, curated: str):
        super().__init__(f"{class_id}: stabilizers force {forced}, curated {curated}")
        self.class_id = class_id
        self.forced = forced
        self.curated = curated


class NotCandidate(K3QuotError):
    def __init__(self, class_id: str):
        super().__init__(f"class {class_id} is not an Enriques candidate")
        self.class_id = class_id


class EmptyCatalog(K3QuotError):
    def __init__(self, n: object):
        super().__init__(f"no group catalog is defined for F_{n}")
        self.n = n


class InvalidGroupSpec(K3QuotError):
    def __init__(self, text: str):
        super().__init__(f"cannot parse group spec: {text!r}")
        self.text = text


class InvalidKind(K3QuotError):
    def __init__(self, kind: str):
        super().__init__(f"unknown root lattice kind: {kind!r}")
        self.kind = kind


class DegenerateLattice(K3QuotError):
    """The Gram matrix has determinant zero."""


class NotTabulated(K3QuotError):
    def __init__(self, group: str):
        super().__init__(f"group {group} is not a tabulated symplectic group")
        self.group = group


class PlanError(K3QuotError):
    """A cover plan document is malformed or references unknown data."""
