"""Data file locations, overridable through ``K3Q_*`` environment variables."""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

DATA_DIR = Path(__file__).resolve().parent / "data"

FIXTURES_ENV = "K3Q_FIXTURES"
VERDICTS_ENV = "K3Q_VERDICTS"
ENRIQUES_VERDICTS_ENV = "K3Q_ENRIQUES_VERDICTS"
PLANS_ENV = "K3Q_PLANS"


@dataclass(frozen=True)
class DataPaths:
    fixtures: Path = DATA_DIR / "classes.txt"
    verdicts: Path = DATA_DIR / "verdicts.tsv"
    enriques_verdicts: Path = DATA_DIR / "verdicts_enriques.tsv"
    plans: Path = DATA_DIR / "plans"

    @classmethod
    def from_env(cls, fixtures: Optional[str] = None) -> DataPaths:
        """Resolve paths; an explicit ``fixtures`` argument beats the environment."""
        default = cls()
        return cls(
            fixtures=Path(fixtures or os.environ.get(FIXTURES_ENV, default.fixtures)),
            verdicts=Path(os.environ.get(VERDICTS_ENV, default.verdicts)),
            enriques_verdicts=Path(
                os.environ.get(ENRIQUES_VERDICTS_ENV, default.enriques_verdicts)
            ),
            plans=Path(os.environ.get(PLANS_ENV, default.plans)),
        )
