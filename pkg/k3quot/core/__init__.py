"""Exact value types: Picard classes, branch classes, groups, lattices."""
