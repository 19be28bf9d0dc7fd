"""Enumeration, admissibility rules, group deduction, Enriques filters, towers."""
