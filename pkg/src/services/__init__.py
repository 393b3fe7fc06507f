"""Service layer helpers for the decomposition stack."""
