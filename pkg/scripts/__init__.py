"""Standalone runners for slice-afd experiments."""
