"""Experiment runners that write JSON bundles with run metadata."""
