"""Recursive causal structure learning via removable variables."""
