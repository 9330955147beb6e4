"""Checks tying algebras to surfaces."""
