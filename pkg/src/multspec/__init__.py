"""Exact multiplier-spectrum invariants of rational self-maps of P^1."""

__version__ = "0.1.0"
