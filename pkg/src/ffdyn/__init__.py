"""Exact arithmetic dynamics over rational function fields F_q(t)."""

__version__ = "0.1.0"
