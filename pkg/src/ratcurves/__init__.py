"""Rational curves on Fano varieties over finite fields."""

__version__ = "0.1.0"
