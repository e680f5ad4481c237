"""Reversible ripple-carry and BCD adder netlists with exact simulation,
quantum-cost accounting and NCV decomposition checks."""

__version__ = "0.1.0"
