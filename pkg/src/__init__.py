"""Numerical verification of asymmetric Choi–Davis and Kadison type operator inequalities."""

__version__ = "0.1.0"
