"""Counterexample search under relaxed hypotheses and sharpness scans."""

from .search import parse_param_range, revalidate, search_violation
from .sharpness import sharpness_scan

__all__ = ["parse_param_range", "revalidate", "search_violation", "sharpness_scan"]
