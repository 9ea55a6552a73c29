"""Inequality checkers, the family registry and seeded suites."""

from .counterexamples import refutation_instance, reproduce_counterexamples
from .direct import check_inequality
from .instances import instance_from_json, instance_to_json, sample_instance
from .isometry import check_with_isometry
from .moment import check_moment_matrix
from .registry import FAMILIES, FAMILY_NAMES, THEOREM_FAMILIES, FamilyKind, family_spec, normalize_family
from .reverse import check_reverse
from .suite import evaluate, run_suite

__all__ = [
    "FAMILIES",
    "FAMILY_NAMES",
    "THEOREM_FAMILIES",
    "FamilyKind",
    "check_inequality",
    "check_moment_matrix",
    "check_reverse",
    "check_with_isometry",
    "evaluate",
    "family_spec",
    "instance_from_json",
    "instance_to_json",
    "normalize_family",
    "refutation_instance",
    "reproduce_counterexamples",
    "run_suite",
    "sample_instance",
]
