"""
The two 3×3 instances refuting the naive operator Chebyshev inequalities.

Φ is the compression of M₃ to its leading 2×2 block. Both claimed orders
fail, and so do their unitary-dominance relaxations.
"""

import logging
from typing import Any, Dict, List, Optional

import numpy as np

from ..config import get_settings
from ..linalg.hermitian import eigvals_hermitian, spectral_dominance
from ..maps.positive_maps import Compression
from ..schemas import CheckResult, Instance, ToleranceConfig
from .direct import check_inequality

logger = logging.getLogger(__name__)

REFUTATION_A = np.array([[2.0, 0.0, 0.0], [0.0, 2.0, 1.0], [0.0, 1.0, 3.0]])
REFUTATION_B = np.array([[2.0, 1.0, 1.0], [1.0, 2.0, 0.0], [1.0, 0.0, 1.0]])

# Displayed values; the square-root sandwich is rounded to two decimals.
PRINTED = {
    "CH_OP1": {"lhs": [[4.0, 2.0], [2.0, 4.0]], "rhs": [[4.0, 2.4], [2.4, 3.89]]},
    "CH_OP2": {"lhs": [[8.0, 4.0], [4.0, 8.0]], "rhs": [[8.0, 6.0], [6.0, 9.0]]},
}
PRINT_ROUNDING = 5e-3


def refutation_instance() -> Instance:
    return Instance(phi=Compression(3, 2), A=REFUTATION_A.copy(), B=REFUTATION_B.copy())


def _real(X: np.ndarray) -> List[List[float]]:
    return np.real(X).tolist()


def _refutation(result: CheckResult, tol: ToleranceConfig, with_dominance: bool) -> Dict[str, Any]:
    printed = PRINTED[result.family]
    deviation = max(
        float(np.max(np.abs(result.lhs - np.array(printed["lhs"])))),
        float(np.max(np.abs(result.rhs - np.array(printed["rhs"])))),
    )
    entry = {
        "family": result.family,
        "lhs": _real(result.lhs),
        "rhs": _real(result.rhs),
        "difference_eigenvalues": eigvals_hermitian(result.rhs - result.lhs).tolist(),
        "holds": result.verdict.holds,
        "gap_min_eig": result.verdict.gap_min_eig,
        "printed": printed,
        "max_deviation_from_printed": deviation,
        "matches_printed": deviation <= PRINT_ROUNDING,
    }
    if with_dominance:
        dominance = spectral_dominance(result.lhs, result.rhs, tol)
        entry["dominance_holds"] = dominance.holds
        entry["dominance_gap"] = dominance.gap_min_eig
    return entry


def reproduce_counterexamples(
    tol: Optional[ToleranceConfig] = None, with_dominance: bool = True
) -> Dict[str, Any]:
    """
    Evaluate |Φ(B)Φ(A)| ≤ Φ(A^{1/2}BA^{1/2}) and Φ(A)Φ(B)Φ(A) ≤ Φ(ABA) on
    the fixed instance.

    Returns:
        report dict with the map, operands and one entry per refuted order;
        `holds` is False for both; with_dominance adds the relaxed check
        X ≤ VYV* for some unitary V, which fails as well
    """
    tol = tol or get_settings().tolerance
    inst = refutation_instance()
    refutations = [
        _refutation(check_inequality(family, inst, tol), tol, with_dominance)
        for family in ("CH_OP1", "CH_OP2")
    ]
    for entry in refutations:
        logger.info(
            f"{entry['family']}: holds={entry['holds']} (λ_min of difference {entry['gap_min_eig']:.6g})"
        )
    return {
        "map": inst.phi.to_json(),
        "A": _real(inst.A),
        "B": _real(inst.B),
        "refutations": refutations,
    }
