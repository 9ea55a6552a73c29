"""
Sharpness scans: how close a family comes to equality over a parameter grid.
"""

import itertools
import logging
import math
from dataclasses import replace
from typing import Dict, List, Optional, Sequence

import numpy as np

from ..config import get_settings
from ..engine.hypotheses import scale_of
from ..engine.instances import sample_instance
from ..engine.registry import normalize_family
from ..engine.suite import evaluate
from ..errors import VerifierError
from ..linalg.sampling import trial_rng
from ..schemas import CheckResult, CheckStatus, Instance, SharpnessPoint, ToleranceConfig

logger = logging.getLogger(__name__)


def relative_gap(result: CheckResult) -> Optional[float]:
    """gap / max(1, ‖lhs‖, ‖rhs‖); None for skipped checks."""
    if result.status is CheckStatus.SKIPPED or result.gap is None:
        return None
    return result.gap / scale_of(result.lhs, result.rhs)


def scalar_instance(inst: Instance) -> Instance:
    """
    Replace A by c·I with c = √(mM) (inside any declared bounds) and B by c/2·I.

    Scalar instances are where the refined bounds become equalities.
    """
    n = inst.A.shape[0]
    c = math.sqrt(inst.bounds.m * inst.bounds.M) if inst.bounds is not None else 2.0
    eye = np.eye(n, dtype=complex)
    B = None if inst.B is None else 0.5 * c * eye
    return replace(inst, A=c * eye, B=B)


def _grid_points(param_grid: Dict[str, Sequence[float]]) -> List[Dict[str, float]]:
    names = sorted(param_grid)
    return [dict(zip(names, values)) for values in itertools.product(*(param_grid[n] for n in names))]


def _safe_gap(family: str, inst: Instance, tol: ToleranceConfig) -> Optional[float]:
    try:
        return relative_gap(evaluate(family, inst, tol))
    except VerifierError as e:
        logger.debug(f"{family}: sharpness evaluation skipped: {e}")
        return None


def sharpness_scan(
    family: str,
    param_grid: Dict[str, Sequence[float]],
    trials: int = 20,
    seed: int = 7,
    dim: int = 3,
    tol: Optional[ToleranceConfig] = None,
) -> List[SharpnessPoint]:
    """
    Minimal relative gap per grid point over seeded gallery instances.

    Trial t at every grid point starts from the same gallery draw, so points
    differ only in their parameters.

    Args:
        family: family id
        param_grid: exponent name → values; the cartesian product is scanned
        trials: instances per grid point
        seed: base seed
        dim: dimension of A

    Returns:
        one SharpnessPoint per grid point, including the scalar-instance check
    """
    family = normalize_family(family)
    tol = tol or get_settings().tolerance
    points: List[SharpnessPoint] = []
    for params in _grid_points(param_grid):
        gaps: List[float] = []
        scalar_gap: Optional[float] = None
        for trial in range(trials):
            inst = sample_instance(family, dim, trial_rng(seed, family, trial))
            inst = replace(inst, params=replace(inst.params, **params))
            gap = _safe_gap(family, inst, tol)
            if gap is not None:
                gaps.append(gap)
            if trial == 0:
                scalar_gap = _safe_gap(family, scalar_instance(inst), tol)
        minimum = min(gaps) if gaps else math.nan
        points.append(
            SharpnessPoint(params=params, min_relative_gap=minimum, scalar_check_gap=scalar_gap, evaluated=len(gaps))
        )
        logger.debug(f"{family} {params}: min relative gap {minimum:.3e} over {len(gaps)} instances")
    return points
