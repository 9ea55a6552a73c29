"""
One-dimensional extremum search: uniform grid scan, then golden-section
refinement of the best bracket.
"""

import math
from typing import Callable, Tuple

import numpy as np

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2

GRID_POINTS = 4096
RELATIVE_WIDTH = 1e-12


def gss(f: Callable[[float], float], a: float, b: float, tol: float) -> Tuple[float, float]:
    """
    Golden-section search for a minimum.

    Given f with a single local minimum in [a, b], returns a sub-interval
    [c, d] containing it with d − c <= tol.
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    if h <= tol:
        return a, b

    n = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))

    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc = f(c)
    yd = f(d)

    for _ in range(n - 1):
        if yc < yd:
            b = d
            d = c
            yd = yc
            h = INV_PHI * h
            c = a + INV_PHI_SQUARE * h
            yc = f(c)
        else:
            a = c
            c = d
            yc = yd
            h = INV_PHI * h
            d = a + INV_PHI * h
            yd = f(d)

    if yc < yd:
        return a, d
    return c, b


def grid_minimize(
    f: Callable[[np.ndarray], np.ndarray], lo: float, hi: float, points: int = GRID_POINTS
) -> Tuple[float, float]:
    """
    Minimize a smooth vectorized f on [lo, hi].

    Returns:
        (argmin, min); the grid minimum is refined by golden section on its
        neighbouring bracket to width 1e-12·(hi − lo)
    """
    grid = np.linspace(lo, hi, points)
    values = f(grid)
    k = int(np.argmin(values))
    best_t, best = float(grid[k]), float(values[k])

    left = grid[max(k - 1, 0)]
    right = grid[min(k + 1, points - 1)]
    scalar = lambda t: float(f(np.array([t]))[0])  # noqa: E731
    a, b = gss(scalar, left, right, RELATIVE_WIDTH * (hi - lo))
    t_star = 0.5 * (a + b)
    refined = scalar(t_star)
    if refined < best:
        best_t, best = t_star, refined
    return best_t, best


def grid_maximize(
    f: Callable[[np.ndarray], np.ndarray], lo: float, hi: float, points: int = GRID_POINTS
) -> Tuple[float, float]:
    t, value = grid_minimize(lambda x: -f(x), lo, hi, points)
    return t, -value
