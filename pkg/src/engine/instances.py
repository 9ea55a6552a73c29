"""
Seeded instance galleries per family and the Instance JSON format.

Gallery parameters satisfy each family's hypotheses, so suites measure
soundness; the explorer widens the ranges through param_ranges. Function
exponents come from small discrete grids so hypothesis certificates are
reused from the certifier cache.
"""

import logging
from dataclasses import replace
from typing import Any, Callable, Dict, Optional

import numpy as np

from ..errors import DimensionMismatchError
from ..functions.expressions import POSITIVE, ScalarFn, parse_scalar_fn, power_fn, shifted_power_fn
from ..linalg.hermitian import eigvals_hermitian, mpower
from ..linalg.matrix_io import matrix_from_json, matrix_to_json
from ..linalg.sampling import log_uniform, matrix_with_spectrum, random_hermitian, random_positive
from ..maps.positive_maps import MapSpec, map_from_json, map_gallery
from ..schemas import ExponentParams, Instance, SpectralBounds
from .registry import normalize_family

logger = logging.getLogger(__name__)

M_RANGE = (0.1, 1.0)
H_RANGE = (1.5, 20.0)

CHDA_FUNCTIONS = ("pow(t,2)", "pow(t,1.5)", "pow(t,-1)", "pow(t,-0.5)", "div(1,add(1,t))", "add(pow(t,2),t)")
PERSPECTIVE_FUNCTIONS = (None, "pow(t,2)", "pow(t,1.5)", "div(pow(t,2),add(t,1))")
REV_JENSEN_FUNCTIONS = ("pow(t,0.5)", "pow(t,0.3)", "pow(t,2)", "pow(t,-1)", "pow(t,3)", "pow(add(t,1),0.5)")
REVERSE_F_FUNCTIONS = ("pow(t,0.1)", "pow(t,0.25)", "pow(t,0.4)", "pow(add(t,1),0.5)")
POWER_CD_EXPONENTS = (-1.0, -0.5, 0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0)
REV_CHOI_EXPONENTS = (0.25, 0.5, 0.75, 1.5, 2.0, 3.0)
F2_EXPONENTS = (0.0, 0.1, 0.25, 0.4, 0.5)
F2_SHIFTS = (0.0, 0.5, 1.0, 2.0)
PO1_F_EXPONENTS = (1.0, 1.25, 1.5, 1.75, 2.0)
QUARTER_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)
EIGHTH_GRID = (0.0, 0.125, 0.25, 0.375, 0.5)
MOMENT_ORDERS = (1, 2, 3)
BR_FUNCTIONS = (0.5, 1.0, 1.5, 2.0)


def gallery_fn(text: str) -> ScalarFn:
    return parse_scalar_fn(text, POSITIVE)


def positive_power(p: float) -> ScalarFn:
    return power_fn(p).restrict(POSITIVE)


def _pick(rng: np.random.Generator, options):
    return options[int(rng.integers(len(options)))]


def _sample_map(n_in: int, n_out: Optional[int], rng: np.random.Generator) -> MapSpec:
    if n_out is None:
        choices = [n_in, n_in - 1]
        if n_in >= 4 and n_in % 2 == 0:
            choices.append(n_in // 2)
        n_out = _pick(rng, choices)
    if not 1 <= n_out <= n_in:
        raise DimensionMismatchError(f"No unital map from dimension {n_in} to {n_out} in the gallery")
    gallery = map_gallery(n_in, n_out, int(rng.integers(2**31)))
    return _pick(rng, gallery)


def sample_spectrum(n: int, rng: np.random.Generator) -> tuple:
    """Log-uniform spectrum in [m, M]; endpoints are attained half of the time."""
    m = float(log_uniform(rng, *M_RANGE, 1)[0])
    M = m * float(rng.uniform(*H_RANGE))
    lam = log_uniform(rng, m, M, n)
    if n >= 2 and rng.random() < 0.5:
        lam[0], lam[-1] = m, M
    return SpectralBounds(m, M), lam


def _sample_positive(n: int, rng: np.random.Generator):
    bounds, lam = sample_spectrum(n, rng)
    return bounds, matrix_with_spectrum(lam, rng)


def _gap_pair(inst: Instance, rng: np.random.Generator) -> Instance:
    """A = B + D with D ≥ m > 0 and B ≥ 0."""
    n = inst.A.shape[0]
    B = random_positive(n, rng, lo=0.05, hi=5.0)
    D = random_positive(n, rng, lo=0.05, hi=1.0)
    A = B + D
    lam = eigvals_hermitian(A)
    return replace(inst, A=A, B=B, bounds=SpectralBounds(float(lam[0]), float(lam[-1]) * (1 + 1e-9)))


def _with_b(inst: Instance, rng: np.random.Generator) -> Instance:
    return replace(inst, B=random_positive(inst.A.shape[0], rng, lo=0.1, hi=5.0))


def _chda(inst, rng):
    return replace(inst, f=gallery_fn(_pick(rng, CHDA_FUNCTIONS)))


def _power_cd(inst, rng):
    return replace(inst, params=ExponentParams(p=_pick(rng, POWER_CD_EXPONENTS)))


def _kadison(inst, rng):
    if rng.random() < 0.5:
        return replace(inst, A=random_hermitian(inst.A.shape[0], rng, scale=2.0), bounds=None)
    return inst


def _asy(inst, rng):
    return replace(inst, params=ExponentParams(gamma=float(rng.uniform(0, 1))))


def _asy2(inst, rng):
    alpha, beta = sorted(rng.uniform(0, 2, size=2))
    return replace(inst, params=ExponentParams(alpha=float(alpha), beta=float(beta)))


def _asy_furuta(inst, rng):
    alpha, beta = sorted(rng.uniform(0.05, 2, size=2))
    lo, hi = beta / (alpha + beta), 2 * beta / (alpha + beta)
    gamma = float(rng.uniform(lo, hi))
    return replace(inst, params=ExponentParams(alpha=float(alpha), beta=float(beta), gamma=gamma))


def _perspective(inst, rng):
    text = _pick(rng, PERSPECTIVE_FUNCTIONS)
    inst = _with_b(inst, rng)
    return replace(inst, f=None if text is None else gallery_fn(text))


def _f2(inst, rng, min_shift: float = 0.0):
    shifts = [c for c in F2_SHIFTS if c >= min_shift]
    f = shifted_power_fn(_pick(rng, shifts), _pick(rng, F2_EXPONENTS))
    return replace(inst, f=f)


def _f2_sandwich(inst, rng):
    return _f2(inst, rng, min_shift=1.0)


def _cor_gamma(inst, rng):
    return replace(inst, params=ExponentParams(gamma=float(rng.uniform(0, 0.5))))


def _prop_fr(inst, rng):
    inst = _f2(inst, rng)
    return replace(inst, params=ExponentParams(r=float(rng.uniform(0, 0.5))))


def _br_dominance(inst, rng):
    """A = C^a, B = C^b for a nonnegative nondecreasing pair of powers."""
    C = inst.A
    a, b = _pick(rng, BR_FUNCTIONS), _pick(rng, BR_FUNCTIONS)
    A, B = mpower(C, a), mpower(C, b)
    lam = eigvals_hermitian(A)
    return replace(inst, A=A, B=B, bounds=SpectralBounds(float(lam[0]), float(lam[-1]) * (1 + 1e-9)))


def _chebyshev(inst, rng):
    n = inst.A.shape[0]
    a = np.sort(rng.uniform(0.1, 5.0, n))
    b = np.sort(rng.uniform(0.1, 5.0, n))
    if rng.random() < 0.5:
        b = b[::-1]
    return replace(inst, A=np.diag(a).astype(complex), B=np.diag(b).astype(complex), bounds=None)


def _po1(inst, rng):
    p = _pick(rng, PO1_F_EXPONENTS)
    q_grid = [q for q in np.arange(-1.0, 0.0001, 0.25) if q >= max(-1.0, 1.0 - p) - 1e-12]
    q = float(_pick(rng, q_grid))
    return replace(
        inst,
        f=positive_power(p),
        g=positive_power(q),
        params=ExponentParams(r=float(rng.uniform(0, 0.5))),
    )


def _po1_reverse(inst, rng):
    pairs = [(a, b) for a in QUARTER_GRID for b in QUARTER_GRID if a + b <= 1]
    a, b = _pick(rng, pairs)
    return replace(
        inst,
        f=positive_power(a),
        g=positive_power(b),
        params=ExponentParams(r=float(rng.uniform(0, 0.5))),
    )


def _tt1m(inst, rng):
    return replace(inst, f=positive_power(_pick(rng, EIGHTH_GRID)), g=positive_power(_pick(rng, EIGHTH_GRID)))


def _me1(inst, rng):
    gamma = float(rng.uniform(0.2, 1.5))
    lo = float(rng.uniform(0, gamma / 2))
    hi = float(rng.uniform(0, gamma))
    alpha, beta = (lo, hi) if rng.random() < 0.5 else (hi, lo)
    return replace(inst, params=ExponentParams(alpha=alpha, beta=beta, gamma=gamma))


def _rev_jensen(inst, rng):
    return replace(inst, f=gallery_fn(_pick(rng, REV_JENSEN_FUNCTIONS)))


def _rev_choi(inst, rng):
    return replace(inst, params=ExponentParams(p=_pick(rng, REV_CHOI_EXPONENTS)))


def _reverse_f(inst, rng):
    return replace(inst, f=gallery_fn(_pick(rng, REVERSE_F_FUNCTIONS)))


def _nakamoto(inst, rng):
    return replace(inst, params=ExponentParams(gamma=float(rng.uniform(0, 1))))


def _m4(inst, rng):
    beta = float(rng.uniform(0.2, 1.5))
    return replace(inst, params=ExponentParams(alpha=float(rng.uniform(0, beta)), beta=beta))


def _elh(inst, rng):
    inst = _gap_pair(inst, rng)
    return replace(inst, params=ExponentParams(r=float(rng.uniform(0, 1))))


def _omega_gap(inst, rng):
    return replace(inst, params=ExponentParams(r=float(rng.uniform(0.5, 1))))


def _lemma_asa(inst, rng):
    inst = _gap_pair(inst, rng)
    p, r = float(rng.uniform(1, 2)), float(rng.uniform(0, 2))
    q = max(float(rng.uniform(1, 3)), (p + r) / (1 + r))
    return replace(inst, params=ExponentParams(p=p, q=q, r=r))


def _main2(inst, rng):
    beta = float(rng.uniform(0.2, 1.5))
    alpha = beta * float(rng.uniform(1.001, 2.0))
    return replace(inst, params=ExponentParams(alpha=alpha, beta=beta))


def _cor_lc(inst, rng):
    return replace(inst, params=ExponentParams(gamma=float(rng.uniform(0.5, 1))))


def _moment(inst, rng):
    return replace(inst, params=ExponentParams(r=float(_pick(rng, MOMENT_ORDERS))))


_FILLERS: Dict[str, Callable[[Instance, np.random.Generator], Instance]] = {
    "CHDA": _chda,
    "POWER_CD": _power_cd,
    "KADISON": _kadison,
    "ASY": _asy,
    "ASY2": _asy2,
    "ASY222": _asy_furuta,
    "ASY33": _asy_furuta,
    "PERSPECTIVE": _perspective,
    "COR_F2_UPPER": _f2,
    "COR_F2_LOWER": _f2,
    "COR_F2_SANDWICH": _f2_sandwich,
    "COR_GAMMA": _cor_gamma,
    "PROP_FR": _prop_fr,
    "BR_UNITARY_DOMINANCE": _br_dominance,
    "SCALAR_CHEBYSHEV": _chebyshev,
    "CH_OP1": _with_b,
    "CH_OP2": _with_b,
    "PO1": _po1,
    "PO1_REVERSE": _po1_reverse,
    "TT1M1": _tt1m,
    "TT1M2": _tt1m,
    "ME1": _me1,
    "REV_JENSEN": _rev_jensen,
    "REV_CHOI": _rev_choi,
    "THM_REVERSE_F": _reverse_f,
    "COR_NAKAMOTO": _nakamoto,
    "M4": _m4,
    "ELH": _elh,
    "OMEGA_GAP": _omega_gap,
    "LEMMA_ASA": _lemma_asa,
    "THM_MAIN2": _main2,
    "COR_LC": _cor_lc,
    "MOMENT": _moment,
}


def sample_instance(
    family: str, dim: int, rng: np.random.Generator, n_out: Optional[int] = None
) -> Instance:
    """
    Draw one hypothesis-satisfying instance of a family.

    Args:
        family: family id
        dim: input dimension of the map and size of A
        rng: generator; the instance is a pure function of its state
        n_out: output dimension; drawn from {dim, dim - 1, dim / 2} when omitted
    """
    family = normalize_family(family)
    seed = int(rng.integers(2**31))
    phi = _sample_map(dim, n_out, rng)
    bounds, A = _sample_positive(dim, rng)
    inst = Instance(phi=phi, A=A, bounds=bounds, seed=seed)
    return _FILLERS[family](inst, rng)


def instance_to_json(inst: Instance) -> Dict[str, Any]:
    data: Dict[str, Any] = {
        "phi": inst.phi.to_json(),
        "A": matrix_to_json(inst.A),
        "params": inst.params.as_dict(),
        "seed": inst.seed,
    }
    if inst.B is not None:
        data["B"] = matrix_to_json(inst.B)
    if inst.f is not None:
        data["f"] = inst.f.to_text()
    if inst.g is not None:
        data["g"] = inst.g.to_text()
    if inst.bounds is not None:
        data["bounds"] = {"m": inst.bounds.m, "M": inst.bounds.M}
    return data


def instance_from_json(data: Dict[str, Any]) -> Instance:
    """
    Parse an Instance; functions are read on (0, ∞).

    Raises:
        MapSpecError, DimensionMismatchError, ExpressionSyntaxError, ConstraintViolationError
    """
    params = ExponentParams(**{k: float(v) for k, v in data.get("params", {}).items()})
    bounds = data.get("bounds")
    return Instance(
        phi=map_from_json(data["phi"]),
        A=matrix_from_json(data["A"]),
        B=matrix_from_json(data["B"]) if "B" in data else None,
        f=gallery_fn(data["f"]) if "f" in data else None,
        g=gallery_fn(data["g"]) if "g" in data else None,
        params=params,
        bounds=SpectralBounds(float(bounds["m"]), float(bounds["M"])) if bounds else None,
        seed=int(data.get("seed", 0)),
    )
