"""
Unital positive linear maps in structurally positive form.

Every variant is completely positive by construction: a compression, the
normalized trace, a pinching or a convex combination of isometric
conjugations A ↦ Σ wᵢ Vᵢ*AVᵢ.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Tuple

import numpy as np

from ..errors import DimensionMismatchError, MapSpecError
from ..linalg.hermitian import as_hermitian, hermitian_part, min_eig
from ..linalg.matrix_io import matrix_from_json, matrix_to_json
from ..linalg.sampling import phase_fixed_qr, random_psd
from ..schemas import MapValidation

logger = logging.getLogger(__name__)

UNITAL_TOL = 1e-10
WEIGHT_TOL = 1e-12
POSITIVITY_FLOOR = -1e-10
VALIDATION_SAMPLES = 200


class MapSpec:
    """Base class of the map gallery."""

    variant: str = ""
    n_in: int
    n_out: int

    def apply(self, A: np.ndarray) -> np.ndarray:
        a = as_hermitian(A)
        if a.shape[0] != self.n_in:
            raise DimensionMismatchError(
                f"{self.variant} expects a {self.n_in}×{self.n_in} input, got {a.shape}"
            )
        return hermitian_part(self._apply(a))

    def __call__(self, A: np.ndarray) -> np.ndarray:
        return self.apply(A)

    def _apply(self, a: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def to_json(self) -> Dict[str, Any]:
        raise NotImplementedError

    def describe(self) -> str:
        return f"{self.variant}({self.n_in}→{self.n_out})"


@dataclass(frozen=True, eq=False)
class Compression(MapSpec):
    """Leading k×k block: A ↦ [a_ij]_{i,j≤k}."""
    n_in: int
    k: int
    variant: str = field(default="Compression", init=False)

    def __post_init__(self) -> None:
        if not 1 <= self.k <= self.n_in:
            raise MapSpecError(f"Compression needs 1 <= k <= n_in, got k={self.k}, n_in={self.n_in}")

    @property
    def n_out(self) -> int:
        return self.k

    def _apply(self, a: np.ndarray) -> np.ndarray:
        return a[: self.k, : self.k]

    def to_json(self) -> Dict[str, Any]:
        return {"variant": self.variant, "n_in": self.n_in, "k": self.k}


@dataclass(frozen=True, eq=False)
class NormalizedTrace(MapSpec):
    """A ↦ (tr A / n_in)·I_{n_out}."""
    n_in: int
    n_out: int
    variant: str = field(default="NormalizedTrace", init=False)

    def __post_init__(self) -> None:
        if self.n_in < 1 or self.n_out < 1:
            raise MapSpecError("NormalizedTrace needs positive dimensions")

    def _apply(self, a: np.ndarray) -> np.ndarray:
        return np.trace(a).real / self.n_in * np.eye(self.n_out, dtype=complex)

    def to_json(self) -> Dict[str, Any]:
        return {"variant": self.variant, "n_in": self.n_in, "n_out": self.n_out}


@dataclass(frozen=True, eq=False)
class Pinching(MapSpec):
    """Keeps the diagonal blocks of a partition of the indices."""
    partition: Tuple[Tuple[int, ...], ...]
    variant: str = field(default="Pinching", init=False)

    def __post_init__(self) -> None:
        indices = sorted(i for block in self.partition for i in block)
        if not self.partition or indices != list(range(len(indices))):
            raise MapSpecError(f"Pinching partition must cover 0..n-1 exactly once, got {self.partition}")

    @property
    def n_in(self) -> int:
        return sum(len(block) for block in self.partition)

    @property
    def n_out(self) -> int:
        return self.n_in

    def _apply(self, a: np.ndarray) -> np.ndarray:
        out = np.zeros_like(a)
        for block in self.partition:
            idx = np.ix_(block, block)
            out[idx] = a[idx]
        return out

    def to_json(self) -> Dict[str, Any]:
        return {"variant": self.variant, "partition": [list(b) for b in self.partition]}


@dataclass(frozen=True, eq=False)
class KrausMixture(MapSpec):
    """A ↦ Σ wᵢ Vᵢ*AVᵢ with Vᵢ: n_in×n_out isometries."""
    weights: Tuple[float, ...]
    isometries: Tuple[np.ndarray, ...]
    variant: str = field(default="KrausMixture", init=False)

    def __post_init__(self) -> None:
        if not self.isometries or len(self.weights) != len(self.isometries):
            raise MapSpecError("KrausMixture needs one weight per isometry")
        if any(w <= 0 for w in self.weights):
            raise MapSpecError(f"KrausMixture weights must be positive, got {self.weights}")
        shapes = {V.shape for V in self.isometries}
        if len(shapes) != 1:
            raise MapSpecError(f"KrausMixture isometries disagree in shape: {shapes}")
        n_in, n_out = shapes.pop()
        if n_out > n_in:
            raise MapSpecError(f"No {n_in}×{n_out} isometry exists")

    @property
    def n_in(self) -> int:
        return self.isometries[0].shape[0]

    @property
    def n_out(self) -> int:
        return self.isometries[0].shape[1]

    def _apply(self, a: np.ndarray) -> np.ndarray:
        out = np.zeros((self.n_out, self.n_out), dtype=complex)
        for w, V in zip(self.weights, self.isometries):
            out += w * (V.conj().T @ a @ V)
        return out

    def to_json(self) -> Dict[str, Any]:
        return {
            "variant": self.variant,
            "weights": [float(w) for w in self.weights],
            "isometries": [matrix_to_json(V) for V in self.isometries],
        }


def block_average(n: int) -> KrausMixture:
    """Φ(X) = (X₁₁ + X₂₂)/2 on 2n×2n block matrices."""
    eye = np.eye(n, dtype=complex)
    zero = np.zeros((n, n), dtype=complex)
    top = np.vstack([eye, zero])
    bottom = np.vstack([zero, eye])
    return KrausMixture(weights=(0.5, 0.5), isometries=(top, bottom))


def validate(phi: MapSpec, samples: int = VALIDATION_SAMPLES, seed: int = 0) -> MapValidation:
    """
    Check unitality and, on seeded random PSD inputs, positivity.

    Never raises; problems are collected in the report.
    """
    problems: List[str] = []
    unitality_error = float("inf")
    worst = float("inf")
    try:
        if isinstance(phi, KrausMixture):
            weight_sum = float(np.sum(phi.weights))
            if abs(weight_sum - 1.0) > WEIGHT_TOL:
                problems.append(f"weights sum to {weight_sum:.12g}, not 1")
            for i, V in enumerate(phi.isometries):
                defect = float(np.linalg.norm(V.conj().T @ V - np.eye(V.shape[1])))
                if defect > UNITAL_TOL:
                    problems.append(f"isometry {i} has ‖V*V − I‖_F = {defect:.3e}")
        image = phi.apply(np.eye(phi.n_in))
        unitality_error = float(np.linalg.norm(image - np.eye(phi.n_out)))
        rng = np.random.default_rng(seed)
        for _ in range(samples):
            A = random_psd(phi.n_in, rng, rank_one=bool(rng.integers(2)))
            worst = min(worst, min_eig(phi.apply(A)))
    except Exception as e:
        logger.warning(f"Validation of {phi.describe()} raised: {e}")
        problems.append(str(e))

    unital = unitality_error <= UNITAL_TOL
    if not unital and unitality_error != float("inf"):
        problems.append(f"‖Φ(I) − I‖_F = {unitality_error:.3e}")
    return MapValidation(
        variant=phi.variant,
        unital=unital,
        positive=worst >= POSITIVITY_FLOOR,
        unitality_error=unitality_error,
        worst_min_eig=worst,
        samples=samples,
        problems=problems,
    )


def random_map(n_in: int, n_out: int, terms: int, seed: int) -> KrausMixture:
    """
    Random KrausMixture: phase-fixed QR isometries of complex Gaussian columns,
    weights proportional to exponentials of Gaussians.

    Raises:
        MapSpecError: if n_out > n_in or terms < 1
    """
    if n_out > n_in or n_out < 1:
        raise MapSpecError(f"No {n_in}×{n_out} isometry exists")
    if terms < 1:
        raise MapSpecError("random_map needs at least one term")
    rng = np.random.default_rng(seed)
    isometries = []
    for _ in range(terms):
        z = rng.standard_normal((n_in, n_out)) + 1j * rng.standard_normal((n_in, n_out))
        isometries.append(phase_fixed_qr(z))
    raw = np.exp(rng.standard_normal(terms))
    weights = raw / raw.sum()
    return KrausMixture(weights=tuple(float(w) for w in weights), isometries=tuple(isometries))


def map_gallery(n_in: int, n_out: int, seed: int) -> List[MapSpec]:
    """Deterministic gallery of maps from n_in to n_out."""
    gallery: List[MapSpec] = [
        Compression(n_in, n_out),
        NormalizedTrace(n_in, n_out),
        random_map(n_in, n_out, 1, seed),
        random_map(n_in, n_out, 3, seed + 1),
    ]
    if n_in == n_out:
        half = n_in // 2
        gallery.append(Pinching((tuple(range(half)), tuple(range(half, n_in)))))
    if n_in == 2 * n_out:
        gallery.append(block_average(n_out))
    return gallery


def map_from_json(data: Dict[str, Any]) -> MapSpec:
    """
    Parse {"variant": ..., parameters...}.

    Raises:
        MapSpecError: on unknown variants or missing parameters
    """
    try:
        variant = data["variant"]
        if variant == "Compression":
            return Compression(int(data["n_in"]), int(data["k"]))
        if variant == "NormalizedTrace":
            return NormalizedTrace(int(data["n_in"]), int(data["n_out"]))
        if variant == "Pinching":
            return Pinching(tuple(tuple(int(i) for i in block) for block in data["partition"]))
        if variant == "KrausMixture":
            return KrausMixture(
                weights=tuple(float(w) for w in data["weights"]),
                isometries=tuple(matrix_from_json(V) for V in data["isometries"]),
            )
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, MapSpecError):
            raise
        raise MapSpecError(f"Malformed map JSON: {e}")
    raise MapSpecError(f"Unknown map variant {data.get('variant')!r}")
