"""
Data schemas and type definitions for the inequality verification engine.
Compatible with LangGraph StateGraph requirements.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Any, Dict, List, Optional, Tuple

import numpy as np

from .errors import ConstraintViolationError

if TYPE_CHECKING:
    from .functions.expressions import ScalarFn
    from .maps.positive_maps import MapSpec


class CheckStatus(Enum):
    """Outcome of one inequality check."""
    PASSED = "passed"
    FAILED = "failed"
    SKIPPED = "skipped"


class HypothesisState(Enum):
    """Three-valued hypothesis outcome."""
    HOLDS = "holds"
    FAILS = "fails"
    NOT_APPLICABLE = "not-applicable"


class ConvexityProperty(Enum):
    """Operator properties the certifier can test."""
    OPERATOR_CONVEX = "operator-convex"
    OPERATOR_CONCAVE = "operator-concave"
    OPERATOR_MONOTONE = "operator-monotone"


class CertificateVerdict(Enum):
    """Sampling verdicts; a pass is never a proof."""
    CERTIFIED_AT_SCALE = "certified-at-scale"
    VIOLATED = "violated"


class CheckMode(Enum):
    """How partial-isometry statements are decided."""
    CONSTRUCTIVE = "constructive"
    DOMINANCE = "dominance"


@dataclass(frozen=True)
class ToleranceConfig:
    """Absolute/relative slack for order checks."""
    atol: float = 1e-10
    rtol: float = 1e-9

    def bound(self, scale: float) -> float:
        return self.atol + self.rtol * scale

    def scaled(self, factor: float) -> "ToleranceConfig":
        return ToleranceConfig(atol=self.atol * factor, rtol=self.rtol * factor)


@dataclass(frozen=True)
class OrderVerdict:
    """Result of a Löwner or spectral-dominance comparison."""
    holds: bool
    gap_min_eig: float
    tolerance_used: float


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues with eigenvectors as columns."""
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


@dataclass(frozen=True)
class PolarParts:
    """X = W|X| with W a partial isometry on the support of |X|."""
    isometry: np.ndarray
    modulus: np.ndarray
    rank: int


@dataclass
class ConvexityCertificate:
    """Sampling-based operator convexity/concavity/monotonicity verdict."""
    property: ConvexityProperty
    trials: int
    max_violation: float
    verdict: CertificateVerdict
    tolerance: float = 0.0
    witness: Optional[Tuple[np.ndarray, np.ndarray, float]] = None
    function: str = ""

    @property
    def certified(self) -> bool:
        return self.verdict is CertificateVerdict.CERTIFIED_AT_SCALE


@dataclass
class EquivalenceReport:
    """Verdict vector for the four equivalent conditions on a positive f."""
    function: str
    certificates: Dict[str, ConvexityCertificate] = field(default_factory=dict)

    @property
    def verdicts(self) -> Dict[str, bool]:
        return {name: cert.certified for name, cert in self.certificates.items()}

    @property
    def consistent(self) -> bool:
        return len(set(self.verdicts.values())) <= 1


@dataclass
class MapValidation:
    """Unitality and sampled positivity of a map; failures are data, not exceptions."""
    variant: str
    unital: bool
    positive: bool
    unitality_error: float
    worst_min_eig: float
    samples: int
    problems: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.unital and self.positive and not self.problems


@dataclass(frozen=True)
class SpectralBounds:
    """Bounds 0 < m < M on a spectrum."""
    m: float
    M: float

    def __post_init__(self) -> None:
        if not (self.m > 0 and self.M > self.m):
            raise ConstraintViolationError(
                f"Spectral bounds need 0 < m < M, got m={self.m}, M={self.M}"
            )

    @property
    def h(self) -> float:
        return self.M / self.m

    def contains(self, eigenvalues: np.ndarray, slack: float = 1e-9) -> bool:
        scale = max(1.0, self.M)
        return bool(
            eigenvalues.min() >= self.m - slack * scale
            and eigenvalues.max() <= self.M + slack * scale
        )


@dataclass(frozen=True)
class ExponentParams:
    """Exponent parameters; each statement validates the ones it uses."""
    r: Optional[float] = None
    p: Optional[float] = None
    q: Optional[float] = None
    alpha: Optional[float] = None
    beta: Optional[float] = None
    gamma: Optional[float] = None

    def as_dict(self) -> Dict[str, float]:
        return {
            name: value
            for name, value in (
                ("r", self.r), ("p", self.p), ("q", self.q),
                ("alpha", self.alpha), ("beta", self.beta), ("gamma", self.gamma),
            )
            if value is not None
        }


@dataclass
class Instance:
    """Hypothesis tuple for one check."""
    phi: "MapSpec"
    A: np.ndarray
    B: Optional[np.ndarray] = None
    f: Optional["ScalarFn"] = None
    g: Optional["ScalarFn"] = None
    params: ExponentParams = field(default_factory=ExponentParams)
    bounds: Optional[SpectralBounds] = None
    seed: int = 0


@dataclass(frozen=True)
class HypothesisCheck:
    """One named hypothesis and its state."""
    name: str
    state: HypothesisState
    detail: str = ""


@dataclass
class CheckResult:
    """One inequality verdict."""
    family: str
    status: CheckStatus
    lhs: Optional[np.ndarray] = None
    rhs: Optional[np.ndarray] = None
    verdict: Optional[OrderVerdict] = None
    constant: Optional[float] = None
    isometry: Optional[PolarParts] = None
    chain_gaps: Optional[List[float]] = None
    chain_labels: List[str] = field(default_factory=list)
    hypotheses: List[HypothesisCheck] = field(default_factory=list)
    witness: Optional[Instance] = None
    notes: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.status is CheckStatus.PASSED

    @property
    def gap(self) -> Optional[float]:
        return None if self.verdict is None else self.verdict.gap_min_eig


@dataclass
class OmegaResult:
    """Refinement term of the strengthened Φ(A)^r ≥ Φ(A^r) bound."""
    value: float
    infimum: float
    sequence_tail: List[float] = field(default_factory=list)


@dataclass
class FamilyStats:
    """Aggregated suite outcome for one family."""
    family: str
    trials: int = 0
    passes: int = 0
    skips: int = 0
    failures: int = 0
    worst_gap: Optional[float] = None
    example_witness: Optional[Dict[str, Any]] = None
    theorem: bool = True


@dataclass
class SuiteReport:
    """Suite outcome across families."""
    families: List[FamilyStats] = field(default_factory=list)
    seed: int = 0
    tolerance: ToleranceConfig = field(default_factory=ToleranceConfig)
    config_echo: Dict[str, Any] = field(default_factory=dict)
    certificates: List[Dict[str, Any]] = field(default_factory=list)
    errors: List[str] = field(default_factory=list)

    @property
    def theorem_failures(self) -> int:
        return sum(s.failures for s in self.families if s.theorem)


@dataclass(frozen=True)
class SearchBudget:
    """Limits for randomized counterexample search."""
    max_samples: int = 2000
    hill_climb_steps: int = 60
    step_scale: float = 0.25
    seed: int = 7

    def __post_init__(self) -> None:
        if min(self.max_samples, self.hill_climb_steps) <= 0 or self.step_scale <= 0:
            raise ConstraintViolationError("Search budget entries must be positive")


@dataclass
class Certificate:
    """Re-validatable counterexample."""
    instance: Instance
    violation_eig: float
    family: str


@dataclass
class SharpnessPoint:
    """Minimal relative gap at one parameter point."""
    params: Dict[str, float]
    min_relative_gap: float
    scalar_check_gap: Optional[float] = None
    evaluated: int = 0


@dataclass
class TrialPlan:
    """One scheduled suite trial."""
    family: str
    index: int
    dim: int
    seed: int


@dataclass
class SuiteState:
    """Main state object for the verification workflow."""
    config: Dict[str, Any] = field(default_factory=dict)
    plan: List[TrialPlan] = field(default_factory=list)
    results: List[CheckResult] = field(default_factory=list)
    report: Optional[SuiteReport] = None
    rendered: str = ""
    errors: List[str] = field(default_factory=list)

    def add_error(self, error: str) -> None:
        """Add an error to the state."""
        self.errors.append(error)

    def has_errors(self) -> bool:
        """Check if there are any errors."""
        return len(self.errors) > 0
