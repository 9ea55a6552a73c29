"""
Family registry: every inequality the engine can evaluate, with its kind and
whether it is a proven statement.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, List

from ..errors import ConfigError


class FamilyKind(Enum):
    DIRECT = "direct"
    ISOMETRY = "isometry"
    REVERSE = "reverse"
    MOMENT = "moment"


@dataclass(frozen=True)
class FamilySpec:
    name: str
    kind: FamilyKind
    statement: str
    theorem: bool = True


_SPECS: List[FamilySpec] = [
    FamilySpec("CHDA", FamilyKind.DIRECT, "f(Φ(A)) ≤ Φ(f(A)) for operator convex f"),
    FamilySpec("POWER_CD", FamilyKind.DIRECT, "Φ(A)^p ≤ Φ(A^p) for p ∈ [-1,0] ∪ [1,2], reversed for p ∈ [0,1]"),
    FamilySpec("KADISON", FamilyKind.DIRECT, "Φ(A)² ≤ Φ(A²)"),
    FamilySpec("ASY", FamilyKind.DIRECT, "|Φ(X^γ)Φ(X)| ≤ Φ(X)^{1+γ}, γ ∈ [0,1]"),
    FamilySpec("ASY2", FamilyKind.DIRECT, "|Φ(X^α)Φ(X^β)| ≤ Φ(X^{α+β}), 0 ≤ α ≤ β"),
    FamilySpec("ASY222", FamilyKind.DIRECT, "|Φ(X^α)^γ Φ(X^β)^γ| ≤ Φ(X^{(α+β)γ})"),
    FamilySpec("ASY33", FamilyKind.DIRECT, "|Φ(X^{-α})^{-γ} Φ(X^β)^γ| ≤ Φ(X^{(α+β)γ})"),
    FamilySpec("PERSPECTIVE", FamilyKind.DIRECT, "g(Φ(A), Φ(B)) ≤ Φ(g(A, B)); default Φ(A)Φ(B)^{-1}Φ(A) ≤ Φ(AB^{-1}A)"),
    FamilySpec("COR_F2_UPPER", FamilyKind.DIRECT, "|Φ(f(A))Φ(A)| ≤ Φ(A f(A)) for f² operator concave"),
    FamilySpec("COR_F2_LOWER", FamilyKind.DIRECT, "|Φ(f(A))^{-1}Φ(A)| ≥ Φ(A f(A)^{-1}) for f² operator concave"),
    FamilySpec("COR_F2_SANDWICH", FamilyKind.DIRECT, "Φ(Af^{-1}) ≤ |Φ(f)^{-1}Φ(A)| ≤ |Φ(f)Φ(A)| ≤ Φ(Af) for f ≥ 1"),
    FamilySpec("COR_GAMMA", FamilyKind.DIRECT, "|Φ(A^γ)Φ(A)| ≤ Φ(A^{1+γ}) and |Φ(A^γ)^{-1}Φ(A)| ≥ Φ(A^{1-γ}), γ ∈ [0,1/2]"),
    FamilySpec("PROP_FR", FamilyKind.DIRECT, "|Φ(f(A)^{-1})^{-r}Φ(A)^r| ≤ Φ(A f(A))^r, r ∈ [0,1/2]"),
    FamilySpec("BR_UNITARY_DOMINANCE", FamilyKind.DIRECT, "Φ(A)Φ(B)Φ(A) ≤ VΦ(ABA)V* for A = h1(C), B = h2(C)"),
    FamilySpec("SCALAR_CHEBYSHEV", FamilyKind.DIRECT, "mean(a)·mean(b) ≤ mean(ab) for similarly ordered sequences"),
    FamilySpec("CH_OP1", FamilyKind.DIRECT, "|Φ(B)Φ(A)| ≤ Φ(A^{1/2}BA^{1/2})", theorem=False),
    FamilySpec("CH_OP2", FamilyKind.DIRECT, "Φ(A)Φ(B)Φ(A) ≤ Φ(ABA)", theorem=False),
    FamilySpec("PO1", FamilyKind.ISOMETRY, "|Φ(f)^{-r}Φ(A)^rΦ(g)^{-r}| ≤ V*Φ(f^{-r}A^rg^{-r})V"),
    FamilySpec("PO1_REVERSE", FamilyKind.ISOMETRY, "|Φ(f)^{-r}Φ(A)^rΦ(g)^{-r}| ≥ V*Φ(f^{-r}A^rg^{-r})V"),
    FamilySpec("TT1M1", FamilyKind.ISOMETRY, "|Φ(f)Φ(A)Φ(g)| ≤ U*Φ(f A g)U"),
    FamilySpec("TT1M2", FamilyKind.ISOMETRY, "|Φ(f)^{-1}Φ(A)Φ(g)^{-1}| ≥ V*Φ(f^{-1}Ag^{-1})V"),
    FamilySpec("ME1", FamilyKind.ISOMETRY, "Φ(A^{α+β+γ}) ≤ K·W|Φ(A^α)Φ(A^β)Φ(A^γ)|W*"),
    FamilySpec("REV_JENSEN", FamilyKind.REVERSE, "Φ(f(A)) ≥ K₁f(Φ(A)) (concave), Φ(f(A)) ≤ K₂f(Φ(A)) (convex)"),
    FamilySpec("REV_CHOI", FamilyKind.REVERSE, "Φ(A^p) ≤ K(m,M,p)Φ(A)^p (p > 1), reversed for 0 < p < 1"),
    FamilySpec("THM_REVERSE_F", FamilyKind.REVERSE, "Φ(A f(A)) ≤ K|Φ(f(A))Φ(A)|"),
    FamilySpec("COR_NAKAMOTO", FamilyKind.REVERSE, "Φ(A^{1+γ}) ≤ K|Φ(A^γ)Φ(A)|"),
    FamilySpec("M4", FamilyKind.REVERSE, "Φ(A^{α+β}) ≤ K|Φ(A^α)Φ(A^β)|"),
    FamilySpec("ELH", FamilyKind.REVERSE, "A^r − B^r ≥ ‖A‖^r − (‖A‖ − λ_min(A−B))^r"),
    FamilySpec("OMEGA_GAP", FamilyKind.REVERSE, "Φ(A)^r − Φ(A^r) ≥ ω(A, r)"),
    FamilySpec("LEMMA_ASA", FamilyKind.REVERSE, "A^{(p+r)/q} − (A^{r/2}B^pA^{r/2})^{1/q} ≥ scalar refinement"),
    FamilySpec("THM_MAIN2", FamilyKind.REVERSE, "Φ(X^α)^{1+β/α} ≥ |Φ(X^β)Φ(X^α)| + scalar refinement"),
    FamilySpec("COR_LC", FamilyKind.REVERSE, "Φ(X)^{1+γ} ≥ |Φ(X^γ)Φ(X)| + scalar refinement, γ ∈ [1/2,1]"),
    FamilySpec("MOMENT", FamilyKind.MOMENT, "[Φ(A^{i+j})]_{i,j=0..r} ≥ 0"),
]

FAMILIES: Dict[str, FamilySpec] = {spec.name: spec for spec in _SPECS}
FAMILY_NAMES: List[str] = [spec.name for spec in _SPECS]
THEOREM_FAMILIES: List[str] = [spec.name for spec in _SPECS if spec.theorem]


def normalize_family(name: str) -> str:
    """
    Canonical upper-case family id.

    Raises:
        ConfigError: for unknown names
    """
    key = name.strip().upper().replace("-", "_")
    if key not in FAMILIES:
        raise ConfigError(f"Unknown family {name!r}; known: {', '.join(FAMILY_NAMES)}")
    return key


def family_spec(name: str) -> FamilySpec:
    return FAMILIES[normalize_family(name)]
