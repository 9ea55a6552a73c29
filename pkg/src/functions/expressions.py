"""
Scalar function expression trees, their text syntax and derived functions.

Grammar (whitespace ignored):

    expr := "t" | number | "const(" number ")"
          | "add(" expr "," expr ")" | "sub(" expr "," expr ")"
          | "mul(" expr "," expr ")" | "div(" expr "," expr ")"
          | "pow(" expr "," number ")" | "sqrt(" expr ")"
          | "comp(" expr "," expr ")"

comp(outer, inner) substitutes inner for t in outer. Trees are never
simplified, so a derived function evaluates exactly as the arithmetic of
its parts.
"""

import math
import re
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple, Union

import numpy as np

from ..errors import DomainViolationError, ExpressionSyntaxError

SAMPLE_FLOOR = 1e-3
SAMPLE_CEIL = 1e3
GRID_POINTS = 1024


def _num(x: float) -> str:
    return format(float(x), ".17g")


@dataclass(frozen=True)
class Interval:
    """Real interval; infinite endpoints are always open."""
    lo: float = -math.inf
    hi: float = math.inf
    lo_closed: bool = False
    hi_closed: bool = False

    def __str__(self) -> str:
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{_num(self.lo)}, {_num(self.hi)}{right}"

    def contains(self, t: float) -> bool:
        above = t >= self.lo if self.lo_closed else t > self.lo
        below = t <= self.hi if self.hi_closed else t < self.hi
        return bool(above and below)

    def intersect(self, other: "Interval") -> "Interval":
        if self.lo > other.lo:
            lo, lo_closed = self.lo, self.lo_closed
        elif other.lo > self.lo:
            lo, lo_closed = other.lo, other.lo_closed
        else:
            lo, lo_closed = self.lo, self.lo_closed and other.lo_closed
        if self.hi < other.hi:
            hi, hi_closed = self.hi, self.hi_closed
        elif other.hi < self.hi:
            hi, hi_closed = other.hi, other.hi_closed
        else:
            hi, hi_closed = self.hi, self.hi_closed and other.hi_closed
        if lo > hi or (lo == hi and not (lo_closed and hi_closed)):
            raise DomainViolationError(f"Empty domain intersection of {self} and {other}")
        return Interval(lo, hi, lo_closed, hi_closed)

    def clamp(self, values: np.ndarray, slack: float) -> Optional[np.ndarray]:
        """
        Pull values within slack of a closed endpoint onto it.

        Returns None if any value lies outside the interval beyond that.
        """
        v = np.asarray(values, dtype=float).copy()
        if math.isfinite(self.lo):
            if self.lo_closed:
                if np.any(v < self.lo - slack):
                    return None
                v = np.maximum(v, self.lo)
            elif np.any(v <= self.lo):
                return None
        if math.isfinite(self.hi):
            if self.hi_closed:
                if np.any(v > self.hi + slack):
                    return None
                v = np.minimum(v, self.hi)
            elif np.any(v >= self.hi):
                return None
        return v

    def sample_range(self) -> Tuple[float, float]:
        """Positive sub-interval used for sampling spectra: domain ∩ [1e-3, 1e3]."""
        lo = max(self.lo, SAMPLE_FLOOR)
        if lo == self.lo and not self.lo_closed:
            lo = self.lo * (1 + 1e-6) if self.lo > 0 else SAMPLE_FLOOR
        hi = min(self.hi, SAMPLE_CEIL)
        if hi == self.hi and not self.hi_closed:
            hi = self.hi * (1 - 1e-6)
        if not 0 < lo < hi:
            raise DomainViolationError(f"Domain {self} has no positive sampling range")
        return lo, hi

    def grid(self, points: int = GRID_POINTS) -> np.ndarray:
        lo, hi = self.sample_range()
        return np.geomspace(lo, hi, points)


REALS = Interval()
NONNEGATIVE = Interval(0.0, math.inf, lo_closed=True)
POSITIVE = Interval(0.0, math.inf)


def power_domain(p: float) -> Interval:
    if float(p).is_integer() and p >= 0:
        return REALS
    if p > 0:
        return NONNEGATIVE
    return POSITIVE


class Node:
    """Expression tree node."""

    def evaluate(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def to_text(self) -> str:
        raise NotImplementedError

    def natural_domain(self) -> Interval:
        return REALS

    def children(self) -> Tuple["Node", ...]:
        return ()


@dataclass(frozen=True)
class Constant(Node):
    value: float

    def evaluate(self, t: np.ndarray) -> np.ndarray:
        return np.full(np.shape(t), float(self.value))

    def to_text(self) -> str:
        return f"const({_num(self.value)})"


@dataclass(frozen=True)
class Identity(Node):

    def evaluate(self, t: np.ndarray) -> np.ndarray:
        return np.asarray(t, dtype=float)

    def to_text(self) -> str:
        return "t"


@dataclass(frozen=True)
class Power(Node):
    """t ↦ t^p."""
    exponent: float

    def evaluate(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            if float(self.exponent).is_integer():
                k = int(self.exponent)
                return t ** k if k >= 0 else 1.0 / t ** (-k)
            return np.power(t, self.exponent)

    def to_text(self) -> str:
        return f"pow(t,{_num(self.exponent)})"

    def natural_domain(self) -> Interval:
        return power_domain(self.exponent)


@dataclass(frozen=True)
class Sum(Node):
    left: Node
    right: Node

    def evaluate(self, t: np.ndarray) -> np.ndarray:
        return self.left.evaluate(t) + self.right.evaluate(t)

    def to_text(self) -> str:
        if isinstance(self.right, Product) and self.right.left == Constant(-1.0):
            return f"sub({self.left.to_text()},{self.right.right.to_text()})"
        return f"add({self.left.to_text()},{self.right.to_text()})"

    def natural_domain(self) -> Interval:
        return self.left.natural_domain().intersect(self.right.natural_domain())

    def children(self) -> Tuple[Node, ...]:
        return (self.left, self.right)


@dataclass(frozen=True)
class Product(Node):
    left: Node
    right: Node

    def evaluate(self, t: np.ndarray) -> np.ndarray:
        return self.left.evaluate(t) * self.right.evaluate(t)

    def to_text(self) -> str:
        return f"mul({self.left.to_text()},{self.right.to_text()})"

    def natural_domain(self) -> Interval:
        return self.left.natural_domain().intersect(self.right.natural_domain())

    def children(self) -> Tuple[Node, ...]:
        return (self.left, self.right)


@dataclass(frozen=True)
class Quotient(Node):
    numerator: Node
    denominator: Node

    def evaluate(self, t: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.numerator.evaluate(t) / self.denominator.evaluate(t)

    def to_text(self) -> str:
        return f"div({self.numerator.to_text()},{self.denominator.to_text()})"

    def natural_domain(self) -> Interval:
        domain = self.numerator.natural_domain().intersect(self.denominator.natural_domain())
        if isinstance(self.denominator, Identity):
            domain = domain.intersect(POSITIVE)
        elif domain.lo_closed and self.denominator.evaluate(np.array([domain.lo]))[0] == 0:
            domain = Interval(domain.lo, domain.hi, False, domain.hi_closed)
        return domain

    def children(self) -> Tuple[Node, ...]:
        return (self.numerator, self.denominator)


@dataclass(frozen=True)
class Compose(Node):
    """outer(inner(t))."""
    outer: Node
    inner: Node

    def evaluate(self, t: np.ndarray) -> np.ndarray:
        with np.errstate(invalid="ignore", divide="ignore"):
            return self.outer.evaluate(self.inner.evaluate(t))

    def to_text(self) -> str:
        if isinstance(self.outer, Power):
            return f"pow({self.inner.to_text()},{_num(self.outer.exponent)})"
        return f"comp({self.outer.to_text()},{self.inner.to_text()})"

    def natural_domain(self) -> Interval:
        outer = self.outer.natural_domain()
        inner = self.inner.natural_domain()
        return inner if outer == REALS else inner.intersect(outer)

    def children(self) -> Tuple[Node, ...]:
        return (self.outer, self.inner)


def _singular_points(node: Node) -> List[Node]:
    """Sub-expressions whose values must keep one sign on the domain."""
    found: List[Node] = []
    if isinstance(node, Quotient):
        found.append(node.denominator)
    if isinstance(node, Compose) and node.outer.natural_domain() != REALS:
        found.append(node.inner)
    for child in node.children():
        found.extend(_singular_points(child))
    return found


@dataclass(frozen=True)
class ScalarFn:
    """Expression tree together with the interval it is declared on."""
    expr: Node
    domain: Interval

    def __call__(self, t: float) -> float:
        return self.eval(t)

    def __str__(self) -> str:
        return self.to_text()

    def eval(self, t: float) -> float:
        """Evaluate at one point of the domain."""
        if not self.domain.contains(t):
            raise DomainViolationError(f"{_num(t)} is outside the domain {self.domain} of {self.to_text()}")
        return float(self.expr.evaluate(np.array([t], dtype=float))[0])

    def evaluate(self, t: np.ndarray) -> np.ndarray:
        """Vectorized evaluation without domain checks."""
        return self.expr.evaluate(np.asarray(t, dtype=float))

    def to_text(self) -> str:
        return self.expr.to_text()

    def validate(self) -> "ScalarFn":
        """
        Check finiteness and nonvanishing denominators on a 1024-point grid.

        Raises:
            DomainViolationError: if the function is not finite on its sampled domain
        """
        grid = self.domain.grid()
        values = self.evaluate(grid)
        if not np.all(np.isfinite(values)):
            raise DomainViolationError(f"{self.to_text()} is not finite on {self.domain}")
        for sub in _singular_points(self.expr):
            inner = sub.evaluate(grid)
            if np.any(inner == 0) or (np.any(inner > 0) and np.any(inner < 0)):
                raise DomainViolationError(
                    f"{sub.to_text()} vanishes or changes sign on {self.domain} in {self.to_text()}"
                )
        return self

    def restrict(self, domain: Interval) -> "ScalarFn":
        return ScalarFn(self.expr, self.domain.intersect(domain))


def make_fn(expr: Node, domain: Optional[Interval] = None) -> ScalarFn:
    return ScalarFn(expr, domain if domain is not None else expr.natural_domain()).validate()


def power_fn(p: float) -> ScalarFn:
    return make_fn(Power(float(p)))


def constant_fn(c: float) -> ScalarFn:
    return ScalarFn(Constant(float(c)), POSITIVE)


def identity_fn() -> ScalarFn:
    return ScalarFn(Identity(), POSITIVE)


def shifted_power_fn(c: float, p: float) -> ScalarFn:
    """(t + c)^p on (0, ∞)."""
    return make_fn(Compose(Power(float(p)), Sum(Identity(), Constant(float(c)))), POSITIVE)


class DeriveKind(Enum):
    T_TIMES_F = "t_times_f"
    T_OVER_F = "t_over_f"
    F_POW_R = "f_pow_r"
    FG_OVER_T = "fg_over_t"
    T_OVER_FG = "t_over_fg"
    RECIPROCAL = "reciprocal"
    F_SQUARED = "f_squared"


def derive(
    f: ScalarFn,
    kind: Union[DeriveKind, str],
    g: Optional[ScalarFn] = None,
    r: Optional[float] = None,
) -> ScalarFn:
    """
    Build t·f, t/f, f^r, f·g/t, t/(f·g), 1/f or f² as a new tree.

    Quotients by t restrict the domain to (0, ∞).
    """
    kind = DeriveKind(kind)
    t = Identity()
    domain = f.domain
    if kind in (DeriveKind.FG_OVER_T, DeriveKind.T_OVER_FG):
        if g is None:
            raise ValueError(f"{kind.value} needs a second function g")
        domain = domain.intersect(g.domain).intersect(POSITIVE)

    if kind is DeriveKind.T_TIMES_F:
        expr: Node = Product(t, f.expr)
    elif kind is DeriveKind.T_OVER_F:
        expr = Quotient(t, f.expr)
    elif kind is DeriveKind.F_POW_R:
        if r is None:
            raise ValueError("f_pow_r needs an exponent r")
        expr = Compose(Power(float(r)), f.expr)
    elif kind is DeriveKind.FG_OVER_T:
        expr = Quotient(Product(f.expr, g.expr), t)
    elif kind is DeriveKind.T_OVER_FG:
        expr = Quotient(t, Product(f.expr, g.expr))
    elif kind is DeriveKind.RECIPROCAL:
        expr = Quotient(Constant(1.0), f.expr)
    else:
        expr = Product(f.expr, f.expr)
    return ScalarFn(expr, domain)


_TOKEN = re.compile(r"\s*(?:(?P<number>[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)|(?P<name>[a-z]+)|(?P<punct>[(),]))")


class _Parser:
    """Recursive-descent parser over the expression grammar."""

    def __init__(self, text: str):
        self.text = text
        self.tokens: List[Tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            match = _TOKEN.match(text, pos)
            if not match:
                raise ExpressionSyntaxError("Unexpected character", pos, text)
            kind = match.lastgroup
            start = match.start(kind)
            self.tokens.append((kind, match.group(kind), start))
            pos = match.end()
        self.index = 0

    def _peek(self) -> Optional[Tuple[str, str, int]]:
        return self.tokens[self.index] if self.index < len(self.tokens) else None

    def _next(self, expected: str) -> Tuple[str, str, int]:
        token = self._peek()
        if token is None:
            raise ExpressionSyntaxError(f"Unexpected end of input, expected {expected}", len(self.text), self.text)
        self.index += 1
        return token

    def _expect(self, symbol: str) -> None:
        kind, value, pos = self._next(repr(symbol))
        if value != symbol:
            raise ExpressionSyntaxError(f"Expected {symbol!r}, got {value!r}", pos, self.text)

    def _number(self) -> float:
        kind, value, pos = self._next("a number")
        if kind != "number":
            raise ExpressionSyntaxError(f"Expected a number, got {value!r}", pos, self.text)
        return float(value)

    def parse(self) -> Node:
        node = self._expr()
        token = self._peek()
        if token is not None:
            raise ExpressionSyntaxError(f"Trailing input {token[1]!r}", token[2], self.text)
        return node

    def _expr(self) -> Node:
        kind, value, pos = self._next("an expression")
        if kind == "number":
            return Constant(float(value))
        if kind != "name":
            raise ExpressionSyntaxError(f"Unexpected {value!r}", pos, self.text)
        if value == "t":
            return Identity()
        self._expect("(")
        if value == "const":
            node: Node = Constant(self._number())
        elif value in ("add", "sub", "mul", "div", "comp"):
            left = self._expr()
            self._expect(",")
            right = self._expr()
            node = {
                "add": lambda: Sum(left, right),
                "sub": lambda: Sum(left, Product(Constant(-1.0), right)),
                "mul": lambda: Product(left, right),
                "div": lambda: Quotient(left, right),
                "comp": lambda: Compose(left, right),
            }[value]()
        elif value == "pow":
            base = self._expr()
            self._expect(",")
            exponent = self._number()
            node = Power(exponent) if isinstance(base, Identity) else Compose(Power(exponent), base)
        elif value == "sqrt":
            base = self._expr()
            node = Power(0.5) if isinstance(base, Identity) else Compose(Power(0.5), base)
        else:
            raise ExpressionSyntaxError(f"Unknown function {value!r}", pos, self.text)
        self._expect(")")
        return node


def parse_scalar_fn(text: str, domain: Optional[Interval] = None) -> ScalarFn:
    """
    Parse the text syntax into a validated ScalarFn.

    Raises:
        ExpressionSyntaxError: with the offending position
        DomainViolationError: if the function is not finite on its domain
    """
    if not text or not text.strip():
        raise ExpressionSyntaxError("Empty expression", 0, text)
    return make_fn(_Parser(text).parse(), domain)
