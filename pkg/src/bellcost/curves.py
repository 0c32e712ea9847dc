"""Minimal mutual-information curves for CHSH violations under causal-structure constraints.

One curve per causal class, each giving the least setting/source mutual
information (bits) compatible with a CHSH value S in [2, 4] and uniform
settings:

* retrocausal:        i_R(s) = 2 - h((4-s)/8) - ((4+s)/8) log2 3
* causal (= zigzag):  i_C(s) = i_1(s) below the branch point S0, i_2(s) above
* one-sided:          i_OS(s) = 1 - h(s/4)
* superdeterministic: i_SD(s) = 2 exactly

The i_2 branch is parameterized by conjugate probability pairs (p, p*) with
equal values of f(p) = p log2((1-p)/p); the solvers here are plain bisection
on analytically bracketed monotone functions.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum, unique
from functools import lru_cache

from ._util import atomic_write_text, fmt12
from .core import CausalClass, DomainError, binary_entropy

__all__ = [
    "Branch",
    "CurvePoint",
    "ConjugatePair",
    "AppendixReport",
    "f_of_p",
    "f_slope",
    "find_p0",
    "s0",
    "conjugate",
    "i_R",
    "i_1",
    "i_2",
    "i_2_pair",
    "i_C",
    "i_OS",
    "i_Z",
    "i_SD",
    "i_1_curvature",
    "curve_point",
    "curve_sweep",
    "sweep_to_csv",
    "appendix_checks",
]

_LOG2 = math.log(2.0)
_LOG2_3 = math.log(3.0) / _LOG2
_EDGE_TOL = 1e-12


@unique
class Branch(Enum):
    I1 = "I1"
    I2 = "I2"


@dataclass(frozen=True)
class CurvePoint:
    """A point (s, info) on a minimal-information curve, with the causal branch tag."""

    s: float
    info: float
    branch: Branch | None = None

    def __post_init__(self) -> None:
        if not 2.0 - 1e-9 <= self.s <= 4.0 + 1e-9:
            raise DomainError(f"CurvePoint s={self.s!r} outside [2, 4]")
        if self.info < -1e-12:
            raise DomainError(f"CurvePoint info={self.info!r} negative")


@dataclass(frozen=True)
class ConjugatePair:
    """Probabilities p <= p0 <= p_star with f(p) = f(p_star)."""

    p: float
    p_star: float

    def __post_init__(self) -> None:
        p0 = find_p0()
        if not -_EDGE_TOL <= self.p <= p0 + 1e-9:
            raise DomainError(f"conjugate p={self.p!r} outside [0, p0]")
        if not p0 - 1e-9 <= self.p_star <= 0.5 + _EDGE_TOL:
            raise DomainError(f"conjugate p_star={self.p_star!r} outside [p0, 1/2]")
        if abs(f_of_p(self.p) - f_of_p(self.p_star)) > 1e-10:
            raise DomainError("conjugate pair residual |f(p) - f(p*)| exceeds 1e-10")


def f_of_p(p: float) -> float:
    """f(p) = p log2((1-p)/p) on [0, 1/2], with f(0) = 0 by continuity."""
    if p < -_EDGE_TOL or p > 0.5 + _EDGE_TOL:
        raise DomainError(f"f_of_p: p={p!r} outside [0, 1/2]")
    if p <= 0.0:
        return 0.0
    return p * math.log((1.0 - p) / p) / _LOG2


def f_slope(p: float) -> float:
    """df/dp = log2((1-p)/p) - 1/((1-p) ln 2), for p in (0, 1/2]."""
    return math.log((1.0 - p) / p) / _LOG2 - 1.0 / ((1.0 - p) * _LOG2)


def _bisect(func, lo: float, hi: float, increasing: bool, tol: float = 1e-15) -> float:
    """Root of a monotone sign-changing func on [lo, hi] by plain bisection."""
    for _ in range(200):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        v = func(mid)
        if (v < 0.0) == increasing:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@lru_cache(maxsize=1)
def find_p0() -> float:
    """The maximizer p0 of f(p) on (0, 1/2): unique root of f_slope, near 0.218."""
    lo, hi = 0.01, 0.49
    if not (f_slope(lo) > 0.0 > f_slope(hi)):
        raise RuntimeError("f_slope bracket lost its sign change")  # pragma: no cover
    return _bisect(f_slope, lo, hi, increasing=False)


@lru_cache(maxsize=1)
def s0() -> float:
    """Branch point S0 = 4 - 8 p0^2 of the causal curve, near 3.620."""
    p0 = find_p0()
    return 4.0 - 8.0 * p0 * p0


def conjugate(p: float) -> ConjugatePair:
    """The pair (p, p*) with f(p*) = f(p) and p* on the decreasing branch [p0, 1/2]."""
    p0 = find_p0()
    if p < -_EDGE_TOL or p > p0 + _EDGE_TOL:
        raise DomainError(f"conjugate: p={p!r} outside [0, p0]")
    p = min(max(p, 0.0), p0)
    if p == 0.0:
        return ConjugatePair(0.0, 0.5)
    if p >= p0:
        return ConjugatePair(p0, p0)
    target = f_of_p(p)
    # f decreases from f(p0) to 0 on [p0, 1/2]
    p_star = _bisect(lambda q: f_of_p(q) - target, p0, 0.5, increasing=False)
    return ConjugatePair(p, p_star)


def _check_s(s: float, lo: float = 2.0) -> float:
    if s < lo - 1e-9 or s > 4.0 + 1e-9:
        raise DomainError(f"CHSH value s={s!r} outside [{lo}, 4]")
    return min(max(s, lo), 4.0)


def i_R(s: float) -> float:
    """Retrocausal minimum: 2 - h((4-s)/8) - ((4+s)/8) log2 3."""
    s = _check_s(s)
    value = 2.0 - binary_entropy((4.0 - s) / 8.0) - (4.0 + s) / 8.0 * _LOG2_3
    return max(0.0, value)  # the closed form leaves -2e-16 at s = 2


def i_1(s: float) -> float:
    """Equal-pair causal branch: 2 - 2 h(sqrt((4-s)/8))."""
    s = _check_s(s)
    return 2.0 - 2.0 * binary_entropy(math.sqrt((4.0 - s) / 8.0))


def i_2_pair(s: float) -> ConjugatePair:
    """Solve 4 - 8 p p*(p) = s for p in [0, p0] (the product is monotone there)."""
    p0 = find_p0()
    lo = s0()
    if s < lo - 1e-9 or s > 4.0 + 1e-9:
        raise DomainError(f"i_2: s={s!r} outside [S0, 4]")
    if s >= 4.0 - _EDGE_TOL:
        return ConjugatePair(0.0, 0.5)
    if s <= lo:
        return ConjugatePair(p0, p0)
    target = (4.0 - s) / 8.0
    p = _bisect(lambda q: q * conjugate(q).p_star - target, 0.0, p0, increasing=True)
    return ConjugatePair(p, conjugate(p).p_star)


def i_2(s: float) -> float:
    """Conjugate-pair causal branch on [S0, 4]: 2 - h(p) - h(p*)."""
    if s >= 4.0 - _EDGE_TOL:
        _check_s(s)
        return 1.0  # analytic endpoint, pair (0, 1/2)
    if s <= s0():
        _check_s(s, lo=s0())
        return i_1(s0())
    pair = i_2_pair(s)
    return 2.0 - binary_entropy(pair.p) - binary_entropy(pair.p_star)


def i_C(s: float) -> CurvePoint:
    """Causal minimum: i_1 below S0, i_2 above, with the branch tag."""
    s = _check_s(s)
    if s <= s0():
        return CurvePoint(s, i_1(s), Branch.I1)
    return CurvePoint(s, i_2(s), Branch.I2)


def i_OS(s: float) -> float:
    """One-sided minimum: 1 - h(s/4)."""
    s = _check_s(s)
    return 1.0 - binary_entropy(s / 4.0)


def i_Z(s: float) -> CurvePoint:
    """Zigzag minimum; information-equivalent to the causal curve."""
    return i_C(s)


def i_SD(s: float) -> float:
    """Superdeterministic cost: the full settings entropy, 2 bits."""
    _check_s(s)
    return 2.0


def curve_point(causal_class: CausalClass, s: float) -> CurvePoint:
    """Evaluate the minimal-information curve of a causal class at s."""
    if causal_class is CausalClass.RETROCAUSAL:
        return CurvePoint(_check_s(s), i_R(s))
    if causal_class is CausalClass.CAUSAL:
        return i_C(s)
    if causal_class is CausalClass.ZIGZAG:
        return i_Z(s)
    if causal_class is CausalClass.ONE_SIDED:
        return CurvePoint(_check_s(s), i_OS(s))
    if causal_class is CausalClass.SUPERDETERMINISTIC:
        return CurvePoint(_check_s(s), i_SD(s))
    raise DomainError(f"unknown causal class {causal_class!r}")  # pragma: no cover


def _worker_count() -> int:
    raw = os.environ.get("BELLCOST_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def curve_sweep(
    causal_class: CausalClass, s_min: float, s_max: float, n: int
) -> list[CurvePoint]:
    """n evenly spaced curve points on [s_min, s_max].

    Evaluation order never affects the result; BELLCOST_THREADS > 1 spreads the
    evaluations over a thread pool.
    """
    if n < 2:
        raise DomainError("curve_sweep needs n >= 2")
    s_min = _check_s(s_min)
    s_max = _check_s(s_max)
    if s_min > s_max:
        raise DomainError("curve_sweep needs s_min <= s_max")
    grid = [s_min + (s_max - s_min) * k / (n - 1) for k in range(n)]
    workers = _worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda s: curve_point(causal_class, s), grid))
    return [curve_point(causal_class, s) for s in grid]


def sweep_to_csv(
    points: list[CurvePoint], causal_class: CausalClass, path: str | None = None
) -> str:
    """Render a sweep as CSV (header S,I,branch,class; 12 significant digits; LF)."""
    lines = ["S,I,branch,class"]
    for pt in points:
        branch = pt.branch.value if pt.branch is not None else ""
        lines.append(f"{fmt12(pt.s)},{fmt12(pt.info)},{branch},{causal_class.value}")
    text = "\n".join(lines) + "\n"
    if path is not None:
        atomic_write_text(path, text)
    return text


@dataclass(frozen=True)
class AppendixReport:
    """Numerical checks of the causal-curve branch geometry around S0."""

    slope_i1_at_s0: float
    slope_i2_at_s0: float
    reference_slope: float  # h'(p0) / (8 p0)
    min_i1_second_derivative: float
    min_i2_second_derivative: float
    f_ratio_monotone: bool

    @property
    def tangent_gap(self) -> float:
        return abs(self.slope_i1_at_s0 - self.slope_i2_at_s0)


def _h_slope(p: float) -> float:
    return math.log((1.0 - p) / p) / _LOG2


def i_1_curvature(s: float) -> float:
    """Closed-form second derivative of i_1, the cross-check for the numerical one.

    With p = sqrt((4-s)/8):  i_1''(s) = [log2((1-p)/p) + 1/((1-p) ln 2)] / (128 p^3).
    Defined on [2, 4); the expression diverges as s -> 4.
    """
    s = _check_s(s)
    p = math.sqrt((4.0 - s) / 8.0)
    if p <= 0.0:
        raise DomainError("i_1_curvature is undefined at s = 4")
    return (_h_slope(p) + 1.0 / ((1.0 - p) * _LOG2)) / (128.0 * p**3)


def appendix_checks(grid_points: int = 400) -> AppendixReport:
    """Finite-difference verification that i_1 and i_2 share a tangent at S0 and are convex.

    Slopes use step 1e-5 (central for i_1; i_2 lives on [S0, 4], so its slope
    at S0 uses the second-order one-sided stencil).  Second derivatives use
    central differences with step 1e-4 on interior grids.
    """
    branch_point = s0()
    p0 = find_p0()
    h = 1e-5
    slope1 = (i_1(branch_point + h) - i_1(branch_point - h)) / (2.0 * h)
    slope2 = (
        -3.0 * i_2(branch_point) + 4.0 * i_2(branch_point + h) - i_2(branch_point + 2.0 * h)
    ) / (2.0 * h)
    reference = _h_slope(p0) / (8.0 * p0)

    h2 = 1e-4
    n = grid_points + 2
    grid1 = [2.0 + (4.0 - 2.0) * k / (n - 1) for k in range(1, n - 1)]
    min_dd1 = min(
        (i_1(s + h2) - 2.0 * i_1(s) + i_1(s - h2)) / (h2 * h2) for s in grid1
    )
    grid2 = [branch_point + (4.0 - branch_point) * k / (n - 1) for k in range(1, n - 1)]
    min_dd2 = min(
        (i_2(s + h2) - 2.0 * i_2(s) + i_2(s - h2)) / (h2 * h2) for s in grid2
    )

    ratios = [f_of_p(i_2_pair(s).p) / (4.0 - s) for s in grid2]
    monotone = all(b > a for a, b in zip(ratios, ratios[1:]))

    return AppendixReport(
        slope_i1_at_s0=slope1,
        slope_i2_at_s0=slope2,
        reference_slope=reference,
        min_i1_second_derivative=min_dd1,
        min_i2_second_derivative=min_dd2,
        f_ratio_monotone=monotone,
    )
