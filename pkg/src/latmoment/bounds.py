"""Explicit constants behind the moment error bounds.

Everything here is an inequality with every constant computed: admissibility
thresholds for the number of module copies t, certified convexity exponents,
unit-count boxes, volume-ratio bounds driven by heights, truncated Dedekind
zeta values as rigorous intervals, and the assembled two-sided moment
brackets.  Operations that need t above a threshold raise ThresholdError
carrying the computed threshold, so callers (and the command line front end)
can report it.

Conventions.  A "hypothesis" is a pair of uniform height floors c0 >= c1 > 0:
c0 bounds the Weil height of non-torsion algebraic integers of the field from
below, c1 does the same for arbitrary non-torsion field elements.  Zeta
values are returned as closed intervals [value_low, value_high] that contain
the true value; upper bounds consume the high endpoint, so a wide interval
weakens but never invalidates a bound.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as _field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np
from mpmath import iv

from .heights import RredMatrix, h_infty, plucker
from .moments import MomentReport, a1m_bound, main_term
from .numberfield import (
    FieldElement,
    NumberField,
    _euler_phi,
    abs_norm,
    conjugates,
    denominator_norm,
)

__all__ = [
    "ThresholdError",
    "HeightHypothesis",
    "BoundReport",
    "ZetaInterval",
    "default_hypothesis",
    "voutier_hypothesis",
    "f_M",
    "g_M",
    "alpha_M",
    "t0_threshold",
    "best_k_threshold",
    "ellipsoid_intersection_bound",
    "volume_ratio_height_bound",
    "column_height_ratio_bound",
    "unit_count_bound",
    "proj_unit_sum_bound",
    "ideal_sum_bound",
    "ball_intersection_sum_terms",
    "second_moment_bounds",
    "cyclotomic_second_moment_constants",
    "a2m_bound",
    "moment_bounds",
    "dedekind_zeta",
    "dedekind_zeta_field",
]

_LOG2 = math.log(2.0)


class ThresholdError(ValueError):
    """The number of copies t is at or below the admissible threshold.

    The computed threshold is available as .t0 so front ends can print it.
    """

    def __init__(self, t0: float, message: str | None = None) -> None:
        self.t0 = float(t0)
        super().__init__(message or f"requires t > {self.t0:.6g}")


# ---------------------------------------------------------------------------
# height-floor hypotheses


@dataclass(frozen=True)
class HeightHypothesis:
    """Uniform lower bounds for the Weil height over a family of fields.

    c0 floors the height of non-torsion algebraic integers, c1 the height of
    arbitrary non-torsion elements; c0 >= c1 > 0 always.
    """

    c0: float
    c1: float
    provenance: str = "user"

    def __post_init__(self) -> None:
        if not (math.isfinite(self.c0) and math.isfinite(self.c1)):
            raise ValueError("height floors must be finite")
        if not self.c0 >= self.c1 > 0:
            raise ValueError(f"need c0 >= c1 > 0, got c0={self.c0}, c1={self.c1}")


_GOLDEN_FLOOR = 0.5 * math.log((1.0 + math.sqrt(5.0)) / 2.0)
_ABELIAN_FLOOR = math.log(5.0) / 12.0


def default_hypothesis(F: NumberField) -> HeightHypothesis:
    """Height floors for the supported family.

    Rationals: log 2 for both floors (a rational that is not 0 or a root of
    unity has a numerator or denominator of size >= 2).  Quadratic and
    cyclotomic fields: c0 = (1/2) log((1+sqrt 5)/2) for integers and
    c1 = (log 5)/12 for arbitrary elements; both are uniform over the family.
    """
    if F.kind == "rational":
        return HeightHypothesis(_LOG2, _LOG2, "cyclotomic-defaults")
    return HeightHypothesis(_GOLDEN_FLOOR, _ABELIAN_FLOOR, "cyclotomic-defaults")


def voutier_hypothesis(d: int) -> HeightHypothesis:
    """Unconditional degree-d floor (1/(4d)) (log log d / log d)^3.

    The displayed floor is nonpositive for d = 2 (log log 2 < 0), hence
    useless as a positive constant; we require d >= 3 and suggest the family
    defaults below that.
    """
    if d < 3:
        raise ValueError(
            "the (1/(4d))(log log d/log d)^3 floor is nonpositive for d < 3; "
            "use default_hypothesis instead"
        )
    v = (math.log(math.log(d)) / math.log(d)) ** 3 / (4 * d)
    return HeightHypothesis(v, v, "voutier")


# ---------------------------------------------------------------------------
# the convex comparison function and its certified exponent


def f_M(M: int, x):
    """(e^x + M e^(-x/M)) / (M+1); equals cosh x at M = 1, and >= 1 always."""
    if M < 1:
        raise ValueError(f"need M >= 1, got {M}")
    if isinstance(x, np.ndarray):
        return (np.exp(x) + M * np.exp(-x / M)) / (M + 1)
    return (math.exp(x) + M * math.exp(-x / M)) / (M + 1)


def g_M(M: int, x: float) -> float:
    """(x + M x^(-1/M)) / (M+1) for x > 0, the multiplicative twin of f_M."""
    if M < 1:
        raise ValueError(f"need M >= 1, got {M}")
    if not x > 0:
        raise ValueError("g_M needs x > 0")
    return (x + M * x ** (-1.0 / M)) / (M + 1)


_ALPHA_GRID_STEP = 1e-3
_ALPHA_GRID_END = 50.0


def _alpha_certified(M: int, c0: float, a: float) -> bool:
    # log f_M(x) - a x is convex, so on each grid cell the tangent line at
    # the left endpoint is a lower bound; the tail x >= end uses
    # f_M(x) >= e^x/(M+1).
    if (1.0 - a) * _ALPHA_GRID_END < math.log(M + 1):
        return False
    x = np.arange(c0 / 2.0, _ALPHA_GRID_END + _ALPHA_GRID_STEP, _ALPHA_GRID_STEP)
    ex = np.exp(x)
    emx = np.exp(-x / M)
    f = (ex + M * emx) / (M + 1)
    g = np.log(f) - a * x
    if g.min() < 0:
        return False
    gp = (ex - emx) / (M + 1) / f - a
    cell = g[:-1] + _ALPHA_GRID_STEP * np.minimum(gp[:-1], 0.0)
    return bool(cell.min() >= 0)


@lru_cache(maxsize=None)
def _alpha_search(M: int, c0_key: float) -> float:
    lo, hi = 0.0, 1.0
    for _ in range(25):
        mid = (lo + hi) / 2.0
        if _alpha_certified(M, c0_key, mid):
            lo = mid
        else:
            hi = mid
    return lo


def alpha_M(M: int, c0: float) -> float:
    """Largest certified a with f_M(x) >= e^(a x) for all x >= c0/2.

    Binary search to 1e-6; every candidate is certified on a step-1e-3 grid
    with a convex tangent-line cell bound plus an explicit tail condition, so
    the returned exponent is sound, not just numerically plausible.
    """
    if M < 1:
        raise ValueError(f"need M >= 1, got {M}")
    if not c0 > 0:
        raise ValueError("need c0 > 0")
    return _alpha_search(int(M), round(float(c0), 12))


# ---------------------------------------------------------------------------
# admissibility thresholds


def t0_threshold(
    M: int,
    k: int,
    hyp: HeightHypothesis,
    rank_ratio: float = 0.5,
    shifted: bool = False,
) -> float:
    """Threshold sup for an M-tuple with splitting parameter k.

    Maximum of the counting entry k M + 1/2 and the unit-rank entry
    (2 r M / d) log(2 + 1/(2k)) / log f_M(x), with rank_ratio standing for
    r/d (1/2 is the supremum over the cyclotomic family).  `shifted`
    evaluates f_M at c0 (1 - 1/k) instead of c0; the bound operations use the
    shifted variant as their own precondition, the summary table the plain
    one.
    """
    if M < 1 or k < 2:
        raise ValueError("need M >= 1 and k >= 2")
    if rank_ratio < 0:
        raise ValueError("rank_ratio must be nonnegative")
    entries = [k * M + 0.5]
    if rank_ratio > 0:
        x = hyp.c0 * (1.0 - 1.0 / k) if shifted else hyp.c0
        entries.append(
            2.0 * rank_ratio * M * math.log(2.0 + 1.0 / (2 * k)) / math.log(f_M(M, x))
        )
    return max(entries)


def best_k_threshold(
    M: int,
    hyp: HeightHypothesis,
    rank_ratio: float = 0.5,
    shifted: bool = False,
) -> tuple[int, float]:
    """Minimize t0_threshold over integer k >= 2; returns (k, threshold).

    The counting entry grows linearly in k while the rank entry decreases,
    so the scan stops once k M + 1/2 passes the best value found.
    """
    best_k, best = 2, math.inf
    k = 2
    while k * M + 0.5 < best:
        t0 = t0_threshold(M, k, hyp, rank_ratio, shifted)
        if t0 < best:
            best, best_k = t0, k
        k += 1
    return best_k, best


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class ZetaInterval:
    """A rigorous enclosure of a (product of) Dedekind zeta value(s).

    s is the evaluation point, or a tuple of points for composite factors;
    conductor identifies the field (an integer conductor or a descriptor
    string); P is the truncation parameter that produced the enclosure.
    """

    s: float | tuple
    conductor: int | str
    P: int
    value_low: float
    value_high: float

    def __post_init__(self) -> None:
        if not 0 < self.value_low <= self.value_high:
            raise ValueError("need 0 < value_low <= value_high")

    def contains(self, x: float) -> bool:
        return self.value_low <= x <= self.value_high

    @property
    def width(self) -> float:
        return self.value_high - self.value_low


@dataclass(frozen=True)
class BoundReport:
    """One evaluated error bound with the constants that produced it.

    C is the computed leading constant, or the string "unresolved" when the
    statement leaves it to the user (bound_value is then the evaluation at
    C = 1).  t0 is the statement's own printed threshold; any extra
    requirements folded into the precondition are recorded in inputs under
    "t0_effective".
    """

    t0: float
    epsilon: float
    C: float | str
    zeta_factor: ZetaInterval | None
    bound_value: float
    inputs: dict = _field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if not (math.isfinite(self.bound_value) and self.bound_value >= 0):
            raise ValueError("bound_value must be finite and nonnegative")
        if isinstance(self.C, str) and self.C != "unresolved":
            raise ValueError("C is a number or the flag 'unresolved'")


# ---------------------------------------------------------------------------
# truncated Dedekind zeta intervals


def _primes_upto(P: int) -> list[int]:
    if P < 2:
        return []
    sieve = bytearray([1]) * (P + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(P) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [p for p in range(2, P + 1) if sieve[p]]


def _mult_order(p: int, n: int) -> int:
    if n == 1:
        return 1
    r = p % n
    assert math.gcd(r, n) == 1
    order, x = 1, r
    while x != 1:
        x = x * r % n
        order += 1
    return order


def _normalize_conductor(n: int) -> int:
    if n < 1:
        raise ValueError("conductor must be a positive integer")
    if n % 4 == 2:
        n //= 2
    return 1 if n in (1, 2) else n


def _euler_block(n: int, s: float, block: Sequence[int]):
    one = iv.mpf(1)
    s_iv = iv.mpf(s)
    acc = one
    for p in block:
        pk = p
        while n % pk == 0 and n % (pk * p) == 0:
            pk *= p
        n_p = n
        while n_p % p == 0:
            n_p //= p
        f = _mult_order(p, n_p)
        g = _euler_phi(n_p) // f
        if g == 0:
            continue
        acc *= (one - iv.mpf(p) ** (-s_iv * f)) ** (-g)
    return acc


def _iv_endpoints(x) -> tuple[float, float]:
    lo = math.nextafter(float(x.a), -math.inf)
    hi = math.nextafter(float(x.b), math.inf)
    return lo, hi


def dedekind_zeta(n: int, s: float, P: int = 1000) -> ZetaInterval:
    """Truncated Euler product for the degree-phi(n) cyclotomic field.

    Primes up to P contribute the factor (1 - p^(-s f))^(-phi(n_p)/f) where
    n_p is the prime-to-p part of the conductor and f the order of p mod n_p.
    The tail of omitted primes is controlled by the explicit bound
    log(high/partial) <= d P^(1-s) / ((s-1)(1 - P^(-s))), so the returned
    interval contains the true value.  Conductors 2 mod 4 normalize to their
    odd part; interval arithmetic is outward-rounded throughout.
    """
    if not s > 1:
        raise ValueError(f"need s > 1, got s = {s}")
    n = _normalize_conductor(n)
    d = _euler_phi(n)
    primes = _primes_upto(P)
    blocks = [primes[i : i + 64] for i in range(0, len(primes), 64)]
    old_prec = iv.prec
    iv.prec = 80
    try:
        threads = int(os.environ.get("LATMOMENT_THREADS", "1") or "1")
        if threads > 1 and len(blocks) > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                parts = list(pool.map(lambda b: _euler_block(n, s, b), blocks))
        else:
            parts = [_euler_block(n, s, b) for b in blocks]
        partial = iv.mpf(1)
        for part in parts:
            partial *= part
        one = iv.mpf(1)
        s_iv = iv.mpf(s)
        p_iv = iv.mpf(max(P, 2))
        tail_log = (iv.mpf(d) * p_iv ** (one - s_iv)) / (
            (s_iv - one) * (one - p_iv ** (-s_iv))
        )
        high = partial * iv.exp(tail_log)
        lo, _ = _iv_endpoints(partial)
        _, hi = _iv_endpoints(high)
    finally:
        iv.prec = old_prec
    return ZetaInterval(s=float(s), conductor=n, P=int(P), value_low=lo, value_high=hi)


def _quadratic_ideal_counts(F: NumberField, X: int) -> np.ndarray:
    # with basis {1, w} and w^2 = e w + f, primitive ideals of norm a
    # correspond to roots of b^2 + e b - f modulo a; ideal counts follow by
    # summing primitive counts over square divisors.
    e = -F.min_poly[1]
    f = -F.min_poly[0]
    prim = np.zeros(X + 1, dtype=np.int64)
    prim[1] = 1
    for a in range(2, X + 1):
        b = np.arange(a, dtype=np.int64)
        prim[a] = int(np.count_nonzero((b * b + e * b - f) % a == 0))
    counts = np.zeros(X + 1, dtype=np.int64)
    for c in range(1, math.isqrt(X) + 1):
        cc = c * c
        top = X // cc
        counts[cc * np.arange(1, top + 1)] += prim[1 : top + 1]
    return counts


def _zeta_quadratic_interval(F: NumberField, s: float, X: int) -> ZetaInterval:
    # direct truncated ideal sum; the tail uses that the number of ideals of
    # norm N in a maximal quadratic order is at most the divisor count, so
    # sum_{N>X} <= 2 zeta(s) sum_{a>sqrt X} a^{-s}.
    if not s > 1:
        raise ValueError(f"need s > 1, got s = {s}")
    X = max(int(X), 16)
    counts = _quadratic_ideal_counts(F, X)
    ns = np.arange(X + 1, dtype=float)
    ns[0] = 1.0
    partial = float(np.dot(counts[1:].astype(float), ns[1:] ** (-s)))
    zq_hi = dedekind_zeta(1, s, max(1000, min(X, 10000))).value_high
    root = math.sqrt(X)
    tail = 2.0 * zq_hi * root ** (1.0 - s) * (1.0 / (s - 1.0) + 1.0 / root)
    slop = 1e-12 * partial * math.log2(X + 2)
    return ZetaInterval(
        s=float(s),
        conductor=F.descriptor,
        P=X,
        value_low=partial - slop,
        value_high=partial + slop + tail,
    )


def dedekind_zeta_field(F: NumberField, s: float, P: int = 1000) -> ZetaInterval:
    """Zeta enclosure dispatched on the field kind.

    Rational and cyclotomic fields (and the two quadratic fields that are
    also cyclotomic) use the conductor Euler product; other quadratic fields
    use the truncated ideal sum with its integral tail bound, reusing P as
    the norm cutoff.
    """
    if F.kind == "rational":
        return dedekind_zeta(1, s, P)
    if F.kind == "cyclotomic":
        return dedekind_zeta(F.conductor, s, P)
    if F.kind == "quadratic":
        if F.D == -1:
            return dedekind_zeta(4, s, P)
        if F.D == -3:
            return dedekind_zeta(3, s, P)
        return _zeta_quadratic_interval(F, s, max(P, 2000))
    raise ValueError(f"no zeta backend for field kind {F.kind!r}")


# ---------------------------------------------------------------------------
# volume-ratio bounds


def _coerce_element(F: NumberField, a) -> FieldElement:
    if isinstance(a, FieldElement):
        return a
    return F.from_rational(Fraction(a))


def _simplex_project(v: np.ndarray) -> np.ndarray:
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, len(v) + 1)
    mask = u - css / idx > 0
    rho = idx[mask][-1]
    theta = css[mask][-1] / rho
    return np.maximum(v - theta, 0.0)


def ellipsoid_intersection_bound(F: NumberField, t: int, alphas, weights=None) -> float:
    """Upper bound for vol(ellipsoid intersection)/vol(ball) by convex weights.

    Each nonzero alpha scales the per-place block radii by its conjugate
    absolute values; any convex combination c of the constraints contains the
    intersection in a product ellipsoid of relative volume
    prod_places (sum_i c_i |alpha_i|_place^2)^(-t e/2).  Uniform weights are
    refined by 200 projected-gradient steps on the log bound; every iterate
    is itself a valid bound, so the returned minimum is sound regardless of
    optimizer quality.  If weights are supplied they are normalized and
    evaluated as-is.  Row-reduced matrices are accepted and contribute their
    nonzero minor coordinates.
    """
    if isinstance(alphas, RredMatrix):
        alphas = [c for c in plucker(alphas).coords if c]
    alphas = [_coerce_element(F, a) for a in alphas]
    if not alphas:
        raise ValueError("need at least one nonzero element")
    if any(not a for a in alphas):
        raise ValueError("zero entry in tuple")
    places = F.places
    A = np.array(
        [[abs(conjugates(F, a)[row]) ** 2 for row, _ in places] for a in alphas]
    )
    exps = np.array([t * e / 2.0 for _, e in places])

    def log_bound(c: np.ndarray) -> float:
        return float(-(exps * np.log(A.T @ c)).sum())

    if weights is not None:
        c = np.asarray(weights, dtype=float)
        if c.shape != (len(alphas),) or (c < 0).any() or c.sum() <= 0:
            raise ValueError("weights must be nonnegative, one per element")
        return math.exp(log_bound(c / c.sum()))
    m = len(alphas)
    c = np.full(m, 1.0 / m)
    best = log_bound(c)
    for j in range(200):
        grad = -(A @ (exps / (A.T @ c)))
        step = 0.25 * 0.97**j / (np.linalg.norm(grad) + 1e-12)
        c = _simplex_project(c - step * grad)
        best = min(best, log_bound(c))
    return math.exp(best)


def volume_ratio_height_bound(F: NumberField, t: int, alphas, k: int | None = 2) -> float:
    """Height-driven bound for the relative volume of the intersection.

    With H the exponential joint house of the tuple and N the product of the
    absolute norms: for N >= 1 and k >= 2 the bound is
    N^(-t/(kM)) ((H^(2(k-1)/(kd)) + M H^(-2(k-1)/(kMd)))/(M+1))^(-dt/2);
    when the norm assumption fails (or k is None) the plain form
    ((H^(2/d) + M H^(-2/(dM)) N^(2/(dM)))/(M+1))^(-dt/2) applies instead.
    """
    alphas = [_coerce_element(F, a) for a in alphas]
    if not alphas or any(not a for a in alphas):
        raise ValueError("need a tuple of nonzero elements")
    if k is not None and k < 2:
        raise ValueError("need k >= 2 (or None for the plain form)")
    d = F.degree
    m = len(alphas)
    norm = float(math.prod(abs_norm(F, a) for a in alphas))
    house = math.exp(d * h_infty(F, alphas))
    if k is not None and norm >= 1.0:
        mid = (
            house ** (2.0 * (k - 1) / (k * d))
            + m * house ** (-2.0 * (k - 1) / (k * m * d))
        ) / (m + 1)
        return norm ** (-t / (k * m)) * mid ** (-d * t / 2.0)
    mid = (
        house ** (2.0 / d) + m * house ** (-2.0 / (d * m)) * norm ** (2.0 / (d * m))
    ) / (m + 1)
    return mid ** (-d * t / 2.0)


def column_height_ratio_bound(F: NumberField, t: int, alphas) -> float:
    """Column-form bound for the relative intersection volume.

    The same ratio bounded through the house and norm of the entries alone:
    with M nonzero entries, H the exponential joint house and N the product
    of absolute norms,

        (M+1)^(M t d/2) (V(M t d)/V(t d)^M)
            (H^(2/d) + M N^(2/(d M)) H^(-2/(d M)))^(-d t/2).

    Coarser than the convex-weight search, but its shape survives dropping
    all constraints except the chosen entries, which is what the pair-tail
    assembly consumes.  Coincides with the plain height form at M = 1.
    """
    alphas = [_coerce_element(F, a) for a in alphas]
    if not alphas or any(not a for a in alphas):
        raise ValueError("need a tuple of nonzero elements")
    d = F.degree
    m = len(alphas)
    half_dim = t * d / 2.0
    log_norm = float(sum(math.log(abs_norm(F, a)) for a in alphas))
    two_h = 2.0 * h_infty(F, alphas)
    base = math.exp(two_h) + m * math.exp(2.0 * log_norm / (d * m) - two_h / m)
    log_bound = (
        m * half_dim * math.log(m + 1)
        + m * math.lgamma(half_dim + 1.0)
        - math.lgamma(m * half_dim + 1.0)
        - half_dim * math.log(base)
    )
    return math.exp(log_bound)


# ---------------------------------------------------------------------------
# unit counting


def unit_count_bound(F: NumberField, hyp: HeightHypothesis, B, Y=0.0) -> float:
    """Box bound for units with constrained archimedean size.

    Scalar B: units u with h_infty(u alpha) <= B (alpha of norm e^Y) number
    at most omega ((B + c0/2 + max(0, -Y/d)) / (c0/2))^r with r the unit
    rank: the log embedding packs them in an r-cube of that side count.  A
    tuple B (with an optional matching tuple Y) multiplies per-coordinate
    factors instead, one per constrained coordinate; at least r coordinates
    are required.
    """
    half = hyp.c0 / 2.0
    d = F.degree
    r = F.unit_rank

    def factor(b: float, y: float) -> float:
        if b < 0:
            raise ValueError("size bound B must be nonnegative")
        return (b + half + max(0.0, -y / d)) / half

    if isinstance(B, (tuple, list)):
        ys = tuple(Y) if isinstance(Y, (tuple, list)) else (float(Y),) * len(B)
        if len(ys) != len(B):
            raise ValueError("Y tuple must match B tuple")
        if len(B) < r:
            raise ValueError(f"need at least unit-rank ({r}) coordinate constraints")
        prod = 1.0
        for b, y in zip(B, ys):
            prod *= factor(float(b), float(y))
        return F.omega_K * prod
    return F.omega_K * factor(float(B), float(Y)) ** r


# ---------------------------------------------------------------------------
# unit and ideal sums


def proj_unit_sum_bound(
    F: NumberField,
    hyp: HeightHypothesis,
    t: float,
    alphas,
    k: int,
) -> BoundReport:
    """Bound for the unit-translate height sum attached to an integral tuple.

    Requires every coordinate norm >= 1 and t above the unit-rank threshold
    (2 r M / d) log(2 + 1/(2k)) / log f_M(c0(1 - 1/k)).  The report carries
    epsilon_1 = (1/2) min(c1/8, log f_M(3 c1/4), alpha c0 (k-1)/k) and
    C = 1 + 1/(1 - e^(-alpha c0 d (t - t0)(k-1)/(4 k^2))) with alpha the
    certified exponent; bound_value is
    C omega^M N^(-t/(kM)) D^(t/4) e^(-epsilon_1 d (t - t0)).
    """
    if k < 2:
        raise ValueError("need k >= 2")
    alphas = [_coerce_element(F, a) for a in alphas]
    if not alphas or any(not a for a in alphas):
        raise ValueError("need a tuple of nonzero elements")
    norms = [abs_norm(F, a) for a in alphas]
    if any(nm < 1 for nm in norms):
        raise ValueError("every coordinate must have absolute norm >= 1")
    d = F.degree
    m = len(alphas)
    rk = F.unit_rank
    c0, c1 = hyp.c0, hyp.c1
    x = c0 * (1.0 - 1.0 / k)
    t0 = 0.0
    if rk > 0:
        t0 = 2.0 * rk * m / d * math.log(2.0 + 1.0 / (2 * k)) / math.log(f_M(m, x))
    if not t > t0:
        raise ThresholdError(t0)
    a = alpha_M(m, c0)
    eps1 = 0.5 * min(
        c1 / 8.0, math.log(f_M(m, 0.75 * c1)), a * c0 * (k - 1) / k
    )
    decay = a * c0 * d * (t - t0) * (k - 1) / (4.0 * k * k)
    C = 1.0 + 1.0 / (1.0 - math.exp(-decay))
    nprod = float(math.prod(norms))
    dnorm = denominator_norm(F, alphas)
    value = (
        C
        * float(F.omega_K) ** m
        * nprod ** (-t / (k * m))
        * float(dnorm) ** (t / 4.0)
        * math.exp(-eps1 * d * (t - t0))
    )
    return BoundReport(
        t0=t0,
        epsilon=eps1,
        C=C,
        zeta_factor=None,
        bound_value=value,
        inputs={
            "field": F.descriptor,
            "t": t,
            "M": m,
            "k": k,
            "alpha": a,
            "norm_product": nprod,
            "denominator_norm": dnorm,
        },
    )


def _composite_zeta(
    F: NumberField,
    parts: Sequence[tuple[float, float]],
    P: int,
) -> tuple[ZetaInterval, float, float]:
    """Product of zeta powers sum_i zeta_F(s_i)^{e_i} as one interval.

    Negative exponents divide (using the opposite endpoint, keeping the
    enclosure valid).
    """
    lo = hi = 1.0
    args = []
    for s_i, e_i in parts:
        z = dedekind_zeta_field(F, s_i, P)
        args.append(s_i)
        if e_i >= 0:
            lo *= z.value_low**e_i
            hi *= z.value_high**e_i
        else:
            lo *= z.value_high**e_i
            hi *= z.value_low**e_i
    zres = ZetaInterval(
        s=tuple(args),
        conductor=F.descriptor if F.conductor is None else F.conductor,
        P=P,
        value_low=lo,
        value_high=hi,
    )
    return zres, lo, hi


def ideal_sum_bound(
    F: NumberField,
    hyp: HeightHypothesis,
    t: float,
    M: int,
    k: int,
    P: int = 600,
) -> BoundReport:
    """Bound for the full denominator-weighted sum over M-tuples of ideals.

    Threshold: sup(k M + 1/2, unit-rank entry with f_M at c0(1-1/k)), plus
    the requirement t > 4k/(3k-4) that makes every zeta argument exceed 1;
    the effective maximum is what ThresholdError reports.  The zeta factor
    is zeta(t(3/4 - 1/k)) zeta(t/(kM))^M / zeta(3t/4), consumed at the high
    endpoint; bound_value is the relative error factor
    C Z e^(-epsilon d (t - t0)) that multiplies the main term omega^M.
    """
    if M < 1 or k < 2:
        raise ValueError("need M >= 1 and k >= 2")
    d = F.degree
    c0, c1 = hyp.c0, hyp.c1
    t0 = t0_threshold(M, k, hyp, rank_ratio=F.unit_rank / d, shifted=True)
    t0_eff = max(t0, 4.0 * k / (3.0 * k - 4.0))
    if not t > t0_eff:
        raise ThresholdError(t0_eff)
    a = alpha_M(M, c0)
    eps = 0.5 * min(c1 / 8.0, math.log(f_M(M, 0.75 * c1)), a * c0 * (k - 1) / k)
    decay = a * c0 * d * (t - t0) * (k - 1) / (4.0 * k * k)
    C = (2 * M + 1) * (1.0 + 1.0 / (1.0 - math.exp(-decay)))
    zeta_factor, _, z_hi = _composite_zeta(
        F,
        [(t * (0.75 - 1.0 / k), 1.0), (t / (k * M), float(M)), (0.75 * t, -1.0)],
        P,
    )
    value = C * z_hi * math.exp(-eps * d * (t - t0))
    return BoundReport(
        t0=t0,
        epsilon=eps,
        C=C,
        zeta_factor=zeta_factor,
        bound_value=value,
        inputs={
            "field": F.descriptor,
            "t": t,
            "M": M,
            "k": k,
            "alpha": a,
            "t0_effective": t0_eff,
            "P": P,
        },
    )


def ball_intersection_sum_terms(
    F: NumberField,
    hyp: HeightHypothesis,
    t: float,
    V: float,
    M: int,
    k: int,
    P: int = 600,
) -> tuple[float, float]:
    """Main and error addends of the intersection-volume sum over M-tuples.

    The sum equals V omega^M (1 + relative error); the first return value is
    exactly V omega^M and the second is its product with the relative factor
    from ideal_sum_bound, always strictly positive.
    """
    rel = ideal_sum_bound(F, hyp, t, M, k, P).bound_value
    main = V * float(F.omega_K) ** M
    return main, main * rel


# ---------------------------------------------------------------------------
# second moment


def second_moment_bounds(
    F: NumberField,
    hyp: HeightHypothesis,
    t: float,
    V,
    k: int = 4,
    P: int = 600,
) -> MomentReport:
    """Two-sided second-moment bracket for the ball point count.

    lower = V^2 + omega V holds unconditionally (all sum terms are
    nonnegative); upper adds omega^2 C Z e^(-epsilon d (t - t0)) V with
    epsilon = (1/2) min(c1/8, log cosh(3 c1/4), (4/5) c0 (k-1)/k),
    C = 3 + 3/(1 - e^(-c0 d (t - t0)(k-1)/(10 k^2))) and the zeta factor
    Z = zeta(t(3/4 - 1/k)) zeta(t/k) / zeta(3t/4) at the high endpoint.
    """
    if k < 2:
        raise ValueError("need k >= 2")
    if not V > 0:
        raise ValueError("need V > 0")
    d = F.degree
    c0, c1 = hyp.c0, hyp.c1
    entries = [k + 0.5]
    if F.unit_rank > 0:
        entries.append(
            2.0
            * F.unit_rank
            / d
            * math.log(2.0 + 1.0 / (2 * k))
            / math.log(math.cosh(c0 * (1.0 - 1.0 / k)))
        )
    t0 = max(entries)
    t0_eff = max(t0, 4.0 * k / (3.0 * k - 4.0))
    if not t > t0_eff:
        raise ThresholdError(t0_eff)
    eps = 0.5 * min(
        c1 / 8.0,
        math.log(math.cosh(0.75 * c1)),
        0.8 * c0 * (k - 1) / k,
    )
    decay = c0 * d * (t - t0) * (k - 1) / (10.0 * k * k)
    C = 3.0 + 3.0 / (1.0 - math.exp(-decay))
    zeta_factor, z_lo, z_hi = _composite_zeta(
        F,
        [(t * (0.75 - 1.0 / k), 1.0), (t / k, 1.0), (0.75 * t, -1.0)],
        P,
    )
    omega = F.omega_K
    lower = V * V + omega * V
    err = omega * omega * C * z_hi * math.exp(-eps * d * (t - t0)) * V
    return MomentReport(
        main_term=lower,
        lower=lower,
        upper=lower + err,
        components={"main": float(lower), "unit_ideal_tail": err},
        constants={
            "t0": t0,
            "t0_effective": t0_eff,
            "epsilon": eps,
            "C": C,
            "zeta_low": z_lo,
            "zeta_high": z_hi,
            "k": float(k),
        },
    )


def cyclotomic_second_moment_constants(F: NumberField, t: float, P: int = 600) -> dict:
    """Published cyclotomic-family second-moment constants, as stated.

    For conductor fields of degree d >= 2 and t >= 27: threshold 267/10,
    epsilon = 1/400, and C = (3 + 3/(1 - e^(-d(t - 267/10)/1124)))
    zeta(37t/52) zeta(t/25).  The scalar in front of the zeta product stays
    below 5625.  The general second-moment epsilon formula under the family
    defaults evaluates to (1/2) log cosh(3 c1/4) ~ 0.0025253 >= 1/400, which
    is checked here before the rounded constants are returned.
    """
    if F.kind not in ("cyclotomic", "quadratic"):
        raise ValueError("cyclotomic-family constants need a degree >= 2 field")
    d = F.degree
    if d < 2:
        raise ValueError("need degree >= 2")
    if not t >= 27:
        raise ThresholdError(27.0, "the stated constants need t >= 27")
    hyp = default_hypothesis(F)
    formula_eps = 0.5 * math.log(math.cosh(0.75 * hyp.c1))
    assert formula_eps >= 1.0 / 400.0
    t0 = 26.7
    scalar = 3.0 + 3.0 / (1.0 - math.exp(-d * (t - t0) / 1124.0))
    z1 = dedekind_zeta_field(F, 37.0 * t / 52.0, P)
    z2 = dedekind_zeta_field(F, t / 25.0, P)
    return {
        "t0": t0,
        "epsilon": 1.0 / 400.0,
        "scalar": scalar,
        "C_low": scalar * z1.value_low * z2.value_low,
        "C_high": scalar * z1.value_high * z2.value_high,
        "zeta1": z1,
        "zeta2": z2,
        "epsilon_formula": formula_eps,
    }


# ---------------------------------------------------------------------------
# higher moments


def _pair_tail_threshold(
    hyp: HeightHypothesis, n: int, m: int, rank_ratio: float
) -> float:
    c0, c1 = hyp.c0, hyp.c1
    s_base = min(64.0 / 27.0, math.exp(c1 / 3.0), math.cosh(c1) ** 3)
    entries = [float(m * m + m)]
    if rank_ratio > 0:
        entries.append(
            rank_ratio
            * (m * m + m)
            * math.log(2.0 + 12.0 / c0 + 2.0 * math.log(n - m) / c0)
            / math.log(s_base)
        )
        entries.append(rank_ratio * _LOG2 / math.log(f_M(n - m, 0.75 * c0)))
    return 2.0 * (n - m) * max(entries)


def _pair_zeta_floors(n: int, m: int) -> list[float]:
    return [
        2.0 * (m + 1) * (1.0 + m * (n - m) / math.e),
        4.0 * m * (n - m),
        2.0,
    ]


def a2m_bound(
    F: NumberField,
    hyp: HeightHypothesis,
    t: float,
    n: int,
    m: int,
    C_S: float | None = None,
    P: int = 600,
    rank_ratio: float | None = None,
) -> BoundReport:
    """Tail bound for the weight-m pair configurations of the n-th moment.

    Valid for 2 <= m <= n-1 and t above the printed threshold
    2(n-m) sup(m^2+m, rank entries); zeta-argument positivity adds the
    floors recorded as t0_effective.  bound_value evaluates
    C_S omega^{m(n-m)} (td)^{(m-1)/2} Z e^{-eps d (t - t0)} with
    eps = (1/2) log min(4/3, e^{c1/(3(m+1))}, f_{n-m}(3 c1/4)) and
    Z = zeta(t/(2(m+1)) - m(n-m)/e) zeta(t/(4m(n-m)))^{m(n-m)} / zeta(t-1).
    C_S is reported as "unresolved" unless supplied; the value uses C_S = 1
    in that case.
    """
    if not 2 <= m <= n - 1:
        raise ValueError(f"need 2 <= m <= n-1, got n={n}, m={m}")
    d = F.degree
    c1 = hyp.c1
    rr = F.unit_rank / d if rank_ratio is None else rank_ratio
    t0 = _pair_tail_threshold(hyp, n, m, rr)
    t0_eff = max([t0] + _pair_zeta_floors(n, m))
    if not t > t0_eff:
        raise ThresholdError(t0_eff)
    eps = 0.5 * math.log(
        min(4.0 / 3.0, math.exp(c1 / (3.0 * (m + 1))), f_M(n - m, 0.75 * c1))
    )
    w = m * (n - m)
    zeta_factor, _, z_hi = _composite_zeta(
        F,
        [
            (t / (2.0 * (m + 1)) - w / math.e, 1.0),
            (t / (4.0 * w), float(w)),
            (t - 1.0, -1.0),
        ],
        P,
    )
    cs = 1.0 if C_S is None else float(C_S)
    value = (
        cs
        * float(F.omega_K) ** w
        * (t * d) ** ((m - 1) / 2.0)
        * z_hi
        * math.exp(-eps * d * (t - t0))
    )
    return BoundReport(
        t0=t0,
        epsilon=eps,
        C="unresolved" if C_S is None else cs,
        zeta_factor=zeta_factor,
        bound_value=value,
        inputs={
            "field": F.descriptor,
            "t": t,
            "n": n,
            "m": m,
            "t0_effective": t0_eff,
            "rank_ratio": rr,
            "P": P,
        },
    )


def moment_bounds(q, hyp: HeightHypothesis, options: dict | None = None) -> MomentReport:
    """Assembled bracket for the n-th moment of the ball point count.

    lower is the Poisson-type main term (every neglected contribution is
    nonnegative); upper adds the assembled exponential tail
    C omega^{n^2/4} (td)^{(n-2)/2} e^{-eps d (t - t0)} (V+1)^{n-1} Z.  The
    components dict itemizes the torsion tail, the rank-one ideal-sum tail
    and each pair tail as relative factors.  n = 2 delegates to
    second_moment_bounds.

    options (all optional): k (splitting parameter for the rank-one tail,
    default 4), C (leading constant, default 1 and flagged unresolved via
    constants["C_unresolved"]), P (zeta truncation), mode ("general",
    "fixed-field" or "cyclotomic"), rank_ratio (sup of unit rank over degree
    across the intended family; defaults to this field's own ratio).

    The printed threshold formula omits the rank-free entries of the pair
    tails and the zeta-argument floors, so the effective precondition is
    their maximum; ThresholdError reports that effective value, while the
    constants record both.
    """
    opts = dict(options or {})
    F = q.field
    t, n, V = float(q.t), q.n, q.V
    k = int(opts.get("k", 4))
    P = int(opts.get("P", 600))
    mode = opts.get("mode", "general")
    user_C = opts.get("C")
    cval = 1.0 if user_C is None else float(user_C)
    if n == 2:
        return second_moment_bounds(F, hyp, t, V, k=max(k, 2), P=P)
    if n < 2:
        raise ValueError("moment bounds need n >= 2")
    d = F.degree
    c0, c1 = hyp.c0, hyp.c1
    rr = opts.get("rank_ratio")
    rr = F.unit_rank / d if rr is None else float(rr)
    omega = F.omega_K

    if mode == "cyclotomic":
        t0 = max(
            19.0 * n * (n + 1) ** 2 * math.log(52.0 + 25.0 / 3.0 * math.log(n - 1)),
            (n - 1) * math.log(17.0 / 8.0) / math.log(f_M(n - 1, 9.0 / 50.0)),
        )
        eps = 0.5 * math.log(
            min(5.0 ** (1.0 / (36.0 * n + 24.0)), f_M(n - 1, math.log(5.0) / 16.0))
        )
    else:
        entries = [0.0]
        if rr > 0:
            s_base = min(64.0 / 27.0, math.exp(c1 / 3.0), math.cosh(c1) ** 3)
            entries.append(
                rr
                * n
                * (n + 1) ** 2
                * math.log(2.0 + 12.0 / c0 + 2.0 * math.log(n - 1) / c0)
                / math.log(s_base)
            )
            entries.append(
                2.0 * rr * (n - 1) * math.log(17.0 / 8.0) / math.log(f_M(n - 1, 0.75 * c0))
            )
        t0 = max(entries)
        eps = 0.5 * math.log(
            min(4.0 / 3.0, math.exp(c1 / (3.0 * n + 2.0)), f_M(n - 1, 0.75 * c1))
        )
    floors = [t0, float(n * n), 2.0]
    floors.append(t0_threshold(n - 1, k, hyp, rank_ratio=rr, shifted=True))
    floors.append(4.0 * k / (3.0 * k - 4.0))
    for m in range(2, n):
        floors.append(_pair_tail_threshold(hyp, n, m, rr))
        floors.extend(_pair_zeta_floors(n, m))
    t0_eff = max(floors)
    if not t > t0_eff:
        raise ThresholdError(t0_eff)

    main = main_term(q)
    poly = (t * d) ** ((n - 2) / 2.0) * (V + 1.0) ** (n - 1)
    components: dict[str, float] = {"main": float(main)}
    components["torsion_tail"] = a1m_bound(F, n, q.t)
    components["rank_one_tail"] = ideal_sum_bound(F, hyp, t, n - 1, k, P).bound_value
    for m in range(2, n):
        components[f"pair_tail_m{m}"] = a2m_bound(
            F, hyp, t, n, m, C_S=user_C, P=P, rank_ratio=rr
        ).bound_value

    constants = {
        "t0": t0,
        "t0_effective": t0_eff,
        "epsilon": eps,
        "C": cval,
        "C_unresolved": 0.0 if user_C is not None else 1.0,
        "k": float(k),
    }
    if mode == "fixed-field":
        err = cval * t ** ((n - 2) / 2.0) * math.exp(-eps * (t - t0)) * (V + 1.0) ** (
            n - 1
        )
        constants["zeta_high"] = 1.0
    elif mode == "cyclotomic":
        err = (
            cval
            * float(omega) ** (n * n / 4.0)
            * poly
            * math.exp(-eps * d * (t - t0))
        )
        constants["zeta_high"] = 1.0
    else:
        s1 = min(t / (2.0 * (m + 1)) - m * (n - m) / math.e for m in range(2, n))
        zeta_factor, z_lo, z_hi = _composite_zeta(
            F,
            [(s1, 1.0), (t / (n * n), n * n / 4.0), (t - 1.0, -1.0)],
            P,
        )
        constants["zeta_low"] = z_lo
        constants["zeta_high"] = z_hi
        err = (
            cval
            * float(omega) ** (n * n / 4.0)
            * poly
            * math.exp(-eps * d * (t - t0))
            * z_hi
        )
    return MomentReport(
        main_term=float(main),
        lower=float(main),
        upper=float(main) + err,
        components=components,
        constants=constants,
    )
