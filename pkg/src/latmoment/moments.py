"""Poisson main terms and the combinatorics behind them.

Stirling numbers, moments of Poisson variables in Touchard form, the
main-term assembly for the n-th moment of the lattice-point count, ball
volumes, the volume-ratio estimate, the classical ZZ-lattice error term,
and the normalized two-ball intersection volume.

Everything here is pure arithmetic on the query parameters; no lattices
are touched.  Exact rational inputs give exact rational outputs where the
contract promises it.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field as _field
from fractions import Fraction
from functools import cache
from typing import Callable

from mpmath import mp

from .numberfield import NumberField, Rational

__all__ = [
    "MomentQuery",
    "MomentReport",
    "adaptive_simpson",
    "a1m_bound",
    "ball_volume",
    "count_Am",
    "main_term",
    "poisson_moment",
    "poisson_moment_series",
    "rogers_error",
    "stirling2",
    "two_ball_intersection",
    "volume_ratio_bound",
]


# ---------------------------------------------------------------------------
# query and report types


@dataclass(frozen=True)
class MomentQuery:
    """Parameters of one moment computation: which field, how many module
    copies t, which moment n, and the ball volume V."""

    field: NumberField
    t: int
    n: int
    V: float | Rational

    def __post_init__(self) -> None:
        if not isinstance(self.t, int) or self.t < 2:
            raise ValueError("t must be an integer >= 2")
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError("moment order n must be an integer >= 1")
        if not self.V > 0:
            raise ValueError("ball volume V must be positive")
        if not self.t * self.field.degree > self.n:
            raise ValueError(
                f"need t*d > n for convergence; got t*d = {self.t * self.field.degree},"
                f" n = {self.n}"
            )


@dataclass(frozen=True)
class MomentReport:
    """A bracketed moment: the Poisson main term plus labeled nonnegative
    error contributions, with the constants that produced them."""

    main_term: float
    lower: float
    upper: float
    components: dict[str, float] = _field(default_factory=dict)
    constants: dict[str, float] = _field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.lower <= self.main_term <= self.upper:
            raise ValueError("moment bracket must satisfy lower <= main <= upper")
        bad = {k: v for k, v in self.components.items() if v < 0}
        if bad:
            raise ValueError(f"error components must be nonnegative, got {bad}")


# ---------------------------------------------------------------------------
# combinatorics


@cache
def _stirling2_rec(n: int, m: int) -> int:
    if m > n:
        return 0
    if n == 0:
        return 1
    if m == 0:
        return 0
    return m * _stirling2_rec(n - 1, m) + _stirling2_rec(n - 1, m - 1)


def stirling2(n: int, m: int) -> int:
    """Stirling number of the second kind, exact."""
    if not 0 <= m <= n:
        raise ValueError(f"need 0 <= m <= n, got n={n}, m={m}")
    return _stirling2_rec(n, m)


def poisson_moment(n: int, lam: float | Rational):
    """n-th moment of a Poisson variable with mean lam, in Touchard form
    sum_{m=1..n} S(n,m) lam^m.  Exact for rational lam, float otherwise."""
    if n < 1:
        raise ValueError("moment order n must be >= 1")
    if lam < 0:
        raise ValueError("Poisson parameter must be nonnegative")
    exact = isinstance(lam, (int, Fraction))
    lam_x = Fraction(lam) if exact else float(lam)
    acc = Fraction(0) if exact else 0.0
    p = lam_x
    for m in range(1, n + 1):
        acc += stirling2(n, m) * p
        p *= lam_x
    return acc


def poisson_moment_series(n: int, lam: float, tol: float = 1e-12) -> float:
    """The same moment by direct summation e^(-lam) sum_r r^n lam^r / r!,
    truncated once the terms are negligible.  Slower; used as the second
    route in checks.

    Summed at 40 digits so truncation, not accumulated rounding, is the
    only error source; the absolute error of the returned float is below
    tol plus half an ulp of the value."""
    if n < 1:
        raise ValueError("moment order n must be >= 1")
    if lam < 0:
        raise ValueError("Poisson parameter must be nonnegative")
    if lam == 0:
        return 0.0
    with mp.workdps(40):
        L = mp.mpf(lam)
        term = mp.e ** (-L) * L
        total = term
        r = 1
        while r < 100000:
            r += 1
            term = term * (mp.mpf(r) / (r - 1)) ** n * L / r
            total += term
            # past r > 2(lam+n) the term ratio is < e^(1/2)/2, so the tail
            # is under the last term; stop well below tol
            if r > 2 * (lam + n) and term < 1e-4 * tol * max(total, 1):
                break
        return float(total)


def count_Am(F: NumberField, n: int, m: int) -> int:
    """Number of row-reduced m x n matrices with entries in the roots of
    unity and zero, one nonzero entry per column: omega_K^(n-m) S(n,m)."""
    if not 1 <= m <= n:
        raise ValueError(f"need 1 <= m <= n, got n={n}, m={m}")
    return F.omega_K ** (n - m) * stirling2(n, m)


def main_term(q: MomentQuery):
    """Poisson main term of the n-th moment: omega^n m_n(V / omega).

    Evaluated both in that form and as sum_m S(n,m) omega^(n-m) V^m; the
    two must agree (exactly for rational V).  Returns a Fraction for
    rational V, a float otherwise.
    """
    w = q.field.omega_K
    exact = isinstance(q.V, (int, Fraction))
    V = Fraction(q.V) if exact else float(q.V)
    form_a = w**q.n * poisson_moment(q.n, V / w)
    form_b = sum(
        stirling2(q.n, m) * w ** (q.n - m) * V**m for m in range(1, q.n + 1)
    )
    if exact:
        assert form_a == form_b
        return form_a
    assert abs(form_a - form_b) <= 1e-12 * max(abs(form_a), 1.0)
    return form_a


# ---------------------------------------------------------------------------
# volumes


def ball_volume(N: int) -> float:
    """Volume of the unit ball in R^N."""
    if N < 1:
        raise ValueError("dimension must be >= 1")
    return math.pi ** (N / 2) / math.gamma(N / 2 + 1)


def volume_ratio_bound(m: int, t: int, d: int, as_log: bool = False) -> float:
    """Upper bound for V(m t d) / V(t d)^m:

        (t d pi)^((m-1)/2) e^(m/(6 t d)) / m^((m t d + 1)/2)

    computed in log space; pass as_log=True for the logarithm (the value
    itself underflows for large m t d).
    """
    td = t * d
    if m < 1 or td < 1:
        raise ValueError("need m >= 1 and t*d >= 1")
    log_val = (
        0.5 * (m - 1) * math.log(td * math.pi)
        + m / (6 * td)
        - 0.5 * (m * td + 1) * math.log(m)
    )
    return log_val if as_log else math.exp(log_val)


def rogers_error(n: int, t: float) -> float:
    """Exponentially decaying error term for the n-th moment of a random
    ZZ-lattice count: 2*3^k (sqrt3/2)^t + 21*5^k (1/2)^t with k = ceil(n^2/4).

    Warns (but still evaluates) below the validity threshold t >= k + 3.
    """
    k = -(-n * n // 4)
    if t < k + 3:
        warnings.warn(
            f"error term used below its validity threshold t >= {k + 3}",
            stacklevel=2,
        )
    return 2 * 3**k * (math.sqrt(3) / 2) ** t + 21 * 5**k * 0.5**t


def adaptive_simpson(f: Callable[[float], float], a: float, b: float, tol: float) -> float:
    """Adaptive Simpson quadrature with the usual 15x error heuristic."""

    def rec(a, fa, m, fm, b, fb, whole, tol):
        lm = (a + m) / 2
        rm = (m + b) / 2
        flm, frm = f(lm), f(rm)
        left = (m - a) / 6 * (fa + 4 * flm + fm)
        right = (b - m) / 6 * (fm + 4 * frm + fb)
        if abs(left + right - whole) <= 15 * tol:
            return left + right + (left + right - whole) / 15
        return rec(a, fa, lm, flm, m, fm, left, tol / 2) + rec(
            m, fm, rm, frm, b, fb, right, tol / 2
        )

    if a == b:
        return 0.0
    m = (a + b) / 2
    fa, fm, fb = f(a), f(m), f(b)
    whole = (b - a) / 6 * (fa + 4 * fm + fb)
    return rec(a, fa, m, fm, b, fb, whole, tol)


def two_ball_intersection(N: int, delta: float) -> float:
    """Volume of the intersection of two unit balls in R^N at center
    distance delta, normalized by the ball volume:

        2 (V(N-1)/V(N)) integral_(delta/2)^1 (1 - rho^2)^((N-1)/2) drho
    """
    if N < 2:
        raise ValueError("dimension must be >= 2")
    if delta < 0:
        raise ValueError("center distance must be nonnegative")
    if delta >= 2:
        return 0.0
    expo = (N - 1) / 2
    integral = adaptive_simpson(lambda r: (1 - r * r) ** expo, delta / 2, 1.0, 1e-10)
    return 2 * (ball_volume(N - 1) / ball_volume(N)) * integral


def a1m_bound(F: NumberField, n: int, t: int) -> float:
    """Upper bound for the total contribution of the torsion-entry matrix
    classes to the normalized n-th moment error:

        sum_m S(n,m) (1 + omega_K)^((n-m) m) * 2 (sqrt3/2)^(t d)
    """
    if n >= t:
        raise ValueError("need n < t")
    w = F.omega_K
    decay = 2 * (math.sqrt(3) / 2) ** (t * F.degree)
    return sum(
        stirling2(n, m) * (1 + w) ** ((n - m) * m) for m in range(1, n + 1)
    ) * decay
