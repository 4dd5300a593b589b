"""Exact arithmetic for the supported base fields: the rationals, quadratic
fields Q(sqrt D), and cyclotomic fields Q(zeta_n).

Elements are coordinate vectors of exact rationals over a fixed integral
basis (a power basis in all three cases), so norms, traces, ideal norms and
lattice indices are computed without floating point.  Complex embeddings are
held at 100 bits and rounded to complex128 for the numeric layers.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cache, cached_property
from typing import Iterable, Sequence

import mpmath
import numpy as np

_EMBED_BITS = 100
_ZERO = Fraction(0)
_ONE = Fraction(1)

Rational = int | Fraction


# ---------------------------------------------------------------------------
# integer / polynomial helpers


def _factorize(n: int) -> dict[int, int]:
    assert n >= 1
    out: dict[int, int] = {}
    m = n
    p = 2
    while p * p <= m:
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
        p += 1 if p == 2 else 2
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def _euler_phi(n: int) -> int:
    phi = 1
    for p, e in _factorize(n).items():
        phi *= (p - 1) * p ** (e - 1)
    return phi


def _is_squarefree(n: int) -> bool:
    return all(e == 1 for e in _factorize(abs(n)).values())


def _poly_exact_div(num: Sequence[int], den: Sequence[int]) -> list[int]:
    """Exact division of integer polynomials, ascending coefficients, den monic."""
    work = list(num)
    dd = len(den) - 1
    assert den[-1] == 1
    out = [0] * (len(work) - dd)
    for i in range(len(out) - 1, -1, -1):
        c = work[i + dd]
        out[i] = c
        if c:
            for j, dj in enumerate(den):
                work[i + j] -= c * dj
    assert not any(work), "polynomial division was not exact"
    return out


@cache
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients (ascending) of the n-th cyclotomic polynomial.

    Computed by exactly dividing x^n - 1 by the polynomials of the proper
    divisors of n; integer arithmetic throughout.
    """
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_exact_div(poly, cyclotomic_polynomial(d))
    return tuple(poly)


def _poly_trim(p: list[Fraction]) -> list[Fraction]:
    while p and not p[-1]:
        p.pop()
    return p


def _poly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = list(a)
    q = [_ZERO] * max(1, len(a) - len(b) + 1)
    inv_lead = 1 / b[-1]
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1] * inv_lead
        q[i] = c
        if c:
            for j, bj in enumerate(b):
                a[i + j] -= c * bj
    return _poly_trim(q), _poly_trim(a)


def _det_int(mat: Sequence[Sequence[int]]) -> int:
    """Integer determinant by Bareiss's fraction-free elimination."""
    a = [list(row) for row in mat]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[-1][-1]


def _det_fraction(mat: Sequence[Sequence[Fraction]]) -> Fraction:
    a = [list(row) for row in mat]
    n = len(a)
    det = _ONE
    for k in range(n):
        piv = None
        for i in range(k, n):
            if a[i][k]:
                piv = i
                break
        if piv is None:
            return _ZERO
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        inv = 1 / a[k][k]
        for i in range(k + 1, n):
            if a[i][k]:
                f = a[i][k] * inv
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
    return det


def hnf_rows(rows: Iterable[Sequence[int]], ncols: int) -> list[list[int]]:
    """Hermite normal form of the ZZ-span of the given integer rows.

    Returns echelon rows with positive pivots; entries above each pivot are
    reduced into [0, pivot).  Zero rows are dropped, so the result has one
    row per pivot column.
    """
    rest = [tuple(int(x) for x in r) for r in rows]
    rest = [r for r in rest if any(r)]
    pivots: list[tuple[int, tuple[int, ...]]] = []
    for col in range(ncols):
        hits = [r for r in rest if r[col]]
        rest = [r for r in rest if not r[col]]
        if not hits:
            continue
        piv = hits.pop()
        for r in hits:
            while r[col]:
                q = piv[col] // r[col]
                piv, r = r, tuple(a - q * b for a, b in zip(piv, r))
            if any(r):
                rest.append(r)
        if piv[col] < 0:
            piv = tuple(-a for a in piv)
        pivots.append((col, piv))
    out = [list(p) for _, p in pivots]
    cols = [c for c, _ in pivots]
    for j in range(len(out)):
        cj = cols[j]
        pj = out[j][cj]
        for i in range(j):
            q = out[i][cj] // pj
            if q:
                out[i] = [a - q * b for a, b in zip(out[i], out[j])]
    return out


# ---------------------------------------------------------------------------
# fields


class NumberField:
    """One field of the supported family, with its integral power basis.

    The basis is 1 for the rationals; {1, g} with g = sqrt(D) (or
    g = (1+sqrt(D))/2 when D = 1 mod 4) for quadratic fields; and
    {1, g, ..., g^(d-1)} with g = zeta_n for cyclotomic fields.  In every
    case g is an algebraic integer whose monic minimal polynomial has
    integer coefficients, so products of basis elements have integer
    coordinates.  Instances are immutable and cached; identity comparison
    is field equality.
    """

    def __init__(self, kind: str, *, D: int | None = None, conductor: int | None = None) -> None:
        self.kind = kind
        self.D = D
        self.conductor = conductor
        if kind == "rational":
            self.degree = 1
            self.min_poly: tuple[int, ...] = (0, 1)
            self.signature = (1, 0)
            self.disc = 1
            self.omega_K = 2
            self.descriptor = "Q"
        elif kind == "quadratic":
            assert D is not None and D not in (0, 1) and _is_squarefree(D)
            self.degree = 2
            if D % 4 == 1:
                self.min_poly = (-((D - 1) // 4), -1, 1)
                self.disc = D
            else:
                self.min_poly = (-D, 0, 1)
                self.disc = 4 * D
            self.signature = (2, 0) if D > 0 else (0, 1)
            self.omega_K = 4 if D == -1 else 6 if D == -3 else 2
            self.descriptor = f"Q(sqrt,{D})"
        elif kind == "cyclotomic":
            assert conductor is not None and conductor >= 3 and conductor % 4 != 2
            n = conductor
            self.min_poly = cyclotomic_polynomial(n)
            d = len(self.min_poly) - 1
            assert d == _euler_phi(n)
            self.degree = d
            self.signature = (0, d // 2)
            num = n**d
            den = 1
            for p in _factorize(n):
                den *= p ** (d // (p - 1))
            self.disc = (num // den) * (-1 if (d // 2) % 2 else 1)
            self.omega_K = n if n % 2 == 0 else 2 * n
            self.descriptor = f"Q(zeta,{n})"
        else:
            raise ValueError(f"unsupported field kind: {kind!r}")
        r1, r2 = self.signature
        assert r1 + 2 * r2 == self.degree
        self.abs_discriminant = abs(self.disc)
        self.unit_rank = r1 + r2 - 1
        self._check_invariants()

    def __repr__(self) -> str:
        return f"NumberField({self.descriptor!r})"

    # -- basic elements

    def element(self, coords: Sequence[Rational]) -> FieldElement:
        cs = tuple(Fraction(c) for c in coords)
        if len(cs) != self.degree:
            raise ValueError(f"expected {self.degree} coordinates, got {len(cs)}")
        return FieldElement(self, cs)

    def from_rational(self, q: Rational) -> FieldElement:
        return FieldElement(self, (Fraction(q),) + (_ZERO,) * (self.degree - 1))

    @cached_property
    def zero(self) -> FieldElement:
        return self.from_rational(0)

    @cached_property
    def one(self) -> FieldElement:
        return self.from_rational(1)

    @cached_property
    def gen(self) -> FieldElement:
        if self.degree == 1:
            return self.zero
        return FieldElement(self, (_ZERO, _ONE) + (_ZERO,) * (self.degree - 2))

    @cached_property
    def integral_basis(self) -> tuple[FieldElement, ...]:
        d = self.degree
        return tuple(
            FieldElement(self, tuple(_ONE if j == k else _ZERO for j in range(d)))
            for k in range(d)
        )

    @cached_property
    def basis_symbol(self) -> str:
        if self.kind == "quadratic":
            return "w" if self.D % 4 == 1 else f"sqrt({self.D})"
        if self.kind == "cyclotomic":
            return "z"
        return ""

    # -- multiplication structure

    @cached_property
    def _pow_red(self) -> tuple[tuple[int, ...], ...]:
        """Integer coordinates of g^k for k = 0..2d-2."""
        d = self.degree
        rows = [[1 if j == k else 0 for j in range(d)] for k in range(d)]
        top = [-c for c in self.min_poly[:d]]
        cur = rows[d - 1]
        for _ in range(d, 2 * d - 1):
            shifted = [0] + cur
            over = shifted[d]
            cur = [shifted[j] + over * top[j] for j in range(d)]
            rows.append(cur)
        return tuple(tuple(r) for r in rows)

    def _mul_coords(self, a: tuple[Fraction, ...], b: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
        d = self.degree
        if d == 1:
            return (a[0] * b[0],)
        conv = [_ZERO] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        conv[i + j] += ai * bj
        out = list(conv[:d])
        for k in range(d, 2 * d - 1):
            ck = conv[k]
            if ck:
                red = self._pow_red[k]
                for j in range(d):
                    if red[j]:
                        out[j] += ck * red[j]
        return tuple(out)

    def _inv_coords(self, a: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
        d = self.degree
        if not any(a):
            raise ZeroDivisionError("field element is zero")
        if d == 1:
            return (1 / a[0],)
        # extended Euclid in Q[x] against the minimal polynomial
        f = [Fraction(c) for c in self.min_poly]
        r0, r1 = f, _poly_trim(list(a))
        s0, s1 = [_ZERO], [_ONE]
        while len(r1) > 1:
            q, rem = _poly_divmod(r0, r1)
            r0, r1 = r1, rem
            qs1 = [_ZERO] * (len(q) + len(s1) - 1)
            for i, qi in enumerate(q):
                if qi:
                    for j, sj in enumerate(s1):
                        qs1[i + j] += qi * sj
            new_s = [
                (s0[i] if i < len(s0) else _ZERO) - (qs1[i] if i < len(qs1) else _ZERO)
                for i in range(max(len(s0), len(qs1)))
            ]
            s0, s1 = s1, _poly_trim(new_s)
        assert len(r1) == 1 and r1[0], "minimal polynomial must be irreducible"
        inv_c = 1 / r1[0]
        out = [c * inv_c for c in s1]
        assert len(out) <= d
        return tuple(out + [_ZERO] * (d - len(out)))

    # -- traces, involution, embeddings

    @cached_property
    def _power_traces(self) -> tuple[int, ...]:
        """Tr(g^k) for k = 0..2d-2 via Newton's identities."""
        d, f = self.degree, self.min_poly
        p = [d]
        for k in range(1, 2 * d - 1):
            s = -k * f[d - k] if k <= d else 0
            for i in range(1, min(k - 1, d) + 1):
                s -= f[d - i] * p[k - i]
            p.append(s)
        return tuple(p)

    def trace(self, x: FieldElement) -> Fraction:
        p = self._power_traces
        return sum((c * p[k] for k, c in enumerate(x.coords)), _ZERO)

    @cached_property
    def _invol_rows(self) -> tuple[tuple[int, ...], ...]:
        """Integer coordinates of conj(g)^k, k < d, for the standard involution."""
        d = self.degree
        identity = tuple(tuple(1 if j == k else 0 for j in range(d)) for k in range(d))
        if self.kind == "rational" or (self.kind == "quadratic" and self.D > 0):
            return identity
        if self.kind == "quadratic":
            cg = self.element((1, -1)) if self.D % 4 == 1 else self.element((0, -1))
        else:
            cg = self.gen ** (self.conductor - 1)
        rows = [self.one.coords]
        x = self.one
        for _ in range(1, d):
            x = x * cg
            rows.append(x.coords)
        out = []
        for r in rows:
            assert all(c.denominator == 1 for c in r)
            out.append(tuple(int(c) for c in r))
        return tuple(out)

    def involution(self, x: FieldElement) -> FieldElement:
        """Identity at real embeddings, complex conjugation at complex ones."""
        d = self.degree
        rows = self._invol_rows
        out = [_ZERO] * d
        for k, c in enumerate(x.coords):
            if c:
                row = rows[k]
                for j in range(d):
                    if row[j]:
                        out[j] += c * row[j]
        return FieldElement(self, tuple(out))

    @cached_property
    def embeddings_mp(self) -> tuple[mpmath.mpc, ...]:
        """Images of the basis generator, conjugate pairs adjacent, 100 bits."""
        with mpmath.workprec(_EMBED_BITS):
            if self.kind == "rational":
                vals = [mpmath.mpc(0)]
            elif self.kind == "quadratic":
                s = mpmath.sqrt(abs(self.D))
                if self.D > 0:
                    if self.D % 4 == 1:
                        vals = [(1 + s) / 2, (1 - s) / 2]
                    else:
                        vals = [s, -s]
                else:
                    g = (1 + mpmath.mpc(0, 1) * s) / 2 if self.D % 4 == 1 else mpmath.mpc(0, 1) * s
                    vals = [g, mpmath.conj(g)]
            else:
                n = self.conductor
                vals = []
                for k in range(1, (n + 1) // 2):
                    if math.gcd(k, n) == 1:
                        e = mpmath.exp(2j * mpmath.pi * k / n)
                        vals.extend([e, mpmath.conj(e)])
            return tuple(mpmath.mpc(v) for v in vals)

    @cached_property
    def embeddings(self) -> np.ndarray:
        """Generator images as complex128, same order as embeddings_mp."""
        return np.array([complex(v) for v in self.embeddings_mp], dtype=complex)

    @cached_property
    def embed_matrix(self) -> np.ndarray:
        """(d, d) complex matrix: row i, column j holds sigma_i(g^j)."""
        d = self.degree
        with mpmath.workprec(_EMBED_BITS):
            rows = []
            for v in self.embeddings_mp:
                acc = mpmath.mpc(1)
                row = []
                for _ in range(d):
                    row.append(complex(acc))
                    acc *= v
                rows.append(row)
        return np.array(rows, dtype=complex)

    @cached_property
    def places(self) -> tuple[tuple[int, int], ...]:
        """(embedding row, multiplicity e) per archimedean place; complex pairs
        are adjacent in the embedding order, so the representative rows are
        0..r1-1 and then every other row."""
        r1, r2 = self.signature
        out = [(i, 1) for i in range(r1)]
        out.extend((r1 + 2 * j, 2) for j in range(r2))
        return tuple(out)

    @cached_property
    def torsion_generator(self) -> FieldElement:
        if self.kind == "quadratic" and self.D == -1:
            return self.gen
        if self.kind == "quadratic" and self.D == -3:
            return self.gen
        if self.kind == "cyclotomic":
            return self.gen if self.conductor % 2 == 0 else -self.gen
        return self.from_rational(-1)

    def _check_invariants(self) -> None:
        d = self.degree
        p = self._power_traces
        gram = [[p[i + j] for j in range(d)] for i in range(d)]
        assert _det_int(gram) == self.disc, "trace form disagrees with the discriminant"
        conj = self._invol_rows
        igram = [
            [sum(conj[j][k] * p[i + k] for k in range(d)) for j in range(d)]
            for i in range(d)
        ]
        assert _det_int(igram) == self.abs_discriminant, "involution Gram determinant is off"
        assert self.omega_K % 2 == 0
        if self.signature[0] > 0:
            assert self.omega_K == 2
        # embeddings must be roots of the minimal polynomial
        f = self.min_poly
        with mpmath.workprec(_EMBED_BITS):
            for v in self.embeddings_mp:
                val = mpmath.mpc(0)
                scale = mpmath.mpf(0)
                acc = mpmath.mpc(1)
                for c in f:
                    val += c * acc
                    scale += abs(c) * abs(acc)
                    acc *= v
                assert abs(val) <= 1e-14 * max(scale, 1), "embedding residual too large"


@cache
def rational_field() -> NumberField:
    return NumberField("rational")


@cache
def quadratic_field(D: int) -> NumberField:
    if D in (0, 1):
        raise ValueError("D must differ from 0 and 1")
    if not _is_squarefree(D):
        raise ValueError(f"D = {D} is not squarefree")
    return NumberField("quadratic", D=D)


@cache
def _cyclotomic_field_cached(n: int) -> NumberField:
    return NumberField("cyclotomic", conductor=n)


def cyclotomic_field(n: int) -> NumberField:
    if n < 1:
        raise ValueError("conductor must be positive")
    if n % 4 == 2:
        n //= 2  # same field; normalize to the odd conductor
    if n <= 2:
        return rational_field()
    return _cyclotomic_field_cached(n)


_DESCRIPTOR_RE = re.compile(r"\s*Q(?:\(\s*(sqrt|zeta)\s*,\s*(-?\d+)\s*\))?\s*$")


def make_field(descriptor: str | NumberField) -> NumberField:
    """Build a field from the descriptor grammar "Q", "Q(sqrt,D)", "Q(zeta,n)"."""
    if isinstance(descriptor, NumberField):
        return descriptor
    m = _DESCRIPTOR_RE.match(descriptor)
    if not m:
        raise ValueError(f"unrecognized field descriptor: {descriptor!r}")
    tag, val = m.groups()
    if tag is None:
        return rational_field()
    if tag == "sqrt":
        return quadratic_field(int(val))
    return cyclotomic_field(int(val))


# ---------------------------------------------------------------------------
# elements


@dataclass(frozen=True)
class FieldElement:
    field: NumberField
    coords: tuple[Fraction, ...]

    def _coerce(self, other) -> "FieldElement | None":
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise ValueError("elements belong to different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.from_rational(other)
        return None

    def __bool__(self) -> bool:
        return any(self.coords)

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self) -> FieldElement:
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, tuple(a - b for a, b in zip(self.coords, o.coords)))

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return FieldElement(self.field, tuple(a * q for a in self.coords))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, self.field._mul_coords(self.coords, o.coords))

    __rmul__ = __mul__

    def inverse(self) -> FieldElement:
        return FieldElement(self.field, self.field._inv_coords(self.coords))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return FieldElement(self.field, tuple(a / q for a in self.coords))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int) -> FieldElement:
        if e < 0:
            return self.inverse() ** (-e)
        out = self.field.one
        base = self
        n = e
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conj(self) -> FieldElement:
        return self.field.involution(self)

    @property
    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def as_rational(self) -> Fraction:
        if any(self.coords[1:]):
            raise ValueError("element is not rational")
        return self.coords[0]

    def __str__(self) -> str:
        sym = self.field.basis_symbol
        parts = []
        for k, c in enumerate(self.coords):
            if not c:
                continue
            if k == 0:
                parts.append(str(c))
            else:
                p = sym if k == 1 else f"{sym}^{k}"
                parts.append(p if c == 1 else f"-{p}" if c == -1 else f"{c}*{p}")
        if not parts:
            return "0"
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"<{self} in {self.field.descriptor}>"


ElementTuple = tuple[FieldElement, ...]


# ---------------------------------------------------------------------------
# operations


def conjugates(F: NumberField, x: FieldElement) -> np.ndarray:
    """All d complex embedding values of x, conjugate pairs adjacent."""
    v = np.array([float(c) for c in x.coords])
    return F.embed_matrix @ v


def abs_norm(F: NumberField, x: FieldElement) -> Fraction:
    """|N(x)| as an exact rational: |det| of the multiplication-by-x map."""
    if not x:
        return _ZERO
    d = F.degree
    cols = [(x * b).coords for b in F.integral_basis]
    mat = [[cols[j][i] for j in range(d)] for i in range(d)]
    return abs(_det_fraction(mat))


def trace_pairing_exact(F: NumberField, x: FieldElement, y: FieldElement) -> Fraction:
    """Tr(x * conj(y)), without the discriminant normalization."""
    return F.trace(x * y.conj())


def trace_pairing(F: NumberField, x: FieldElement, y: FieldElement) -> float:
    """The normalized positive-definite pairing; O_K gets unit covolume.

    The scale factor |disc|^(-1/d) makes the Gram determinant of the
    integral basis exactly 1 (checked exactly at field construction).
    """
    scale = F.abs_discriminant ** (-1.0 / F.degree)
    return scale * float(trace_pairing_exact(F, x, y))


@dataclass(frozen=True)
class FracIdeal:
    """A fractional ideal: (1/den) times the ZZ-span of integer HNF rows,
    coordinates over the integral basis."""

    field: NumberField
    den: int
    hnf: tuple[tuple[int, ...], ...]

    @cached_property
    def norm(self) -> Fraction:
        d = self.field.degree
        prod = 1
        for i in range(d):
            prod *= self.hnf[i][i]
        return Fraction(prod, self.den**d)

    def zz_basis(self) -> list[FieldElement]:
        den = Fraction(1, self.den)
        return [self.field.element([c * den for c in row]) for row in self.hnf]

    def contains(self, x: FieldElement) -> bool:
        v = [c * self.den for c in x.coords]
        for i in range(self.field.degree):
            q = v[i] / self.hnf[i][i]
            if q.denominator != 1:
                return False
            for j in range(self.field.degree):
                v[j] -= q * self.hnf[i][j]
        return not any(v)

    def __mul__(self, other: FracIdeal) -> FracIdeal:
        gens = [a * b for a in self.zz_basis() for b in other.zz_basis()]
        return ideal_from_generators(self.field, gens)


def ideal_from_generators(F: NumberField, xs: Sequence[FieldElement]) -> FracIdeal:
    """HNF form of the fractional ideal generated by xs over O_K."""
    xs = [x for x in xs if x]
    if not xs:
        raise ValueError("the zero ideal has no HNF representation here")
    d = F.degree
    frac_rows: list[tuple[Fraction, ...]] = []
    for x in xs:
        for b in F.integral_basis:
            frac_rows.append((b * x).coords)
    den = 1
    for row in frac_rows:
        for c in row:
            den = den * c.denominator // math.gcd(den, c.denominator)
    int_rows = [[int(c * den) for c in row] for row in frac_rows]
    rows = hnf_rows(int_rows, d)
    assert len(rows) == d, "ideal lattice is not full rank"
    g = den
    for row in rows:
        for c in row:
            g = math.gcd(g, c)
    den //= g
    rows = [[c // g for c in row] for row in rows]
    return FracIdeal(F, den, tuple(tuple(r) for r in rows))


def denominator_norm(F: NumberField, alphas: Sequence[FieldElement]) -> int:
    """D(alpha): the index of O_K inside the ideal generated by 1 and the
    alpha_i; equals 1 exactly when every alpha_i is integral."""
    alphas = list(alphas)
    if not any(alphas):
        raise ValueError("need at least one nonzero coordinate")
    ideal = ideal_from_generators(F, [F.one, *alphas])
    rec = 1 / ideal.norm
    assert rec.denominator == 1, "ideal containing 1 must have norm 1/integer"
    return int(rec)


def _matrix_rows(D) -> list[list[FieldElement]]:
    rows = getattr(D, "rows", D)
    return [list(r) for r in rows]


def _rank_over_K(rows: list[list[FieldElement]]) -> int:
    mat = [list(r) for r in rows]
    m, n = len(mat), len(mat[0])
    rank = 0
    for col in range(n):
        piv = None
        for i in range(rank, m):
            if mat[i][col]:
                piv = i
                break
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = mat[rank][col].inverse()
        mat[rank] = [e * inv for e in mat[rank]]
        for i in range(rank + 1, m):
            if mat[i][col]:
                f = mat[i][col]
                mat[i] = [e - f * p for e, p in zip(mat[i], mat[rank])]
        rank += 1
        if rank == m:
            break
    return rank


def frak_D(F: NumberField, D) -> int:
    """Index of {C in O_K^(1 x m) : C D is integral} inside O_K^(1 x m).

    Computed exactly as an index of (d*m)-dimensional ZZ-lattices: the
    integrality constraints from the non-integral columns are reduced
    modulo their common denominator q and the image size is read off an
    integer HNF.  Equals 1 when all entries are integral.
    """
    rows = _matrix_rows(D)
    m = len(rows)
    n = len(rows[0])
    if _rank_over_K(rows) < m:
        raise ValueError("matrix must have full row rank")
    d = F.degree
    cols = [j for j in range(n) if not all(rows[i][j].is_integral for i in range(m))]
    if not cols:
        return 1
    # constraint matrix: entry rows indexed by the dm coordinates of C,
    # columns by the d coordinates of each constrained product
    frac_cols: list[list[Fraction]] = []
    q = 1
    for j in cols:
        for i in range(m):
            for b in F.integral_basis:
                prod = (b * rows[i][j]).coords
                for c in prod:
                    q = q * c.denominator // math.gcd(q, c.denominator)
    big: list[list[int]] = []
    for i in range(m):
        for b in F.integral_basis:
            row: list[int] = []
            for j in cols:
                prod = (b * rows[i][j]).coords
                row.extend(int(c * q) for c in prod)
            big.append(row)
    c_dim = d * len(cols)
    for k in range(c_dim):
        big.append([q if jj == k else 0 for jj in range(c_dim)])
    hh = hnf_rows(big, c_dim)
    assert len(hh) == c_dim
    prod_diag = 1
    for i in range(c_dim):
        prod_diag *= hh[i][i]
    index, rem = divmod(q**c_dim, prod_diag)
    assert rem == 0
    return index


def enumerate_torsion(F: NumberField) -> list[FieldElement]:
    """The group of roots of unity, as powers of a fixed generator."""
    g = F.torsion_generator
    out = [F.one]
    x = g
    while x != F.one:
        out.append(x)
        x = x * g
        assert len(out) <= F.omega_K
    assert len(out) == F.omega_K, "torsion count disagrees with omega_K"
    return out


def _floor_quad_surd(P: int, Q: int, sq: int) -> int:
    """floor((P + sqrt(D))/Q) given sq = isqrt(D), D not a square."""
    n = P + sq
    if Q > 0:
        return n // Q
    return -(n // (-Q) + 1)


@cache
def fundamental_unit(F: NumberField) -> FieldElement:
    """The unit > 1 generating the units modulo torsion, for real quadratic
    fields, from the continued fraction of the basis generator."""
    if F.kind != "quadratic" or F.D < 0:
        raise ValueError("fundamental units are produced for real quadratic fields only")
    D = F.D
    sq = math.isqrt(D)
    half = D % 4 == 1
    P, Q = (1, 2) if half else (0, 1)
    h2, h1 = 0, 1
    k2, k1 = 1, 0
    for _ in range(100000):
        a = _floor_quad_surd(P, Q, sq)
        h2, h1 = h1, a * h1 + h2
        k2, k1 = k1, a * k1 + k2
        cand = F.element((h1 - k1, k1)) if half else F.element((h1, k1))
        if cand and abs_norm(F, cand) == 1:
            val = conjugates(F, cand)[0].real
            if val > 1 + 1e-12:
                return cand
        P = a * Q - P
        Q_next, rem = divmod(D - P * P, Q)
        assert rem == 0
        Q = Q_next
    raise RuntimeError("continued fraction did not close; is D sane?")
