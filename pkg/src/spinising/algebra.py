"""Exact arithmetic: sparse polynomials, truncated series, Pfaffians, QSqrt.

Rational scalars are `fractions.Fraction` throughout; polynomials are
dictionaries from exponent tuples to nonzero coefficients.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .errors import (IncompatibleRadicands, NonUnitConstantTerm, OddDimension,
                     SizeLimit)

PFAFFIAN_DIM_LIMIT = 64


class SparsePoly:
    """Multivariate polynomial with a fixed variable count."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict[tuple[int, ...], Fraction] | None = None):
        self.nvars = nvars
        self.terms = {}
        if terms:
            for exp, c in terms.items():
                if c:
                    self.terms[tuple(exp)] = Fraction(c)

    @classmethod
    def constant(cls, nvars: int, value) -> "SparsePoly":
        return cls(nvars, {(0,) * nvars: Fraction(value)})

    @classmethod
    def variable(cls, nvars: int, i: int, power: int = 1) -> "SparsePoly":
        exp = [0] * nvars
        exp[i] = power
        return cls(nvars, {tuple(exp): Fraction(1)})

    @classmethod
    def monomial(cls, nvars: int, exp: Sequence[int], coeff=1) -> "SparsePoly":
        return cls(nvars, {tuple(exp): Fraction(coeff)})

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def coefficient(self, exp: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exp), Fraction(0))

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def __eq__(self, other) -> bool:
        if isinstance(other, SparsePoly):
            return self.nvars == other.nvars and self.terms == other.terms
        return self.terms == SparsePoly.constant(self.nvars, other).terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __add__(self, other) -> "SparsePoly":
        other = self._coerce(other)
        out = dict(self.terms)
        for exp, c in other.terms.items():
            s = out.get(exp, Fraction(0)) + c
            if s:
                out[exp] = s
            else:
                out.pop(exp, None)
        return SparsePoly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "SparsePoly":
        return SparsePoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "SparsePoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "SparsePoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "SparsePoly":
        if not isinstance(other, SparsePoly):
            other = self._coerce(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(exp, Fraction(0)) + c1 * c2
                if s:
                    out[exp] = s
                else:
                    del out[exp]
        return SparsePoly(self.nvars, out)

    __rmul__ = __mul__

    def _coerce(self, other) -> "SparsePoly":
        if isinstance(other, SparsePoly):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        return SparsePoly.constant(self.nvars, other)

    def truncate(self, max_degree: int) -> "SparsePoly":
        return SparsePoly(self.nvars,
                          {e: c for e, c in self.terms.items() if sum(e) <= max_degree})

    def evaluate(self, point: Sequence) -> Fraction:
        vals = [Fraction(v) for v in point]
        total = Fraction(0)
        for exp, c in self.terms.items():
            term = c
            for v, p in zip(vals, exp):
                if p:
                    term *= v ** p
            total += term
        return total

    def partial(self, i: int) -> "SparsePoly":
        out = {}
        for exp, c in self.terms.items():
            if exp[i] == 0:
                continue
            new = list(exp)
            new[i] -= 1
            out[tuple(new)] = c * exp[i]
        return SparsePoly(self.nvars, out)

    def halve_exponents(self) -> "SparsePoly":
        """Undo doubled-exponent bookkeeping; all exponents must be even."""
        out = {}
        for exp, c in self.terms.items():
            if any(p % 2 for p in exp):
                raise ValueError(f"odd doubled exponent in {exp}")
            out[tuple(p // 2 for p in exp)] = c
        return SparsePoly(self.nvars, out)

    def to_text(self) -> str:
        """Canonical sorted form for golden comparisons."""
        if not self.terms:
            return "0"
        parts = []
        for exp in sorted(self.terms, key=lambda e: (sum(e), e)):
            c = self.terms[exp]
            mono = " ".join(f"Y{i}^{p}" for i, p in enumerate(exp) if p)
            parts.append(f"{c} {mono}".strip())
        return " + ".join(parts)

    def __repr__(self):
        return f"SparsePoly({self.to_text()})"


class TruncatedSeries:
    """SparsePoly together with a total-degree cutoff; arithmetic re-truncates."""

    __slots__ = ("poly", "cutoff")

    def __init__(self, poly: SparsePoly, cutoff: int):
        self.poly = poly.truncate(cutoff)
        self.cutoff = cutoff

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        d = min(self.cutoff, other.cutoff)
        return TruncatedSeries(self.poly + other.poly, d)

    def __mul__(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            d = min(self.cutoff, other.cutoff)
            return TruncatedSeries(self.poly * other.poly, d)
        return TruncatedSeries(self.poly * other, self.cutoff)

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        d = min(self.cutoff, other.cutoff)
        return TruncatedSeries(self.poly - other.poly, d)

    def coefficient(self, exp: Sequence[int]) -> Fraction:
        return self.poly.coefficient(exp)

    def __eq__(self, other) -> bool:
        if isinstance(other, TruncatedSeries):
            return self.cutoff == other.cutoff and self.poly == other.poly
        return NotImplemented

    def __repr__(self):
        return f"TruncatedSeries({self.poly.to_text()}, D={self.cutoff})"


def series_inverse_square(p: SparsePoly, cutoff: int) -> TruncatedSeries:
    """Series S with S * p^2 = 1 modulo total degree > cutoff (Newton iteration)."""
    if p.constant_term() != 1:
        raise NonUnitConstantTerm(f"constant term {p.constant_term()} != 1")
    q = (p * p).truncate(cutoff)
    one = SparsePoly.constant(p.nvars, 1)
    r = SparsePoly.constant(p.nvars, 1)
    prec = 1
    while prec <= cutoff:
        prec *= 2
        d = min(prec - 1, cutoff)
        r = (r * (2 * one - (q.truncate(d) * r).truncate(d))).truncate(d)
    assert (r * q).truncate(cutoff) == one
    return TruncatedSeries(r, cutoff)


# -- skew-symmetric matrices --------------------------------------------------


def check_skew(m: Sequence[Sequence]) -> None:
    n = len(m)
    for i in range(n):
        if len(m[i]) != n:
            raise ValueError("matrix not square")
        if not _is_zero_entry(m[i][i]):
            raise ValueError(f"nonzero diagonal at {i}")
        for j in range(i + 1, n):
            if m[i][j] != -m[j][i]:
                raise ValueError(f"entry ({i},{j}) is not the negative of ({j},{i})")


def _is_zero_entry(x) -> bool:
    if isinstance(x, SparsePoly):
        return x.is_zero()
    return x == 0


def pfaffian(m: Sequence[Sequence]):
    """Pfaffian by recursive perfect-matching expansion (exact entries)."""
    n = len(m)
    if n > PFAFFIAN_DIM_LIMIT:
        raise SizeLimit(f"dimension {n} exceeds {PFAFFIAN_DIM_LIMIT}")
    if n % 2:
        raise OddDimension(f"odd dimension {n}")
    check_skew(m)
    if n == 0:
        return Fraction(1)

    def rec(active: tuple[int, ...]):
        if not active:
            return 1
        i0 = active[0]
        rest = active[1:]
        total = None
        for pos, j in enumerate(rest):
            entry = m[i0][j]
            if _is_zero_entry(entry):
                continue
            sub = rest[:pos] + rest[pos + 1:]
            piece = entry * rec(sub)
            if pos % 2:
                piece = -piece
            total = piece if total is None else total + piece
        if total is None:
            return _zero_like(m)
        return total

    return rec(tuple(range(n)))


def _zero_like(m):
    for row in m:
        for entry in row:
            if isinstance(entry, SparsePoly):
                return SparsePoly(entry.nvars)
    return Fraction(0)


def determinant(m: Sequence[Sequence[Fraction]]) -> Fraction:
    """Exact determinant of a rational matrix (fraction Gaussian elimination)."""
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            if a[r][col]:
                factor = a[r][col] * inv
                for c in range(col, n):
                    a[r][c] -= factor * a[col][c]
    return det


# -- exact square-root scalars --------------------------------------------------


def _squarefree_split(n: int) -> tuple[int, int]:
    """n = square * squarefree; returns (sqrt(square), squarefree). n > 0."""
    root, free = 1, 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            count = 0
            while n % d == 0:
                n //= d
                count += 1
            root *= d ** (count // 2)
            if count % 2:
                free *= d
        d += 1 if d == 2 else 2
    return root, free * n


class QSqrt:
    """Exact scalar q * sqrt(r) with rational q and squarefree positive integer r."""

    __slots__ = ("q", "r")

    def __init__(self, q, r=1):
        q = Fraction(q)
        if isinstance(r, Fraction) or not isinstance(r, int):
            r = Fraction(r)
            if r <= 0:
                raise ValueError("radicand must be positive")
            # sqrt(a/b) = sqrt(a*b)/b
            q = q / r.denominator
            r = r.numerator * r.denominator
        if r <= 0:
            raise ValueError("radicand must be positive")
        root, free = _squarefree_split(r)
        self.q = q * root
        self.r = 1 if self.q == 0 else free

    def is_zero(self) -> bool:
        return self.q == 0

    def __mul__(self, other) -> "QSqrt":
        if not isinstance(other, QSqrt):
            other = QSqrt(other)
        return QSqrt(self.q * other.q, self.r * other.r)

    __rmul__ = __mul__

    def __neg__(self) -> "QSqrt":
        out = QSqrt(0)
        out.q, out.r = -self.q, self.r
        return out

    def __add__(self, other) -> "QSqrt":
        if not isinstance(other, QSqrt):
            other = QSqrt(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.r != other.r:
            raise IncompatibleRadicands(f"sqrt({self.r}) + sqrt({other.r})")
        out = QSqrt(0)
        out.q, out.r = self.q + other.q, self.r
        if out.q == 0:
            out.r = 1
        return out

    __radd__ = __add__

    def __sub__(self, other) -> "QSqrt":
        if not isinstance(other, QSqrt):
            other = QSqrt(other)
        return self + (-other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSqrt):
            other = QSqrt(other)
        return self.q == other.q and self.r == other.r

    def __hash__(self):
        return hash((self.q, self.r))

    def __float__(self) -> float:
        return float(self.q) * math.sqrt(self.r)

    def as_fraction(self) -> Fraction:
        if self.r != 1:
            raise ValueError(f"irrational value sqrt({self.r})")
        return self.q

    def __repr__(self):
        return f"QSqrt({self.q}*sqrt({self.r}))"


def qsqrt_mul(a: QSqrt, b: QSqrt) -> QSqrt:
    return a * b


def qsqrt_add(a: QSqrt, b: QSqrt) -> QSqrt:
    return a + b


def sqrt_fraction(x) -> QSqrt:
    """Exact square root of a nonnegative rational."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("negative radicand")
    if x == 0:
        return QSqrt(0)
    return QSqrt(1, x)
