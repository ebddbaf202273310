"""Finite Grassmann algebra with Berezin integration.

Elements are dictionaries from generator bitmasks to coefficients; the
stored coefficient always refers to the product of generators in ascending
index order.  Coefficients may be rationals or sparse polynomials.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .algebra import SparsePoly
from .errors import IncompleteOrder, NotQuadratic, SizeLimit
from .graphs import PlanarGraph
from .kasteleyn import effective_halves

Z_F_GENERATOR_LIMIT = 24
COMPLEX_GENERATOR_LIMIT = 48


def _merge_sign(a: int, b: int) -> int:
    """Sign of reordering (ascending a)(ascending b) into one ascending product."""
    inv = 0
    while b:
        low = b & -b
        inv += (a >> low.bit_length()).bit_count()
        b ^= low
    return -1 if inv & 1 else 1


class GrassmannElement:
    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict | None = None):
        self.n = n
        self.terms = {}
        if terms:
            for mask, c in terms.items():
                if not _coeff_is_zero(c):
                    self.terms[mask] = c

    @classmethod
    def scalar(cls, n: int, value) -> "GrassmannElement":
        return cls(n, {0: value})

    @classmethod
    def monomial(cls, n: int, generators: Sequence[int], coeff=Fraction(1)) -> "GrassmannElement":
        """Product of the given generators in the given order."""
        mask = 0
        sign = 1
        for g in generators:
            bit = 1 << g
            if mask & bit:
                return cls(n)  # repeated generator squares to zero
            # count generators already placed that are above g
            sign *= _merge_sign(mask, bit)
            mask |= bit
        return cls(n, {mask: sign * coeff})

    def __add__(self, other: "GrassmannElement") -> "GrassmannElement":
        out = dict(self.terms)
        for mask, c in other.terms.items():
            s = out.get(mask, 0) + c
            if _coeff_is_zero(s):
                out.pop(mask, None)
            else:
                out[mask] = s
        return GrassmannElement(self.n, out)

    def __mul__(self, other) -> "GrassmannElement":
        if not isinstance(other, GrassmannElement):
            return self.scale(other)
        out: dict[int, object] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                if m1 & m2:
                    continue
                m = m1 | m2
                c = _merge_sign(m1, m2) * c1 * c2
                s = out.get(m, 0) + c
                if _coeff_is_zero(s):
                    out.pop(m, None)
                else:
                    out[m] = s
        return GrassmannElement(self.n, out)

    def scale(self, factor) -> "GrassmannElement":
        return GrassmannElement(self.n, {m: c * factor for m, c in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {m.bit_count() for m in self.terms}


def _coeff_is_zero(c) -> bool:
    if isinstance(c, SparsePoly):
        return c.is_zero()
    return c == 0


def exp_quadratic(q: GrassmannElement) -> GrassmannElement:
    """exp of a homogeneous degree-2 element (finite nilpotent series)."""
    if q.degrees() - {2}:
        raise NotQuadratic(f"degrees {sorted(q.degrees())} present")
    result = GrassmannElement.scalar(q.n, Fraction(1)) + q
    power = q
    k = 1
    while not power.is_zero():
        k += 1
        power = (power * q).scale(Fraction(1, k))
        result = result + power
    return result


def _permutation_sign(order: Sequence[int]) -> int:
    inv = 0
    for i in range(len(order)):
        for j in range(i + 1, len(order)):
            if order[i] > order[j]:
                inv += 1
    return -1 if inv & 1 else 1


def berezin(el: GrassmannElement, order: Sequence[int]):
    """Coefficient of the top form written in the given generator order."""
    if sorted(order) != list(range(el.n)):
        raise IncompleteOrder("order must list every generator exactly once")
    top = (1 << el.n) - 1
    c = el.terms.get(top, Fraction(0))
    return _permutation_sign(order) * c


def product_top_coefficient(factors: list[tuple[int, object]], n: int, one):
    """Ascending-order top coefficient of prod_i (1 + c_i * psi_{mask_i}).

    Each factor is (mask, coefficient-of-ascending-product).  Intermediate
    monomials that can no longer be completed to the top form by remaining
    factors are pruned.
    """
    infos = sorted(factors, key=lambda mc: (mc[0] & -mc[0]).bit_length())
    avail_after = [0] * (len(infos) + 1)
    for i in range(len(infos) - 1, -1, -1):
        avail_after[i] = avail_after[i + 1] | infos[i][0]
    full = (1 << n) - 1
    acc: dict[int, object] = {0: one}
    for i, (mask, coeff) in enumerate(infos):
        needed_ok = avail_after[i + 1]
        new: dict[int, object] = {}
        for m, c in acc.items():
            if (full & ~m) & ~needed_ok == 0:
                s = new.get(m, 0) + c
                if not _coeff_is_zero(s):
                    new[m] = s
                elif m in new:
                    del new[m]
            if not (m & mask):
                m2 = m | mask
                if (full & ~m2) & ~needed_ok == 0:
                    add = (_merge_sign(m, mask) * c) * coeff
                    s = new.get(m2, 0) + add
                    if not _coeff_is_zero(s):
                        new[m2] = s
                    elif m2 in new:
                        del new[m2]
        acc = new
    return acc.get(full, one * 0)


def _ordered_pair(a: int, b: int, coeff):
    """(mask, ascending coefficient) for coeff * psi_a psi_b."""
    if a < b:
        return (1 << a) | (1 << b), coeff
    return (1 << a) | (1 << b), -1 * coeff


def _angle_list(g: PlanarGraph) -> list[tuple[int, int]]:
    """All angles as ordered half-edge pairs.

    With faces traced clockwise (face on the right of each orbit), the pair
    order that reproduces positive loop weights is (ccw-successor, half).
    """
    out = []
    for v in range(g.num_vertices):
        for h in g.halves_at(v):
            out.append((g.next_ccw(h), h))
    return out


def _angle_coeff(g: PlanarGraph, h1: int, h2: int) -> SparsePoly:
    """X_alpha = sqrt(Y_{e(h1)} Y_{e(h2)}) in doubled-exponent bookkeeping."""
    exp = [0] * g.num_edges
    exp[g.edge_of[h1]] += 1
    exp[g.edge_of[h2]] += 1
    return SparsePoly.monomial(g.num_edges, exp)


def z_f(g: PlanarGraph, o: Sequence[bool]) -> SparsePoly:
    """Real fermionic integral: one generator per half-edge.

    Integrand exp(sum_e psi_s psi_t + sum_alpha X_alpha psi_s psi_t), measure
    ordered per edge as (t, s); equals the loop polynomial for Kasteleyn o.
    """
    n = len(g.half_edges)
    if n > Z_F_GENERATOR_LIMIT:
        raise SizeLimit(f"{n} generators exceeds {Z_F_GENERATOR_LIMIT}")
    one = SparsePoly.constant(g.num_edges, 1)
    factors = []
    for e in range(g.num_edges):
        hs, ht = effective_halves(g, o, e)
        factors.append(_ordered_pair(hs, ht, one))
    for h1, h2 in _angle_list(g):
        factors.append(_ordered_pair(h1, h2, _angle_coeff(g, h1, h2)))
    top = product_top_coefficient(factors, n, one)
    order = []
    for e in range(g.num_edges):
        hs, ht = effective_halves(g, o, e)
        order += [hs, ht]
    return (_permutation_sign(order) * top).halve_exponents()


def z_f_complex(g: PlanarGraph, o: Sequence[bool]) -> SparsePoly:
    """Complex fermionic integral with generators psi_h, psibar_h per half-edge."""
    n = 4 * g.num_edges
    if n > COMPLEX_GENERATOR_LIMIT:
        raise SizeLimit(f"{n} generators exceeds {COMPLEX_GENERATOR_LIMIT}")
    psi = lambda h: 2 * h
    psib = lambda h: 2 * h + 1
    one = SparsePoly.constant(g.num_edges, 1)
    factors = []
    for h in range(len(g.half_edges)):
        factors.append(_ordered_pair(psi(h), psib(h), one))
    for e in range(g.num_edges):
        hs, ht = effective_halves(g, o, e)
        factors.append(_ordered_pair(psib(hs), psib(ht), -1 * one))
    for h1, h2 in _angle_list(g):
        factors.append(_ordered_pair(psi(h1), psi(h2), _angle_coeff(g, h1, h2)))
    top = product_top_coefficient(factors, n, one)
    order = []
    for e in range(g.num_edges):
        hs, ht = effective_halves(g, o, e)
        order += [psi(hs), psi(ht), psib(hs), psib(ht)]
    poly = (_permutation_sign(order) * top).halve_exponents()
    # the empty-loop term carries only measure-order bookkeeping; pin it to +1
    c0 = poly.constant_term()
    assert c0 in (1, -1), f"complex-form constant term {c0}"
    return -poly if c0 == -1 else poly


def z_f_complex_squared(g: PlanarGraph, o: Sequence[bool]) -> SparsePoly:
    """Doubled complex integral (psi, eta, psibar, etabar per half-edge).

    Sign of the overall measure order is fixed by requiring value 1 at
    vanishing angle couplings (the empty loop configuration).
    """
    n = 8 * g.num_edges
    if n > COMPLEX_GENERATOR_LIMIT:
        raise SizeLimit(f"{n} generators exceeds {COMPLEX_GENERATOR_LIMIT}")
    psi = lambda h: 4 * h
    eta = lambda h: 4 * h + 1
    psib = lambda h: 4 * h + 2
    etab = lambda h: 4 * h + 3
    one = SparsePoly.constant(g.num_edges, 1)
    factors = []
    for h in range(len(g.half_edges)):
        factors.append(_ordered_pair(psi(h), etab(h), one))
        factors.append(_ordered_pair(psib(h), eta(h), one))
    for e in range(g.num_edges):
        hs, ht = effective_halves(g, o, e)
        factors.append(_ordered_pair(psib(hs), psib(ht), -1 * one))
        factors.append(_ordered_pair(etab(hs), etab(ht), -1 * one))
    for h1, h2 in _angle_list(g):
        x = _angle_coeff(g, h1, h2)
        factors.append(_ordered_pair(psi(h1), psi(h2), x))
        factors.append(_ordered_pair(eta(h1), eta(h2), x))
    top = product_top_coefficient(factors, n, one)
    poly = top.halve_exponents()
    c0 = poly.constant_term()
    assert c0 in (1, -1), f"squared-form constant term {c0}"
    if c0 == -1:
        poly = -poly
    return poly
