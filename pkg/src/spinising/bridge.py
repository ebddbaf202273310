"""Identities tying Ising correlations to spin-average observables.

Everything in this module stays in exact rational arithmetic: hyperbolic
functions of the coupling y are eliminated through sinh^2 y = Y^2/(1-Y^2),
cosh^2 y = 1/(1-Y^2) and sinh 2y = 2Y/(1-Y^2), with Y = tanh y.  The spin
generating function is always the exact rational function 1/P^2 in the
loop polynomial P, so analytic identities become polynomial identities.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .algebra import QSqrt, SparsePoly, sqrt_fraction
from .errors import (DivergentTail, PathNotSimple, SingularCoupling,
                     ZeroCouplingDivision)
from .graphs import PlanarGraph, simple_cycles
from .ising import _as_couplings, nn_correlation, p_gamma, spin_correlation


def _corner_pairs(g: PlanarGraph, v: int) -> dict[int, tuple[int, int]]:
    """Each corner, keyed by its anchor half-edge, pairs two incident edges."""
    out = {}
    for h in g.halves_at(v):
        out[h] = (g.edge_of[h], g.edge_of[g.next_ccw(h)])
    return out


def edges_to_angles(g: PlanarGraph, Y) -> dict[int, QSqrt]:
    """X_alpha = sqrt(Y_e1 Y_e2) for the two edges meeting at each corner."""
    Y = _as_couplings(g, Y)
    out = {}
    for v in range(g.num_vertices):
        for h, (e1, e2) in _corner_pairs(g, v).items():
            out[h] = sqrt_fraction(Y[e1] * Y[e2])
    return out


def _as_qsqrt(x) -> QSqrt:
    return x if isinstance(x, QSqrt) else QSqrt(Fraction(x))


def _qsqrt_inv(x: QSqrt) -> QSqrt:
    if x.is_zero():
        raise ZeroCouplingDivision("angle coupling is zero")
    # 1/(q sqrt(r)) = (1/(q r)) sqrt(r)
    return QSqrt(1 / (x.q * x.r), x.r)


def angles_to_edges(g: PlanarGraph, X: dict) -> list[QSqrt]:
    """Invert the corner map: per edge, combine the four flanking corners.

    At each endpoint the two corners touching e are multiplied and the
    opposite corner divided out; the edge value is the square root of the
    product of the two endpoint ratios.
    """
    X = {h: _as_qsqrt(x) for h, x in X.items()}
    out = []
    for e in range(g.num_edges):
        prod = QSqrt(Fraction(1))
        for h in g.edges[e]:
            a = g.next_ccw(h)
            b = g.next_ccw(a)
            # corners at this endpoint: h pairs (e, e1), a pairs (e1, e2), b pairs (e2, e)
            prod = prod * X[h] * X[b] * _qsqrt_inv(X[a])
        if prod.r != 1:
            raise ZeroCouplingDivision(f"edge {e} ratio is not a perfect square")
        out.append(sqrt_fraction(prod.q))
    return out


def check_loop_products(g: PlanarGraph, Y) -> dict:
    """Product of corner couplings around any cycle equals the edge product."""
    Y = _as_couplings(g, Y)
    X = edges_to_angles(g, Y)
    corner_of_pair = {}
    for v in range(g.num_vertices):
        for h, pair in _corner_pairs(g, v).items():
            corner_of_pair[(v, frozenset(pair))] = h
    checked = 0
    ok = True
    for cyc in simple_cycles(g):
        edge_prod = Fraction(1)
        for e in cyc:
            edge_prod *= Y[e]
        angle_prod = QSqrt(Fraction(1))
        at_vertex: dict[int, list[int]] = {}
        for e in cyc:
            for h in g.edges[e]:
                at_vertex.setdefault(g.vertex_of(h), []).append(e)
        for v, pair in at_vertex.items():
            angle_prod = angle_prod * X[corner_of_pair[(v, frozenset(pair))]]
        checked += 1
        if angle_prod != QSqrt(edge_prod):
            ok = False
    return {"ok": ok, "cycles_checked": checked}


def verify_fundamental_equality(g: PlanarGraph, Y, cutoff: int = 30) -> dict:
    """Z_hat^2 * Z_spin = 1, with an independent truncated-series evaluation.

    The series route expands 1/(1+u)^2 = sum (-1)^d (d+1) u^d in the scalar
    u = P(Y) - 1 and reports the geometric tail bound at the cutoff.
    """
    Y = _as_couplings(g, Y)
    p = p_gamma(g)
    pval = p.evaluate(Y)
    if pval == 0:
        raise SingularCoupling("loop polynomial vanishes at these couplings")
    z_spin = 1 / pval ** 2
    exact_ok = pval ** 2 * z_spin == 1
    u = pval - 1
    partial = Fraction(0)
    upow = Fraction(1)
    for d in range(cutoff + 1):
        partial += (-1) ** d * (d + 1) * upow
        upow *= u
    au = abs(u)
    converges = au < 1
    tail = None
    series_ok = None
    if converges:
        tail = (cutoff + 2) * float(au) ** (cutoff + 1) / (1 - float(au)) ** 2
        series_ok = abs(float(partial) - float(z_spin)) <= tail + 1e-12
    return {"ok": exact_ok and bool(series_ok), "exact_product_one": exact_ok,
            "z_spin": z_spin, "series_value": partial, "tail_bound": tail,
            "series_converges": converges, "series_within_tail": series_ok}


def mean_color(g: PlanarGraph, Y, e: int) -> Fraction:
    """<2 j_e> = -2 Y_e (d P / d Y_e) / P, exact."""
    Y = _as_couplings(g, Y)
    p = p_gamma(g)
    pval = p.evaluate(Y)
    if pval == 0:
        raise SingularCoupling("loop polynomial vanishes at these couplings")
    return -2 * Y[e] * p.partial(e).evaluate(Y) / pval


def verify_mean_spin_bridge(g: PlanarGraph, Y, e: int) -> dict:
    """<j_e> = (Y^2 - Y g_e)/(1 - Y^2) with g_e the neighbor correlation."""
    Yv = _as_couplings(g, Y)
    lhs = mean_color(g, Yv, e) / 2
    ge = nn_correlation(g, Yv, e)
    y = Yv[e]
    rhs = (y * y - y * ge) / (1 - y * y)
    return {"ok": lhs == rhs, "mean_spin": lhs, "nn_correlation": ge}


def verify_first_derivative(g: PlanarGraph, Y, e: int) -> dict:
    """(1/(2 cosh^2 y)) d ln Z_spin / d Y_e = Y_e - d ln Z_ising / d y_e."""
    Yv = _as_couplings(g, Y)
    p = p_gamma(g)
    pval = p.evaluate(Yv)
    if pval == 0:
        raise SingularCoupling("loop polynomial vanishes at these couplings")
    dlnzspin = -2 * p.partial(e).evaluate(Yv) / pval
    lhs = (1 - Yv[e] ** 2) * dlnzspin / 2
    rhs = Yv[e] - nn_correlation(g, Yv, e)
    return {"ok": lhs == rhs, "lhs": lhs, "rhs": rhs}


# -- rational-function differentiation: values are N / P^d ----------------------


def _apply_color_operator(num: SparsePoly, d: int, p: SparsePoly,
                          e: int) -> tuple[SparsePoly, int]:
    """Apply Y_e d/dY_e to N/P^d, returning the new (N, d+1)."""
    ye = SparsePoly.variable(p.nvars, e)
    new = ye * num.partial(e) * p - d * (ye * p.partial(e)) * num
    return new, d + 1


def _subpath_color_moment(p: SparsePoly, Y: Sequence[Fraction],
                          edges: Sequence[int]) -> Fraction:
    """< prod_{e in edges} (2 j_e) > as a normalized derivative of 1/P^2."""
    num = SparsePoly.constant(p.nvars, 1)
    d = 2
    for e in edges:
        num, d = _apply_color_operator(num, d, p, e)
    pval = p.evaluate(Y)
    return num.evaluate(Y) * pval ** (2 - d)


def _path_vertices(g: PlanarGraph, path: Sequence[int]) -> list[int]:
    """Vertex sequence of an edge path; raises unless the path is simple."""
    if not path:
        raise PathNotSimple("empty path")
    ends = [set(g.edge_endpoints(e)) for e in path]
    if len(path) == 1:
        a, b = sorted(ends[0])
        return [a, b]
    first_shared = ends[0] & ends[1]
    if len(first_shared) != 1:
        raise PathNotSimple("consecutive edges must share exactly one vertex")
    verts = [(ends[0] - first_shared).pop()]
    cur = verts[0]
    for e, end in zip(path, ends):
        if cur not in end:
            raise PathNotSimple(f"edge {e} does not continue the path")
        cur = (end - {cur}).pop()
        verts.append(cur)
    if len(set(verts)) != len(verts):
        raise PathNotSimple("path revisits a vertex")
    return verts


def _partitions(items: list):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def _joint_cumulant(moment, items: list) -> Fraction:
    total = Fraction(0)
    for part in _partitions(items):
        b = len(part)
        w = (-1) ** (b - 1) * math.factorial(b - 1)
        prod = Fraction(1)
        for block in part:
            prod *= moment(block)
        total += w * prod
    return total


def connected_path_correlation(g: PlanarGraph, Y, path: Sequence[int]) -> dict:
    """Identity between connected Ising and color correlators along a path.

    Both sides are joint cumulants: of the per-edge products sigma_s sigma_t
    on the Ising side, of the colors 2 j_e on the other, with prefactor
    -2^(n-1)/prod sinh(2 y_e).  For paths of at most two edges the cumulant
    is the familiar consecutive-cut sum, e.g. <s0 s2> - <s0 s1><s1 s2>.
    Everything is exact rational arithmetic.
    """
    Yv = _as_couplings(g, Y)
    verts = _path_vertices(g, path)
    n = len(path)
    p = p_gamma(g)
    if p.evaluate(Yv) == 0:
        raise SingularCoupling("loop polynomial vanishes at these couplings")
    ends = {e: g.edge_endpoints(e) for e in path}

    def ising_moment(block):
        vs = []
        for e in block:
            vs += list(ends[e])
        return spin_correlation(g, Yv, vs)

    def color_moment(block):
        return _subpath_color_moment(p, Yv, block)

    lhs = _joint_cumulant(ising_moment, list(path))
    prefactor = Fraction(-1) * 2 ** (n - 1)
    for e in path:
        sinh2y = 2 * Yv[e] / (1 - Yv[e] ** 2)
        prefactor /= sinh2y
    rhs = prefactor * _joint_cumulant(color_moment, list(path))
    if n == 1:
        # a single derivative keeps the additive tanh term of the log identity;
        # it only cancels once two distinct couplings are differentiated
        rhs += Yv[path[0]]
    return {"ok": lhs == rhs, "ising_side": lhs, "color_side": rhs,
            "path_vertices": verts}


@lru_cache(maxsize=None)
def _stirling2(n: int, k: int) -> int:
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * _stirling2(n - 1, k) + _stirling2(n - 1, k - 1)


def moment_theorem(g: PlanarGraph, Y, e: int, nmax: int = 5) -> dict:
    """Single-edge color moments by three independent routes.

    Cumulants and raw derivative moments of ln(1/P^2) and 1/P^2 are exact
    rational functions; the distribution route sums the signed closed-form
    P(2j = n); the Stirling route expands powers in falling factorials.
    """
    Yv = _as_couplings(g, Y)
    p = p_gamma(g)
    pval = p.evaluate(Yv)
    if pval == 0:
        raise SingularCoupling("loop polynomial vanishes at these couplings")
    y = Yv[e]
    # cumulants kappa_n = d^n ln(1/P^2) / dY_e^n via quotient-rule pairs
    kappas = []
    num, d = -2 * p.partial(e), 1
    kappas.append(num.evaluate(Yv) * pval ** (-d))
    for _ in range(nmax - 1):
        num = num.partial(e) * p - d * p.partial(e) * num
        d += 1
        kappas.append(num.evaluate(Yv) * pval ** (-d))
    k1h = kappas[0] / 2
    kappa_ok = all(kn == 2 * math.factorial(n - 1) * k1h ** n
                   for n, kn in enumerate(kappas, start=1))
    # raw derivative moments mu_n = (d^n (1/P^2) / dY_e^n) * P^2
    mus = []
    num, d = SparsePoly.constant(p.nvars, 1), 2
    for _ in range(nmax):
        num = num.partial(e) * p - d * p.partial(e) * num
        d += 1
        mus.append(num.evaluate(Yv) * pval ** (2 - d))
    mu_ok = all(mn == math.factorial(n + 1) * k1h ** n
                for n, mn in enumerate(mus, start=1))
    mean_j = y * kappas[0] / 2  # <j_e>
    # Stirling route: <(2j)^n> = sum_k S(n,k) (k+1)! <j>^k
    stirling_moments = [
        sum(_stirling2(n, k) * math.factorial(k + 1) * mean_j ** k
            for k in range(1, n + 1))
        for n in range(1, nmax + 1)]
    # derivative route: <(2j)^n> = sum_k S(n,k) Y^k mu_k
    deriv_moments = [
        sum(_stirling2(n, k) * y ** k * mus[k - 1] for k in range(1, n + 1))
        for n in range(1, nmax + 1)]
    # distribution route: partial sums of sum_k k^n P(2j = k)
    z = mean_j / (1 + mean_j)
    if abs(z) >= 1:
        raise DivergentTail(f"|<j>/(1+<j>)| = {abs(z)} >= 1")
    prob = lambda k: (k + 1) / (1 + mean_j) ** 2 * z ** k
    dist_moments = []
    for n in range(1, nmax + 1):
        total, k = Fraction(0), 1
        while True:
            term = Fraction(k) ** n * prob(k)
            total += term
            k += 1
            if k > 20 and abs(float(term)) <= abs(float(total) or 1.0) * 1e-14:
                break
        dist_moments.append(total)
    dist_ok = all(abs(float(a) - float(b)) <= 1e-10 * max(1.0, abs(float(a)))
                  for a, b in zip(stirling_moments, dist_moments))
    # total signed probability telescopes to 1 exactly
    total_prob = (1 / (1 + mean_j) ** 2) * (1 / (1 - z) ** 2)
    # generating function 1/(1 - <j>(e^t - 1))^2, Taylor-matched to the moments
    egf = _egf_taylor(mean_j, nmax)
    egf_moments = [egf[n] * math.factorial(n) for n in range(1, nmax + 1)]
    egf_ok = egf_moments == stirling_moments
    return {"ok": kappa_ok and mu_ok and dist_ok and egf_ok and total_prob == 1
                  and stirling_moments == deriv_moments,
            "mean_spin": mean_j, "kappa": kappas, "mu": mus,
            "kappa_closed_form_ok": kappa_ok, "mu_closed_form_ok": mu_ok,
            "moments": stirling_moments, "moments_derivative": deriv_moments,
            "moments_distribution": dist_moments, "distribution_ok": dist_ok,
            "total_probability": total_prob, "egf_ok": egf_ok,
            "is_signed": mean_j < 0}


def _egf_taylor(mean_j: Fraction, nmax: int) -> list[Fraction]:
    """Taylor coefficients of 1/(1 - <j>(e^t - 1))^2 up to order nmax."""
    # u(t) = e^t - 1 truncated
    u = [Fraction(0)] + [Fraction(1, math.factorial(n)) for n in range(1, nmax + 1)]

    def mul(a, b):
        out = [Fraction(0)] * (nmax + 1)
        for i, ai in enumerate(a):
            for j, bj in enumerate(b):
                if i + j <= nmax:
                    out[i + j] += ai * bj
        return out

    ju = [mean_j * c for c in u]
    total = [Fraction(0)] * (nmax + 1)
    power = [Fraction(1)] + [Fraction(0)] * nmax
    for k in range(nmax + 1):
        for i in range(nmax + 1):
            total[i] += (k + 1) * power[i]
        power = mul(power, ju)
    return total
