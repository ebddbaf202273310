"""Stationary triangle geometry, isoradial couplings, and the hexagonal
closed-form correlation with its elliptic integrals.

All functions here are real-valued; the elliptic integrals use the AGM for
the complete kinds and Carlson symmetric forms for the incomplete kinds.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

from .errors import DegenerateTriangle, DomainError

NEAR_CRITICAL_K = 1e-8
NEAR_CRITICAL_Y = 1e-5


@dataclass
class TriangleGeometry:
    """Triangle with sides (l, l1, l2); angle queries are opposite to l."""

    l: float
    l1: float
    l2: float

    def __post_init__(self):
        s = sorted((self.l, self.l1, self.l2))
        if s[0] <= 0 or s[0] + s[1] <= s[2]:
            raise DegenerateTriangle(f"sides {self.l}, {self.l1}, {self.l2}")

    @property
    def half_perimeter(self) -> float:
        return (self.l + self.l1 + self.l2) / 2

    @property
    def area(self) -> float:
        L = self.half_perimeter
        return math.sqrt(L * (L - self.l) * (L - self.l1) * (L - self.l2))

    @property
    def inradius(self) -> float:
        L = self.half_perimeter
        return math.sqrt((L - self.l) * (L - self.l1) * (L - self.l2) / L)

    @property
    def cos_gamma(self) -> float:
        L = self.half_perimeter
        return 2 * L * (L - self.l) / (self.l1 * self.l2) - 1

    @property
    def sin_gamma(self) -> float:
        return 2 * self.area / (self.l1 * self.l2)

    @property
    def gamma(self) -> float:
        return math.atan2(self.sin_gamma, self.cos_gamma)

    def tan_half_gamma(self) -> float:
        L = self.half_perimeter
        return math.sqrt((L - self.l1) * (L - self.l2) / (L * (L - self.l)))


def pair_coupling(tri_s: TriangleGeometry, tri_t: TriangleGeometry) -> dict:
    """Edge coupling from the two triangles flanking an edge.

    Tangent form: Y^2 = tan(gamma_s/2) tan(gamma_t/2).  Ratio form:
    Y^4 = prod over both triangles of (L-l1)(L-l2)/(L(L-l)).  Returns
    both and their absolute difference.
    """
    y2_tan = math.tan(tri_s.gamma / 2) * math.tan(tri_t.gamma / 2)
    y4_ratio = 1.0
    for tri in (tri_s, tri_t):
        L = tri.half_perimeter
        y4_ratio *= (L - tri.l1) * (L - tri.l2) / (L * (L - tri.l))
    y_tan = math.sqrt(y2_tan)
    y_ratio = y4_ratio ** 0.25
    return {"Y": y_tan, "Y_ratio_form": y_ratio,
            "difference": abs(y_tan - y_ratio)}


def stationary_couplings(g, lengths) -> dict:
    """Per-edge stationary couplings from dual triangle side lengths.

    lengths maps each edge to its side length 2 j_e; each vertex carries
    the triangle of its three incident edge lengths, and the coupling of an
    edge combines the opposite angles in its two endpoint triangles.
    """
    tris = []
    for v in range(g.num_vertices):
        es = [g.edge_of[h] for h in g.halves_at(v)]
        tris.append({e: TriangleGeometry(lengths[e], lengths[es[(i + 1) % 3]],
                                         lengths[es[(i + 2) % 3]])
                     for i, e in enumerate(es)})
    out = []
    worst = 0.0
    for e in range(g.num_edges):
        s, t = g.edge_endpoints(e)
        res = pair_coupling(tris[s][e], tris[t][e])
        worst = max(worst, res["difference"])
        out.append(res["Y"])
    return {"Y": out, "max_form_difference": worst}


def isoradial_check(theta: float) -> dict:
    """Critical coupling of an edge with half-rhombus angle theta.

    Computes y_c from exp(2 y_c) = (1 + sin theta)/cos theta and checks
    tanh y_c = tan(theta/2).
    """
    if not 0 < theta < math.pi / 2:
        raise DomainError(f"half-rhombus angle {theta} outside (0, pi/2)")
    e2y = (1 + math.sin(theta)) / math.cos(theta)
    yc = 0.5 * math.log(e2y)
    yc_tanh = math.tanh(yc)
    target = math.tan(theta / 2)
    return {"Y_c": yc_tanh, "y_c": yc, "difference": abs(yc_tanh - target),
            "ok": abs(yc_tanh - target) <= 1e-12}


# -- elliptic integrals ---------------------------------------------------------


def agm_K(k: float) -> float:
    """Complete elliptic integral of the first kind, modulus k."""
    if not 0 <= k < 1:
        raise DomainError(f"K(k) requires 0 <= k < 1, got {k}")
    a, b = 1.0, math.sqrt(1 - k * k)
    for _ in range(60):
        if a - b <= 1e-16 * a:
            break
        a, b = (a + b) / 2, math.sqrt(a * b)
    return math.pi / (2 * a)


def agm_E(k: float) -> float:
    """Complete elliptic integral of the second kind, modulus k."""
    if not 0 <= k <= 1:
        raise DomainError(f"E(k) requires 0 <= k <= 1, got {k}")
    if k == 1:
        return 1.0
    a, b = 1.0, math.sqrt(1 - k * k)
    c = k
    total = c * c / 2
    power = 1.0
    for _ in range(60):
        if a - b <= 1e-16 * a:
            break
        a, b, c = (a + b) / 2, math.sqrt(a * b), (a - b) / 2
        total += power * c * c
        power *= 2
    return math.pi / (2 * a) * (1 - total)


def _carlson_rf(x: float, y: float, z: float) -> float:
    """Carlson symmetric integral R_F via the duplication theorem."""
    for _ in range(200):
        lam = math.sqrt(x * y) + math.sqrt(y * z) + math.sqrt(z * x)
        x, y, z = (x + lam) / 4, (y + lam) / 4, (z + lam) / 4
        mu = (x + y + z) / 3
        if max(abs(x - mu), abs(y - mu), abs(z - mu)) < 1e-10 * mu:
            break
    mu = (x + y + z) / 3
    dx, dy, dz = 1 - x / mu, 1 - y / mu, 1 - z / mu
    e2 = dx * dy + dy * dz + dz * dx
    e3 = dx * dy * dz
    return (1 - e2 / 10 + e3 / 14 + e2 * e2 / 24 - 3 * e2 * e3 / 44) / math.sqrt(mu)


def _carlson_rd(x: float, y: float, z: float) -> float:
    """Carlson symmetric integral R_D via the duplication theorem."""
    total = 0.0
    factor = 1.0
    for _ in range(200):
        lam = math.sqrt(x * y) + math.sqrt(y * z) + math.sqrt(z * x)
        total += factor / (math.sqrt(z) * (z + lam))
        factor /= 4
        x, y, z = (x + lam) / 4, (y + lam) / 4, (z + lam) / 4
        mu = (x + y + 3 * z) / 5
        if max(abs(x - mu), abs(y - mu), abs(z - mu)) < 1e-11 * mu:
            break
    mu = (x + y + 3 * z) / 5
    dx, dy, dz = 1 - x / mu, 1 - y / mu, 1 - z / mu
    ea = dx * dy
    eb = dz * dz
    ec = ea - eb
    ed = ea - 6 * eb
    ee = ed + 2 * ec
    s = (ed * (-3.0 / 14 + 9.0 / 88 * ed - 4.5 / 26 * dz * ee)
         + dz * (ee / 6 + dz * (-9.0 / 22 * ec + 3.0 / 26 * dz * ea)))
    return 3 * total + factor * (1 + s) / (mu * math.sqrt(mu))


def carlson_F(phi: float, m: float) -> float:
    """Incomplete elliptic integral F(phi | m) with parameter m = k^2."""
    s = math.sin(phi)
    c = math.cos(phi)
    if m * s * s >= 1:
        raise DomainError(f"F undefined at phi={phi}, m={m}")
    return s * _carlson_rf(c * c, 1 - m * s * s, 1.0)


def carlson_E(phi: float, m: float) -> float:
    """Incomplete elliptic integral E(phi | m) with parameter m = k^2."""
    s = math.sin(phi)
    c = math.cos(phi)
    if m * s * s >= 1:
        raise DomainError(f"E undefined at phi={phi}, m={m}")
    return (s * _carlson_rf(c * c, 1 - m * s * s, 1.0)
            - m * s ** 3 * _carlson_rd(c * c, 1 - m * s * s, 1.0) / 3)


# -- hexagonal lattice correlation ----------------------------------------------


def hex_L(y: float) -> float:
    return 0.25 * math.log(math.cosh(3 * y) / math.cosh(y))


def hex_k(y: float) -> float:
    if y <= 0:
        raise DomainError(f"coupling y must be positive, got {y}")
    return 1 / (math.sinh(2 * hex_L(y)) * math.sinh(2 * y))


def critical_y(lo: float = 0.1, hi: float = 2.0, tol: float = 1e-14) -> float:
    """Bisection for k(y) = 1; k decreases through 1 at the transition."""
    flo, fhi = hex_k(lo) - 1, hex_k(hi) - 1
    assert flo > 0 > fhi, "bracket does not straddle the critical point"
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if hex_k(mid) - 1 > 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def hex_g(y: float) -> float:
    """Nearest-neighbor correlation on the isotropic hexagonal lattice.

    g(y) = coth(2L) (a(k) A(y) - b(k) B(y)) with the incomplete integrals
    taken at parameter 1 - k^2; within |k - 1| < 1e-8 the logarithmic
    asymptotics of a and b are substituted.
    """
    k = hex_k(y)
    L = hex_L(y)
    near = abs(k - 1) < NEAR_CRITICAL_K
    if near:
        # a(k), b(k) at k ~ 1: E(1) = 1 and (1-k) K(k1) ~ 0 with log speed
        one_m_k2 = 1 - k * k
        a = (1 + k) / math.pi
        b = one_m_k2 / math.pi * math.log(16 / abs(one_m_k2)) if one_m_k2 else 0.0
    else:
        k1 = 2 * math.sqrt(k) / (1 + k)
        if k1 < 1:
            K1, E1 = agm_K(k1), agm_E(k1)
        else:
            K1, E1 = agm_K(1 / k1), agm_E(1 / k1)  # guard fp overshoot of k1
        a = ((1 + k) * E1 + (1 - k) * K1) / math.pi
        b = 2 * (1 - k) * K1 / math.pi
    m = 1 - k * k
    phi = math.atan(math.sinh(2 * L))
    A = carlson_F(phi, m)
    B = (carlson_F(phi, m) - carlson_E(phi, m)) / m
    return (a * A - b * B) / math.tanh(2 * L)


def hex_mean_j(y: float) -> float:
    """<j + 1/2> = (e^{2y}(1-g) + e^{-2y}(1+g))/4 on the hexagonal lattice."""
    g = hex_g(y)
    return 0.25 * (math.exp(2 * y) * (1 - g) + math.exp(-2 * y) * (1 + g))


def is_near_critical(y: float, y_c: float | None = None) -> bool:
    if y_c is None:
        y_c = critical_y()
    return abs(hex_k(y) - 1) < NEAR_CRITICAL_K or abs(y - y_c) <= NEAR_CRITICAL_Y


def mean_color_derivative(y: float, h: float = 1e-6) -> float:
    """Centered difference of <2j> = 2(<j+1/2> - 1/2) in the coupling."""
    return (2 * hex_mean_j(y + h) - 2 * hex_mean_j(y - h)) / (2 * h)


def derivative_log_correlation(ts=None, side: int = 1) -> float:
    """Pearson correlation of d<2j>/dy at y_c + side*t against ln t."""
    y_c = critical_y()
    if ts is None:
        ts = [10 ** (-4 + 2 * i / 40) for i in range(41)]
    xs = [math.log(t) for t in ts]
    ys = [mean_color_derivative(y_c + side * t, h=min(t / 10, 1e-6)) for t in ts]
    n = len(xs)
    mx, my = sum(xs) / n, sum(ys) / n
    sxy = sum((a - mx) * (b - my) for a, b in zip(xs, ys))
    sxx = sum((a - mx) ** 2 for a in xs)
    syy = sum((b - my) ** 2 for b in ys)
    return sxy / math.sqrt(sxx * syy)


def emit_curve(start: float, stop: float, step: float, path: str) -> int:
    """Write the correlation curve as CSV rows y,g,mean_j_plus_half,dj_dbeta.

    Rows in the near-critical band carry empty derivative cells and a
    near_critical marker column value of 1.  Returns the row count.
    """
    y_c = critical_y()
    rows = 0
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["y", "g", "mean_j_plus_half", "dj_dbeta", "near_critical"])
        n = int(round((stop - start) / step))
        for i in range(n + 1):
            y = start + i * step
            near = is_near_critical(y, y_c)
            g = hex_g(y)
            mj = hex_mean_j(y)
            dj = "" if near else f"{mean_color_derivative(y):.12g}"
            w.writerow([f"{y:.6f}", f"{g:.12g}", f"{mj:.12g}", dj, int(near)])
            rows += 1
    return rows
