"""Exact Ising and O(n) loop-model sums on trivalent planar graphs.

All partition functions are normalized: Zhat = Z / (2^#V prod_e cosh y_e),
so Zhat is a polynomial in the edge variables Y_e = tanh y_e and equals the
loop polynomial P_Gamma = sum over even subgraphs of prod Y_e.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .algebra import SparsePoly, pfaffian
from .errors import SizeLimit
from .graphs import PlanarGraph, count_components, enumerate_even_subgraphs
from .kasteleyn import effective_halves, is_kasteleyn

BRUTE_FORCE_VERTEX_LIMIT = 24


def _as_couplings(g: PlanarGraph, Y) -> list[Fraction]:
    if isinstance(Y, (int, Fraction, str)):
        return [Fraction(Y)] * g.num_edges
    vals = [Fraction(v) for v in Y]
    if len(vals) != g.num_edges:
        raise ValueError(f"need {g.num_edges} couplings, got {len(vals)}")
    return vals


def _config_sweep(g: PlanarGraph, Y: Sequence[Fraction], weights_of):
    """Gray-code sweep over spin configurations.

    Calls weights_of(sign_vector_bitmask, factor_product) is avoided; instead
    yields (bitmask, product of (1 + Y_e s s)) with incremental updates.
    """
    nv = g.num_vertices
    if nv > BRUTE_FORCE_VERTEX_LIMIT:
        raise SizeLimit(f"{nv} vertices exceeds brute-force bound")
    spins = [1] * nv
    factors = []
    for e in range(g.num_edges):
        a, b = g.edge_endpoints(e)
        factors.append(1 + Y[e] * spins[a] * spins[b])
    zero_count = sum(1 for f in factors if f == 0)
    nonzero_prod = Fraction(1)
    for f in factors:
        if f != 0:
            nonzero_prod *= f
    mask = 0
    yield mask, (Fraction(0) if zero_count else nonzero_prod)
    for step in range(1, 1 << nv):
        v = (step & -step).bit_length() - 1  # Gray code: flip lowest set bit position
        mask ^= 1 << v
        spins[v] = -spins[v]
        for h in g.halves_at(v):
            e = g.edge_of[h]
            a, b = g.edge_endpoints(e)
            old = factors[e]
            new = 1 + Y[e] * spins[a] * spins[b]
            factors[e] = new
            if old == 0:
                zero_count -= 1
            else:
                nonzero_prod /= old
            if new == 0:
                zero_count += 1
            else:
                nonzero_prod *= new
        yield mask, (Fraction(0) if zero_count else nonzero_prod)


def z_ising_bruteforce(g: PlanarGraph, Y) -> Fraction:
    """Zhat = sum_sigma prod_e (1 + Y_e s s) / 2^#V, exact."""
    Y = _as_couplings(g, Y)
    total = Fraction(0)
    for _, w in _config_sweep(g, Y, None):
        total += w
    return total / (1 << g.num_vertices)


def spin_correlation(g: PlanarGraph, Y, vertices: Sequence[int]) -> Fraction:
    """< prod_{v in vertices} sigma_v > under the normalized Ising weights."""
    Y = _as_couplings(g, Y)
    vmask = 0
    for v in vertices:
        vmask ^= 1 << v  # sigma_v^2 = 1, repeated vertices cancel
    num = Fraction(0)
    den = Fraction(0)
    for mask, w in _config_sweep(g, Y, None):
        sign = -1 if (mask & vmask).bit_count() % 2 else 1
        num += sign * w
        den += w
    return num / den


def nn_correlation(g: PlanarGraph, Y, e: int) -> Fraction:
    """g_e = <sigma_{s(e)} sigma_{t(e)}>."""
    a, b = g.edge_endpoints(e)
    return spin_correlation(g, Y, [a, b])


def p_gamma(g: PlanarGraph) -> SparsePoly:
    """Loop polynomial: sum over even subgraphs of prod_{e} Y_e."""
    terms: dict[tuple[int, ...], Fraction] = {}
    for sub in enumerate_even_subgraphs(g):
        exp = tuple(1 if e in sub else 0 for e in range(g.num_edges))
        terms[exp] = terms.get(exp, Fraction(0)) + 1
    return SparsePoly(g.num_edges, terms)


def z_on_loop_model(g: PlanarGraph, n, Y) -> Fraction:
    """Loop-model sum: each configuration weighs n^(#loops) Y^(#edges)."""
    n = Fraction(n)
    Y = _as_couplings(g, Y)
    total = Fraction(0)
    for sub in enumerate_even_subgraphs(g):
        w = n ** count_components(g, sub)
        for e in sub:
            w *= Y[e]
        total += w
    return total


# -- triangle expansion and the dimer Pfaffian ----------------------------------


def fisher_graph(g: PlanarGraph) -> tuple[PlanarGraph, dict]:
    """Replace each vertex by a counter-clockwise triangle.

    Vertices of the new graph are the half-edges of g.  Edge ids: 0..#E-1
    are edge-type (weight 1), then 3 per vertex are angle-type in rotation
    order.  Returns the graph and a description of the angle edges.
    """
    n_old_half = len(g.half_edges)
    corner_half: dict[tuple[str, int, int], int] = {}
    counter = [0]

    def new_half(kind: str, a: int, b: int) -> int:
        corner_half[(kind, a, b)] = counter[0]
        counter[0] += 1
        return corner_half[(kind, a, b)]

    edge_halves = []
    angle_edges = []
    # edge-type: one per old edge, endpoints are the two old half-edges
    for e, (hs, ht) in enumerate(g.edges):
        edge_halves.append((new_half("edge", e, hs), new_half("edge", e, ht)))
    # angle-type: directed corner next_ccw(h) -> corner h; with faces traced
    # clockwise this is the triangle direction that preserves Kasteleyn parity
    for v in range(g.num_vertices):
        for h in g.halves_at(v):
            h2 = g.next_ccw(h)
            at_h = new_half("angle", h, 0)
            at_next = new_half("angle", h, 1)
            edge_halves.append((at_next, at_h))
            angle_edges.append((h2, h, g.edge_of[h], g.edge_of[h2]))
    # rotation at corner h (ccw): outgoing edge-type, angle to next, angle from previous
    rotations = []
    for h in range(n_old_half):
        e = g.edge_of[h]
        hs, ht = g.edges[e]
        prev = g.next_ccw(g.next_ccw(h))  # trivalent: ccw-predecessor
        rotations.append([
            corner_half[("edge", e, h)],
            corner_half[("angle", h, 0)],
            corner_half[("angle", prev, 1)],
        ])
    fg = PlanarGraph.from_rotations(rotations, edge_halves)
    info = {"n_edge_type": g.num_edges, "angle_edges": angle_edges}
    return fg, info


def dimer_p_gamma(g: PlanarGraph, o: Sequence[bool]) -> SparsePoly:
    """Loop polynomial via the Pfaffian of the triangle-expansion dimer matrix.

    Angle weights sqrt(Y_i Y_j) are tracked with doubled exponents so the
    Pfaffian lives in integer powers; surviving monomials must be even.
    """
    if 2 * g.num_edges > 32:
        raise SizeLimit(f"triangle expansion with {2 * g.num_edges} sites")
    fg, info = fisher_graph(g)
    # the expanded graph inherits the Kasteleyn property with edge-type
    # edges directed by o and angle edges directed ccw around each triangle
    fo = [False] * fg.num_edges
    for e in range(g.num_edges):
        fo[e] = bool(o[e])
    ok, _ = is_kasteleyn(fg, fo)
    assert ok, "triangle expansion lost the Kasteleyn property"
    nvars = g.num_edges
    n = len(g.half_edges)
    zero = SparsePoly(nvars)
    m = [[zero for _ in range(n)] for _ in range(n)]

    def add(i: int, j: int, w: SparsePoly):
        m[i][j] = m[i][j] + w
        m[j][i] = m[j][i] - w

    for e in range(g.num_edges):
        hs, ht = effective_halves(g, o, e)
        add(hs, ht, SparsePoly.constant(nvars, 1))
    for h, h2, e1, e2 in info["angle_edges"]:
        exp = [0] * nvars
        exp[e1] += 1
        exp[e2] += 1  # doubled exponents: each full Y power counts as 2
        add(h, h2, SparsePoly.monomial(nvars, exp))
    pf = pfaffian(m)
    poly = pf.halve_exponents()
    c0 = poly.constant_term()
    assert c0 in (1, -1), f"constant term {c0} not a unit"
    if c0 == -1:
        poly = -poly
    return poly
