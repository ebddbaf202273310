"""Spin network evaluations, their normalizations, and the generating series.

Colorings assign each edge a color c_e = 2 j_e.  The exact generating
series (inverse square of the loop polynomial) is the authoritative value
in the integral normalization; the tensor contraction is float-valued with
a tracked error budget.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import SparsePoly, series_inverse_square, sqrt_fraction
from .errors import DomainError, InadmissibleColoring, InvalidEdge
from .graphs import PlanarGraph
from .ising import p_gamma
from .kasteleyn import is_kasteleyn, oriented_endpoints
from .wigner import _fact, theta_delta, three_j, triangle_ok

PER_SYMBOL_ERROR = 1e-12


def vertex_spins(g: PlanarGraph, colors: Sequence[int], v: int) -> tuple[int, int, int]:
    return tuple(colors[g.edge_of[h]] for h in g.halves_at(v))


def is_admissible(g: PlanarGraph, colors: Sequence[int]) -> bool:
    return all(triangle_ok(*vertex_spins(g, colors, v)) for v in range(g.num_vertices))


def admissible_colorings(g: PlanarGraph, max_color: int):
    """All admissible colorings with every color <= max_color."""
    for colors in itertools.product(range(max_color + 1), repeat=g.num_edges):
        if is_admissible(g, colors):
            yield colors


@dataclass
class EvaluationResult:
    value: float
    error_bound: float
    norm: str
    colors: tuple[int, ...]
    exact: Fraction | None = None
    meta: dict = field(default_factory=dict)


_three_j_float_cache: dict[tuple, float] = {}


def _three_j_float(args: tuple) -> float:
    if args not in _three_j_float_cache:
        _three_j_float_cache[args] = float(three_j(*args))
    return _three_j_float_cache[args]


def evaluate_tensor(g: PlanarGraph, o: Sequence[bool], colors: Sequence[int]) -> EvaluationResult:
    """Contraction of one 3j per vertex over per-edge magnetic numbers.

    Vertex symbols take their three edges in rotation order; the magnetic
    number of an edge enters with sign +1 at its source and -1 at its target.
    """
    colors = tuple(colors)
    if not is_admissible(g, colors):
        raise InadmissibleColoring(f"colors {colors} violate vertex admissibility")
    eps = [[0] * g.num_edges for _ in range(g.num_vertices)]
    for e in range(g.num_edges):
        src, dst = oriented_endpoints(g, o, e)
        eps[src][e] = 1
        eps[dst][e] = -1
        if src == dst:
            raise InadmissibleColoring("self-loop has no orientation sign")
    total = 0.0
    terms = 0
    ranges = [range(-c, c + 1, 2) for c in colors]
    for tms in itertools.product(*ranges):
        phase = sum((c - tm) // 2 for c, tm in zip(colors, tms)) % 2
        prod = -1.0 if phase else 1.0
        for v in range(g.num_vertices):
            edges = [g.edge_of[h] for h in g.halves_at(v)]
            args = (colors[edges[0]], colors[edges[1]], colors[edges[2]],
                    eps[v][edges[0]] * tms[edges[0]],
                    eps[v][edges[1]] * tms[edges[1]],
                    eps[v][edges[2]] * tms[edges[2]])
            prod *= _three_j_float(args)
            if prod == 0.0:
                break
        total += prod
        terms += 1
    return EvaluationResult(total, PER_SYMBOL_ERROR * max(terms, 1), "tensor", colors)


def norm_factor_squared(g: PlanarGraph, colors: Sequence[int]) -> Fraction:
    """prod_v (J_v+1)! / prod_(v,e) (J_v - 2 j_e)! with doubled colors."""
    out = Fraction(1)
    for v in range(g.num_vertices):
        cs = vertex_spins(g, colors, v)
        jv = sum(cs) // 2
        out *= _fact(jv + 1)
        for c in cs:
            out /= _fact(jv - c)
    return out


def to_integral(res: EvaluationResult, g: PlanarGraph) -> EvaluationResult:
    """Rescale a tensor-norm evaluation by the square root of the vertex factorials."""
    if res.norm != "tensor":
        raise DomainError(f"expected tensor norm, got {res.norm}")
    factor = float(sqrt_fraction(norm_factor_squared(g, res.colors)))
    return EvaluationResult(res.value * factor, res.error_bound * factor,
                            "integral", res.colors)


def to_unitary(res: EvaluationResult) -> EvaluationResult:
    """Flip by (-1)^(sum_e j_e); defined only when the total color is even."""
    if res.norm != "tensor":
        raise DomainError(f"expected tensor norm, got {res.norm}")
    total = sum(res.colors)
    if total % 2:
        raise DomainError("total color is odd; the unitary sign is ill-defined")
    sign = -1.0 if (total // 2) % 2 else 1.0
    return EvaluationResult(sign * res.value, res.error_bound, "unitary", res.colors)


def to_skein(res: EvaluationResult, g: PlanarGraph) -> EvaluationResult:
    """Integral times prod_e (2 j_e)! over the product of admissibility factorials."""
    if res.norm != "integral":
        raise DomainError(f"expected integral norm, got {res.norm}")
    factor = Fraction(1)
    for c in res.colors:
        factor *= _fact(c)
    for v in range(g.num_vertices):
        cs = vertex_spins(g, res.colors, v)
        jv = sum(cs) // 2
        for c in cs:
            factor /= _fact((jv - c))
    f = float(factor)
    return EvaluationResult(res.value * f, res.error_bound * abs(f), "skein", res.colors)


def theta_integral(c1: int, c2: int, c3: int) -> Fraction:
    """Integral-normalized value of the two-vertex bubble graph."""
    j = (c1 + c2 + c3) // 2
    sign = -1 if j % 2 else 1
    return sign * theta_delta(c1, c2, c3)


def z_spin_series(g: PlanarGraph, cutoff: int):
    """Generating series of integral-normalized evaluations up to total color cutoff.

    Equals the inverse square of the loop polynomial; the coefficient of
    prod_e Y_e^(c_e) is the integral evaluation at coloring (c_e).
    """
    return series_inverse_square(p_gamma(g), cutoff)


def verify_comparison_theorem(g: PlanarGraph, o: Sequence[bool], max_color: int,
                              tol: float = 1e-9) -> dict:
    """Check tensor contractions against exact series coefficients.

    Runs every admissible coloring with colors <= max_color; the orientation
    must be Kasteleyn for the signs to agree.
    """
    series = z_spin_series(g, max_color * g.num_edges)
    failures = []
    checked = 0
    worst = 0.0
    for colors in admissible_colorings(g, max_color):
        exact = series.coefficient(colors)
        approx = to_integral(evaluate_tensor(g, o, colors), g)
        diff = abs(float(exact) - approx.value)
        worst = max(worst, diff)
        checked += 1
        if diff > tol + approx.error_bound:
            failures.append({"colors": colors, "exact": exact, "tensor": approx.value})
    return {"ok": not failures, "checked": checked,
            "max_abs_diff": worst, "failures": failures}


def curve_colorings(g: PlanarGraph):
    """Colorings that put color 1 on a single simple cycle (one closed curve)."""
    from .graphs import simple_cycles

    for cyc in simple_cycles(g):
        yield tuple(1 if e in cyc else 0 for e in range(g.num_edges))


def whitehead_move(g: PlanarGraph, e: int,
                   o: Sequence[bool] | None = None):
    """Slide edge e across its quadrilateral neighborhood.

    With the four outer legs (a, b, c, d) in rotation order around the
    contracted edge, the move re-pairs them as (b, c) and (d, a).  Returns
    the new graph, an orientation in the Kasteleyn class (edges flipped as
    needed, reported in the info dict), and the leg bookkeeping.
    """
    hu, hv = g.edges[e]
    u, v = g.vertex_of(hu), g.vertex_of(hv)
    if u == v:
        raise InvalidEdge("cannot slide a self-loop")
    other = {frozenset(g.edge_endpoints(e2)) for e2 in range(g.num_edges) if e2 != e}
    if frozenset((u, v)) in other:
        raise InvalidEdge("parallel edge: the slide would create a self-loop")
    a = g.next_ccw(hu)
    b = g.next_ccw(a)
    c = g.next_ccw(hv)
    d = g.next_ccw(c)
    rotations = [list(g.halves_at(w)) for w in range(g.num_vertices)]
    rotations[u] = [hu, b, c]
    rotations[v] = [hv, d, a]
    new_g = PlanarGraph.from_rotations(rotations, list(g.edges))
    if o is None:
        o = tuple([False] * g.num_edges)
    touched = sorted({e, g.edge_of[a], g.edge_of[b], g.edge_of[c], g.edge_of[d]})
    new_o = None
    flips = None
    for k in range(len(touched) + 1):
        for combo in itertools.combinations(touched, k):
            cand = tuple(not o[i] if i in combo else bool(o[i])
                         for i in range(g.num_edges))
            if is_kasteleyn(new_g, cand)[0]:
                new_o, flips = cand, list(combo)
                break
        if new_o is not None:
            break
    assert new_o is not None, "no nearby orientation restores the face parities"
    info = {"legs": (a, b, c, d), "flipped_edges": flips}
    return new_g, new_o, info
