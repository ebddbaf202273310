"""Kasteleyn orientations: construction, verification, flip equivalence.

An orientation is a tuple of per-edge flags, True meaning the edge is
reversed relative to the stored (src_half, dst_half) order.  A face orbit
walks with the face on its right, so an orientation is Kasteleyn exactly
when every face has an odd number of orbit half-edges that are effective
source halves (the clockwise boundary edges of that face).
"""

from __future__ import annotations

from typing import Sequence

from .errors import OddVertexCount
from .graphs import PlanarGraph, cycle_sides, cycle_statistics, simple_cycles

Orientation = tuple[bool, ...]


def effective_halves(g: PlanarGraph, o: Sequence[bool], e: int) -> tuple[int, int]:
    hs, ht = g.edges[e]
    return (ht, hs) if o[e] else (hs, ht)


def oriented_endpoints(g: PlanarGraph, o: Sequence[bool], e: int) -> tuple[int, int]:
    hs, ht = effective_halves(g, o, e)
    return g.vertex_of(hs), g.vertex_of(ht)


def face_clockwise_counts(g: PlanarGraph, o: Sequence[bool]) -> list[int]:
    """Per face, the number of boundary half-edges that are source halves."""
    counts = []
    for orbit in g.faces:
        n = 0
        for h in orbit:
            src, _ = effective_halves(g, o, g.edge_of[h])
            if h == src:
                n += 1
        counts.append(n)
    return counts


def is_kasteleyn(g: PlanarGraph, o: Sequence[bool]) -> tuple[bool, list[int]]:
    counts = face_clockwise_counts(g, o)
    return all(c % 2 == 1 for c in counts), counts


def make_kasteleyn(g: PlanarGraph) -> Orientation:
    """Build a Kasteleyn orientation via a spanning tree and its dual tree."""
    if g.num_vertices % 2:
        raise OddVertexCount(f"{g.num_vertices} vertices")
    # primal spanning tree (BFS from vertex 0, smallest edge id first)
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in range(g.num_vertices)}
    for e in range(g.num_edges):
        a, b = g.edge_endpoints(e)
        adj[a].append((e, b))
        adj[b].append((e, a))
    for v in adj:
        adj[v].sort()
    tree: set[int] = set()
    seen = {0}
    queue = [0]
    while queue:
        v = queue.pop(0)
        for e, w in adj[v]:
            if w not in seen:
                seen.add(w)
                tree.add(e)
                queue.append(w)
    cotree = [e for e in range(g.num_edges) if e not in tree]
    # the co-tree edges form a spanning tree of the dual graph
    dual_adj: dict[int, list[tuple[int, int]]] = {f: [] for f in range(g.num_faces)}
    for e in cotree:
        hs, ht = g.edges[e]
        f1, f2 = g.face_of[hs], g.face_of[ht]
        dual_adj[f1].append((f2, e))
        dual_adj[f2].append((f1, e))
    for f in dual_adj:
        dual_adj[f].sort()
    parent_edge: dict[int, int] = {}
    bfs_order = [0]
    reached = {0}
    i = 0
    while i < len(bfs_order):
        f = bfs_order[i]
        i += 1
        for f2, e in dual_adj[f]:
            if f2 not in reached:
                reached.add(f2)
                parent_edge[f2] = e
                bfs_order.append(f2)
    assert len(bfs_order) == g.num_faces
    # fix each face's free co-tree edge, leaves toward the root
    o = [False] * g.num_edges
    counts = face_clockwise_counts(g, o)
    for f in reversed(bfs_order[1:]):
        if counts[f] % 2 == 0:
            _flip_edge(g, o, counts, parent_edge[f])
    ok, _ = is_kasteleyn(g, o)
    assert ok, "root face parity failed: vertex count parity violated"
    return tuple(o)


def _flip_edge(g: PlanarGraph, o: list[bool], counts: list[int], e: int) -> None:
    hs, ht = g.edges[e]
    old_src = ht if o[e] else hs
    new_src = hs if o[e] else ht
    counts[g.face_of[old_src]] -= 1
    counts[g.face_of[new_src]] += 1
    o[e] = not o[e]


def vertex_flip(g: PlanarGraph, o: Sequence[bool], v: int) -> Orientation:
    """Reverse every edge incidence at v (defines the Kasteleyn class)."""
    out = list(o)
    for h in g.halves_at(v):
        e = g.edge_of[h]
        out[e] = not out[e]
    return tuple(out)


def orientation_class(g: PlanarGraph, o: Sequence[bool]) -> set[Orientation]:
    """Orbit of o under all vertex flips (graphs up to ~12 vertices)."""
    start = tuple(o)
    seen = {start}
    queue = [start]
    while queue:
        cur = queue.pop()
        for v in range(g.num_vertices):
            nxt = vertex_flip(g, cur, v)
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen


def all_kasteleyn_orientations(g: PlanarGraph) -> set[Orientation]:
    """Brute-force scan over all 2^#E orientations (small graphs only)."""
    out = set()
    for bits in range(1 << g.num_edges):
        o = tuple(bool(bits >> e & 1) for e in range(g.num_edges))
        if is_kasteleyn(g, o)[0]:
            out.add(o)
    return out


def check_cycle_lemma(g: PlanarGraph, o: Sequence[bool]) -> dict:
    """Verify both cycle sign identities on every simple cycle.

    For each cycle and each of its two bounding discs:
    (-1)^a = (-1)^V_int and (-1)^E_cl = (-1)^(V_int + 1).
    """
    violations = []
    checked = 0
    for cyc in simple_cycles(g):
        # check both bounding discs of the cycle
        interior, _ = cycle_sides(g, cyc, 0)
        for outer in (0, min(interior)):
            a_c, e_cl, v_int = cycle_statistics(g, cyc, outer, orientation=o)
            checked += 1
            ok_a = (a_c - v_int) % 2 == 0
            ok_e = (e_cl - v_int - 1) % 2 == 0
            if not (ok_a and ok_e):
                violations.append({
                    "cycle": sorted(cyc),
                    "outer_face": outer,
                    "large_angles": a_c,
                    "clockwise_edges": e_cl,
                    "interior_vertices": v_int,
                    "angle_identity": ok_a,
                    "edge_identity": ok_e,
                })
    return {"ok": not violations, "cycles_checked": checked, "violations": violations}
