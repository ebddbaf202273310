"""Planar embedded trivalent multigraphs.

A graph is stored as a half-edge structure with a rotation system:
`twin` pairs the two halves of every edge and `next_ccw` walks the
half-edges around their vertex counter-clockwise.  Faces are the orbits
of h -> next_ccw(twin(h)); with counter-clockwise rotations every face
orbit keeps its face on the right of the walking direction (so bounded
faces of a plane drawing are traced clockwise).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import NotACycle, ParseError, SizeLimit, TopologyError, UnsupportedGenerator

EVEN_SUBGRAPH_EDGE_LIMIT = 40


@dataclass(frozen=True)
class HalfEdge:
    twin: int
    vertex: int
    next_ccw: int


@dataclass(frozen=True)
class Angle:
    """Corner at `vertex` from half-edge s_half to its ccw successor t_half."""

    vertex: int
    s_half: int
    t_half: int


class PlanarGraph:
    """Immutable trivalent multigraph embedded in the sphere."""

    def __init__(self, half_edges: Sequence[HalfEdge], edges: Sequence[tuple[int, int]],
                 vertex_anchor: Sequence[int]):
        self.half_edges = tuple(half_edges)
        self.edges = tuple(tuple(e) for e in edges)
        self.vertex_anchor = tuple(vertex_anchor)
        self._validate()
        self._build_derived()

    # -- construction helpers ------------------------------------------------

    @classmethod
    def from_rotations(cls, rotations: Sequence[Sequence[int]],
                       edge_halves: Sequence[tuple[int, int]]) -> "PlanarGraph":
        """Build from per-vertex ccw half-edge lists and per-edge half pairs."""
        n_half = sum(len(r) for r in rotations)
        twin = [-1] * n_half
        vertex = [-1] * n_half
        nxt = [-1] * n_half
        for v, rot in enumerate(rotations):
            for i, h in enumerate(rot):
                if not (0 <= h < n_half):
                    raise TopologyError(f"half-edge id {h} out of range")
                if vertex[h] != -1:
                    raise TopologyError(f"half-edge {h} listed twice")
                vertex[h] = v
                nxt[h] = rot[(i + 1) % len(rot)]
        for hs, ht in edge_halves:
            if twin[hs] != -1 or twin[ht] != -1 or hs == ht:
                raise TopologyError(f"bad twin pairing ({hs}, {ht})")
            twin[hs] = ht
            twin[ht] = hs
        if any(t == -1 for t in twin):
            raise TopologyError("unpaired half-edge")
        halves = [HalfEdge(twin[h], vertex[h], nxt[h]) for h in range(n_half)]
        anchors = [rot[0] for rot in rotations]
        return cls(halves, list(edge_halves), anchors)

    # -- invariants ----------------------------------------------------------

    def _validate(self) -> None:
        n = len(self.half_edges)
        for h, he in enumerate(self.half_edges):
            if he.twin == h:
                raise TopologyError(f"half-edge {h} is its own twin")
            if self.half_edges[he.twin].twin != h:
                raise TopologyError(f"twin of half-edge {h} is not an involution")
        for v, anchor in enumerate(self.vertex_anchor):
            ring = [anchor]
            h = self.half_edges[anchor].next_ccw
            while h != anchor:
                ring.append(h)
                h = self.half_edges[h].next_ccw
                if len(ring) > n:
                    raise TopologyError(f"rotation at vertex {v} does not close")
            if len(ring) != 3:
                raise TopologyError(f"vertex {v} has degree {len(ring)}, expected 3")
            for h in ring:
                if self.half_edges[h].vertex != v:
                    raise TopologyError(f"half-edge {h} disagrees about its vertex")
        seen = set()
        for e, (hs, ht) in enumerate(self.edges):
            if self.half_edges[hs].twin != ht:
                raise TopologyError(f"edge {e} halves are not twins")
            if hs in seen or ht in seen:
                raise TopologyError(f"edge {e} reuses a half-edge")
            seen.update((hs, ht))
        if len(seen) != n:
            raise TopologyError("some half-edges belong to no edge")
        # connectivity over vertices
        if self.vertex_anchor:
            adj: dict[int, set[int]] = {v: set() for v in range(len(self.vertex_anchor))}
            for hs, ht in self.edges:
                a, b = self.half_edges[hs].vertex, self.half_edges[ht].vertex
                adj[a].add(b)
                adj[b].add(a)
            stack, reached = [0], {0}
            while stack:
                for w in adj[stack.pop()]:
                    if w not in reached:
                        reached.add(w)
                        stack.append(w)
            if len(reached) != len(self.vertex_anchor):
                raise TopologyError("graph is not connected")

    def _build_derived(self) -> None:
        n = len(self.half_edges)
        face_of = [-1] * n
        faces: list[tuple[int, ...]] = []
        for h0 in range(n):
            if face_of[h0] != -1:
                continue
            orbit = []
            h = h0
            while face_of[h] == -1:
                face_of[h] = len(faces)
                orbit.append(h)
                h = self.half_edges[self.half_edges[h].twin].next_ccw
            if h != h0:
                raise TopologyError("face tracing did not close")
            faces.append(tuple(orbit))
        self.faces = tuple(faces)
        self.face_of = tuple(face_of)
        edge_of = [-1] * n
        for e, (hs, ht) in enumerate(self.edges):
            edge_of[hs] = e
            edge_of[ht] = e
        self.edge_of = tuple(edge_of)
        euler = self.num_vertices - self.num_edges + self.num_faces
        if euler != 2:
            raise TopologyError(f"Euler characteristic {euler} != 2: not a sphere embedding")
        for e, (hs, ht) in enumerate(self.edges):
            if face_of[hs] == face_of[ht]:
                raise TopologyError(f"edge {e} is a bridge (incident to one face)")

    # -- basic queries ---------------------------------------------------------

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_anchor)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def num_faces(self) -> int:
        return len(self.faces)

    def twin(self, h: int) -> int:
        return self.half_edges[h].twin

    def vertex_of(self, h: int) -> int:
        return self.half_edges[h].vertex

    def next_ccw(self, h: int) -> int:
        return self.half_edges[h].next_ccw

    def halves_at(self, v: int) -> tuple[int, int, int]:
        a = self.vertex_anchor[v]
        b = self.next_ccw(a)
        c = self.next_ccw(b)
        return (a, b, c)

    def edge_endpoints(self, e: int) -> tuple[int, int]:
        hs, ht = self.edges[e]
        return (self.vertex_of(hs), self.vertex_of(ht))

    def angles(self) -> list[Angle]:
        out = []
        for v in range(self.num_vertices):
            for h in self.halves_at(v):
                out.append(Angle(v, h, self.next_ccw(h)))
        return out

    def vertex_edges(self, v: int) -> tuple[int, int, int]:
        return tuple(self.edge_of[h] for h in self.halves_at(v))

    # -- serialization ---------------------------------------------------------

    def to_text(self) -> str:
        lines = []
        for v in range(self.num_vertices):
            h1, h2, h3 = self.halves_at(v)
            lines.append(f"vertex {v} {h1} {h2} {h3}")
        for e, (hs, ht) in enumerate(self.edges):
            lines.append(f"edge {e} {hs} {ht}")
        return "\n".join(lines) + "\n"

    # -- isomorphism (orientation-preserving or reflected) ---------------------

    def canonical_code(self) -> tuple:
        best = None
        for mirror in (False, True):
            for h0 in range(len(self.half_edges)):
                code = self._trace_code(h0, mirror)
                if best is None or code < best:
                    best = code
        return best

    def _prev_ccw(self, h: int) -> int:
        p = self.next_ccw(h)
        while self.next_ccw(p) != h:
            p = self.next_ccw(p)
        return p

    def _trace_code(self, h0: int, mirror: bool) -> tuple:
        ids: dict[int, int] = {}
        order: list[int] = []

        def visit(h: int) -> int:
            if h not in ids:
                ids[h] = len(ids)
                order.append(h)
            return ids[h]

        visit(h0)
        code = []
        i = 0
        while i < len(order):
            h = order[i]
            nxt = self._prev_ccw(h) if mirror else self.next_ccw(h)
            code.append((visit(self.twin(h)), visit(nxt)))
            i += 1
        return tuple(code)


# -- file format ----------------------------------------------------------------


def load_graph(text: str) -> PlanarGraph:
    """Parse the line-oriented graph format (`vertex`/`edge` lines)."""
    rotations: dict[int, tuple[int, int, int]] = {}
    edge_lines: dict[int, tuple[int, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "vertex":
                if len(parts) != 5:
                    raise ValueError("vertex line needs 4 fields")
                vid, h1, h2, h3 = (int(p) for p in parts[1:])
                if vid in rotations:
                    raise ValueError(f"duplicate vertex id {vid}")
                rotations[vid] = (h1, h2, h3)
            elif parts[0] == "edge":
                if len(parts) != 4:
                    raise ValueError("edge line needs 3 fields")
                eid, hs, ht = (int(p) for p in parts[1:])
                if eid in edge_lines:
                    raise ValueError(f"duplicate edge id {eid}")
                edge_lines[eid] = (hs, ht)
            else:
                raise ValueError(f"unknown record {parts[0]!r}")
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}") from exc
    if sorted(rotations) != list(range(len(rotations))):
        raise ParseError("vertex ids must be 0..n-1")
    if sorted(edge_lines) != list(range(len(edge_lines))):
        raise ParseError("edge ids must be 0..m-1")
    rots = [rotations[v] for v in range(len(rotations))]
    halves = [edge_lines[e] for e in range(len(edge_lines))]
    return PlanarGraph.from_rotations(rots, halves)


# -- generators -------------------------------------------------------------------


def _from_coordinates(points: Sequence[tuple[float, float]],
                      edge_list: Sequence[tuple[int, int]]) -> PlanarGraph:
    """Straight-line drawing -> rotation system by ccw angular sort."""
    n_half = 2 * len(edge_list)
    incident: dict[int, list[tuple[float, int]]] = {v: [] for v in range(len(points))}
    edge_halves = []
    for e, (a, b) in enumerate(edge_list):
        hs, ht = 2 * e, 2 * e + 1
        ax, ay = points[a]
        bx, by = points[b]
        incident[a].append((math.atan2(by - ay, bx - ax), hs))
        incident[b].append((math.atan2(ay - by, ax - bx), ht))
        edge_halves.append((hs, ht))
    rotations = []
    for v in range(len(points)):
        incident[v].sort()
        rotations.append([h for _, h in incident[v]])
    assert n_half == sum(len(r) for r in rotations)
    return PlanarGraph.from_rotations(rotations, edge_halves)


def _theta() -> PlanarGraph:
    # two vertices, three parallel edges; rotations reversed on the far side
    rotations = [(0, 2, 4), (5, 3, 1)]
    edge_halves = [(0, 1), (2, 3), (4, 5)]
    return PlanarGraph.from_rotations(rotations, edge_halves)


def _k4() -> PlanarGraph:
    pts = [(0.0, 0.0)] + [(math.cos(a), math.sin(a))
                          for a in (math.pi / 2, math.pi * 7 / 6, math.pi * 11 / 6)]
    edges = [(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (3, 1)]
    return _from_coordinates(pts, edges)


def _prism3() -> PlanarGraph:
    angs = (math.pi / 2, math.pi * 7 / 6, math.pi * 11 / 6)
    pts = [(2 * math.cos(a), 2 * math.sin(a)) for a in angs]
    pts += [(math.cos(a), math.sin(a)) for a in angs]
    edges = [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)]
    return _from_coordinates(pts, edges)


def _cube() -> PlanarGraph:
    angs = [math.pi / 4 + i * math.pi / 2 for i in range(4)]
    pts = [(2 * math.cos(a), 2 * math.sin(a)) for a in angs]
    pts += [(math.cos(a), math.sin(a)) for a in angs]
    edges = [(i, (i + 1) % 4) for i in range(4)]
    edges += [(4 + i, 4 + (i + 1) % 4) for i in range(4)]
    edges += [(i, 4 + i) for i in range(4)]
    return _from_coordinates(pts, edges)


def _dodecahedron() -> PlanarGraph:
    # Schlegel diagram: four rings of five vertices
    pts = []
    for i in range(5):
        a = math.pi / 2 + i * 2 * math.pi / 5
        pts.append((4.0 * math.cos(a), 4.0 * math.sin(a)))        # a_i : 0..4
    for i in range(5):
        a = math.pi / 2 + i * 2 * math.pi / 5
        pts.append((2.9 * math.cos(a), 2.9 * math.sin(a)))        # b_i : 5..9
    for i in range(5):
        a = math.pi / 2 + (i + 0.5) * 2 * math.pi / 5
        pts.append((1.9 * math.cos(a), 1.9 * math.sin(a)))        # c_i : 10..14
    for i in range(5):
        a = math.pi / 2 + (i + 0.5) * 2 * math.pi / 5
        pts.append((1.0 * math.cos(a), 1.0 * math.sin(a)))        # d_i : 15..19
    edges = []
    for i in range(5):
        edges.append((i, (i + 1) % 5))                 # outer pentagon
        edges.append((i, 5 + i))                       # a-b spokes
        edges.append((5 + i, 10 + i))                  # b_i - c_i
        edges.append((5 + i, 10 + (i - 1) % 5))        # b_i - c_{i-1}
        edges.append((10 + i, 15 + i))                 # c-d spokes
        edges.append((15 + i, 15 + (i + 1) % 5))       # inner pentagon
    return _from_coordinates(pts, edges)


_GENERATORS = {
    "theta": _theta,
    "k4": _k4,
    "prism3": _prism3,
    "cube": _cube,
    "dodecahedron": _dodecahedron,
}


def generate(name: str) -> PlanarGraph:
    key = name.lower()
    if key not in _GENERATORS:
        raise UnsupportedGenerator(
            f"no sphere-embeddable generator {name!r}; supported: {sorted(_GENERATORS)}")
    return _GENERATORS[key]()


# -- even subgraphs and cycles -------------------------------------------------


def enumerate_even_subgraphs(g: PlanarGraph,
                             edge_limit: int = EVEN_SUBGRAPH_EDGE_LIMIT) -> list[frozenset[int]]:
    """All edge subsets with even degree at every vertex (empty set included)."""
    if g.num_edges > edge_limit:
        raise SizeLimit(f"{g.num_edges} edges exceeds enumeration bound {edge_limit}")
    # spanning tree; fundamental cycles of the co-tree edges span the cycle space
    parent_edge: dict[int, int | None] = {0: None}
    order = [0]
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in range(g.num_vertices)}
    for e in range(g.num_edges):
        a, b = g.edge_endpoints(e)
        adj[a].append((b, e))
        adj[b].append((a, e))
    tree_edges: set[int] = set()
    i = 0
    while i < len(order):
        v = order[i]
        i += 1
        for w, e in adj[v]:
            if w not in parent_edge:
                parent_edge[w] = e
                tree_edges.add(e)
                order.append(w)
    cotree = [e for e in range(g.num_edges) if e not in tree_edges]

    def tree_path(a: int, b: int) -> set[int]:
        seen_a = {}
        v = a
        while v is not None:
            seen_a[v] = True
            e = parent_edge[v]
            v = None if e is None else _other_end(g, e, v)
        path: set[int] = set()
        v = b
        while v not in seen_a:
            e = parent_edge[v]
            path.add(e)
            v = _other_end(g, e, v)
        # climb from a down to the meeting vertex
        top = v
        v = a
        while v != top:
            e = parent_edge[v]
            path.add(e)
            v = _other_end(g, e, v)
        return path

    basis = []
    for e in cotree:
        a, b = g.edge_endpoints(e)
        cyc = tree_path(a, b)
        cyc.add(e)
        basis.append(frozenset(cyc))
    result = [frozenset()]
    for cyc in basis:
        result += [prev.symmetric_difference(cyc) for prev in result]
    return result


def _other_end(g: PlanarGraph, e: int, v: int) -> int:
    a, b = g.edge_endpoints(e)
    return b if v == a else a


def simple_cycles(g: PlanarGraph) -> list[frozenset[int]]:
    """Even subgraphs that are a single simple cycle."""
    out = []
    for sub in enumerate_even_subgraphs(g):
        if not sub:
            continue
        verts: dict[int, int] = {}
        for e in sub:
            a, b = g.edge_endpoints(e)
            verts[a] = verts.get(a, 0) + 1
            verts[b] = verts.get(b, 0) + 1
        if any(d != 2 for d in verts.values()):
            continue
        if _is_connected_edge_set(g, sub):
            out.append(sub)
    return out


def _is_connected_edge_set(g: PlanarGraph, sub: Iterable[int]) -> bool:
    sub = set(sub)
    if not sub:
        return True
    vert_adj: dict[int, list[int]] = {}
    for e in sub:
        a, b = g.edge_endpoints(e)
        vert_adj.setdefault(a, []).append(b)
        vert_adj.setdefault(b, []).append(a)
    start = next(iter(vert_adj))
    stack, seen = [start], {start}
    while stack:
        for w in vert_adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(vert_adj)


def count_components(g: PlanarGraph, sub: Iterable[int]) -> int:
    """Connected components of an even edge subset (loops of a configuration)."""
    sub = set(sub)
    vert_adj: dict[int, list[int]] = {}
    for e in sub:
        a, b = g.edge_endpoints(e)
        vert_adj.setdefault(a, []).append(b)
        vert_adj.setdefault(b, []).append(a)
    seen: set[int] = set()
    comps = 0
    for start in vert_adj:
        if start in seen:
            continue
        comps += 1
        stack = [start]
        seen.add(start)
        while stack:
            for w in vert_adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
    return comps


def cycle_sides(g: PlanarGraph, cycle_edges: frozenset[int],
                outer_face: int) -> tuple[set[int], set[int]]:
    """(interior faces, exterior faces) of a simple cycle; outer_face is exterior."""
    _check_simple_cycle(g, cycle_edges)
    # dual flood fill that never crosses a cycle edge
    comp = {outer_face}
    stack = [outer_face]
    while stack:
        f = stack.pop()
        for h in g.faces[f]:
            e = g.edge_of[h]
            if e in cycle_edges:
                continue
            f2 = g.face_of[g.twin(h)]
            if f2 not in comp:
                comp.add(f2)
                stack.append(f2)
    interior = set(range(g.num_faces)) - comp
    if not interior:
        raise NotACycle("cycle does not separate the sphere")
    return interior, comp


def _check_simple_cycle(g: PlanarGraph, cycle_edges: frozenset[int]) -> None:
    if not cycle_edges:
        raise NotACycle("empty edge set")
    deg: dict[int, int] = {}
    for e in cycle_edges:
        a, b = g.edge_endpoints(e)
        deg[a] = deg.get(a, 0) + 1
        deg[b] = deg.get(b, 0) + 1
    if any(d != 2 for d in deg.values()) or not _is_connected_edge_set(g, cycle_edges):
        raise NotACycle("edge set is not a single simple cycle")


def cycle_statistics(g: PlanarGraph, cycle_edges: frozenset[int], outer_face: int,
                     orientation: Sequence[bool] | None = None) -> tuple[int, int, int]:
    """(large angles a(c), clockwise edges #E_cl, interior vertices #V_int).

    Clockwise is measured against the disc bounded by the cycle that does
    not contain `outer_face`; edge directions come from the stored (src, dst)
    pairs, optionally flipped per-edge by `orientation`.
    """
    interior, _ = cycle_sides(g, cycle_edges, outer_face)
    cycle_vertices = set()
    for e in cycle_edges:
        cycle_vertices.update(g.edge_endpoints(e))
    v_int = sum(1 for v in range(g.num_vertices)
                if v not in cycle_vertices
                and g.face_of[g.vertex_anchor[v]] in interior)
    # large angles: third half-edge at a cycle vertex points into the disc
    a_c = 0
    for v in cycle_vertices:
        third = [h for h in g.halves_at(v) if g.edge_of[h] not in cycle_edges]
        assert len(third) == 1
        if g.face_of[third[0]] in interior:
            a_c += 1
    # clockwise edges: with face-on-the-right orbits, the half-edge whose
    # orbit face is interior points along the clockwise traversal
    e_cl = 0
    for e in cycle_edges:
        hs, ht = g.edges[e]
        if orientation is not None and orientation[e]:
            hs, ht = ht, hs
        cw_half = hs if g.face_of[hs] in interior else ht
        if cw_half == hs:
            e_cl += 1
    return a_c, e_cl, v_int
