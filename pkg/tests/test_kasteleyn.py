import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinising import graphs, kasteleyn
from spinising.kasteleyn import (all_kasteleyn_orientations, check_cycle_lemma,
                                 face_clockwise_counts, is_kasteleyn,
                                 make_kasteleyn, orientation_class, vertex_flip)


def test_constructed_orientation_valid(fixture_graphs):
    for name, g in fixture_graphs.items():
        o = make_kasteleyn(g)
        ok, counts = is_kasteleyn(g, o)
        assert ok, name
        assert all(c % 2 == 1 for c in counts)


def test_constructed_orientation_dodecahedron():
    g = graphs.generate("dodecahedron")
    assert is_kasteleyn(g, make_kasteleyn(g))[0]


def test_face_counts_total():
    g = graphs.generate("cube")
    o = make_kasteleyn(g)
    # each edge is the clockwise boundary of exactly one of its two faces
    assert sum(face_clockwise_counts(g, o)) == g.num_edges


def test_cycle_lemma_every_fixture(fixture_graphs, fixture_orientations):
    for name, g in fixture_graphs.items():
        report = check_cycle_lemma(g, fixture_orientations[name])
        assert report["ok"], (name, report["violations"])
        assert report["cycles_checked"] > 0


def test_brute_force_class_matches_construction():
    for name in ("theta", "k4"):
        g = graphs.generate(name)
        o = make_kasteleyn(g)
        assert orientation_class(g, o) == all_kasteleyn_orientations(g), name


def test_non_kasteleyn_detected():
    g = graphs.generate("theta")
    o = list(make_kasteleyn(g))
    o[0] = not o[0]
    assert not is_kasteleyn(g, o)[0]


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(min_value=0, max_value=3), max_size=8))
def test_vertex_flips_preserve_validity(flips):
    g = graphs.generate("k4")
    o = make_kasteleyn(g)
    for v in flips:
        o = vertex_flip(g, o, v)
    assert is_kasteleyn(g, o)[0]


def test_flip_single_edge_breaks_exactly_two_faces():
    g = graphs.generate("k4")
    o = list(make_kasteleyn(g))
    before = face_clockwise_counts(g, o)
    o[2] = not o[2]
    after = face_clockwise_counts(g, o)
    changed = [f for f in range(g.num_faces) if before[f] != after[f]]
    assert len(changed) == 2
