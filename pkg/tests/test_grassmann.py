from fractions import Fraction

import pytest

from spinising import graphs, kasteleyn
from spinising.errors import IncompleteOrder, NotQuadratic, SizeLimit
from spinising.grassmann import (GrassmannElement, _merge_sign, berezin,
                                 exp_quadratic, z_f, z_f_complex,
                                 z_f_complex_squared)
from spinising.ising import p_gamma


def test_merge_sign():
    # psi0 psi1 already ascending; psi1 psi0 needs one transposition
    assert _merge_sign(0b01, 0b10) == 1
    assert _merge_sign(0b10, 0b01) == -1
    assert _merge_sign(0b101, 0b010) == -1  # psi1 moves past psi2 only


def test_monomial_ordering():
    a = GrassmannElement.monomial(3, [1, 0])
    b = GrassmannElement.monomial(3, [0, 1])
    assert a.terms == {0b011: -1}
    assert b.terms == {0b011: 1}
    assert GrassmannElement.monomial(3, [2, 2]).is_zero()


def test_anticommutation():
    x = GrassmannElement.monomial(4, [0])
    y = GrassmannElement.monomial(4, [1])
    assert (x * y + y * x).is_zero()
    assert (x * x).is_zero()


def test_exp_quadratic():
    q = GrassmannElement.monomial(4, [0, 1]) + GrassmannElement.monomial(4, [2, 3])
    e = exp_quadratic(q)
    # 1 + q + q^2/2 where q^2 = 2 psi0 psi1 psi2 psi3
    assert e.terms[0] == 1
    assert e.terms[0b1111] == 1
    with pytest.raises(NotQuadratic):
        exp_quadratic(GrassmannElement.monomial(4, [0]))


def test_berezin_order_sign():
    top = GrassmannElement.monomial(2, [0, 1])
    assert berezin(top, [0, 1]) == 1
    assert berezin(top, [1, 0]) == -1
    with pytest.raises(IncompleteOrder):
        berezin(top, [0, 0])


def test_real_integral_matches_loop_polynomial(fixture_graphs, fixture_orientations):
    for name in ("theta", "k4", "cube"):
        g = fixture_graphs[name]
        assert z_f(g, fixture_orientations[name]) == p_gamma(g), name


def test_complex_integral_matches_real(fixture_graphs, fixture_orientations):
    for name in ("theta", "k4"):
        g = fixture_graphs[name]
        o = fixture_orientations[name]
        assert z_f_complex(g, o) == z_f(g, o), name


def test_squared_integral():
    g = graphs.generate("theta")
    o = kasteleyn.make_kasteleyn(g)
    zf = z_f(g, o)
    assert z_f_complex_squared(g, o) == zf * zf


def test_vertex_flip_invariance():
    g = graphs.generate("k4")
    o = kasteleyn.make_kasteleyn(g)
    flipped = kasteleyn.vertex_flip(g, o, 2)
    assert z_f(g, flipped) == z_f(g, o)


def test_non_kasteleyn_orientation_gets_signs_wrong():
    g = graphs.generate("theta")
    o = list(kasteleyn.make_kasteleyn(g))
    o[0] = not o[0]
    assert not kasteleyn.is_kasteleyn(g, o)[0]
    bad = z_f(g, o)
    assert bad != p_gamma(g)
    assert any(c < 0 for c in bad.terms.values())


def test_generator_limit():
    g = graphs.generate("dodecahedron")
    with pytest.raises(SizeLimit):
        z_f(g, kasteleyn.make_kasteleyn(g))
