import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinising import graphs, kasteleyn
from spinising.errors import SizeLimit
from spinising.ising import (dimer_p_gamma, fisher_graph, nn_correlation,
                             p_gamma, spin_correlation, z_ising_bruteforce,
                             z_on_loop_model, _config_sweep, _as_couplings)

small_rationals = st.fractions(min_value=Fraction(-1, 2), max_value=Fraction(1, 2),
                               max_denominator=12)


def test_theta_partition_closed_form():
    g = graphs.generate("theta")
    Y = Fraction(1, 3)
    assert z_ising_bruteforce(g, Y) == 1 + 3 * Y ** 2
    # cross-check against 4 cosh(3y) / (4 cosh^3 y) at a float point
    y = 0.37
    Yf = Fraction(math.tanh(y)).limit_denominator(10 ** 12)
    lhs = float(z_ising_bruteforce(g, Yf))
    rhs = 4 * math.cosh(3 * y) / (2 ** 2 * math.cosh(y) ** 3)
    assert lhs == pytest.approx(rhs, rel=1e-9)


def test_k4_partition_closed_form():
    g = graphs.generate("k4")
    Y = Fraction(2, 7)
    assert z_ising_bruteforce(g, Y) == 1 + 4 * Y ** 3 + 3 * Y ** 4


def test_infinite_temperature():
    for name in ("theta", "k4", "cube"):
        assert z_ising_bruteforce(graphs.generate(name), 0) == 1


def test_p_gamma_theta_terms():
    g = graphs.generate("theta")
    p = p_gamma(g)
    assert p.coefficient((0, 0, 0)) == 1
    for exp in ((1, 1, 0), (1, 0, 1), (0, 1, 1)):
        assert p.coefficient(exp) == 1
    assert p.coefficient((1, 1, 1)) == 0


def test_p_gamma_cube_face_terms():
    g = graphs.generate("cube")
    p = p_gamma(g)
    degree4 = sum(1 for exp, c in p.terms.items() if sum(exp) == 4 and c == 1)
    assert p.coefficient((0,) * 12) == 1
    assert degree4 == 6  # the six face cycles


@settings(max_examples=10, deadline=None)
@given(st.lists(small_rationals, min_size=9, max_size=9))
def test_bruteforce_matches_loop_polynomial(Y):
    g = graphs.generate("prism3")
    assert z_ising_bruteforce(g, Y) == p_gamma(g).evaluate(_as_couplings(g, Y))


def test_loop_model_values():
    g = graphs.generate("theta")
    Y = Fraction(1, 2)
    assert z_on_loop_model(g, 1, Y) == 1 + 3 * Y ** 2
    assert z_on_loop_model(g, 2, Y) == 1 + 6 * Y ** 2
    assert z_on_loop_model(g, 0, Y) == 1


def test_nn_correlation_theta():
    g = graphs.generate("theta")
    Y = Fraction(1, 3)
    expected = (3 * Y + Y ** 3) / (1 + 3 * Y ** 2)
    assert nn_correlation(g, Y, 0) == expected
    assert expected == Fraction(7, 9)
    assert nn_correlation(g, 0, 0) == 0


def test_correlation_tends_to_one():
    g = graphs.generate("k4")
    assert nn_correlation(g, Fraction(99, 100), 0) > Fraction(9, 10)


def test_spin_correlation_squares_cancel():
    g = graphs.generate("k4")
    assert spin_correlation(g, Fraction(1, 3), [0, 0]) == 1


def test_second_derivative_of_free_energy():
    # d g_e / d y_e = 1 - g_e^2 by finite differences
    step = 1e-5
    for name in ("theta", "k4"):
        g = graphs.generate(name)
        y = 0.3

        def corr(yv):
            # perturb only edge 0; the identity is for a single-edge derivative
            Y = [Fraction(math.tanh(y)).limit_denominator(10 ** 14)] * g.num_edges
            Y[0] = Fraction(math.tanh(yv)).limit_denominator(10 ** 14)
            return float(nn_correlation(g, Y, 0))

        ge = corr(y)
        deriv = (corr(y + step) - corr(y - step)) / (2 * step)
        assert deriv == pytest.approx(1 - ge ** 2, abs=1e-8)


def test_sweep_chunks_combine():
    g = graphs.generate("k4")
    Y = _as_couplings(g, Fraction(1, 3))
    weights = [w for _, w in _config_sweep(g, Y, None)]
    half = len(weights) // 2
    assert sum(weights[:half]) + sum(weights[half:]) == sum(weights)


def test_dimer_size_limit():
    g = graphs.generate("dodecahedron")
    with pytest.raises(SizeLimit):
        dimer_p_gamma(g, kasteleyn.make_kasteleyn(g))


def test_fisher_graph_shape():
    g = graphs.generate("theta")
    fg, info = fisher_graph(g)
    assert fg.num_vertices == len(g.half_edges)
    assert fg.num_edges == g.num_edges + 3 * g.num_vertices
    assert info["n_edge_type"] == g.num_edges


def test_dimer_pfaffian_equals_loop_polynomial(fixture_graphs, fixture_orientations):
    for name in ("theta", "k4", "cube"):
        g = fixture_graphs[name]
        assert dimer_p_gamma(g, fixture_orientations[name]) == p_gamma(g), name


def test_dimer_count_is_matching_count():
    # at unit weights the Pfaffian counts the perfect matchings of the
    # expanded graph, which biject with even subgraphs
    g = graphs.generate("k4")
    o = kasteleyn.make_kasteleyn(g)
    poly = dimer_p_gamma(g, o)
    ones = [Fraction(1)] * g.num_edges
    assert poly.evaluate(ones) == 8
