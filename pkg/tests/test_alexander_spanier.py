import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from locindex.alexander_spanier import (ASCochain, antisymmetrize, coboundary, cochain_space_basis,
                                        cohomology_ranks, constant_cochain, epsilon_grid, indicator,
                                        localized_cohomology)
from locindex.errors import ValidationError
from locindex.space import (INFINITY, DiagonalNeighborhood, circle_space, simplicial_space,
                            tetrahedron_boundary, triangle_graph)
from oracles import simplicial_betti


def test_constants_are_closed():
    assert coboundary(constant_cochain(circle_space(3), 0)).is_zero()


def test_alternating_indicator_has_nonzero_coboundary():
    sp = circle_space(3)
    f = indicator(sp, (0, 1)) - indicator(sp, (1, 0))
    assert not coboundary(f).is_zero()


def test_coboundary_formula_on_a_tuple():
    sp = triangle_graph()
    f = indicator(sp, (0, 1))
    df = coboundary(f)
    # (df)(x0,x1,x2) = f(x1,x2) - f(x0,x2) + f(x0,x1)
    for t in itertools.product(range(3), repeat=3):
        expect = f(t[1], t[2]) - f(t[0], t[2]) + f(t[0], t[1])
        assert df(t) == expect


def test_antisymmetrize_examples():
    sp = triangle_graph()
    a = antisymmetrize(indicator(sp, (0, 1)))
    assert a.entries == {(0, 1): Fraction(1, 2), (1, 0): Fraction(-1, 2)}
    assert antisymmetrize(a).equals(a)
    sym = indicator(sp, (0, 1)) + indicator(sp, (1, 0))
    assert antisymmetrize(sym).is_zero()
    big = ASCochain(13, sp, {tuple([0] * 14): 1.0})
    with pytest.raises(ValidationError):
        antisymmetrize(big)


def test_basis_examples():
    assert len(cochain_space_basis(circle_space(3), 0, 0.5)) == 3
    assert cochain_space_basis(triangle_graph(), 1, 0.0) == [(0, 0), (1, 1), (2, 2)]
    assert len(cochain_space_basis(triangle_graph(), 1, 1.0)) == 9
    assert len(cochain_space_basis(circle_space(4), 2, INFINITY)) == 64


def test_rank_examples():
    assert cohomology_ranks(circle_space(3), 2, INFINITY) == [1, 0, 0]
    assert cohomology_ranks(triangle_graph(), 1, 1.0) == [1, 1]
    assert cohomology_ranks(tetrahedron_boundary(), 2, 1.0) == [1, 0, 1]


def test_float_mode_agrees():
    assert cohomology_ranks(triangle_graph(), 1, 1.0, "float") == [1, 1]


def test_degree_cap():
    with pytest.raises(ValidationError):
        cohomology_ranks(circle_space(3), 3, INFINITY)
    assert cohomology_ranks(circle_space(3), 3, INFINITY, degree_cap=4) == [1, 0, 0, 0]


def test_localized_examples():
    loc = localized_cohomology(triangle_graph(), 1)
    assert loc.stabilized and loc.ranks == [1, 1] and loc.stabilization_eps == 1.0
    assert localized_cohomology(simplicial_space([[0]]), 1).ranks == [1, 0]
    assert localized_cohomology(simplicial_space([[0], [1]]), 1).ranks[0] == 2
    report = loc.report(triangle_graph())
    assert set(report) >= {"space", "epsilon", "degrees", "ranks", "stabilized"}


def test_no_stabilization_is_a_report():
    loc = localized_cohomology(triangle_graph(), 1, grid=[1.0])
    assert not loc.stabilized and loc.ranks is None


@pytest.mark.parametrize("simplices,deg", [
    ([[0, 1], [1, 2], [2, 0]], 1),
    ([[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]], 2),
    ([[0, 1], [1, 2], [2, 3], [3, 0]], 1),
    ([[0, 1], [1, 2], [2, 0], [3, 4], [4, 5], [5, 3]], 1),
])
def test_localized_matches_sympy_oracle(simplices, deg):
    sp = simplicial_space(simplices)
    loc = localized_cohomology(sp, deg)
    assert loc.ranks == simplicial_betti(simplices, deg)


@st.composite
def sparse_cochains(draw):
    n = draw(st.integers(1, 5))
    sp = circle_space(max(n, 3))
    q = draw(st.integers(0, 3))
    keys = draw(st.lists(st.tuples(*[st.integers(0, sp.n_points - 1)] * (q + 1)), max_size=5))
    vals = draw(st.lists(st.integers(-3, 3), min_size=len(keys), max_size=len(keys)))
    return ASCochain(q, sp, {k: Fraction(v) for k, v in zip(keys, vals)})


@given(sparse_cochains())
@settings(max_examples=80, deadline=None)
def test_d_squared_zero(f):
    assert coboundary(coboundary(f)).is_zero()


@given(sparse_cochains(), st.sampled_from([0.0, 1.0, 1.6, 3.2]))
@settings(max_examples=60, deadline=None)
def test_restriction_commutes_with_d(f, eps):
    # the localized complex is the quotient "functions on U"; d is compatible with restriction to U
    hood = DiagonalNeighborhood(eps)
    assert coboundary(f.restricted(hood), hood).equals(coboundary(f, hood))


@given(sparse_cochains())
@settings(max_examples=40, deadline=None)
def test_support_radius_matches_entries(f):
    from locindex.space import tuple_support_radius
    expect = max((tuple_support_radius(f.space, k) for k in f.entries), default=0.0)
    assert f.support_radius == expect


@given(st.integers(3, 6))
@settings(max_examples=4, deadline=None)
def test_unlocalized_complex_is_acyclic(n):
    assert cohomology_ranks(circle_space(n), 1, INFINITY) == [1, 0]


def test_coboundary_can_enlarge_support():
    # slot insertion adds new points, so supports are not preserved by d
    sp = circle_space(4)
    f = indicator(sp, (0,))
    assert f.support_radius == 0 and coboundary(f).support_radius > 0


def test_grid_shape():
    assert epsilon_grid(triangle_graph()) == [2.0, 1.0]
    assert epsilon_grid(simplicial_space([[0]])) == [1.0, 0.0]
