import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from locindex.errors import InvalidSpaceError, ValidationError
from locindex.space import (INFINITY, DiagonalNeighborhood, circle_space, relabel, simplicial_space,
                            space_from_json, tetrahedron_boundary, triangle_graph, tuple_support_radius)


def test_circle_distances():
    c3 = circle_space(3)
    off = c3.metric[~np.eye(3, dtype=bool)]
    assert np.allclose(off, 2 * math.pi / 3)
    assert circle_space(4).metric[0, 2] == pytest.approx(math.pi)
    with pytest.raises(InvalidSpaceError):
        circle_space(2)


def test_simplicial_examples():
    tri = triangle_graph()
    assert set(np.unique(tri.metric)) == {0.0, 1.0}
    tet = tetrahedron_boundary()
    assert np.all(tet.metric[~np.eye(4, dtype=bool)] == 1)
    assert tet.is_face((2, 0, 1)) and not tet.is_face((0, 1, 2, 3))
    with pytest.raises(InvalidSpaceError):
        simplicial_space([])
    with pytest.raises(InvalidSpaceError):
        simplicial_space([[0, 2]])


def test_disconnected_uses_infinity():
    sp = simplicial_space([[0, 1], [2]])
    assert sp.metric[0, 2] == INFINITY
    assert not DiagonalNeighborhood(5.0).contains(sp, (0, 2))
    assert DiagonalNeighborhood(INFINITY).contains(sp, (0, 2))


def test_support_radius_examples():
    assert tuple_support_radius(triangle_graph(), (1, 1, 1)) == 0
    assert tuple_support_radius(circle_space(4), (0, 2)) == pytest.approx(math.pi)
    assert tuple_support_radius(triangle_graph(), (0, 1, 2)) == 1
    with pytest.raises(ValidationError):
        tuple_support_radius(triangle_graph(), ())


def test_json_round_trip_and_strictness():
    sp = space_from_json({"kind": "simplicial", "maximal_simplices": [[0, 1], [1, 2], [2, 0]]})
    assert np.array_equal(sp.metric, triangle_graph().metric)
    assert space_from_json(circle_space(5).to_json()).n_points == 5
    with pytest.raises(ValidationError):
        space_from_json({"kind": "circle", "n": 5, "radius": 2})


@st.composite
def random_complex(draw):
    n = draw(st.integers(2, 7))
    edges = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), min_size=1, max_size=12))
    simplices = [list(e) for e in edges if e[0] != e[1]] + [[v] for v in range(n)]
    return simplicial_space(simplices)


@given(random_complex())
@settings(max_examples=50, deadline=None)
def test_graph_metric_triangle_inequality(sp):
    m = sp.metric
    n = sp.n_points
    for i, j, k in itertools.product(range(n), repeat=3):
        if math.isfinite(m[i, k]) and math.isfinite(m[k, j]):
            assert m[i, j] <= m[i, k] + m[k, j]


@given(st.lists(st.integers(0, 5), min_size=1, max_size=5), st.randoms(use_true_random=False))
@settings(max_examples=50, deadline=None)
def test_support_radius_permutation_invariant(tup, rnd):
    sp = circle_space(6)
    shuffled = list(tup)
    rnd.shuffle(shuffled)
    assert tuple_support_radius(sp, tup) == tuple_support_radius(sp, shuffled)


def test_relabel_preserves_distances():
    sp = circle_space(5)
    perm = [2, 0, 4, 1, 3]
    rs = relabel(sp, perm)
    for i, j in itertools.product(range(5), repeat=2):
        assert rs.metric[perm[i], perm[j]] == sp.metric[i, j]
