import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from locindex.acceptance import random_chain
from locindex.algebra import (algebra_from_json, direct_sum, kernel_algebra, matrices_over, matrix_algebra,
                              scalar_algebra)
from locindex.cyclic_homology import (AlgebraMatrix, SeparableRingContext, TensorChain, bar_bprime,
                                      chain_support_radius, chern_even, chern_odd, chern_residue,
                                      chern_residue_boundaries, cyclic_operator, cyclic_symmetrize,
                                      has_cyclic_symmetry, hochschild_b, homology_ranks,
                                      local_hochschild_experiment, residue_element, s_normal_form, s_relation)
from locindex.errors import BudgetError, ContextError, ValidationError
from locindex.operator_model import model_residue, monomial_model
from locindex.space import circle_space, simplicial_space, triangle_graph
from oracles import hochschild_betti_commutative

F = Fraction
M2 = matrix_algebra(2)
CC = scalar_algebra(2)


def mat(alg, rows):
    return alg.from_matrix(np.array([[F(x) for x in r] for r in rows], dtype=object))


def chain(alg, *terms):
    return TensorChain.from_factors(alg, [(F(c), fs) for c, fs in terms])


def test_bprime_examples():
    a, b = mat(M2, [[1, 2], [0, 1]]), mat(M2, [[0, 1], [1, 0]])
    assert bar_bprime(chain(M2, (1, [a, b]))).equals(chain(M2, (1, [M2.mul(a, b)])))
    one = M2.one()
    assert bar_bprime(chain(M2, (1, [one, one, one]))).is_zero()
    assert bar_bprime(chain(M2, (1, [a]))).degree == -1


def test_b_examples():
    a, b = mat(M2, [[1, 2], [0, 1]]), mat(M2, [[0, 1], [1, 0]])
    expect = chain(M2, (1, [M2.mul(a, b)]), (-1, [M2.mul(b, a)]))
    assert hochschild_b(chain(M2, (1, [a, b]))).equals(expect)
    f = np.array([F(2), F(-1)], dtype=object)
    assert hochschild_b(chain(CC, (1, [f, f]))).is_zero()


def test_terms_merge_and_drop():
    a = mat(M2, [[1, 0], [0, 0]])
    c = chain(M2, (1, [a, a]), (2, [a, a]), (-3, [a, a]))
    assert not c.terms
    c = chain(M2, (1, [2 * a, a]), (-2, [a, a]))
    assert c.terms and c.is_zero()  # different factor tuples, same tensor


@pytest.mark.parametrize("alg", [M2, matrix_algebra(3), CC])
def test_complex_identities(alg):
    rng = random.Random(7)
    for r in range(1, 5):
        c = random_chain(rng, alg, r)
        assert bar_bprime(bar_bprime(c)).is_zero()
        assert hochschild_b(hochschild_b(c)).is_zero()


def test_cyclic_symmetrize_examples():
    x = mat(M2, [[1, 0], [2, 0]])
    c0 = chain(M2, (1, [x]))
    assert cyclic_symmetrize(c0).equals(c0)
    assert cyclic_symmetrize(chain(M2, (1, [x, x]))).is_zero()
    p = AlgebraMatrix.single(M2, mat(M2, [[1, 0], [0, 0]]))
    assert has_cyclic_symmetry(chern_even(p, 1))


@given(st.integers(0, 10**6), st.integers(0, 3))
@settings(max_examples=30, deadline=None)
def test_cyclic_symmetrize_is_projection(seed, r):
    c = random_chain(random.Random(seed), M2, r)
    s = cyclic_symmetrize(c)
    assert has_cyclic_symmetry(s)
    assert cyclic_symmetrize(s).equals(s)
    assert cyclic_operator(s).equals(s)


@given(st.integers(0, 10**6), st.integers(1, 3))
@settings(max_examples=30, deadline=None)
def test_boundaries_and_cyclic_invariants(seed, r):
    # b' keeps cyclic-symmetric chains symmetric; b keeps the image of (1 - lambda)
    c = random_chain(random.Random(seed), M2, r)
    s = cyclic_symmetrize(c)
    assert has_cyclic_symmetry(bar_bprime(s))
    boundary_of_coboundary = hochschild_b(c - cyclic_operator(c))
    assert cyclic_symmetrize(boundary_of_coboundary).is_zero()


def test_b_does_not_preserve_cyclic_invariants():
    a, b = mat(M2, [[1, 1], [0, 0]]), mat(M2, [[0, 0], [1, 1]])
    s = cyclic_symmetrize(chain(M2, (1, [a, b, a])))
    assert has_cyclic_symmetry(s)
    assert not has_cyclic_symmetry(hochschild_b(s))


def _idempotent(rng):
    from locindex.acceptance import _random_idempotent
    return AlgebraMatrix.single(M2, M2.from_matrix(_random_idempotent(rng)))


def test_chern_even_examples():
    one = AlgebraMatrix.single(scalar_algebra(1), np.array([F(1)], dtype=object))
    ch = chern_even(one, 0)
    assert ch.degree == 0 and ch.expand() == {(0,): 1}
    p = AlgebraMatrix.scalar(scalar_algebra(1), np.diag([F(1), F(0)]).astype(object))
    ch1 = chern_even(p, 1)
    assert ch1.degree == 2 and bar_bprime(ch1).is_zero() and cyclic_symmetrize(hochschild_b(ch1)).is_zero()
    with pytest.raises(ValidationError):
        chern_even(AlgebraMatrix.single(M2, mat(M2, [[1, 1], [0, 0]]) * 2), 1)


@given(st.integers(0, 10**6))
@settings(max_examples=10, deadline=None)
def test_chern_cycles_closed_in_cyclic_complex(seed):
    rng = random.Random(seed)
    p = _idempotent(rng)
    for q in range(3):
        ch = chern_even(p, q)
        assert bar_bprime(ch).is_zero()
        assert cyclic_symmetrize(hochschild_b(ch)).is_zero()
    from locindex.acceptance import _rand_invertible
    g, _ = _rand_invertible(rng, 2)
    u = AlgebraMatrix.single(M2, M2.from_matrix(g))
    for q in (1, 2):
        assert cyclic_symmetrize(hochschild_b(chern_odd(u, q))).is_zero()


def test_chern_odd_examples():
    C = scalar_algebra(1)
    ident = AlgebraMatrix.single(C, np.array([F(1)], dtype=object))
    assert chern_odd(ident, 1).is_zero()
    two = AlgebraMatrix.single(C, np.array([F(2)], dtype=object))
    assert chern_odd(two, 1).expand() == {(0, 0): F(-1, 2)}
    with pytest.raises(Exception):
        chern_odd(AlgebraMatrix.single(C, np.array([F(0)], dtype=object)), 1)


def test_chern_odd_conjugation_invariance():
    from locindex.linalg import inverse
    C = scalar_algebra(1)
    u = AlgebraMatrix.scalar(C, np.array([[F(2), F(1)], [F(1), F(1)]], dtype=object))
    v = AlgebraMatrix.scalar(C, np.array([[F(1), F(3)], [F(0), F(1)]], dtype=object))
    vinv = AlgebraMatrix.scalar(C, inverse(np.array([[F(1), F(3)], [F(0), F(1)]], dtype=object), "rational"))
    a, b = chern_odd(u, 1), chern_odd(v @ u @ vinv, 1)
    # over C, tensors of the unit are all equal: the trace functional sees the coefficient sum
    assert sum(a.expand().values()) == sum(b.expand().values())


def _ctx(alg, diag):
    return SeparableRingContext(alg, alg.from_matrix(np.diag([F(d) for d in diag]).astype(object)))


def test_normal_form_examples():
    A3 = matrix_algebra(3)
    rng = random.Random(3)
    c = random_chain(rng, A3, 2)
    zero_ctx = _ctx(A3, [0, 0, 0])
    assert s_normal_form(c, zero_ctx).equals(c)
    C2 = scalar_algebra(2)
    e = np.array([F(1), F(0)], dtype=object)
    ctx = SeparableRingContext(C2, e)
    b = np.array([F(3), F(5)], dtype=object)
    lhs = chain(C2, (1, [C2.one(), C2.mul(e, b)]))
    rhs = chain(C2, (1, [e, b]))
    assert s_normal_form(lhs, ctx).equals(s_normal_form(rhs, ctx))
    with pytest.raises(ContextError):
        SeparableRingContext(A3, A3.one() * 2)


@given(st.integers(0, 10**6), st.integers(1, 3), st.permutations([0, 1, 2, 3]))
@settings(max_examples=40, deadline=None)
def test_normal_form_confluent_and_idempotent(seed, r, perm):
    rng = random.Random(seed)
    A3 = matrix_algebra(3)
    ctx = _ctx(A3, [1, 0, 1])
    c = random_chain(rng, A3, r)
    order = [p for p in perm if p <= r]
    nf = s_normal_form(c, ctx)
    assert nf.equals(s_normal_form(c, ctx, order=order))
    assert s_normal_form(nf, ctx).equals(nf)
    from locindex.acceptance import _rand_element
    rel = s_relation(ctx, _rand_element(rng, A3), _rand_element(rng, A3), rng.randint(0, r), r,
                     [_rand_element(rng, A3) for _ in range(r + 1)])
    assert s_normal_form(rel, ctx).is_zero()


@pytest.mark.parametrize("w,K", [(1, 4), (2, 6), (-1, 4)])
def test_residue_chern_boundary(w, K):
    data = model_residue(monomial_model(w, K=K))
    alg, R = residue_element(data.R)
    ctx = SeparableRingContext(alg, alg.from_matrix(data.e.entries))
    res = chern_residue_boundaries(R, ctx, 1)
    assert res["cyclic_symmetric"] and res["bprime_zero"] and res["b_cyclic_zero"]


def test_residue_examples():
    data = model_residue(monomial_model(1, K=4))
    alg, R = residue_element(data.R)
    ctx = SeparableRingContext(alg, alg.from_matrix(data.e.entries))
    assert chern_residue(alg.zero(), ctx, 1).is_zero()
    ch0 = chern_residue(R, ctx, 0)
    assert sum(v for k, v in ch0.expand().items() if alg.unit(k[0])[1] == alg.unit(k[0])[2]) == 1
    with pytest.raises(ValidationError):
        chern_residue(alg.one(), SeparableRingContext(alg, alg.one()), 1)


def test_support_radius():
    K = kernel_algebra(circle_space(4))
    diag = K.from_matrix(np.diag([F(1), F(2), F(0), F(1)]).astype(object))
    assert chain_support_radius(chain(K, (1, [diag, diag]))) == 0
    assert chain_support_radius(TensorChain(K, 1)) == 0
    off = K.zero()
    off[K.unit_index(0, 0, 1)] = F(1)
    step = circle_space(4).metric[0, 1]
    assert chain_support_radius(chain(K, (1, [off, off, diag]))) == pytest.approx(2 * step)
    assert chain_support_radius(chain(K, (1, [off, off, diag])), mode="max") == pytest.approx(step)
    with pytest.raises(ValidationError):
        chain_support_radius(chain(M2, (1, [M2.one()])))


@given(st.integers(0, 10**6), st.integers(1, 3))
@settings(max_examples=20, deadline=None)
def test_support_radius_does_not_grow_under_bprime(seed, r):
    K = kernel_algebra(circle_space(3))
    c = random_chain(random.Random(seed), K, r)
    assert chain_support_radius(bar_bprime(c)) <= chain_support_radius(c) + 1e-12


def test_rank_examples():
    assert homology_ranks(M2, "hochschild", (0, 2)) == [1, 0, 0]
    assert homology_ranks(CC, "hochschild", (0, 1)) == [2, 0]
    assert homology_ranks(scalar_algebra(1), "cyclic_bprime", (0, 4)) == [1, 0, 1, 0, 1]


def test_hochschild_matches_sympy_oracle():
    for n in (1, 2, 3):
        assert homology_ranks(scalar_algebra(n), "hochschild", (0, 2)) == hochschild_betti_commutative(n, 2)


@pytest.mark.parametrize("base", [scalar_algebra(1), scalar_algebra(2)])
@pytest.mark.parametrize("variant", ["hochschild", "cyclic_bprime", "cyclic_quotient"])
def test_morita(base, variant):
    assert homology_ranks(base, variant, (0, 2)) == homology_ranks(matrices_over(base, 2), variant, (0, 2))


@pytest.mark.parametrize("alg", [scalar_algebra(1), CC, M2])
def test_cyclic_variants_agree(alg):
    assert homology_ranks(alg, "cyclic_bprime", (0, 3)) == homology_ranks(alg, "cyclic_quotient", (0, 3))


def test_s_localized_ranks_agree():
    ctx = _ctx(M2, [1, 0])
    for variant in ("hochschild", "cyclic_bprime"):
        assert homology_ranks(M2, variant, (0, 2), sring=ctx) == homology_ranks(M2, variant, (0, 2))


def test_budget_error():
    with pytest.raises(BudgetError) as info:
        homology_ranks(matrix_algebra(5), "hochschild", (0, 4))
    assert info.value.dimension > info.value.budget


def test_float_ranks_agree():
    assert homology_ranks(M2, "cyclic_bprime", (0, 2), kind="float") == [1, 0, 1]


def test_local_hochschild_examples():
    rep = local_hochschild_experiment(triangle_graph(), 1)
    assert rep["stabilized"] and rep["ranks"] == [1, 1] == rep["singular_homology"]
    assert local_hochschild_experiment(simplicial_space([[0]]), 1)["ranks"] == [1, 0]
    assert local_hochschild_experiment(simplicial_space([[0], [1]]), 1)["ranks"] == [2, 0]
    with pytest.raises(ValidationError):
        local_hochschild_experiment(triangle_graph(), 3)


def test_square_local_hochschild():
    rep = local_hochschild_experiment(simplicial_space([[0, 1], [1, 2], [2, 3], [3, 0]]), 1)
    assert rep["ranks"] == [1, 1] and rep["matches_singular"]


def test_algebra_json_and_associativity():
    alg = algebra_from_json({"kind": "matrix_over", "k": 2, "base": {"kind": "scalars", "n": 2}})
    assert alg.blocks == (2, 2)
    assert direct_sum(M2, scalar_algebra(1)).dim == 5
    with pytest.raises(ValidationError):
        algebra_from_json({"kind": "matrix", "k": 2, "n": 1})
