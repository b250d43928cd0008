import itertools
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from reslie import env, liealg
from reslie import linalg as la
from reslie.env import (PBWAlgebra, augmentation_power, build_env, dimension_subalgebra_oracle, e_space,
                        fingerprint, height_and_weight, jl_subspace, n_quotient_dims, nilpotency_index,
                        verify_e_centrality)
from reslie.errors import NotPNilpotent
from reslie.liealg import AlgebraPresentation

from conftest import F2, F3, F4, U, chain, cyclic_algebra, heisenberg, line


def test_truncated_polynomial_algebra():
    for F in (F2, F3):
        A = build_env(line(F, 0))
        x = A.gen(0)
        assert A.dim == F.p
        assert A.power(x, F.p - 1) != {}
        assert A.power(x, F.p) == {}


def test_heisenberg_straightening(heis2):
    A = build_env(heis2)
    x, y, z = (A.gen(i) for i in range(3))
    assert A.dim == 8
    assert A.mul(y, x) == A.add(A.mul(x, y), z)


def test_toral_line_relation():
    A = build_env(line(F3, 1))
    x = A.gen(0)
    assert A.power(x, 3) == x


def test_omega_examples(heis2):
    A = build_env(line(F2, 0))
    assert augmentation_power(A, 1) == A.span([A.gen(0)])
    assert augmentation_power(A, 2).is_zero()
    assert build_env(heis2).omega_dims() == [7, 5, 3, 1, 0]


def _omega_power_brute(A, k):
    """Span of all k-fold products of non-unit monomials."""
    mons = A.monomial_elements(include_unit=False)
    prods = [A.one()]
    for _ in range(k):
        prods = [A.mul(a, m) for a in prods for m in mons]
        prods = [A.from_dense(r) for r in A.span(prods).basis]
    return A.span(prods)


@pytest.mark.parametrize("name", ["heis-f2-000", "heis-f2-101", "abelian-f2-21", "line-f3-0", "swap-f2"])
def test_one_sided_products_match_all_products(catalog, name):
    A = build_env(catalog[name])
    for k in range(1, 6):
        assert A.augmentation_power(k) == _omega_power_brute(A, k), k


def test_nilpotency_index_examples(heis2):
    assert nilpotency_index(build_env(line(F3, 0))) == 3
    assert nilpotency_index(build_env(line(F2, 1))) == math.inf
    assert nilpotency_index(build_env(heis2)) == 5


def test_oracle_examples(heis2):
    A = build_env(heis2)
    assert dimension_subalgebra_oracle(A, 1) == heis2.full()
    assert dimension_subalgebra_oracle(A, 2) == heis2.span([(0, 0, 1)])
    B = build_env(AlgebraPresentation(F3, 2))
    assert dimension_subalgebra_oracle(B, 2).is_zero()


def test_jl_examples(heis2):
    assert jl_subspace(build_env(AlgebraPresentation(F2, 2))).is_zero()
    A = build_env(heis2)
    J = jl_subspace(A)
    want = A.span([A.monomial((1, 0, 1)), A.monomial((0, 1, 1)), A.monomial((1, 1, 1))])
    assert J == want
    assert J <= A.augmentation_power(2)


def test_nu_examples(heis2):
    A = build_env(AlgebraPresentation(F2, 2))
    assert n_quotient_dims(A, A.algebra.zero_space()) == (0, 0)
    assert n_quotient_dims(A, A.algebra.full()) == (2, 2)
    H = build_env(heis2)
    assert n_quotient_dims(H, liealg.derived_p(heis2)) == (1, 1)


def test_e_space_examples(heis2):
    A = build_env(AlgebraPresentation(F2, 2))
    assert e_space(A) == A.span([A.monomial((1, 1))])
    for P in (heis2, heisenberg(F3, 1, 2, 0)):
        chk = env.check_e_decomposition(build_env(P))
        assert chk.ok, chk


def test_centrality_examples(heis2):
    assert verify_e_centrality(build_env(AlgebraPresentation(F3, 2))).ok
    assert verify_e_centrality(build_env(heis2)).ok
    with pytest.raises(NotPNilpotent):
        verify_e_centrality(build_env(line(F2, 1)))


def test_heights_and_weights(heis2):
    A = build_env(heis2)
    assert height_and_weight(A, (0, 0, 1)) == 2
    assert height_and_weight(A, A.monomial((1, 1, 1))) == 4
    assert height_and_weight(A, (0, 0, 0)) == math.inf


def test_fingerprint_examples(heis2):
    fp = fingerprint(heis2)
    assert list(fp.omega_dims) == [7, 5, 3, 1, 0]
    assert list(fp.dim_quotients) == [2, 1]
    assert fp.main_quotient_dim == 3
    a = fingerprint(cyclic_algebra(F2, (3,)))
    b = fingerprint(cyclic_algebra(F2, (2, 1)))
    assert "l_mod_lp_exponents" in a.differences(b)
    with pytest.raises(NotPNilpotent):
        fingerprint(line(F3, 2))


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["heis-f2-110", "heis-f3-120", "filiform-f3-1", "abelian-f2-211", "heis-f4-u"]),
       st.integers(0, 2 ** 20))
def test_fingerprint_basis_invariance(catalog, name, seed):
    P = catalog[name]
    M = la.random_invertible(P.field, P.dim, random.Random(seed))
    Q = liealg.change_basis(P, M)
    assert fingerprint(P) == fingerprint(Q)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["heis-f2-000", "heis-f3-010", "abelian-f3-21", "filiform-f3-0"]),
       st.integers(0, 2 ** 20))
def test_filtration_transport(catalog, name, seed):
    P = catalog[name]
    M = la.random_invertible(P.field, P.dim, random.Random(seed))
    Q = liealg.change_basis(P, M)
    UP, UQ = PBWAlgebra(P), PBWAlgebra(Q)
    apply, image = env.induced_map(UP, UQ, M)
    for k in range(1, UP.nilpotency_index() + 1):
        assert image(env.filtration_piece(UQ, k)) == env.filtration_piece(UP, k)
        assert image(UQ.augmentation_power(k)) == UP.augmentation_power(k)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["heis-f2-110", "heis-f3-021", "filiform-f3-1", "affine-f3", "heis-f4-u"]),
       st.randoms(use_true_random=False))
def test_associativity(catalog, name, rnd):
    A = PBWAlgebra(catalog[name])
    F = A.field

    def rand():
        return A.from_dense([rnd.randrange(F.q) if rnd.random() < 0.3 else 0 for _ in range(A.dim)])

    a, b, c = rand(), rand(), rand()
    assert A.mul(A.mul(a, b), c) == A.mul(a, A.mul(b, c))
    assert A.mul(A.one(), a) == a == A.mul(a, A.one())


def test_weight_counts_match_omega(catalog):
    for name, P in catalog.items():
        if not liealg.is_p_nilpotent(P):
            continue
        A = PBWAlgebra(P)
        _, weights = env.weighted_basis(P)
        for k in range(1, A.nilpotency_index() + 1):
            assert env.weight_count(weights, P.p, k) == A.augmentation_power(k).dim, (name, k)


def test_graded_envelope_dims(catalog):
    for name, P in catalog.items():
        if liealg.is_p_nilpotent(P):
            assert PBWAlgebra(liealg.graded(P)).omega_dims() == PBWAlgebra(P).omega_dims(), name
