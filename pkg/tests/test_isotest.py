import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from reslie import abelian, canonical, isotest, liealg
from reslie import linalg as la
from reslie.errors import SizeLimit
from reslie.isotest import (CANDIDATE_VIOLATION, CONSISTENT, DISTINGUISHED, FOUND, INCONCLUSIVE, ISOMORPHIC,
                            NOT_FOUND, NOT_ISOMORPHIC, env_generator_iso_search, lie_iso_search,
                            main_theorem_consistency)
from reslie.liealg import AlgebraPresentation, verify_isomorphism

from conftest import F2, F3, F4, chain, cyclic_algebra, heisenberg, line


@pytest.fixture(autouse=True)
def _clear_witness_log():
    isotest.EMITTED_WITNESSES.clear()
    yield
    isotest.EMITTED_WITNESSES.clear()


def test_self_isomorphism(heis2):
    res = lie_iso_search(heis2, heis2)
    assert res.status == ISOMORPHIC and res.witness.verify()
    assert isotest.EMITTED_WITNESSES == [res.witness]


def test_heisenberg_vs_abelian_pruned_immediately(heis2):
    res = lie_iso_search(heis2, AlgebraPresentation(F2, 3))
    assert res.status == NOT_ISOMORPHIC and res.nodes == 0
    assert "gamma_dims" in res.reason


def test_abelian_partitions_disagree():
    a, b = cyclic_algebra(F2, (3,)), cyclic_algebra(F2, (2, 1))
    assert lie_iso_search(a, b).status == NOT_ISOMORPHIC
    assert abelian.abelian_iso(a, b)[0] is False


def test_dimension_or_field_mismatch():
    assert lie_iso_search(line(F2, 0), AlgebraPresentation(F2, 2)).status == NOT_ISOMORPHIC
    assert lie_iso_search(line(F2, 0), line(F3, 0)).status == NOT_ISOMORPHIC


def test_p_map_on_x_can_be_absorbed_over_f2():
    # (x+y)^[2] = x^[2] + [x,y] = 0 when x^[2] = z, so this is the zero-map Heisenberg
    res = lie_iso_search(heisenberg(F2, 1, 0, 0), heisenberg(F2))
    assert res.status == ISOMORPHIC
    assert verify_isomorphism(res.witness.source, res.witness.target, res.witness.matrix)


def test_p_map_on_x_survives_over_f3():
    assert lie_iso_search(heisenberg(F3, 1, 0, 0), heisenberg(F3)).status == NOT_ISOMORPHIC


def test_budget_exhaustion_is_inconclusive(catalog):
    P = catalog["heis-f3-120"]
    Q = catalog["heis-f3-120-rebased"]
    res = lie_iso_search(P, Q, budget=1)
    assert res.status == INCONCLUSIVE and not res.conclusive


def test_rebased_copies_found(catalog):
    for name in [k for k in catalog if k.endswith("-rebased")]:
        res = lie_iso_search(catalog[name.removesuffix("-rebased")], catalog[name])
        assert res.status == ISOMORPHIC, name
        assert res.witness.verify()


def test_size_limit():
    big = AlgebraPresentation(F3, 9)
    with pytest.raises(SizeLimit):
        lie_iso_search(big, big, prune=False)


# enveloping algebra search

def test_env_search_self(heis2):
    assert env_generator_iso_search(heis2, heis2).status == FOUND


def test_env_search_local_vs_idempotent():
    res = env_generator_iso_search(line(F2, 0), line(F2, 1))
    assert res.status == NOT_FOUND
    assert "exhausted" in res.reason


def test_env_search_rebased_heisenberg(catalog):
    P, Q = catalog["heis-f2-100"], catalog["heis-f2-100-rebased"]
    res = env_generator_iso_search(P, Q)
    assert res.status == FOUND
    assert isotest.verify_env_witness(P, Q, res)


def test_env_search_size_limit():
    P = AlgebraPresentation(F3, 6)
    with pytest.raises(SizeLimit):
        env_generator_iso_search(P, P)


def test_env_search_budget_gives_inconclusive():
    P = heisenberg(F3)
    assert env_generator_iso_search(P, P, budget=100).status == INCONCLUSIVE


# fingerprint and main quotient consistency

def test_consistency_examples(heis2, catalog):
    assert main_theorem_consistency(heis2, heis2).outcome == CONSISTENT
    rep = main_theorem_consistency(heis2, AlgebraPresentation(F2, 3))
    assert rep.outcome == DISTINGUISHED and rep.differing
    rep = main_theorem_consistency(catalog["filiform-f3-1"], catalog["filiform-f3-1-rebased"])
    assert rep.outcome == CONSISTENT and rep.witness.verify()


def test_main_quotient_kills_gamma3(catalog):
    P = catalog["filiform-f3-0"]
    assert liealg.nilpotence_class(P) == 3
    Q = isotest.main_quotient(P)
    assert Q.dim < P.dim
    assert liealg.nilpotence_class(Q) <= 2


# canonical ids

def test_canonical_ids_agree_on_rebased(catalog):
    for name in [k for k in catalog if k.endswith("-rebased")]:
        base = name.removesuffix("-rebased")
        assert canonical.canonical_id(catalog[name]) == canonical.canonical_id(catalog[base])


def test_canonical_ids_abelian_partition():
    assert canonical.canonical_id(cyclic_algebra(F2, (2, 1))).endswith("ab:2.1")


# properties

SMALL_F2 = ["heis-f2-000", "heis-f2-100", "heis-f2-010", "heis-f2-110", "abelian-f2-3", "abelian-f2-21",
            "abelian-f2-111", "swap-f2", "affine-f2", "torus-f2-2", "mixed-f2-10", "abelian-f2-2", "line-f2-0"]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SMALL_F2), st.sampled_from(SMALL_F2), st.integers(0, 2 ** 20))
def test_pruning_is_conservative(catalog, a, b, seed):
    P = catalog[a]
    Q = liealg.change_basis(catalog[b], la.random_invertible(F2, catalog[b].dim, random.Random(seed)))
    pruned = lie_iso_search(P, Q)
    full = lie_iso_search(P, Q, prune=False)
    assert pruned.status == full.status
    for w in isotest.EMITTED_WITNESSES:
        assert verify_isomorphism(w.source, w.target, w.matrix)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([F2, F3]), st.sampled_from([(1, 1), (2,), (2, 1), (3,), (1, 1, 1)]),
       st.sampled_from([(1, 1), (2,), (2, 1), (3,), (1, 1, 1)]), st.integers(0, 2 ** 20))
def test_lie_search_agrees_with_abelian_iso(F, pa, pb, seed):
    rng = random.Random(seed)
    P = liealg.change_basis(cyclic_algebra(F, pa), la.random_invertible(F, sum(pa), rng))
    Q = liealg.change_basis(cyclic_algebra(F, pb), la.random_invertible(F, sum(pb), rng))
    res = lie_iso_search(P, Q)
    assert res.conclusive
    assert (res.status == ISOMORPHIC) == abelian.abelian_iso(P, Q)[0]
