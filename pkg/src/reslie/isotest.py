"""Backtracking isomorphism searches for small restricted Lie algebras.

Both searches assign images to a generating set, evaluate the generators'
word basis on the images and compare every recorded relation.  Outcomes are
tri-state: a found witness, a certified negative after exhausting the
search space, or ``inconclusive`` when the node budget runs out.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field

from . import canonical, liealg
from . import linalg as la
from .canonical import WordBasis, element_signature, generators, lie_replay, replay_words, word_basis
from .env import PBWAlgebra, _acc, fingerprint
from .errors import SizeLimit
from .liealg import AlgebraPresentation, IsoWitness

ISOMORPHIC = "isomorphic"
NOT_ISOMORPHIC = "not_isomorphic"
INCONCLUSIVE = "inconclusive"
FOUND = "found"
NOT_FOUND = "not_found"

DEFAULT_BUDGET = 200_000
ENV_SEARCH_LIMIT = 256
ENV_FEASIBLE_CANDIDATES = 4096

# every witness handed out by this module, for integrity audits
EMITTED_WITNESSES: list = []


@dataclass
class IsoResult:
    status: str
    witness: IsoWitness | None = None
    nodes: int = 0
    reason: str = ""

    @property
    def conclusive(self) -> bool:
        return self.status != INCONCLUSIVE


class _Budget(Exception):
    pass


def _element_pool(Q: AlgebraPresentation) -> list[tuple]:
    F, n = Q.field, Q.dim
    if F.q ** n > canonical.ENUM_LIMIT:
        raise SizeLimit(f"{F.q}^{n} elements exceed the enumeration limit")
    return [tuple(v) for v in itertools.product(range(F.q), repeat=n) if any(v)]


def lie_iso_search(P: AlgebraPresentation, Q: AlgebraPresentation,
                   budget: int = DEFAULT_BUDGET, prune: bool = True) -> IsoResult:
    """Search restricted isomorphisms P -> Q by generator images.

    Pruning compares invariant summaries up front, restricts each image to
    elements with the generator's (height, exponent, centralizer dim), and
    replays the relations among already assigned generators at every depth.
    With ``prune=False`` only the leaves are checked.
    """
    if P.field != Q.field or P.dim != Q.dim:
        return IsoResult(NOT_ISOMORPHIC, reason="field or dimension differs")
    if P.dim == 0:
        return _emit(IsoResult(ISOMORPHIC, IsoWitness(P, Q, []), reason="zero algebras"))
    if prune:
        sp, sq = canonical.invariant_summary(P), canonical.invariant_summary(Q)
        diff = sorted(k for k in sp if sp[k] != sq[k])
        if diff:
            return IsoResult(NOT_ISOMORPHIC, reason="invariants differ: " + ", ".join(diff))
    gens = generators(P)
    d = len(gens)
    partial = [word_basis(P, gens[:k]) for k in range(1, d + 1)]
    pool = _element_pool(Q)
    if prune:
        sP = liealg.dimension_series(P)
        sQ = liealg.dimension_series(Q)
        sig_q = {v: element_signature(Q, v, sQ) for v in pool}
        candidates = [[v for v in pool if sig_q[v] == element_signature(P, g, sP)] for g in gens]
    else:
        candidates = [pool] * d
    nodes = 0
    images: list = []

    def dfs(k):
        nonlocal nodes
        if k == d:
            out = lie_replay(P, Q, partial[-1], images)
            if out is not None:
                return out
            return None
        for v in candidates[k]:
            nodes += 1
            if nodes > budget:
                raise _Budget
            images.append(v)
            if not prune or k + 1 == d or lie_replay(P, Q, partial[k], images) is not None:
                out = dfs(k + 1)
                if out is not None:
                    return out
            images.pop()
        return None

    try:
        out = dfs(0)
    except _Budget:
        return IsoResult(INCONCLUSIVE, nodes=nodes, reason="node budget exhausted")
    if out is None:
        return IsoResult(NOT_ISOMORPHIC, nodes=nodes, reason="search space exhausted")
    wb = partial[-1]
    F, n = P.field, P.dim
    B = la.from_columns([list(v) for v in wb.vectors], n)
    Img = la.from_columns([list(v) for v in out], n)
    W = la.mat_mul(F, Img, la.mat_inv(F, B))
    return _emit(IsoResult(ISOMORPHIC, IsoWitness(P, Q, W), nodes=nodes))


def _emit(result: IsoResult) -> IsoResult:
    if result.witness is not None:
        if not result.witness.verify():
            raise AssertionError("isomorphism witness failed replay")
        EMITTED_WITNESSES.append(result.witness)
    return result


# -- enveloping algebra search -------------------------------------------------

@dataclass
class EnvIsoResult:
    status: str
    images: list | None = None  # u(Q)-images of the generators of P
    generators: list = dc_field(default_factory=list)
    nodes: int = 0
    reason: str = ""


def _subspace_elements(F, S):
    for coords in itertools.product(range(F.q), repeat=S.dim):
        yield tuple(S.combine(coords))


def _env_replay(U: PBWAlgebra, wb: WordBasis, images):
    F = U.field

    def combine(coeffs, vecs):
        acc: dict = {}
        for c, v in zip(coeffs, vecs):
            _acc(F, acc, v, c)
        return acc

    def independent(vecs):
        return la.rank(F, [U.to_dense(v) for v in vecs], U.dim) == len(vecs) if vecs else True

    return replay_words(wb, images, U.commutator, lambda a: U.power(a, U.p), combine, independent)


def _spans_everything(U: PBWAlgebra, basis_images) -> bool:
    prods = []
    for exps in itertools.product(range(U.p), repeat=len(basis_images)):
        out = U.one()
        for f, e in zip(basis_images, exps):
            for _ in range(e):
                out = U.mul(out, f)
        prods.append(U.to_dense(out))
    return la.rank(U.field, prods, U.dim) == U.dim


def env_generator_iso_search(P: AlgebraPresentation, Q: AlgebraPresentation,
                             budget: int = DEFAULT_BUDGET) -> EnvIsoResult:
    """Search augmentation-preserving algebra isomorphisms u(P) -> u(Q).

    A generator g of P with g in omega^h but not omega^(h+1) must go to an
    element of omega^h(Q) outside omega^(h+1)(Q).  Candidate assignments are
    accepted when the Lie words of the generators satisfy the same relations
    in u(Q) (commutators for brackets, p-th powers for the p-map) and the
    ordered products of the images span u(Q).  Listing the candidates is
    charged to the node budget, so large augmentation ideals give
    ``inconclusive`` rather than an enumeration that cannot finish.
    """
    if P.field != Q.field:
        return EnvIsoResult(NOT_FOUND, reason="different fields")
    for A in (P, Q):
        if A.p ** A.dim > ENV_SEARCH_LIMIT:
            raise SizeLimit(f"u(L) of dimension {A.p ** A.dim} exceeds {ENV_SEARCH_LIMIT}")
    if P.dim != Q.dim:
        return EnvIsoResult(NOT_FOUND, reason="dim u(P) != dim u(Q); exhausted")
    UP, UQ = PBWAlgebra(P), PBWAlgebra(Q)
    gens = generators(P)
    d = len(gens)
    partial = [word_basis(P, gens[:k]) for k in range(1, d + 1)]
    chainP, chainQ = UP.omega_chain(), UQ.omega_chain()
    F = Q.field

    def level(chain, vec):
        h = 0
        for s in chain:
            if s.contains(vec):
                h += 1
            else:
                return h
        return math.inf

    levels = [level(chainP, UP.to_dense(UP.embed(g))) for g in gens]
    tops = [chainQ[-1] if h == math.inf else UQ.augmentation_power(h) for h in levels]
    # enumerating candidates costs one node per element of the ambient piece
    nodes = sum(F.q ** t.dim for t in tops)
    if nodes > budget:
        return EnvIsoResult(INCONCLUSIVE, generators=gens, nodes=nodes,
                            reason="candidate space exceeds the node budget")
    candidates = []
    for h, top in zip(levels, tops):
        if h == math.inf:
            cands = [v for v in _subspace_elements(F, top) if any(v)]
        else:
            below = UQ.augmentation_power(h + 1)
            cands = [v for v in _subspace_elements(F, top) if not below.contains(v)]
        candidates.append([UQ.from_dense(v) for v in cands])

    images: list = []

    def dfs(k):
        nonlocal nodes
        if k == d:
            out = _env_replay(UQ, partial[-1], images)
            if out is not None and _spans_everything(UQ, out):
                return list(images)
            return None
        for v in candidates[k]:
            nodes += 1
            if nodes > budget:
                raise _Budget
            images.append(v)
            if _env_replay(UQ, partial[k], images) is not None:
                found = dfs(k + 1)
                if found is not None:
                    return found
            images.pop()
        return None

    try:
        found = dfs(0)
    except _Budget:
        return EnvIsoResult(INCONCLUSIVE, generators=gens, nodes=nodes, reason="node budget exhausted")
    if found is None:
        return EnvIsoResult(NOT_FOUND, generators=gens, nodes=nodes, reason="search space exhausted")
    return EnvIsoResult(FOUND, images=found, generators=gens, nodes=nodes)


def env_search_feasible(P: AlgebraPresentation, budget: int = DEFAULT_BUDGET) -> bool:
    """Whether listing candidates in omega(P) fits in the budget for every generator."""
    if P.p ** P.dim > ENV_SEARCH_LIMIT:
        return False
    return len(generators(P)) * P.field.q ** (P.p ** P.dim - 1) <= min(budget, ENV_FEASIBLE_CANDIDATES)


def verify_env_witness(P: AlgebraPresentation, Q: AlgebraPresentation, result: EnvIsoResult) -> bool:
    if result.images is None:
        return False
    UQ = PBWAlgebra(Q)
    wb = word_basis(P, result.generators)
    out = _env_replay(UQ, wb, result.images)
    return out is not None and len(out) == P.dim and _spans_everything(UQ, out)


# -- fingerprint and main quotient consistency -------------------------------

DISTINGUISHED = "distinguished"
CONSISTENT = "consistent"
CANDIDATE_VIOLATION = "candidate_violation"


@dataclass
class ConsistencyReport:
    outcome: str
    differing: list = dc_field(default_factory=list)
    quotient_search: str | None = None
    env_search: str | None = None
    witness: IsoWitness | None = None

    def as_dict(self) -> dict:
        return {
            "outcome": self.outcome,
            "differing_components": self.differing,
            "quotient_search": self.quotient_search,
            "env_search": self.env_search,
            "witness": self.witness.matrix if self.witness is not None else None,
        }


def main_quotient(P: AlgebraPresentation) -> AlgebraPresentation:
    return liealg.quotient(P, liealg.main_ideal(P))


def main_theorem_consistency(P: AlgebraPresentation, Q: AlgebraPresentation,
                             budget: int = DEFAULT_BUDGET, fp_p=None, fp_q=None) -> ConsistencyReport:
    """Check that equal fingerprints never hide non-isomorphic main quotients."""
    fp_p = fp_p or fingerprint(P)
    fp_q = fp_q or fingerprint(Q)
    diff = fp_p.differences(fp_q)
    if diff:
        return ConsistencyReport(DISTINGUISHED, differing=diff)
    res = lie_iso_search(main_quotient(P), main_quotient(Q), budget)
    if res.status == ISOMORPHIC:
        return ConsistencyReport(CONSISTENT, quotient_search=res.status, witness=res.witness)
    if res.status == INCONCLUSIVE:
        return ConsistencyReport(INCONCLUSIVE, quotient_search=res.status)
    env_status = None
    if P.p ** P.dim <= ENV_SEARCH_LIMIT and Q.p ** Q.dim <= ENV_SEARCH_LIMIT:
        env_status = env_generator_iso_search(P, Q, budget).status
    return ConsistencyReport(CANDIDATE_VIOLATION, quotient_search=res.status, env_search=env_status)
