"""Word bases from generators, isomorphism invariants and canonical class ids.

A tuple of restricted generators determines a basis of L by closing under
brackets with the generators and p-powers in a fixed order.  The structure
constants in that basis, minimized over all generating tuples, are a
canonical form of the isomorphism class.
"""
from __future__ import annotations

import functools
import hashlib
import itertools
import math
from dataclasses import dataclass

from . import linalg as la
from . import liealg
from .abelian import exponent_multiset
from .liealg import AlgebraPresentation

CANON_BUDGET = 5000
ENUM_LIMIT = 6561


@dataclass(frozen=True)
class WordBasis:
    """Closure of a generator tuple.

    ``steps`` lists every word visited in order as ``(recipe, coeffs)``:
    recipe is ('gen', j), ('br', a, j) for [w_a, g_j] or ('pp', a) for
    w_a^[p]; coeffs is None for a word kept as the next basis vector and
    otherwise its coordinates over the words kept so far.
    """

    steps: tuple
    vectors: tuple

    @property
    def size(self) -> int:
        return len(self.vectors)


def word_basis(P: AlgebraPresentation, gens) -> WordBasis:
    F, n = P.field, P.dim
    steps = []
    kept: list[tuple] = []
    ech = la._Echelon(F, n)

    def visit(recipe, v):
        if ech.add(v):
            kept.append(tuple(v))
            steps.append((recipe, None))
        else:
            cols = la.from_columns([list(k) for k in kept], n) if kept else [[] for _ in range(n)]
            coeffs = la.solve(F, cols, list(v)) if kept else []
            steps.append((recipe, tuple(coeffs)))

    d = len(gens)
    for j, g in enumerate(gens):
        visit(("gen", j), tuple(g))
    i = 0
    while i < len(kept):
        for j in range(d):
            visit(("br", i, j), liealg.bracket(P, kept[i], gens[j]))
        visit(("pp", i), liealg.p_power(P, kept[i]))
        i += 1
    return WordBasis(tuple(steps), tuple(kept))


def replay_words(wb: WordBasis, images, bracket, ppower, combine, is_independent):
    """Evaluate the same words on ``images``; None when a relation fails.

    ``combine(coeffs, vectors)`` forms linear combinations and
    ``is_independent(vectors)`` tests the kept images.
    """
    out = []
    for recipe, coeffs in wb.steps:
        kind = recipe[0]
        if kind == "gen":
            v = images[recipe[1]]
        elif kind == "br":
            v = bracket(out[recipe[1]], images[recipe[2]])
        else:
            v = ppower(out[recipe[1]])
        if coeffs is None:
            out.append(v)
        elif v != combine(coeffs, out):
            return None
    if not is_independent(out):
        return None
    return out


def lie_replay(P: AlgebraPresentation, Q: AlgebraPresentation, wb: WordBasis, images):
    F, n = Q.field, Q.dim

    def combine(coeffs, vecs):
        acc = [0] * n
        for c, v in zip(coeffs, vecs):
            if c:
                acc = F.axpy(acc, c, v)
        return tuple(acc)

    def independent(vecs):
        return la.rank(F, vecs, n) == len(vecs) if vecs else True

    return replay_words(wb, images, lambda a, b: liealg.bracket(Q, a, b),
                        lambda a: liealg.p_power(Q, a), combine, independent)


def generators(P: AlgebraPresentation) -> list[tuple]:
    """Restricted generators: a complement of D_2 if p-nilpotent, else greedy."""
    if liealg.is_p_nilpotent(P):
        return [tuple(v) for v in liealg.dimension_subalgebra(P, 2).complement_basis()]
    chosen: list[tuple] = []
    for i in range(P.dim):
        b = P.basis_vector(i)
        closure = P.span(word_basis(P, chosen).vectors) if chosen else P.zero_space()
        if not closure.contains(b):
            chosen.append(b)
    return chosen


def closure_basis(P: AlgebraPresentation, gens) -> list[tuple]:
    """The kept vectors of ``word_basis(P, gens)``, without the recipes."""
    ech = la._Echelon(P.field, P.dim)
    kept = [tuple(g) for g in gens if ech.add(g)]
    d = len(gens)
    i = 0
    while i < len(kept) and len(kept) < P.dim:
        for j in range(d):
            v = liealg.bracket(P, kept[i], gens[j])
            if ech.add(v):
                kept.append(v)
        v = liealg.p_power(P, kept[i])
        if ech.add(v):
            kept.append(v)
        i += 1
    return kept


def structure_form(P: AlgebraPresentation, basis) -> tuple:
    """Brackets and p-powers of ``basis``, in coordinates over that basis."""
    F, n = P.field, P.dim
    vecs = basis.vectors if isinstance(basis, WordBasis) else basis
    Binv = la.mat_inv(F, la.from_columns([list(v) for v in vecs], n))
    out = []
    for a in range(n):
        for b in range(a + 1, n):
            out.extend(la.mat_vec(F, Binv, liealg.bracket(P, vecs[a], vecs[b])))
    for a in range(n):
        out.extend(la.mat_vec(F, Binv, liealg.p_power(P, vecs[a])))
    return tuple(out)


def _count_generating_tuples(q: int, n: int, frattini_dim: int) -> int:
    d = n - frattini_dim
    total = 1
    for k in range(d):
        total *= q ** n - q ** (frattini_dim + k)
    return total


def generating_tuples(P: AlgebraPresentation):
    """All tuples whose classes modulo D_2 form a basis of L / D_2."""
    F, n = P.field, P.dim
    D2 = liealg.dimension_subalgebra(P, 2)
    d = n - D2.dim
    elements = [tuple(v) for v in itertools.product(range(F.q), repeat=n)]

    def rec(prefix, span):
        if len(prefix) == d:
            yield tuple(prefix)
            return
        for v in elements:
            if not span.contains(v):
                yield from rec(prefix + [v], span.add_vectors([v]))

    yield from rec([], D2)


def canonical_form(P: AlgebraPresentation, budget: int = CANON_BUDGET):
    """Minimal structure form over generating tuples, or None above budget."""
    if not liealg.is_p_nilpotent(P):
        return None
    D2 = liealg.dimension_subalgebra(P, 2)
    if _count_generating_tuples(P.field.q, P.dim, D2.dim) > budget:
        return None
    best = None
    for gens in generating_tuples(P):
        basis = closure_basis(P, gens)
        if len(basis) != P.dim:
            raise AssertionError("generators modulo D_2 failed to generate L")
        form = structure_form(P, basis)
        if best is None or form < best:
            best = form
    return best


def _digest(obj) -> str:
    return hashlib.sha256(repr(obj).encode()).hexdigest()[:20]


def _inf(x):
    return "inf" if x == math.inf else x


def element_statistics(P: AlgebraPresentation, series=None):
    """Sorted multiset of (height, exponent, centralizer dim) over all elements."""
    F, n = P.field, P.dim
    if F.q ** n > ENUM_LIMIT:
        return None
    series = series or liealg.dimension_series(P)
    stats = []
    for v in itertools.product(range(F.q), repeat=n):
        stats.append(element_signature(P, v, series))
    return tuple(sorted(stats, key=repr))


def element_signature(P: AlgebraPresentation, v, series=None):
    return (_inf(liealg.height(P, v, series)), _inf(liealg.exponent(P, v)), liealg.centralizer_dim(P, v))


@functools.lru_cache(maxsize=512)
def invariant_summary(P: AlgebraPresentation) -> dict:
    """Cheap isomorphism invariants; equal for isomorphic algebras."""
    series = liealg.dimension_series(P)
    return {
        "field": [P.field.p, P.field.k, list(P.field.modulus)],
        "dim": P.dim,
        "gamma_dims": [g.dim for g in liealg.lower_central_series(P)],
        "d_dims": [d.dim for d in series],
        "center_dim": liealg.center(P).dim,
        "derived_p_dim": liealg.derived_p(P).dim,
        "p_nilpotent": liealg.is_p_nilpotent(P),
        "element_stats_digest": _digest(element_statistics(P, series)),
    }


@functools.lru_cache(maxsize=512)
def canonical_id(P: AlgebraPresentation, budget: int = CANON_BUDGET) -> str:
    """Identifier of the isomorphism class of P.

    ``ab:`` ids (abelian p-nilpotent, exponent partition) and ``cf:`` ids
    (minimal structure form) are complete invariants.  ``inv:`` ids only
    hash invariants and are used when the canonical search is over budget.
    """
    F = P.field
    head = f"p{F.p}k{F.k}m{''.join(map(str, F.modulus))}d{P.dim}"
    if P.dim == 0:
        return head + ":zero"
    if P.is_abelian and liealg.is_p_nilpotent(P):
        return head + ":ab:" + ".".join(map(str, exponent_multiset(P)))
    form = canonical_form(P, budget)
    if form is not None:
        return head + ":cf:" + _digest(form)
    return head + ":inv:" + _digest(sorted(invariant_summary(P).items()))


def is_complete_id(class_id: str) -> bool:
    return ":inv:" not in class_id
