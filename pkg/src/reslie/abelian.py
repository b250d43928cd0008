"""Abelian restricted Lie algebras as modules over the skew polynomial ring.

On an abelian L the p-map t is sigma-semilinear, t(a x) = a^p t(x), so L is
a module over F[t; sigma].  In the p-nilpotent case the module is a direct
sum of cyclic pieces <x>_p = span{x, x^[p], ..., x^[p]^(s-1)} and the
multiset of lengths s is a complete invariant.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import linalg as la
from .errors import NotAbelian, NotPNilpotent, SizeLimit
from .field import FiniteField
from .liealg import AlgebraPresentation, IsoWitness
from .linalg import Subspace


@dataclass(frozen=True)
class SemilinearOperator:
    """x -> T * sigma(x), sigma the Frobenius applied coordinatewise."""

    field: FiniteField
    T: tuple

    @property
    def n(self) -> int:
        return len(self.T)

    def apply(self, x, times: int = 1):
        F = self.field
        for _ in range(times):
            x = la.mat_vec(F, self.T, F.frobenius_vec(x, 1))
        return tuple(x)

    def power_matrix(self, j: int):
        """M_j with t^j(x) = M_j * sigma^j(x), i.e. T sigma(T) ... sigma^(j-1)(T)."""
        F = self.field
        M = la.identity(self.n)
        for i in range(j):
            M = la.mat_mul(F, M, la.mat_frobenius(F, self.T, i))
        return M

    def image(self, A: Subspace, times: int = 1) -> Subspace:
        for _ in range(times):
            A = la.semilinear_image(self.field, [list(r) for r in self.T], 1, A)
        return A

    def kernel(self, j: int = 1) -> Subspace:
        F, n = self.field, self.n
        if j == 0:
            return Subspace.zero(F, n)
        null = la.nullspace(F, self.power_matrix(j), n)
        return Subspace.span(F, n, (F.frobenius_vec(v, -j) for v in null.basis))


def _require_abelian(P: AlgebraPresentation):
    if not P.is_abelian:
        raise NotAbelian("the algebra has nonzero brackets")


def as_semilinear(P: AlgebraPresentation) -> SemilinearOperator:
    _require_abelian(P)
    T = la.from_columns([list(v) for v in P.pmap], P.dim) if P.dim else []
    return SemilinearOperator(P.field, tuple(tuple(r) for r in T))


def rank_profile(S: SemilinearOperator) -> list[int]:
    """Dimensions of t^k(L) for k = 0, 1, ... until zero or a repeat."""
    A = Subspace.full(S.field, S.n)
    out = [A.dim]
    while out[-1]:
        A = S.image(A)
        out.append(A.dim)
        if out[-1] == out[-2]:
            break
    return out


def partition_from_profile(profile: list[int]) -> list[int]:
    """Cyclic summand lengths read off the rank profile by conjugation.

    r_{k-1} - r_k counts the summands of length >= k.
    """
    if profile[-1] != 0:
        raise NotPNilpotent("rank profile does not reach zero")
    at_least = [profile[k - 1] - profile[k] for k in range(1, len(profile))] + [0]
    parts = []
    for k in range(len(at_least) - 1, 0, -1):
        parts.extend([k] * (at_least[k - 1] - at_least[k]))
    return parts


@dataclass(frozen=True)
class CyclicDecomposition:
    generators: tuple
    exponents: tuple
    chains: tuple  # chains[i] = (x_i, x_i^[p], ..., x_i^[p]^(s_i - 1))

    @property
    def summand_dims(self) -> tuple:
        return tuple(len(c) for c in self.chains)

    def chain_basis(self) -> list[tuple]:
        return [v for chain in self.chains for v in chain]


def cyclic_decomposition(P: AlgebraPresentation) -> CyclicDecomposition:
    """Cyclic generators chosen top-down along the kernel chain of t.

    Level j (from the nilpotency index down) takes vectors of ker t^j that
    are independent modulo ker t^(j-1) plus the images of longer chains;
    each such vector generates a summand of length j.
    """
    S = as_semilinear(P)
    F, n = P.field, P.dim
    kernels = [Subspace.zero(F, n)]
    while kernels[-1].dim < n:
        kernels.append(S.kernel(len(kernels)))
        if kernels[-1].dim == kernels[-2].dim:
            raise NotPNilpotent("the p-map is not nilpotent")
    s = len(kernels) - 1
    chosen: dict[int, list[tuple]] = {}
    for j in range(s, 0, -1):
        covered = kernels[j - 1].add_vectors(
            S.apply(w, k - j) for k, ws in chosen.items() for w in ws
        )
        chosen[j] = covered.complement_basis(kernels[j])
    gens, exps, chains = [], [], []
    for j in range(s, 0, -1):
        for w in chosen[j]:
            gens.append(tuple(w))
            exps.append(j)
            chains.append(tuple(S.apply(w, i) for i in range(j)))
    dec = CyclicDecomposition(tuple(gens), tuple(exps), tuple(chains))
    basis = dec.chain_basis()
    if len(basis) != n or la.rank(F, basis, n) != n:
        raise AssertionError("cyclic summands do not form a direct sum decomposition")
    return dec


def exponent_multiset(P: AlgebraPresentation) -> tuple:
    return tuple(sorted(cyclic_decomposition(P).exponents, reverse=True))


def cyclic_algebra(F: FiniteField, exponents) -> AlgebraPresentation:
    """Abelian direct sum of chains x -> x^[p] -> ... -> 0 of the given lengths."""
    n = sum(exponents)
    pmap = []
    names = []
    off = 0
    for g, s in enumerate(exponents):
        for i in range(s):
            v = [0] * n
            if i + 1 < s:
                v[off + i + 1] = 1
            pmap.append(tuple(v))
            names.append(f"x{g + 1}" if i == 0 else f"x{g + 1}p{i}")
        off += s
    return AlgebraPresentation(F, n, {}, tuple(pmap), tuple(names))


def abelian_iso(P: AlgebraPresentation, Q: AlgebraPresentation) -> tuple[bool, IsoWitness | None]:
    """Compare exponent multisets; on a match return a replay-verified witness.

    The witness sends the i-th chain of P onto the i-th chain of Q, with the
    chains of both sides listed by descending length.
    """
    if P.field != Q.field:
        return False, None
    dp, dq = cyclic_decomposition(P), cyclic_decomposition(Q)
    if sorted(dp.exponents) != sorted(dq.exponents) or P.dim != Q.dim:
        return False, None
    F, n = P.field, P.dim
    if n == 0:
        return True, IsoWitness(P, Q, [])
    BP = la.from_columns([list(v) for v in dp.chain_basis()], n)
    BQ = la.from_columns([list(v) for v in dq.chain_basis()], n)
    W = la.mat_mul(F, BQ, la.mat_inv(F, BP))
    witness = IsoWitness(P, Q, W)
    if not witness.verify():
        raise AssertionError("abelian isomorphism witness failed replay")
    return True, witness


@dataclass(frozen=True)
class FittingDecomposition:
    invertible_part: Subspace
    nil_part: Subspace
    toral_spanned: bool | None  # invertible part spanned by fixed points x^[p] = x


_ENUM_LIMIT = 4096


def fitting_decomposition(P: AlgebraPresentation) -> FittingDecomposition:
    S = as_semilinear(P)
    F, n = P.field, P.dim
    nil = S.kernel(n) if n else Subspace.zero(F, n)
    inv = S.image(Subspace.full(F, n), n) if n else Subspace.zero(F, n)
    if inv.dim + nil.dim != n or not inv.intersect(nil).is_zero():
        raise AssertionError("Fitting parts do not split L")
    toral = None
    if F.q ** inv.dim <= _ENUM_LIMIT:
        fixed = []
        for coords in itertools.product(range(F.q), repeat=inv.dim):
            x = tuple(inv.combine(coords))
            if any(x) and S.apply(x) == x:
                fixed.append(x)
        toral = Subspace.span(F, n, fixed) == inv
    return FittingDecomposition(inv, nil, toral)


def rad(P: AlgebraPresentation) -> Subspace:
    """Span of the p-nilpotent elements (the nil Fitting part)."""
    return fitting_decomposition(P).nil_part


def toral_part(P: AlgebraPresentation) -> Subspace:
    """F-span of the fixed points x^[p] = x, by enumeration of the invertible part."""
    fd = fitting_decomposition(P)
    S = as_semilinear(P)
    F = P.field
    if F.q ** fd.invertible_part.dim > _ENUM_LIMIT:
        raise SizeLimit("too many elements to enumerate fixed points")
    inv = fd.invertible_part
    pts = (tuple(inv.combine(c)) for c in itertools.product(range(F.q), repeat=inv.dim))
    return Subspace.span(F, P.dim, (x for x in pts if S.apply(x) == x))


def is_bijective_on(S: SemilinearOperator, A: Subspace) -> bool:
    return S.image(A).dim == A.dim and S.image(A) == A


def is_nilpotent_on(S: SemilinearOperator, A: Subspace) -> bool:
    return S.image(A, A.dim).is_zero()

