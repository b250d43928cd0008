"""The restricted enveloping algebra u(L) on its PBW basis.

Basis monomials are exponent tuples (a_1, ..., a_n) with 0 <= a_i < p,
ordered by degree and then with larger leading exponents first.  Elements of
u(L) are sparse dicts {monomial index: encoded coefficient}.  Products are
obtained by straightening: a monomial times a generator is rewritten using
e_j e_i = e_i e_j + [e_j, e_i] and e_i^p = e_i^[p].
"""
from __future__ import annotations

import itertools
import math
import threading
from dataclasses import dataclass, field as dc_field

from . import linalg as la
from . import liealg
from .abelian import cyclic_decomposition
from .errors import NotPNilpotent
from .liealg import AlgebraPresentation, ValidationReport
from .linalg import Subspace


def _acc(F, out: dict, vec: dict, c: int = 1) -> dict:
    """out += c * vec, in place."""
    if c == 0:
        return out
    add, mul = F.add, F.mul
    for k, a in vec.items():
        v = add(out.get(k, 0), a if c == 1 else mul(c, a))
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


class PBWAlgebra:
    """u(L) for a validated presentation, with memoized straightening."""

    def __init__(self, P: AlgebraPresentation):
        n, p = P.dim, P.p
        la.check_size(p ** n)
        self.algebra = P
        self.field = P.field
        self.n = n
        self.p = p
        mons = sorted(itertools.product(range(p), repeat=n), key=lambda a: (sum(a), [-x for x in a]))
        self.monomials: list[tuple] = mons
        self.index = {m: i for i, m in enumerate(mons)}
        self.dim = len(mons)
        self.degree = [sum(m) for m in mons]
        self.gen_index = [self.index[la.unit_vector(n, i)] for i in range(n)]
        self.unit = self.index[(0,) * n]
        self._right: dict = {}
        self._prod: dict = {}
        self._omega: list[Subspace] | None = None
        # results are deterministic, so the lock only keeps the memo tables tidy
        self._lock = threading.Lock()

    # -- straightening ------------------------------------------------------

    def _lie_vec(self, v) -> dict:
        return {self.gen_index[l]: c for l, c in enumerate(v) if c}

    def mono_times_gen(self, m: int, i: int) -> dict:
        key = (m, i)
        hit = self._right.get(key)
        if hit is not None:
            return hit
        res = self._mono_times_gen(m, i)
        with self._lock:
            self._right[key] = res
        return res

    def _mono_times_gen(self, m: int, i: int) -> dict:
        F, p = self.field, self.p
        a = list(self.monomials[m])
        j = max((t for t, x in enumerate(a) if x), default=-1)
        if j <= i:
            if a[i] + 1 < p:
                a[i] += 1
                return {self.index[tuple(a)]: 1}
            a[i] = 0
            base = self.index[tuple(a)]
            out: dict = {}
            for l, c in enumerate(self.algebra.pmap[i]):
                if c:
                    _acc(F, out, self.mono_times_gen(base, l), c)
            return out
        # m = m0 * e_j with j > i:  m0 e_j e_i = (m0 e_i) e_j + m0 [e_j, e_i]
        a[j] -= 1
        m0 = self.index[tuple(a)]
        out = self.vec_times_gen(self.mono_times_gen(m0, i), j)
        br = self.algebra.table[j][i]
        if br is not None:
            for l, c in enumerate(br):
                if c:
                    _acc(F, out, self.mono_times_gen(m0, l), c)
        return out

    def vec_times_gen(self, vec: dict, i: int) -> dict:
        out: dict = {}
        for m, c in vec.items():
            _acc(self.field, out, self.mono_times_gen(m, i), c)
        return out

    def mono_mul(self, m1: int, m2: int) -> dict:
        key = (m1, m2)
        hit = self._prod.get(key)
        if hit is not None:
            return hit
        vec = {m1: 1}
        for g, e in enumerate(self.monomials[m2]):
            for _ in range(e):
                vec = self.vec_times_gen(vec, g)
        with self._lock:
            self._prod[key] = vec
        return vec

    # -- element arithmetic ---------------------------------------------------

    def one(self) -> dict:
        return {self.unit: 1}

    def gen(self, i: int) -> dict:
        return {self.gen_index[i]: 1}

    def embed(self, x) -> dict:
        """Image of an element of L (coordinate vector) in u(L)."""
        return self._lie_vec(x)

    def monomial(self, exps) -> dict:
        return {self.index[tuple(exps)]: 1}

    def add(self, u: dict, v: dict) -> dict:
        return _acc(self.field, dict(u), v)

    def sub(self, u: dict, v: dict) -> dict:
        return _acc(self.field, dict(u), v, self.field.neg(1))

    def scale(self, c: int, u: dict) -> dict:
        return _acc(self.field, {}, u, c)

    def mul(self, u: dict, v: dict) -> dict:
        F = self.field
        out: dict = {}
        for a, ca in u.items():
            for b, cb in v.items():
                _acc(F, out, self.mono_mul(a, b), F.mul(ca, cb))
        return out

    def power(self, u: dict, e: int) -> dict:
        out = self.one()
        for _ in range(e):
            out = self.mul(out, u)
        return out

    def commutator(self, u: dict, v: dict) -> dict:
        return self.sub(self.mul(u, v), self.mul(v, u))

    def augmentation(self, u: dict) -> int:
        return u.get(self.unit, 0)

    def to_dense(self, u: dict) -> list[int]:
        out = [0] * self.dim
        for k, c in u.items():
            out[k] = c
        return out

    def from_dense(self, v) -> dict:
        return {k: c for k, c in enumerate(v) if c}

    def span(self, elements) -> Subspace:
        return Subspace.span(self.field, self.dim, (self.to_dense(u) for u in elements))

    def lie_subspace(self, S: Subspace) -> Subspace:
        """Embedded copy of a subspace of L."""
        return self.span(self.embed(v) for v in S.basis)

    def to_lie(self, v) -> tuple:
        """L-coordinates of an element supported on degree-one monomials."""
        u = v if isinstance(v, dict) else self.from_dense(v)
        coords = [0] * self.n
        for l, g in enumerate(self.gen_index):
            coords[l] = u.get(g, 0)
        if any(k not in self.gen_index for k in u):
            raise ValueError("element is not in the image of L")
        return tuple(coords)

    def format(self, u: dict) -> str:
        names = self.algebra.names
        F = self.field
        terms = []
        for k in sorted(u):
            mono = "*".join(
                (names[i] if e == 1 else f"{names[i]}^{e}") for i, e in enumerate(self.monomials[k]) if e
            ) or "1"
            c = u[k]
            terms.append(mono if c == 1 else f"{F.format(c)}*{mono}")
        return " + ".join(terms) or "0"

    # -- augmentation filtration ---------------------------------------------

    @property
    def nonunit(self) -> range:
        return range(1, self.dim)

    def omega_chain(self) -> list[Subspace]:
        """[omega^1, omega^2, ...] ending at 0 or at the stable nonzero power.

        omega^k is spanned by products of at least k elements of L, so
        omega^(k+1) = omega^k * L.
        """
        if self._omega is None:
            F, N = self.field, self.dim
            chain = [Subspace.span(F, N, (la.unit_vector(N, k) for k in range(N) if k != self.unit))]
            while not chain[-1].is_zero():
                cur = chain[-1]
                prods = (self.to_dense(self.vec_times_gen(self.from_dense(row), i))
                         for row in cur.basis for i in range(self.n))
                nxt = Subspace.span(F, N, prods)
                if nxt.dim == cur.dim:
                    break
                chain.append(nxt)
            self._omega = chain
        return self._omega

    def augmentation_power(self, k: int) -> Subspace:
        if k < 1:
            raise ValueError("k must be >= 1")
        chain = self.omega_chain()
        return chain[min(k, len(chain)) - 1]

    def nilpotency_index(self) -> float:
        """Least k with omega^k = 0, or math.inf."""
        chain = self.omega_chain()
        return len(chain) if chain[-1].is_zero() else math.inf

    def omega_dims(self) -> list[int]:
        return [s.dim for s in self.omega_chain()]

    def left_ideal_product(self, left, right) -> Subspace:
        """Span of all products a*b, a from ``left``, b from ``right`` (elements)."""
        right = list(right)
        return self.span(self.mul(a, b) for a in left for b in right)

    def monomial_elements(self, include_unit=True) -> list[dict]:
        return [{k: 1} for k in range(self.dim) if include_unit or k != self.unit]


def build_env(P: AlgebraPresentation) -> PBWAlgebra:
    return PBWAlgebra(P)


def augmentation_power(U: PBWAlgebra, k: int) -> Subspace:
    return U.augmentation_power(k)


def nilpotency_index(U: PBWAlgebra) -> float:
    return U.nilpotency_index()


def dimension_subalgebra_oracle(U: PBWAlgebra, n: int) -> Subspace:
    """L meet omega^n, read back in L-coordinates."""
    P = U.algebra
    Lsub = U.lie_subspace(P.full())
    meet = Lsub.intersect(U.augmentation_power(n)) if n > 1 else Lsub
    return P.span(U.to_lie(v) for v in meet.basis)


# -- J_L and the Nu(L) identity ------------------------------------------------

def _two_sided(U: PBWAlgebra, lie_vectors) -> Subspace:
    gens = [U.embed(v) for v in lie_vectors]
    omega = U.monomial_elements(include_unit=False)
    return U.span(itertools.chain(
        (U.mul(w, l) for l in gens for w in omega),
        (U.mul(l, w) for l in gens for w in omega),
    ))


def jl_subspace(U: PBWAlgebra, check: bool = True) -> Subspace:
    """omega L' + L' omega; with ``check`` also compares against L'_p."""
    P = U.algebra
    gamma2 = liealg.bracket_space(P, P.full(), P.full())
    J = _two_sided(U, gamma2.basis)
    if check:
        Jp = _two_sided(U, liealg.derived_p(P).basis)
        if Jp != J:
            raise AssertionError("omega L' + L' omega differs from omega L'_p + L'_p omega")
    return J


def ideal_generated(U: PBWAlgebra, S: Subspace) -> Subspace:
    """S u(L) for a subspace S of L."""
    gens = [U.embed(v) for v in S.basis]
    return U.span(U.mul(l, m) for l in gens for m in U.monomial_elements())


def n_quotient_dims(U: PBWAlgebra, N: Subspace) -> tuple[int, int]:
    """(dim N u(L) - dim(omega N + N omega), dim N - dim([N, L] + N^p))."""
    P = U.algebra
    Nu = ideal_generated(U, N)
    wN = _two_sided(U, N.basis)
    lhs = Nu.dim - wN.dim
    inner = liealg.bracket_space(P, N, P.full()) + liealg.power_p_subalgebra(P, N)
    rhs = N.dim - inner.dim
    return lhs, rhs


def nu_intersection(U: PBWAlgebra, N: Subspace) -> tuple[Subspace, Subspace]:
    """Both sides of L meet ([N, L] + N omega) = [N, L] + N^p, in L-coordinates."""
    P = U.algebra
    NL = liealg.bracket_space(P, N, P.full())
    gens = [U.embed(v) for v in N.basis]
    omega = U.monomial_elements(include_unit=False)
    big = U.lie_subspace(NL).add_vectors(U.to_dense(U.mul(l, w)) for l in gens for w in omega)
    meet = U.lie_subspace(P.full()).intersect(big)
    lhs = P.span(U.to_lie(v) for v in meet.basis)
    rhs = NL + liealg.power_p_subalgebra(P, N)
    return lhs, rhs


# -- heights, weights and weighted bases ---------------------------------------

def height(U: PBWAlgebra, x) -> float:
    return liealg.height(U.algebra, x)


def monomial_weight(heights, exps) -> float:
    return sum(a * h for a, h in zip(exps, heights) if a)


def height_and_weight(U: PBWAlgebra, x) -> float:
    """Height of an L-element (tuple of length n) or weight of a monomial (dict)."""
    if isinstance(x, dict):
        P = U.algebra
        hs = [liealg.height(P, P.basis_vector(i)) for i in range(P.dim)]
        if len(x) != 1:
            raise ValueError("weight is defined for single monomials")
        (k,) = x
        return monomial_weight(hs, U.monomials[k])
    return height(U, x)


def weighted_basis(P: AlgebraPresentation) -> tuple[list[tuple], list[int]]:
    """Lifts of a homogeneous basis of gr(L) and their heights."""
    data = liealg.graded_data(P)
    return data.lifts, list(data.algebra.weights)


def weight_count(weights, p: int, k: int) -> int:
    """Number of exponent tuples (a_i < p) with sum a_i w_i >= k."""
    return sum(1 for a in itertools.product(range(p), repeat=len(weights))
               if sum(x * w for x, w in zip(a, weights)) >= k)


def ordered_product(U: PBWAlgebra, factors, exps) -> dict:
    out = U.one()
    for f, e in zip(factors, exps):
        for _ in range(e):
            out = U.mul(out, f)
    return out


def weighted_monomial_space(U: PBWAlgebra, Z, weights, k: int) -> Subspace:
    """Span of ordered PBW monomials in Z of weight >= k."""
    factors = [U.embed(z) for z in Z]
    return U.span(ordered_product(U, factors, a)
                  for a in itertools.product(range(U.p), repeat=len(Z))
                  if sum(x * w for x, w in zip(a, weights)) >= k)


# -- the E-space ---------------------------------------------------------------

def lift_quotient_basis(P: AlgebraPresentation) -> list[tuple]:
    """Representatives X of the chain basis e_i^(p^j) of L / L'_p."""
    qm = liealg.quotient_map(P, liealg.derived_p(P))
    dec = cyclic_decomposition(qm.target)
    return [qm.lift(v) for v in dec.chain_basis()]


def e_space(U: PBWAlgebra, X=None, J: Subspace | None = None) -> Subspace:
    """J_L plus every PBW monomial of degree >= 2 in the lifted basis X."""
    P = U.algebra
    if X is None:
        X = lift_quotient_basis(P)
    if J is None:
        J = jl_subspace(U, check=False)
    factors = [U.embed(x) for x in X]
    mons = (ordered_product(U, factors, a)
            for a in itertools.product(range(U.p), repeat=len(X)) if sum(a) >= 2)
    return J.add_vectors(U.to_dense(m) for m in mons)


@dataclass
class DecompositionCheck:
    omega_is_L_plus_E: bool
    L_plus_J_meet_E_is_J: bool
    E_meet_Lp_u_is_J: bool
    direct_sum_mod_J: bool
    dims: dict = dc_field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return (self.omega_is_L_plus_E and self.L_plus_J_meet_E_is_J
                and self.E_meet_Lp_u_is_J and self.direct_sum_mod_J)


def check_e_decomposition(U: PBWAlgebra, E: Subspace | None = None, J: Subspace | None = None) -> DecompositionCheck:
    P = U.algebra
    J = J if J is not None else jl_subspace(U, check=False)
    E = E if E is not None else e_space(U, J=J)
    Lsub = U.lie_subspace(P.full())
    omega = U.augmentation_power(1)
    LJ = Lsub + J
    LpU = ideal_generated(U, liealg.derived_p(P))
    dims = {"omega": omega.dim, "L+J": LJ.dim, "E": E.dim, "J": J.dim}
    return DecompositionCheck(
        omega_is_L_plus_E=(Lsub + E) == omega,
        L_plus_J_meet_E_is_J=LJ.intersect(E) == J,
        E_meet_Lp_u_is_J=E.intersect(LpU) == J,
        direct_sum_mod_J=omega.dim - J.dim == (LJ.dim - J.dim) + (E.dim - J.dim),
        dims=dims,
    )


def verify_e_centrality(U: PBWAlgebra, E: Subspace | None = None, J: Subspace | None = None) -> ValidationReport:
    """[E, omega] inside J_L and v^p in E for every basis vector v of E."""
    P = U.algebra
    if not liealg.is_p_nilpotent(P):
        raise NotPNilpotent("E/J_L centrality needs a p-nilpotent algebra")
    J = J if J is not None else jl_subspace(U, check=False)
    E = E if E is not None else e_space(U, J=J)
    rep = ValidationReport()
    omega = U.monomial_elements(include_unit=False)
    for row in E.basis:
        u = U.from_dense(row)
        for w in omega:
            c = U.commutator(u, w)
            if c and not J.contains(U.to_dense(c)):
                rep.add("central", {"e": U.format(u), "w": U.format(w), "commutator": U.format(c)})
                break
        up = U.power(u, U.p)
        if up and not E.contains(U.to_dense(up)):
            rep.add("p-closed", {"e": U.format(u), "power": U.format(up)})
    return rep


# -- maps induced by a change of Lie basis ------------------------------------

def induced_map(U: PBWAlgebra, V: PBWAlgebra, M):
    """Algebra map u(Q) -> u(P) for Q = change_basis(P, M), on dense vectors.

    ``U`` is u(P) and ``V`` is u(Q); the i-th generator of Q goes to column
    i of M embedded in u(P), and PBW monomials go to ordered products.
    """
    cols = la.columns(M) if M else []
    factors = [U.embed(tuple(c)) for c in cols]
    images = [U.to_dense(ordered_product(U, factors, a)) for a in V.monomials]
    F = U.field

    def apply(vec) -> list[int]:
        out = [0] * U.dim
        for c, img in zip(vec, images):
            if c:
                out = F.axpy(out, c, img)
        return out

    def image(S: Subspace) -> Subspace:
        return Subspace.span(F, U.dim, (apply(r) for r in S.basis))

    return apply, image


def filtration_piece(U: PBWAlgebra, n: int) -> Subspace:
    """D_n(L) + omega^(n+1)(L) inside u(L)."""
    P = U.algebra
    return U.lie_subspace(liealg.dimension_subalgebra(P, n)) + U.augmentation_power(n + 1)


# -- invariant fingerprint -----------------------------------------------------

@dataclass(frozen=True)
class InvariantFingerprint:
    """Invariants of L that depend only on u(L) up to isomorphism."""

    field_modulus: tuple
    omega_dims: tuple
    dim_quotients: tuple
    jl_dim: int
    l_mod_lp_exponents: tuple
    main_quotient_dim: int
    main_quotient_class_id: str
    gr_class_id: str
    nilpotency_index_omega: int
    # dimension data only: dim D_n / D_(2n+1) and dim D_n / D_(n+2) for n >= 1
    d_n_mod_d_2n1: tuple
    d_n_mod_d_n2: tuple

    def to_dict(self) -> dict:
        return {
            "field_modulus": list(self.field_modulus),
            "omega_dims": list(self.omega_dims),
            "dim_quotients": list(self.dim_quotients),
            "jl_dim": self.jl_dim,
            "l_mod_lp_exponents": list(self.l_mod_lp_exponents),
            "main_quotient_dim": self.main_quotient_dim,
            "main_quotient_class_id": self.main_quotient_class_id,
            "gr_class_id": self.gr_class_id,
            "nilpotency_index_omega": self.nilpotency_index_omega,
            "partial": {
                "d_n_mod_d_2n1": list(self.d_n_mod_d_2n1),
                "d_n_mod_d_n2": list(self.d_n_mod_d_n2),
            },
        }

    def differences(self, other: "InvariantFingerprint") -> list[str]:
        a, b = self.to_dict(), other.to_dict()
        return sorted(k for k in a if a[k] != b[k])


def fingerprint(P: AlgebraPresentation, U: PBWAlgebra | None = None) -> InvariantFingerprint:
    from .abelian import exponent_multiset
    from .canonical import canonical_id

    if not liealg.is_p_nilpotent(P):
        raise NotPNilpotent("fingerprint needs a p-nilpotent algebra")
    U = U or PBWAlgebra(P)
    series = liealg.dimension_series(P)
    dims = [d.dim for d in series]

    def D(n):
        return dims[n - 1] if n <= len(dims) else 0

    top = len(dims)
    main = liealg.main_ideal(P)
    mq = liealg.quotient(P, main)
    return InvariantFingerprint(
        field_modulus=tuple(P.field.modulus),
        omega_dims=tuple(U.omega_dims()),
        dim_quotients=tuple(D(n) - D(n + 1) for n in range(1, top)),
        jl_dim=jl_subspace(U, check=False).dim,
        l_mod_lp_exponents=exponent_multiset(liealg.quotient(P, liealg.derived_p(P))),
        main_quotient_dim=mq.dim,
        main_quotient_class_id=canonical_id(mq),
        gr_class_id=canonical_id(liealg.graded(P)),
        nilpotency_index_omega=U.nilpotency_index(),
        d_n_mod_d_2n1=tuple(D(n) - D(2 * n + 1) for n in range(1, top)),
        d_n_mod_d_n2=tuple(D(n) - D(n + 2) for n in range(1, top)),
    )
