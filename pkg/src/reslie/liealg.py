"""Restricted Lie algebras given by structure constants and basis p-powers.

Elements are coordinate sequences of encoded field elements with respect to
the presentation's basis.  Subspaces of L are :class:`~reslie.linalg.Subspace`
objects of ambient dimension ``P.dim``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from functools import cached_property, lru_cache
from typing import Sequence

from . import linalg as la
from .errors import NotAnIdeal, NotNilpotent, NotPNilpotent
from .field import FiniteField
from .linalg import Subspace

Vector = Sequence[int]


@dataclass(frozen=True, eq=False)
class AlgebraPresentation:
    """Structure constants [b_i, b_j] for i < j plus the p-map on each b_i.

    ``brackets`` maps ``(i, j)`` with ``i < j`` to the coordinate vector of
    [b_i, b_j]; missing pairs bracket to zero.  ``pmap[i]`` is the coordinate
    vector of b_i^[p].  ``weights`` is set on graded algebras only.
    """

    field: FiniteField
    dim: int
    brackets: dict = dc_field(default_factory=dict)
    pmap: tuple = ()
    names: tuple = ()
    weights: tuple | None = None

    def __post_init__(self):
        n = self.dim
        zero = (0,) * n
        object.__setattr__(self, "brackets", {
            (int(i), int(j)): tuple(v) for (i, j), v in self.brackets.items() if any(v)
        })
        pmap = tuple(tuple(v) for v in self.pmap) if self.pmap else (zero,) * n
        object.__setattr__(self, "pmap", pmap)
        if not self.names:
            object.__setattr__(self, "names", tuple(f"b{i + 1}" for i in range(n)))
        else:
            object.__setattr__(self, "names", tuple(self.names))
        if self.weights is not None:
            object.__setattr__(self, "weights", tuple(self.weights))

    @property
    def p(self) -> int:
        return self.field.p

    @cached_property
    def table(self) -> list[list[tuple | None]]:
        """Dense antisymmetric bracket table; None marks a zero bracket."""
        n, F = self.dim, self.field
        t = [[None] * n for _ in range(n)]
        for (i, j), v in self.brackets.items():
            if i == j or not (0 <= i < n and 0 <= j < n):
                continue
            t[i][j] = v
            t[j][i] = tuple(F.neg(a) for a in v)
        return t

    @cached_property
    def is_abelian(self) -> bool:
        return not self.brackets

    def zero(self) -> tuple:
        return (0,) * self.dim

    def basis_vector(self, i: int) -> tuple:
        return la.unit_vector(self.dim, i)

    def full(self) -> Subspace:
        return Subspace.full(self.field, self.dim)

    def zero_space(self) -> Subspace:
        return Subspace.zero(self.field, self.dim)

    def span(self, vectors) -> Subspace:
        return Subspace.span(self.field, self.dim, vectors)

    def structure_key(self):
        return (self.field.key, self.dim, tuple(sorted(self.brackets.items())), self.pmap)

    def __eq__(self, other):
        if not isinstance(other, AlgebraPresentation):
            return NotImplemented
        return self.structure_key() == other.structure_key() and self.names == other.names

    def __hash__(self):
        return hash(self.structure_key())

    def __repr__(self):
        return f"AlgebraPresentation(dim={self.dim}, field={self.field!r})"


# -- validation --------------------------------------------------------------

@dataclass
class ValidationReport:
    violations: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, axiom: str, witness):
        self.violations.append({"axiom": axiom, "witness": witness})

    def __bool__(self):
        return self.ok


def validate_presentation(P: AlgebraPresentation) -> ValidationReport:
    """Check shape, antisymmetry, Jacobi and ad(b^[p]) = ad(b)^p on the basis."""
    rep = ValidationReport()
    n, F = P.dim, P.field
    if len(P.pmap) != n:
        rep.add("shape", f"{len(P.pmap)} p-map entries for dimension {n}")
        return rep
    if len(P.names) != n or len(set(P.names)) != n:
        rep.add("shape", f"basis names must be {n} distinct labels")
    for (i, j), v in P.brackets.items():
        if not (0 <= i < n and 0 <= j < n):
            rep.add("shape", f"bracket index ({i}, {j}) out of range")
        elif i == j:
            rep.add("antisymmetry", {"basis": P.names[i], "bracket": list(v)})
        elif i > j:
            rep.add("shape", f"bracket entry ({i}, {j}) must have i < j")
        if len(v) != n or any(not (0 <= a < F.q) for a in v):
            rep.add("shape", f"bracket ({i}, {j}) is not a vector over {F!r} of length {n}")
    for i, v in enumerate(P.pmap):
        if len(v) != n or any(not (0 <= a < F.q) for a in v):
            rep.add("shape", f"p-map image of {P.names[i]} is not a vector of length {n}")
    if not rep.ok:
        return rep
    basis = [P.basis_vector(i) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                a = bracket(P, basis[i], bracket(P, basis[j], basis[k]))
                b = bracket(P, basis[j], bracket(P, basis[k], basis[i]))
                c = bracket(P, basis[k], bracket(P, basis[i], basis[j]))
                s = [F.add(F.add(x, y), z) for x, y, z in zip(a, b, c)]
                if any(s):
                    rep.add("jacobi", {"triple": [P.names[i], P.names[j], P.names[k]], "sum": s})
    for i in range(n):
        lhs = ad_matrix(P, P.pmap[i])
        rhs = la.mat_pow(F, ad_matrix(P, basis[i]), P.p)
        if lhs != rhs:
            rep.add("ad-compatibility", {"basis": P.names[i], "ad(b^[p])": lhs, "ad(b)^p": rhs})
    return rep


# -- element arithmetic ------------------------------------------------------

def add(P: AlgebraPresentation, u: Vector, v: Vector) -> tuple:
    F = P.field
    return tuple(F.add(a, b) for a, b in zip(u, v))


def sub(P: AlgebraPresentation, u: Vector, v: Vector) -> tuple:
    F = P.field
    return tuple(F.sub(a, b) for a, b in zip(u, v))


def scale(P: AlgebraPresentation, c: int, u: Vector) -> tuple:
    return tuple(P.field.scale(c, u))


def bracket(P: AlgebraPresentation, u: Vector, v: Vector) -> tuple:
    F, t = P.field, P.table
    out = [0] * P.dim
    for i, a in enumerate(u):
        if not a:
            continue
        row = t[i]
        for j, b in enumerate(v):
            if b and row[j] is not None:
                out = F.axpy(out, F.mul(a, b), row[j])
    return tuple(out)


def ad_matrix(P: AlgebraPresentation, x: Vector) -> list[list[int]]:
    """Matrix of y -> [x, y]; column j is [x, b_j]."""
    cols = [bracket(P, x, P.basis_vector(j)) for j in range(P.dim)]
    return la.from_columns(cols, P.dim)


def _jacobson_corrections(P: AlgebraPresentation, x: Vector, y: Vector) -> tuple:
    """Sum of s_i(x, y), where i*s_i is the lambda^(i-1) coefficient of ad(lambda x + y)^(p-1)(x)."""
    F, p = P.field, P.p
    poly = [tuple(x)]
    for _ in range(p - 1):
        new = [P.zero()] * (len(poly) + 1)
        for d, c in enumerate(poly):
            if not any(c):
                continue
            new[d + 1] = add(P, new[d + 1], bracket(P, x, c))
            new[d] = add(P, new[d], bracket(P, y, c))
        poly = new
    total = P.zero()
    for i in range(1, p):
        coef = poly[i - 1] if i - 1 < len(poly) else P.zero()
        if any(coef):
            total = add(P, total, scale(P, F.inv(F.from_int(i)), coef))
    return total


def p_power(P: AlgebraPresentation, x: Vector, e: int = 1) -> tuple:
    """x^([p]^e), expanding each single p-power along the basis by a left fold."""
    x = tuple(x)
    for _ in range(e):
        x = _p_power_once(P, x)
    return x


def _p_power_once(P: AlgebraPresentation, x: Vector) -> tuple:
    F = P.field
    acc = P.zero()
    acc_pow = P.zero()
    for i, a in enumerate(x):
        if not a:
            continue
        term = scale(P, a, P.basis_vector(i))
        term_pow = scale(P, F.frobenius(a, 1), P.pmap[i])
        if any(acc):
            if P.is_abelian:
                corr = P.zero()
            else:
                corr = _jacobson_corrections(P, acc, term)
            acc_pow = add(P, add(P, acc_pow, term_pow), corr)
        else:
            acc_pow = term_pow
        acc = add(P, acc, term)
    return acc_pow


def exponent(P: AlgebraPresentation, x: Vector) -> float:
    """Least s with x^([p]^s) = 0, or math.inf if the p-power orbit cycles."""
    x = tuple(x)
    seen = set()
    s = 0
    while any(x):
        if x in seen:
            return math.inf
        seen.add(x)
        x = _p_power_once(P, x)
        s += 1
    return s


# -- subspace constructions -------------------------------------------------

def bracket_space(P: AlgebraPresentation, A: Subspace, B: Subspace) -> Subspace:
    return P.span(bracket(P, a, b) for a in A.basis for b in B.basis)


def lower_central_series(P: AlgebraPresentation) -> list[Subspace]:
    """[gamma_1, gamma_2, ...] ending at 0 or at the stable nonzero term."""
    series = [P.full()]
    while not series[-1].is_zero():
        nxt = bracket_space(P, series[-1], P.full())
        if nxt.dim == series[-1].dim:
            break
        series.append(nxt)
    return series


def p_image(P: AlgebraPresentation, S: Subspace) -> Subspace:
    """Span of the p-powers of the basis vectors of S."""
    return P.span(_p_power_once(P, v) for v in S.basis)


def p_closure(P: AlgebraPresentation, S: Subspace) -> Subspace:
    """Restricted subalgebra generated by S.

    Brackets and p-powers of basis vectors are adjoined until the dimension
    stops growing; on a bracket-closed input only p-powers ever get added.
    """
    cur = S
    while True:
        vecs = [_p_power_once(P, v) for v in cur.basis]
        basis = cur.basis
        vecs.extend(bracket(P, basis[i], basis[j]) for i in range(len(basis)) for j in range(i + 1, len(basis)))
        nxt = cur.add_vectors(vecs)
        if nxt.dim == cur.dim:
            return cur
        cur = nxt


def ideal_closure(P: AlgebraPresentation, S: Subspace) -> Subspace:
    cur = S
    full = P.full()
    while True:
        nxt = cur + bracket_space(P, cur, full)
        if nxt.dim == cur.dim:
            return cur
        cur = nxt


def restricted_ideal_closure(P: AlgebraPresentation, S: Subspace) -> Subspace:
    cur = S
    while True:
        nxt = p_closure(P, ideal_closure(P, cur))
        if nxt.dim == cur.dim:
            return cur
        cur = nxt


def derived_p(P: AlgebraPresentation) -> Subspace:
    """L'_p: the restricted subalgebra generated by gamma_2, closed to an ideal."""
    gamma2 = bracket_space(P, P.full(), P.full())
    return restricted_ideal_closure(P, p_closure(P, gamma2))


def power_p_subalgebra(P: AlgebraPresentation, N: Subspace) -> Subspace:
    """N^p for a restricted subalgebra N, from the p-powers of a basis of N."""
    return p_closure(P, p_image(P, N))


def main_ideal(P: AlgebraPresentation) -> Subspace:
    """L'^p + gamma_3(L), closed to a restricted ideal (a no-op when nilpotent)."""
    gammas = lower_central_series(P)
    gamma2 = gammas[1] if len(gammas) > 1 else P.zero_space()
    gamma3 = bracket_space(P, gamma2, P.full())
    return restricted_ideal_closure(P, power_p_subalgebra(P, gamma2) + gamma3)


def center(P: AlgebraPresentation) -> Subspace:
    n, F = P.dim, P.field
    # x central iff ad(x) b_j = 0 for all j: stack the maps x -> [x, b_j].
    rows = []
    for j in range(n):
        bj = P.basis_vector(j)
        cols = [bracket(P, P.basis_vector(i), bj) for i in range(n)]
        rows.extend(la.from_columns(cols, n))
    if not rows:
        return P.full()
    return la.nullspace(F, rows, n)


def centralizer_dim(P: AlgebraPresentation, x: Vector) -> int:
    return P.dim - la.rank(P.field, ad_matrix(P, x), P.dim)


def _orbit(P: AlgebraPresentation, S: Subspace) -> tuple[list[Subspace], int]:
    """Distinct terms S, S^p, S^(p^2), ... of the p-image orbit and its preperiod.

    The orbit of subspaces is eventually periodic; terms from index
    ``preperiod`` on repeat cyclically (for p-nilpotent L the cycle is {0}).
    """
    seq: list[Subspace] = []
    index: dict[Subspace, int] = {}
    cur = S
    while cur not in index:
        index[cur] = len(seq)
        seq.append(cur)
        cur = p_image(P, cur)
    return seq, index[cur]


@lru_cache(maxsize=512)
def _gamma_orbits(P: AlgebraPresentation):
    return [_orbit(P, g) for g in lower_central_series(P) if not g.is_zero()]


def dimension_subalgebra(P: AlgebraPresentation, n: int) -> Subspace:
    """Sum of gamma_i(L)^(p^j) over all i, j with i * p^j >= n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return P.full()
    p = P.p
    total = P.zero_space()
    orbits = _gamma_orbits(P)
    for i, (seq, pre) in enumerate(orbits, start=1):
        j = 0
        while i * p ** j < n:
            j += 1
        for term in seq[min(j, pre):]:
            total = total + term
    if orbits and len(orbits) == len(lower_central_series(P)):
        # the last gamma is a nonzero stable term and stands for gamma_i, i >= n
        for term in orbits[-1][0]:
            total = total + term
    return total


def stable_index(P: AlgebraPresentation) -> int:
    """An n from which D_n no longer changes."""
    orbits = _gamma_orbits(P)
    bound = len(orbits) + 1
    for i, (seq, pre) in enumerate(orbits, start=1):
        bound = max(bound, i * P.p ** pre + 1)
    return bound


@lru_cache(maxsize=512)
def _dimension_series(P: AlgebraPresentation) -> tuple:
    out = [P.full()]
    last = stable_index(P)
    n = 1
    while not out[-1].is_zero() and n < last:
        n += 1
        out.append(dimension_subalgebra(P, n))
    return tuple(out)


def dimension_series(P: AlgebraPresentation) -> list[Subspace]:
    """[D_1, D_2, ..., D_m].

    D_m is 0 exactly when L is p-nilpotent; otherwise D_m is the stable
    nonzero term every later D_n equals.
    """
    return list(_dimension_series(P))


def height(P: AlgebraPresentation, x: Vector, series: list[Subspace] | None = None) -> float:
    """Largest n with x in D_n(L); math.inf when x lies in every D_n."""
    if not any(x):
        return math.inf
    series = series or dimension_series(P)
    h = 0
    for d in series:
        if d.contains(x):
            h += 1
        else:
            return h
    # x lies in the terminal term; it is zero only for p-nilpotent algebras
    return math.inf


def nilpotence_class(P: AlgebraPresentation) -> int:
    gammas = lower_central_series(P)
    if not gammas[-1].is_zero():
        raise NotNilpotent("lower central series stabilizes above zero")
    return len(gammas) - 1


def is_nilpotent(P: AlgebraPresentation) -> bool:
    return lower_central_series(P)[-1].is_zero()


def restricted_lower_central_series(P: AlgebraPresentation) -> list[Subspace]:
    """L = R_1, R_{k+1} = [R_k, L] + span(p-powers of R_k); ends at 0 or a repeat."""
    out = [P.full()]
    while not out[-1].is_zero():
        cur = out[-1]
        nxt = bracket_space(P, cur, P.full()) + p_image(P, cur)
        out.append(nxt)
        if nxt.dim == cur.dim:
            break
    return out


def is_p_nilpotent(P: AlgebraPresentation) -> bool:
    if any(exponent(P, P.basis_vector(i)) == math.inf for i in range(P.dim)):
        return False
    return restricted_lower_central_series(P)[-1].is_zero()


# -- ideals and quotients -----------------------------------------------------

class RestrictedIdeal:
    """A subspace verified to be an ideal closed under the p-map."""

    def __init__(self, P: AlgebraPresentation, space: Subspace):
        if space.ambient_dim != P.dim:
            raise NotAnIdeal("subspace lives in the wrong ambient space")
        if not bracket_space(P, space, P.full()) <= space:
            raise NotAnIdeal("[I, L] is not contained in I")
        if not p_image(P, space) <= space:
            raise NotAnIdeal("I is not closed under the p-map")
        self.parent = P
        self.space = space

    @property
    def dim(self):
        return self.space.dim


@dataclass(frozen=True, eq=False)
class QuotientMap:
    """Projection L -> L/I on the complement spanned by non-pivot unit vectors."""

    source: AlgebraPresentation
    ideal: Subspace
    target: AlgebraPresentation
    free_cols: tuple

    def project(self, v: Vector) -> tuple:
        r = self.ideal.reduce(v)
        return tuple(r[c] for c in self.free_cols)

    def lift(self, w: Vector) -> tuple:
        out = [0] * self.source.dim
        for c, a in zip(self.free_cols, w):
            out[c] = a
        return tuple(out)


def quotient_map(P: AlgebraPresentation, I) -> QuotientMap:
    if not isinstance(I, RestrictedIdeal):
        I = RestrictedIdeal(P, I)
    ideal = I.space
    pivots = set(ideal.pivot_cols)
    free = tuple(c for c in range(P.dim) if c not in pivots)
    m = len(free)
    qm = QuotientMap(P, ideal, None, free)  # type: ignore[arg-type]
    brackets = {}
    for a in range(m):
        for b in range(a + 1, m):
            v = qm.project(bracket(P, P.basis_vector(free[a]), P.basis_vector(free[b])))
            if any(v):
                brackets[(a, b)] = v
    pmap = tuple(qm.project(P.pmap[c]) for c in free)
    Q = AlgebraPresentation(P.field, m, brackets, pmap, tuple(P.names[c] for c in free))
    return QuotientMap(P, ideal, Q, free)


def quotient(P: AlgebraPresentation, I) -> AlgebraPresentation:
    return quotient_map(P, I).target


# -- graded algebra ----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GradedData:
    algebra: AlgebraPresentation
    series: list
    lifts: list  # lift (in L) of each basis vector of gr(L)


def graded_data(P: AlgebraPresentation) -> GradedData:
    series = dimension_series(P)
    if not series[-1].is_zero():
        raise NotPNilpotent("dimension series does not reach zero")
    pieces = []  # (weight, lifts, subspace D_i, D_{i+1})
    for i in range(len(series) - 1):
        lifts = series[i + 1].complement_basis(series[i])
        pieces.append((i + 1, lifts))
    lifts_all, weights = [], []
    for w, lifts in pieces:
        lifts_all.extend(lifts)
        weights.extend([w] * len(lifts))
    n = len(lifts_all)
    offsets = {}
    pos = 0
    for w, lifts in pieces:
        offsets[w] = pos
        pos += len(lifts)

    def graded_coords(v, w):
        """Coordinates of v in D_w / D_{w+1} placed in the weight-w block."""
        out = [0] * n
        if w >= len(series) or not any(v):
            return tuple(out)
        top, below = series[w - 1], series[w]
        lifts = dict(pieces)[w]
        # solve v = sum c_k lifts_k mod below
        sol = la.solve(P.field, la.from_columns([list(x) for x in lifts] + list(map(list, below.basis)), P.dim), list(v))
        if sol is None:
            raise AssertionError("element outside the expected filtration step")
        for k, c in enumerate(sol[:len(lifts)]):
            out[offsets[w] + k] = c
        assert top.contains(v)
        return tuple(out)

    brackets = {}
    for a in range(n):
        for b in range(a + 1, n):
            w = weights[a] + weights[b]
            v = bracket(P, lifts_all[a], lifts_all[b])
            if w < len(series) and any(series[w].reduce(v)):
                brackets[(a, b)] = graded_coords(v, w)
    pmap = []
    for a in range(n):
        w = P.p * weights[a]
        v = _p_power_once(P, lifts_all[a])
        if w < len(series) and any(series[w].reduce(v)):
            pmap.append(graded_coords(v, w))
        else:
            pmap.append((0,) * n)
    names = tuple(f"g{weights[a]}_{a + 1}" for a in range(n))
    G = AlgebraPresentation(P.field, n, brackets, tuple(pmap), names, tuple(weights))
    return GradedData(G, series, lifts_all)


def graded(P: AlgebraPresentation) -> AlgebraPresentation:
    return graded_data(P).algebra


# -- basis changes, sums and isomorphism witnesses ------------------------------

def change_basis(P: AlgebraPresentation, M) -> AlgebraPresentation:
    """Presentation in the basis whose i-th vector is column i of M."""
    F, n = P.field, P.dim
    cols = la.columns(M) if n else []
    Minv = la.mat_inv(F, M) if n else []
    brackets = {}
    for i in range(n):
        for j in range(i + 1, n):
            v = la.mat_vec(F, Minv, bracket(P, cols[i], cols[j]))
            if any(v):
                brackets[(i, j)] = tuple(v)
    pmap = tuple(tuple(la.mat_vec(F, Minv, p_power(P, cols[i]))) for i in range(n))
    return AlgebraPresentation(F, n, brackets, pmap, P.names)


def direct_sum(*algebras: AlgebraPresentation) -> AlgebraPresentation:
    F = algebras[0].field
    n = sum(A.dim for A in algebras)
    brackets, pmap, names = {}, [], []
    off = 0
    for k, A in enumerate(algebras):
        if A.field != F:
            raise ValueError("direct summands over different fields")

        def emb(v, off=off):
            out = [0] * n
            out[off:off + A.dim] = v
            return tuple(out)

        for (i, j), v in A.brackets.items():
            brackets[(i + off, j + off)] = emb(v)
        pmap.extend(emb(v) for v in A.pmap)
        names.extend(f"{nm}_{k + 1}" if len(algebras) > 1 else nm for nm in A.names)
        off += A.dim
    return AlgebraPresentation(F, n, brackets, tuple(pmap), tuple(names))


@dataclass(frozen=True, eq=False)
class IsoWitness:
    """Invertible matrix whose column i is the image of the i-th basis vector."""

    source: AlgebraPresentation
    target: AlgebraPresentation
    matrix: list

    def apply(self, v: Vector) -> tuple:
        return tuple(la.mat_vec(self.source.field, self.matrix, v))

    def verify(self) -> bool:
        return verify_isomorphism(self.source, self.target, self.matrix)


def verify_isomorphism(P: AlgebraPresentation, Q: AlgebraPresentation, M) -> bool:
    """Replay: M bijective, M[x,y] = [Mx,My], M(x^[p]) = (Mx)^[p] on the basis."""
    if P.field != Q.field or P.dim != Q.dim:
        return False
    F, n = P.field, P.dim
    if n == 0:
        return True
    if len(M) != n or any(len(r) != n for r in M) or la.rank(F, M, n) != n:
        return False
    cols = la.columns(M)
    for i in range(n):
        for j in range(i + 1, n):
            lhs = la.mat_vec(F, M, bracket(P, P.basis_vector(i), P.basis_vector(j)))
            if tuple(lhs) != bracket(Q, cols[i], cols[j]):
                return False
        if tuple(la.mat_vec(F, M, P.pmap[i])) != p_power(Q, cols[i]):
            return False
    return True
