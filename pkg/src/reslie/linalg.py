"""Exact dense linear algebra over a :class:`~reslie.field.FiniteField`.

Vectors are sequences of encoded field elements and matrices are lists of
rows.  Subspaces are kept in reduced row-echelon form with pivots scaled to
one, so two subspaces are equal exactly when their bases are identical.
"""
from __future__ import annotations

from typing import Iterable, Sequence

from .errors import AmbientMismatch, SizeLimit
from .field import FiniteField

# 3**10 columns; anything wider is refused.
MAX_AMBIENT = 59049


def check_size(n: int) -> None:
    if n > MAX_AMBIENT:
        raise SizeLimit(f"ambient dimension {n} exceeds the supported limit {MAX_AMBIENT}")


class _Echelon:
    """Incremental reduced row-echelon builder."""

    __slots__ = ("F", "n", "rows")

    def __init__(self, F: FiniteField, n: int, rows=None):
        self.F = F
        self.n = n
        self.rows: dict[int, list[int]] = dict(rows or {})

    def reduce(self, v) -> list[int]:
        v = list(v)
        F = self.F
        for c, row in self.rows.items():
            a = v[c]
            if a:
                v = F.axpy(v, F.neg(a), row)
        return v

    def add(self, v) -> bool:
        """Insert v; return True when it was independent of the current rows."""
        v = self.reduce(v)
        piv = next((i for i, a in enumerate(v) if a), None)
        if piv is None:
            return False
        F = self.F
        lead = v[piv]
        if lead != 1:
            v = F.scale(F.inv(lead), v)
        for c, row in self.rows.items():
            a = row[piv]
            if a:
                self.rows[c] = F.axpy(row, F.neg(a), v)
        self.rows[piv] = v
        return True

    @property
    def rank(self):
        return len(self.rows)

    def subspace(self) -> "Subspace":
        pivots = tuple(sorted(self.rows))
        basis = tuple(tuple(self.rows[c]) for c in pivots)
        return Subspace(self.F, self.n, basis, pivots, _trusted=True)


class Subspace:
    """A subspace of F^n stored by its canonical reduced echelon basis."""

    __slots__ = ("field", "ambient_dim", "basis", "pivot_cols", "_hash")

    def __init__(self, field, ambient_dim, basis=(), pivot_cols=None, _trusted=False):
        self.field = field
        self.ambient_dim = ambient_dim
        if _trusted:
            self.basis = basis
            self.pivot_cols = pivot_cols
        else:
            ech = _Echelon(field, ambient_dim)
            for v in basis:
                if len(v) != ambient_dim:
                    raise AmbientMismatch(f"vector of length {len(v)} in F^{ambient_dim}")
                ech.add(v)
            s = ech.subspace()
            self.basis, self.pivot_cols = s.basis, s.pivot_cols
        self._hash = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, field, n):
        return cls(field, n, (), (), _trusted=True)

    @classmethod
    def full(cls, field, n):
        return cls(field, n, tuple(unit_vector(n, i) for i in range(n)), tuple(range(n)), _trusted=True)

    @classmethod
    def span(cls, field, n, vectors: Iterable[Sequence[int]]):
        check_size(n)
        ech = _Echelon(field, n)
        for v in vectors:
            if len(v) != n:
                raise AmbientMismatch(f"vector of length {len(v)} in F^{n}")
            ech.add(v)
        return ech.subspace()

    # -- basic queries ----------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)

    def is_zero(self) -> bool:
        return not self.basis

    def is_full(self) -> bool:
        return len(self.basis) == self.ambient_dim

    def _echelon(self) -> _Echelon:
        return _Echelon(self.field, self.ambient_dim, dict(zip(self.pivot_cols, (list(r) for r in self.basis))))

    def _check(self, other: "Subspace"):
        if self.ambient_dim != other.ambient_dim or self.field != other.field:
            raise AmbientMismatch(f"F^{self.ambient_dim} vs F^{other.ambient_dim}")

    def reduce(self, v) -> list[int]:
        """Canonical representative of v modulo this subspace."""
        if len(v) != self.ambient_dim:
            raise AmbientMismatch(f"vector of length {len(v)} in F^{self.ambient_dim}")
        F = self.field
        v = list(v)
        for c, row in zip(self.pivot_cols, self.basis):
            a = v[c]
            if a:
                v = F.axpy(v, F.neg(a), row)
        return v

    def contains(self, v) -> bool:
        return not any(self.reduce(v))

    __contains__ = contains

    def coordinates(self, v) -> list[int]:
        """Coefficients of v in the echelon basis; v must lie in the subspace."""
        if not self.contains(v):
            raise ValueError("vector is not in the subspace")
        return [v[c] for c in self.pivot_cols]

    def combine(self, coords) -> list[int]:
        F = self.field
        out = [0] * self.ambient_dim
        for c, row in zip(coords, self.basis):
            if c:
                out = F.axpy(out, c, row)
        return out

    def __le__(self, other: "Subspace") -> bool:
        self._check(other)
        return all(other.contains(v) for v in self.basis)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.ambient_dim == other.ambient_dim and self.field == other.field
                and self.basis == other.basis)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ambient_dim, self.basis))
        return self._hash

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"

    # -- lattice ----------------------------------------------------------

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if other.dim > self.dim:
            self, other = other, self
        ech = self._echelon()
        for v in other.basis:
            ech.add(v)
        return ech.subspace()

    def add_vectors(self, vectors) -> "Subspace":
        ech = self._echelon()
        for v in vectors:
            if len(v) != self.ambient_dim:
                raise AmbientMismatch(f"vector of length {len(v)} in F^{self.ambient_dim}")
            ech.add(v)
        return ech.subspace()

    def intersect(self, other: "Subspace") -> "Subspace":
        """Zassenhaus: echelonize [A|A] over [B|0]; zero-left rows span A meet B."""
        self._check(other)
        n = self.ambient_dim
        if self.is_zero() or other.is_zero():
            return Subspace.zero(self.field, n)
        if self.is_full():
            return other
        if other.is_full():
            return self
        ech = _Echelon(self.field, 2 * n)
        for v in self.basis:
            ech.add(list(v) + list(v))
        for v in other.basis:
            ech.add(list(v) + [0] * n)
        meet = [row[n:] for c, row in ech.rows.items() if c >= n]
        return Subspace.span(self.field, n, meet)

    __and__ = intersect

    def complement_basis(self, within: "Subspace | None" = None) -> list[tuple[int, ...]]:
        """Rows of ``within`` (default: standard basis) independent modulo self."""
        rows = within.basis if within is not None else [unit_vector(self.ambient_dim, i) for i in range(self.ambient_dim)]
        ech = self._echelon()
        return [tuple(v) for v in rows if ech.add(v)]


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    return a + b


def subspace_intersect(a: Subspace, b: Subspace) -> Subspace:
    return a.intersect(b)


def subspace_contains(a: Subspace, v) -> bool:
    return a.contains(v)


# -- matrices --------------------------------------------------------------

def unit_vector(n: int, i: int) -> tuple[int, ...]:
    v = [0] * n
    v[i] = 1
    return tuple(v)


def identity(n: int) -> list[list[int]]:
    return [list(unit_vector(n, i)) for i in range(n)]


def zeros(rows: int, cols: int) -> list[list[int]]:
    return [[0] * cols for _ in range(rows)]


def transpose(M):
    return [list(col) for col in zip(*M)]


def mat_vec(F: FiniteField, M, v) -> list[int]:
    add, mul = F.add, F.mul
    out = []
    for row in M:
        s = 0
        for a, b in zip(row, v):
            if a and b:
                s = add(s, mul(a, b))
        out.append(s)
    return out


def mat_mul(F: FiniteField, A, B):
    Bt = transpose(B) if B else []
    return [mat_vec(F, Bt, row) for row in A] if Bt else [[] for _ in A]


def mat_pow(F: FiniteField, M, e: int):
    n = len(M)
    out = identity(n)
    base = [list(r) for r in M]
    while e:
        if e & 1:
            out = mat_mul(F, out, base)
        base = mat_mul(F, base, base)
        e >>= 1
    return out


def mat_frobenius(F: FiniteField, M, e: int = 1):
    return [F.frobenius_vec(row, e) for row in M]


def columns(M):
    return transpose(M)


def from_columns(cols, n_rows=None):
    if not cols:
        return [[] for _ in range(n_rows or 0)]
    return transpose(cols)


def rref(F: FiniteField, M, n_cols=None) -> tuple[Subspace, int]:
    """Canonical row space of M together with its rank."""
    n = n_cols if n_cols is not None else (len(M[0]) if M else 0)
    s = Subspace.span(F, n, M)
    return s, s.dim


def rank(F: FiniteField, M, n_cols=None) -> int:
    return rref(F, M, n_cols)[1]


def nullspace(F: FiniteField, M, n_cols: int) -> Subspace:
    """The subspace {x : M x = 0} of F^n_cols."""
    s, _ = rref(F, M, n_cols)
    pivots = set(s.pivot_cols)
    free = [j for j in range(n_cols) if j not in pivots]
    vecs = []
    for f in free:
        x = [0] * n_cols
        x[f] = 1
        for c, row in zip(s.pivot_cols, s.basis):
            x[c] = F.neg(row[f])
        vecs.append(x)
    return Subspace.span(F, n_cols, vecs)


def mat_inv(F: FiniteField, M):
    """Inverse of a square matrix; raises ValueError when singular."""
    n = len(M)
    ech = _Echelon(F, 2 * n)
    for i, row in enumerate(M):
        ech.add(list(row) + list(unit_vector(n, i)))
    if sorted(ech.rows) != list(range(n)):
        raise ValueError("matrix is singular")
    return [ech.rows[i][n:] for i in range(n)]


def solve(F: FiniteField, M, b):
    """Some x with M x = b, or None when the system is inconsistent."""
    rows = len(M)
    cols = len(M[0]) if M else 0
    ech = _Echelon(F, cols + 1)
    for i in range(rows):
        ech.add(list(M[i]) + [b[i]])
    if cols in ech.rows:
        return None
    x = [0] * cols
    for c, row in ech.rows.items():
        x[c] = row[cols]
    return x


def semilinear_image(F: FiniteField, T, e: int, A: Subspace) -> Subspace:
    """Span of T * sigma^e(v) over a basis of A, sigma acting coordinatewise."""
    n = A.ambient_dim
    if len(T) != n or any(len(r) != n for r in T):
        raise AmbientMismatch(f"operator of size {len(T)} on F^{n}")
    return Subspace.span(F, n, (mat_vec(F, T, F.frobenius_vec(v, e)) for v in A.basis))


def linear_image(F: FiniteField, T, A: Subspace) -> Subspace:
    return semilinear_image(F, T, 0, A)


def random_invertible(F, n: int, rng) -> list[list[int]]:
    """Uniform invertible n x n matrix by rejection; ``rng`` is a random.Random."""
    while True:
        M = [[rng.randrange(F.q) for _ in range(n)] for _ in range(n)]
        if rank(F, M, n) == n:
            return M
