"""Finite fields F_{p^k} with integer-encoded elements.

An element c_0 + c_1 u + ... + c_{k-1} u^{k-1} of F_p[u]/(modulus) is stored
as the integer sum(c_i * p**i).  All hot-path code (linear algebra, structure
constants, PBW multiplication) works on these plain ints; :class:`FieldElement`
is a thin operator-overloading wrapper for interactive use.
"""
from __future__ import annotations

from functools import cached_property
from itertools import product

from .errors import DivisionByZero

_TABLE_LIMIT = 729


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _poly_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, m, p):
    """Remainder of a modulo the monic-or-not polynomial m over F_p."""
    a = _poly_trim(a)
    m = _poly_trim(m)
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) >= len(m):
        c = a[-1] * inv_lead % p
        shift = len(a) - len(m)
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        a = _poly_trim(a)
    return a


def _poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def is_irreducible(modulus, p: int) -> bool:
    """Trial factorization over F_p by every monic polynomial of degree <= k/2."""
    f = _poly_trim(modulus)
    k = len(f) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    for d in range(1, k // 2 + 1):
        for low in product(range(p), repeat=d):
            g = list(low) + [1]
            if not _poly_mod(f, g, p):
                return False
    return True


def default_modulus(p: int, k: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree k, ordered by encoded lower coefficients."""
    if k == 1:
        return (0, 1)
    for code in range(p ** k):
        low = [(code // p ** i) % p for i in range(k)]
        cand = low + [1]
        if low[0] != 0 and is_irreducible(cand, p):
            return tuple(cand)
    raise ValueError(f"no irreducible polynomial of degree {k} over F_{p}")


class FiniteField:
    """The field F_p[u]/(modulus) of order q = p**k."""

    def __init__(self, p: int, k: int = 1, modulus=None):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if k < 1:
            raise ValueError("extension degree must be >= 1")
        if modulus is None:
            modulus = default_modulus(p, k)
        modulus = tuple(int(c) % p for c in modulus)
        if len(_poly_trim(modulus)) != k + 1 or modulus[k] != 1:
            raise ValueError(f"modulus {modulus} is not monic of degree {k}")
        if not is_irreducible(modulus, p):
            raise ValueError(f"modulus {modulus} is reducible over F_{p}")
        self.p = p
        self.k = k
        self.q = p ** k
        self.modulus = modulus
        self.zero = 0
        self.one = 1
        if k > 1:
            self._build_tables()

    # -- identity ---------------------------------------------------------

    @property
    def key(self):
        return (self.p, self.k, self.modulus)

    def __eq__(self, other):
        return isinstance(other, FiniteField) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        if self.k == 1:
            return f"GF({self.p})"
        return f"GF({self.q}; {self.format_poly(self.modulus)})"

    def __reduce__(self):
        return (FiniteField, (self.p, self.k, self.modulus))

    # -- encoding ---------------------------------------------------------

    def coeffs(self, a: int) -> list[int]:
        p = self.p
        return [(a // p ** i) % p for i in range(self.k)]

    def from_coeffs(self, coeffs) -> int:
        coeffs = _poly_mod(list(coeffs), self.modulus, self.p) if len(coeffs) > self.k else coeffs
        return sum((int(c) % self.p) * self.p ** i for i, c in enumerate(coeffs))

    def elements(self):
        return range(self.q)

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field != self:
                raise ValueError("element belongs to another field")
            return value
        return FieldElement(self, int(value) % self.q if self.k == 1 else self._check(value))

    def _check(self, value):
        value = int(value)
        if not 0 <= value < self.q:
            raise ValueError(f"{value} is not an encoded element of {self!r}")
        return value

    # -- tables for extension fields --------------------------------------

    def _slow_mul(self, a, b):
        prod = _poly_mul(self.coeffs(a), self.coeffs(b), self.p)
        return self.from_coeffs(_poly_mod(prod, self.modulus, self.p))

    def _slow_add(self, a, b):
        p = self.p
        out, scale = 0, 1
        for _ in range(self.k):
            out += ((a % p + b % p) % p) * scale
            a //= p
            b //= p
            scale *= p
        return out

    def _build_tables(self):
        q = self.q
        for g in range(2, q):
            exp = [1]
            x = g
            while x != 1:
                exp.append(x)
                x = self._slow_mul(x, g)
            if len(exp) == q - 1:
                break
        else:  # pragma: no cover - every finite field has a primitive element
            raise AssertionError("no primitive element found")
        log = [0] * q
        for i, x in enumerate(exp):
            log[x] = i
        self._exp = exp + exp
        self._log = log
        self._neg = [self._slow_mul(a, self.p - 1) for a in range(q)]
        if self.p != 2 and q <= _TABLE_LIMIT:
            self._add_table = [[self._slow_add(a, b) for b in range(q)] for a in range(q)]
        else:
            self._add_table = None

    # -- arithmetic on encoded ints ---------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        if self._add_table is not None:
            return self._add_table[a][b]
        return self._slow_add(a, b)

    def neg(self, a: int) -> int:
        if self.k == 1:
            return -a % self.p
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        if self.k == 1:
            return pow(a, self.p - 2, self.p)
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if a == 0:
            return 1 if e == 0 else 0
        if self.k == 1:
            return pow(a, e, self.p)
        return self._exp[self._log[a] * e % (self.q - 1)]

    def frobenius(self, a: int, e: int = 1) -> int:
        """a^(p^e); for e < 0 the unique p^|e|-th root (sigma is a bijection)."""
        if self.k == 1:
            return a
        return self.pow(a, self.p ** (e % self.k))

    def from_int(self, n: int) -> int:
        """Image of the integer n under Z -> F_p -> F_q."""
        return n % self.p

    @cached_property
    def frobenius_table(self) -> list[int]:
        return [self.frobenius(a, 1) for a in range(self.q)]

    # -- vector helpers (the linear-algebra hot path) ---------------------

    def axpy(self, y, c: int, x):
        """Return y + c*x for equal-length sequences."""
        if c == 0:
            return list(y)
        if self.k == 1:
            p = self.p
            return [(a + c * b) % p for a, b in zip(y, x)]
        add, mul = self.add, self.mul
        return [add(a, mul(c, b)) if b else a for a, b in zip(y, x)]

    def scale(self, c: int, x):
        if self.k == 1:
            p = self.p
            return [c * b % p for b in x]
        mul = self.mul
        return [mul(c, b) for b in x]

    def frobenius_vec(self, x, e: int = 1):
        if self.k == 1 or e % self.k == 0:
            return list(x)
        if e % self.k == 1:
            t = self.frobenius_table
            return [t[a] for a in x]
        return [self.frobenius(a, e) for a in x]

    # -- formatting -------------------------------------------------------

    def format_poly(self, coeffs, var="u"):
        terms = []
        for i in reversed(range(len(coeffs))):
            c = coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{c}*{mono}")
        return "+".join(terms) or "0"

    def format(self, a: int) -> str:
        if self.k == 1:
            return str(a)
        return self.format_poly(self.coeffs(a))

    def parse(self, text: str) -> int:
        """Parse an encoded integer or a polynomial in u such as ``2*u^2+u+1``."""
        text = text.strip().replace(" ", "")
        if text.lstrip("-").isdigit():
            n = int(text)
            if self.k == 1:
                return n % self.p
            return self._check(n)
        coeffs = [0] * max(self.k, 1)
        for term in text.replace("-", "+-").split("+"):
            if not term:
                continue
            sign = -1 if term.startswith("-") else 1
            term = term.lstrip("-")
            if "u" not in term:
                c, deg = int(term), 0
            else:
                head, _, tail = term.partition("u")
                head = head.rstrip("*")
                c = int(head) if head else 1
                deg = int(tail.lstrip("^")) if tail else 1
            while deg >= len(coeffs):
                coeffs.append(0)
            coeffs[deg] += sign * c
        reduced = _poly_mod([c % self.p for c in coeffs], self.modulus, self.p)
        return self.from_coeffs(reduced)


class FieldElement:
    """Operator-overloading view of an encoded element."""

    __slots__ = ("field", "value")

    def __init__(self, field: FiniteField, value: int):
        self.field = field
        self.value = value

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other.value
        return self.field.from_int(int(other))

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.value, self._coerce(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.value, self._coerce(other)))

    def __rsub__(self, other):
        return FieldElement(self.field, self.field.sub(self._coerce(other), self.value))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.value, self._coerce(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.value, self._coerce(other)))

    def __rtruediv__(self, other):
        return FieldElement(self.field, self.field.div(self._coerce(other), self.value))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def frobenius(self, e: int = 1):
        return FieldElement(self.field, self.field.frobenius(self.value, e))

    @property
    def coeffs(self):
        return self.field.coeffs(self.value)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == self.field.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.key, self.value))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"{self.field.format(self.value)} in {self.field!r}"


def field_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    """Dispatch one of add/sub/mul/div on two elements of the same field."""
    if a.field != b.field:
        raise ValueError("operands live in different fields")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def frobenius(a: FieldElement, e: int) -> FieldElement:
    return a.frobenius(e)
