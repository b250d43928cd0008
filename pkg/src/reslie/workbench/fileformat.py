"""Line-oriented text format for restricted Lie algebra presentations.

Grammar (one statement per line, ``#`` starts a comment)::

    restricted-lie-algebra 1
    field p=<prime> [k=<degree>] [modulus=<c0>,<c1>,...,<ck>]
    dim <n>
    basis <name_1> ... <name_n>
    bracket <a> <b> = <combination>
    pmap <a> = <combination>

A combination is ``0`` or a sum of terms ``[coef*]name`` joined by ``+`` or
``-``.  A coefficient is a non-negative integer (read in the prime field) or
a parenthesized polynomial in ``u`` such as ``(u+1)``, the class of u
modulo the field's modulus.  Brackets and p-map images that are not listed
are zero; ``bracket b a`` is accepted and stored as the negative of
``bracket a b``.  The header line must come first, then field, dim and
basis in that order.
"""
from __future__ import annotations

import re
from pathlib import Path

from ..errors import ParseError, ValidationError
from ..field import FiniteField, is_irreducible, is_prime
from ..liealg import AlgebraPresentation, validate_presentation

HEADER = "restricted-lie-algebra"
VERSION = 1

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<poly>\([^()]*\))|(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<op>[+\-*]))")


class _Line:
    def __init__(self, text: str, number: int, source: str):
        self.raw = text
        self.number = number
        self.source = source

    def error(self, message: str, column: int = 1) -> ParseError:
        return ParseError(message, self.number, column, self.source)

    def col(self, fragment: str) -> int:
        idx = self.raw.find(fragment)
        return idx + 1 if idx >= 0 else 1


def _strip_comment(text: str) -> str:
    return text.split("#", 1)[0].rstrip()


def _parse_field(line: _Line, body: str) -> FiniteField:
    opts = {}
    for tok in body.split():
        key, eq, val = tok.partition("=")
        if not eq or key not in ("p", "k", "modulus"):
            raise line.error(f"unexpected field option {tok!r}", line.col(tok))
        if key in opts:
            raise line.error(f"duplicate field option {key!r}", line.col(tok))
        opts[key] = (val, line.col(tok))
    if "p" not in opts:
        raise line.error("field needs p=<prime>")
    try:
        p = int(opts["p"][0])
        k = int(opts.get("k", ("1", 1))[0])
    except ValueError:
        raise line.error("p and k must be integers") from None
    if not is_prime(p):
        raise line.error(f"characteristic {p} is not prime", opts["p"][1])
    if k < 1:
        raise line.error("extension degree must be >= 1")
    modulus = None
    if "modulus" in opts:
        val, c = opts["modulus"]
        try:
            modulus = tuple(int(x) % p for x in val.split(","))
        except ValueError:
            raise line.error("modulus must be comma separated integers", c) from None
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise line.error(f"modulus must be monic of degree {k}", c)
        if not is_irreducible(modulus, p):
            raise line.error("modulus is not irreducible", c)
    try:
        return FiniteField(p, k, modulus)
    except ValueError as exc:
        raise line.error(str(exc)) from None


def _parse_combination(line: _Line, text: str, offset: int, F: FiniteField, index: dict) -> tuple:
    """Coordinates of a combination; ``offset`` is the column where text starts."""
    n = len(index)
    out = [0] * n
    text = text.rstrip()
    if text.strip() == "0":
        return tuple(out)
    pos = 0
    sign = 1
    expect_term = True
    while pos < len(text):
        if not text[pos:].strip():
            break
        m = _TOKEN.match(text, pos)
        if not m:
            skip = len(text[pos:]) - len(text[pos:].lstrip())
            raise line.error("unrecognized input", offset + pos + skip)
        col = offset + m.start(m.lastgroup)
        pos = m.end()
        op = m.group("op")
        if op == "-" or (op == "+" and not expect_term):
            # binary +/- ends a term; a leading '-' negates the next one
            sign = (-sign if expect_term else -1) if op == "-" else 1
            expect_term = True
            continue
        if op:
            raise line.error(f"unexpected {op!r}", col)
        if not expect_term:
            raise line.error("expected '+' or '-' between terms", col)
        coef = 1
        if m.group("num") is not None or m.group("poly") is not None:
            if m.group("num") is not None:
                coef = F.from_int(int(m.group("num")))
            else:
                try:
                    coef = F.parse(m.group("poly")[1:-1])
                except (ValueError, IndexError):
                    raise line.error(f"bad coefficient {m.group('poly')}", col) from None
            star = re.compile(r"\s*\*").match(text, pos)
            if not star:
                raise line.error("a coefficient must be followed by '*name'", offset + pos)
            pos = star.end()
            m = _TOKEN.match(text, pos)
            if not m or m.group("name") is None:
                raise line.error("expected a basis name after '*'", offset + pos)
            col = offset + m.start("name")
            pos = m.end()
        elif m.group("name") is None:
            raise line.error("expected a term", col)
        name = m.group("name")
        if name not in index:
            raise line.error(f"unknown basis name {name!r}", col)
        c = coef if sign == 1 else F.neg(coef)
        out[index[name]] = F.add(out[index[name]], c)
        sign = 1
        expect_term = False
    if expect_term:
        raise line.error("combination ends without a term", offset + len(text))
    return tuple(out)


def parse(text: str, source: str = "<string>", validate: bool = True) -> AlgebraPresentation:
    """Parse a document; raise ParseError on syntax, ValidationError on axioms."""
    lines = [_Line(_strip_comment(t), i + 1, source) for i, t in enumerate(text.splitlines())]
    lines = [ln for ln in lines if ln.raw.strip()]
    if not lines:
        raise ParseError("empty document", 1, 1, source)
    head = lines[0]
    parts = head.raw.split()
    if parts[0] != HEADER:
        raise head.error(f"expected header '{HEADER} {VERSION}'", head.col(parts[0]))
    if len(parts) != 2 or parts[1] != str(VERSION):
        raise head.error(f"unsupported format version (expected {VERSION})", head.col(parts[-1]))
    F = None
    dim = None
    names = None
    brackets: dict = {}
    pmap: dict = {}
    for line in lines[1:]:
        stripped = line.raw.strip()
        keyword, _, rest = stripped.partition(" ")
        kcol = line.col(keyword)
        if keyword == "field":
            if F is not None:
                raise line.error("field declared twice", kcol)
            F = _parse_field(line, rest)
        elif keyword == "dim":
            if F is None:
                raise line.error("dim before field", kcol)
            if dim is not None:
                raise line.error("dim declared twice", kcol)
            if not rest.strip().isdigit():
                raise line.error("dim must be a non-negative integer", line.col(rest.strip() or keyword))
            dim = int(rest)
        elif keyword == "basis":
            if dim is None:
                raise line.error("basis before dim", kcol)
            if names is not None:
                raise line.error("basis declared twice", kcol)
            names = rest.split()
            for nm in names:
                if not _NAME.fullmatch(nm):
                    raise line.error(f"invalid basis name {nm!r}", line.col(nm))
            if len(names) != dim:
                raise line.error(f"basis lists {len(names)} names for dim {dim}", kcol)
            if len(set(names)) != len(names):
                raise line.error("basis names must be distinct", kcol)
        elif keyword in ("bracket", "pmap"):
            if names is None:
                if dim == 0:
                    names = []
                else:
                    raise line.error(f"{keyword} before basis", kcol)
            lhs, eq, rhs = rest.partition("=")
            if not eq:
                raise line.error("expected '='", kcol + len(keyword) + 1)
            index = {nm: i for i, nm in enumerate(names)}
            args = lhs.split()
            want = 2 if keyword == "bracket" else 1
            if len(args) != want:
                raise line.error(f"{keyword} takes {want} basis name(s)", kcol)
            for a in args:
                if a not in index:
                    raise line.error(f"unknown basis name {a!r}", line.col(a))
            eq_at = line.raw.index("=")
            vec = _parse_combination(line, line.raw[eq_at + 1:], eq_at + 2, F, index)
            if keyword == "bracket":
                i, j = index[args[0]], index[args[1]]
                if i == j:
                    raise line.error("[b, b] is always zero", kcol)
                if i > j:
                    i, j = j, i
                    vec = tuple(F.neg(a) for a in vec)
                if (i, j) in brackets:
                    raise line.error(f"bracket {names[i]} {names[j]} given twice", kcol)
                brackets[(i, j)] = vec
            else:
                i = index[args[0]]
                if i in pmap:
                    raise line.error(f"pmap {names[i]} given twice", kcol)
                pmap[i] = vec
        else:
            raise line.error(f"unknown statement {keyword!r}", kcol)
    last = lines[-1].number
    if F is None:
        raise ParseError("missing field statement", last, 1, source)
    if dim is None:
        raise ParseError("missing dim statement", last, 1, source)
    if names is None:
        if dim:
            raise ParseError("missing basis statement", last, 1, source)
        names = []
    zero = (0,) * dim
    P = AlgebraPresentation(F, dim, brackets, tuple(pmap.get(i, zero) for i in range(dim)), tuple(names))
    if validate:
        rep = validate_presentation(P)
        if not rep.ok:
            first = rep.violations[0]
            raise ValidationError(f"{source}: {first['axiom']} violated: {first['witness']}", rep)
    return P


def load(path) -> AlgebraPresentation:
    path = Path(path)
    return parse(path.read_text(), source=str(path))


def _format_coef(F: FiniteField, c: int) -> str:
    if F.k == 1:
        return str(c)
    if c < F.p:
        return str(c)
    return "(" + F.format(c) + ")"


def format_combination(F: FiniteField, names, vec) -> str:
    terms = []
    for nm, c in zip(names, vec):
        if not c:
            continue
        terms.append(nm if c == 1 else f"{_format_coef(F, c)}*{nm}")
    return " + ".join(terms) if terms else "0"


def serialize(P: AlgebraPresentation, comment: str | None = None) -> str:
    """Canonical text: nonzero entries only, brackets sorted by index pair."""
    F = P.field
    out = [f"{HEADER} {VERSION}"]
    if comment:
        out.extend("# " + c for c in comment.splitlines())
    out.append(f"field p={F.p} k={F.k} modulus={','.join(map(str, F.modulus))}")
    out.append(f"dim {P.dim}")
    if P.dim:
        out.append("basis " + " ".join(P.names))
    for (i, j), v in sorted(P.brackets.items()):
        out.append(f"bracket {P.names[i]} {P.names[j]} = {format_combination(F, P.names, v)}")
    for i, v in enumerate(P.pmap):
        if any(v):
            out.append(f"pmap {P.names[i]} = {format_combination(F, P.names, v)}")
    return "\n".join(out) + "\n"


def dump(P: AlgebraPresentation, path, comment: str | None = None) -> None:
    Path(path).write_text(serialize(P, comment))
