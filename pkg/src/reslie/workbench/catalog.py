"""The shipped fixture catalog of small restricted Lie algebras.

``builtin_catalog`` constructs every entry in code; the ``fixtures``
directory holds the same entries as .alg files (regenerate with
``python -m reslie.workbench.catalog``).  The file copies are what the CLI
and the acceptance suite read.
"""
from __future__ import annotations

import itertools
import random
from pathlib import Path

from .. import linalg as la
from ..abelian import cyclic_algebra
from ..field import FiniteField
from ..liealg import AlgebraPresentation, change_basis, direct_sum
from . import fileformat

FIXTURE_DIR = Path(__file__).parent / "fixtures"


def _partitions(n, largest=None):
    largest = largest or n
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def line(F: FiniteField, alpha: int) -> AlgebraPresentation:
    """1-dim algebra with x^[p] = alpha x."""
    return AlgebraPresentation(F, 1, {}, ((alpha,),), ("x",))


def heisenberg(F: FiniteField, a=0, b=0, c=0) -> AlgebraPresentation:
    """[x,y] = z with x^[p] = a z, y^[p] = b z, z^[p] = c z."""
    return AlgebraPresentation(F, 3, {(0, 1): (0, 0, 1)},
                               ((0, 0, a), (0, 0, b), (0, 0, c)), ("x", "y", "z"))


def filiform(F: FiniteField, a=0) -> AlgebraPresentation:
    """[x,y] = z, [x,z] = w with x^[p] = a w; class 3 when p >= 3."""
    return AlgebraPresentation(F, 4, {(0, 1): (0, 0, 1, 0), (0, 2): (0, 0, 0, 1)},
                               ((0, 0, 0, a), (0, 0, 0, 0), (0, 0, 0, 0), (0, 0, 0, 0)),
                               ("x", "y", "z", "w"))


def builtin_catalog() -> dict[str, tuple[AlgebraPresentation, str]]:
    F2, F3, F4 = FiniteField(2), FiniteField(3), FiniteField(2, 2)
    u = 2  # the class of u in F_4
    cat: dict[str, tuple[AlgebraPresentation, str]] = {}

    def put(name, P, note):
        cat[name] = (P, note)

    for a in range(2):
        put(f"line-f2-{a}", line(F2, a), f"1-dim over F_2, x^[2] = {a}x")
    for a in range(3):
        put(f"line-f3-{a}", line(F3, a), f"1-dim over F_3, x^[3] = {a}x")
    for n in range(2, 5):
        for part in _partitions(n):
            tag = "".join(map(str, part))
            put(f"abelian-f2-{tag}", cyclic_algebra(F2, part),
                f"abelian over F_2, cyclic summands of lengths {part}")
    put("abelian-f3-21", cyclic_algebra(F3, (2, 1)), "abelian over F_3, summands (2,1)")
    for a, b, c in itertools.product(range(2), repeat=3):
        put(f"heis-f2-{a}{b}{c}", heisenberg(F2, a, b, c),
            f"Heisenberg over F_2 with x^[2] = {a}z, y^[2] = {b}z, z^[2] = {c}z")
    for a, b, c in itertools.product(range(3), repeat=3):
        put(f"heis-f3-{a}{b}{c}", heisenberg(F3, a, b, c),
            f"Heisenberg over F_3 with x^[3] = {a}z, y^[3] = {b}z, z^[3] = {c}z")
    put("filiform-f3-0", filiform(F3, 0), "class 3 over F_3, zero p-map")
    put("filiform-f3-1", filiform(F3, 1), "class 3 over F_3, x^[3] = w")
    # non-p-nilpotent shapes beyond the tori above
    put("torus-f2-2", direct_sum(line(F2, 1), line(F2, 1)), "2-dim torus over F_2")
    put("mixed-f2-10", direct_sum(line(F2, 1), line(F2, 0)), "x^[2] = x, y^[2] = 0 over F_2")
    put("swap-f2", AlgebraPresentation(F2, 2, {}, ((0, 1), (1, 0)), ("x", "y")),
        "abelian over F_2 with x^[2] = y, y^[2] = x")
    put("affine-f2", AlgebraPresentation(F2, 2, {(0, 1): (0, 1)}, ((1, 0), (0, 0)), ("x", "y")),
        "[x,y] = y with x^[2] = x, y^[2] = 0")
    put("affine-f3", AlgebraPresentation(F3, 2, {(0, 1): (0, 1)}, ((1, 0), (0, 0)), ("x", "y")),
        "[x,y] = y with x^[3] = x, y^[3] = 0")
    # extension field entries
    put("line-f4-0", line(F4, 0), "1-dim over F_4, x^[2] = 0")
    put("line-f4-1", line(F4, 1), "1-dim over F_4, x^[2] = x")
    put("line-f4-u", line(F4, u), "1-dim over F_4, x^[2] = u x")
    put("abelian-f4-2", cyclic_algebra(F4, (2,)), "abelian chain of length 2 over F_4")
    put("abelian-f4-u", AlgebraPresentation(F4, 2, {}, ((0, u), (0, 0)), ("x", "y")), "abelian over F_4, x^[2] = u y")
    put("heis-f4-0", heisenberg(F4), "Heisenberg over F_4, zero p-map")
    put("heis-f4-u", heisenberg(F4, u, 0, 0), "Heisenberg over F_4, x^[2] = u z")
    # rebased copies, to exercise isomorphic pairs with different structure constants
    rng = random.Random(20240601)
    for name in ("heis-f2-100", "abelian-f2-211", "heis-f3-120", "filiform-f3-1", "heis-f4-u"):
        P = cat[name][0]
        M = la.random_invertible(P.field, P.dim, rng)
        put(f"{name}-rebased", change_basis(P, M), f"{name} in a random basis")
    return cat


def write_catalog(directory=FIXTURE_DIR) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    out = []
    for name, (P, note) in builtin_catalog().items():
        path = directory / f"{name}.alg"
        fileformat.dump(P, path, comment=note)
        out.append(path)
    return out


def catalog_paths(directory=FIXTURE_DIR) -> list[Path]:
    return sorted(Path(directory).glob("*.alg"))


def load_catalog(directory=FIXTURE_DIR) -> dict[str, AlgebraPresentation]:
    return {path.stem: fileformat.load(path) for path in catalog_paths(directory)}


if __name__ == "__main__":
    for p in write_catalog():
        print(p)
