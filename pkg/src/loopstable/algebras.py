"""Finite-dimensional algebras given by exact structure constants.

Elements are canonical vectors ``((label, Fraction), ...)`` sorted by label
with zero entries dropped.  Includes the built-in test algebras and the
text file format consumed by the CLI.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

from .carriers import Carrier

Vec = Tuple[Tuple[str, Fraction], ...]


def vec(d: Dict[str, Fraction]) -> Vec:
    return tuple(sorted((k, Fraction(v)) for k, v in d.items() if v != 0))


class FinAlgebra(Carrier):
    """An associative, not necessarily unital algebra over the rationals.

    Parameters
    ----------
    name : printable name.
    labels : basis labels.
    table : structure constants, ``(i, j) -> Vec`` for the product of basis
        elements ``i·j``; missing entries mean zero.
    unit : optional two-sided unit vector.
    validate : check associativity/unit at construction (on by default;
        deliberately corrupted instances for falsification tests turn it off).
    """

    def __init__(
        self,
        name: str,
        labels: Iterable[str],
        table: Dict[Tuple[str, str], Vec],
        unit: Optional[Vec] = None,
        validate: bool = True,
    ) -> None:
        self.name = name
        self.labels = tuple(labels)
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("duplicate basis labels")
        self.table = {k: vec(dict(v)) for k, v in table.items() if v}
        self.unit = vec(dict(unit)) if unit else None
        if validate:
            self.validate()

    # -- carrier interface ----------------------------------------------

    def zero(self) -> Vec:
        return ()

    def basis_vec(self, label: str) -> Vec:
        if label not in self.labels:
            raise ValueError(f"unknown basis label {label!r}")
        return ((label, Fraction(1)),)

    def basis(self) -> List[Vec]:
        return [self.basis_vec(l) for l in self.labels]

    def add(self, x: Vec, y: Vec) -> Vec:
        if not x:
            return y
        if not y:
            return x
        d = dict(x)
        for k, v in y:
            if k in d:
                d[k] = d[k] + v
            else:
                d[k] = v
        return tuple(sorted((k, v) for k, v in d.items() if v))

    def scale(self, a, x: Vec) -> Vec:
        if not isinstance(a, Fraction):
            a = Fraction(a)
        if not a:
            return ()
        if a == 1:
            return x
        return tuple((k, a * v) for k, v in x)

    def mul(self, x: Vec, y: Vec) -> Vec:
        d: Dict[str, Fraction] = {}
        tbl = self.table
        for i, ci in x:
            for j, cj in y:
                e = tbl.get((i, j))
                if not e:
                    continue
                c = ci * cj
                for k, ck in e:
                    if k in d:
                        d[k] = d[k] + c * ck
                    else:
                        d[k] = c * ck
        return tuple(sorted((k, v) for k, v in d.items() if v))

    def is_zero(self, x: Vec) -> bool:
        return x == ()

    def contains(self, x) -> bool:
        return isinstance(x, tuple) and all(
            isinstance(k, str) and k in self.labels and isinstance(v, Fraction)
            for k, v in x
        )

    # -- validation ------------------------------------------------------

    def validate(self) -> None:
        for (i, j), v in self.table.items():
            if i not in self.labels or j not in self.labels:
                raise ValueError(f"structure constant on unknown pair ({i},{j})")
            if not self.contains(v):
                raise ValueError(f"structure constant value for ({i},{j}) invalid")
        for i in self.labels:
            for j in self.labels:
                for k in self.labels:
                    lhs = self.mul(self.mul(self.basis_vec(i), self.basis_vec(j)), self.basis_vec(k))
                    rhs = self.mul(self.basis_vec(i), self.mul(self.basis_vec(j), self.basis_vec(k)))
                    if lhs != rhs:
                        raise ValueError(
                            f"multiplication not associative at ({i},{j},{k})"
                        )
        if self.unit is not None:
            for i in self.labels:
                b = self.basis_vec(i)
                if self.mul(self.unit, b) != b or self.mul(b, self.unit) != b:
                    raise ValueError(f"declared unit is not two-sided at {i}")


class AlgebraMap:
    """A linear map between finite-dimensional algebras given on basis.

    ``validate`` checks multiplicativity on all basis pairs (algebra map);
    with ``require_multiplicative=False`` only linearity (free) is assumed,
    for module splittings.
    """

    def __init__(
        self,
        source: FinAlgebra,
        target: FinAlgebra,
        images: Dict[str, Vec],
        name: str = "",
        require_multiplicative: bool = True,
    ) -> None:
        self.source = source
        self.target = target
        self.images = {l: vec(dict(v)) for l, v in images.items()}
        self.name = name
        if set(self.images) != set(source.labels):
            raise ValueError("images must be given on the whole basis")
        if require_multiplicative:
            self.validate()

    def apply(self, x: Vec) -> Vec:
        out = self.target.zero()
        for k, c in x:
            out = self.target.add(out, self.target.scale(c, self.images[k]))
        return out

    def __call__(self, x: Vec) -> Vec:
        return self.apply(x)

    def validate(self) -> None:
        for i in self.source.labels:
            for j in self.source.labels:
                lhs = self.apply(self.source.mul(self.source.basis_vec(i), self.source.basis_vec(j)))
                rhs = self.target.mul(self.images[i], self.images[j])
                if lhs != rhs:
                    raise ValueError(f"not multiplicative at ({i},{j})")


# -- built-in algebras ---------------------------------------------------


def rationals() -> FinAlgebra:
    """Q, with basis {1}."""
    return FinAlgebra(
        "Q", ["1"], {("1", "1"): ((("1"), Fraction(1)),)}, unit=((("1"), Fraction(1)),)
    )


def dual_numbers() -> FinAlgebra:
    """Q[x]/(x²)."""
    one = Fraction(1)
    return FinAlgebra(
        "Q[x]/(x^2)",
        ["1", "x"],
        {
            ("1", "1"): (("1", one),),
            ("1", "x"): (("x", one),),
            ("x", "1"): (("x", one),),
            # x*x = 0
        },
        unit=(("1", one),),
    )


def m2q() -> FinAlgebra:
    """2×2 rational matrices, basis the elementary matrices e_{ij}."""
    one = Fraction(1)
    labels = ["e11", "e12", "e21", "e22"]
    table = {}
    for i in (1, 2):
        for j in (1, 2):
            for k in (1, 2):
                for l in (1, 2):
                    if j == k:
                        table[(f"e{i}{j}", f"e{k}{l}")] = ((f"e{i}{l}", one),)
    return FinAlgebra("M2(Q)", labels, table, unit=(("e11", one), ("e22", one)))


def square_zero() -> FinAlgebra:
    """The 2-dimensional nonunital algebra with all products zero."""
    return FinAlgebra("sq0", ["a", "b"], {}, unit=None)


BUILTIN_ALGEBRAS = {
    "q": rationals,
    "dual": dual_numbers,
    "m2q": m2q,
    "sq0": square_zero,
}


def product_algebra(B: FinAlgebra, C: FinAlgebra) -> Tuple[FinAlgebra, AlgebraMap, AlgebraMap]:
    """B × C with componentwise structure constants, plus projections."""
    labels = [f"l.{l}" for l in B.labels] + [f"r.{l}" for l in C.labels]
    table: Dict[Tuple[str, str], Vec] = {}
    for (i, j), v in B.table.items():
        table[(f"l.{i}", f"l.{j}")] = tuple((f"l.{k}", c) for k, c in v)
    for (i, j), v in C.table.items():
        table[(f"r.{i}", f"r.{j}")] = tuple((f"r.{k}", c) for k, c in v)
    unit = None
    if B.unit is not None and C.unit is not None:
        unit = tuple((f"l.{k}", c) for k, c in B.unit) + tuple(
            (f"r.{k}", c) for k, c in C.unit
        )
    P = FinAlgebra(f"({B.name}x{C.name})", labels, table, unit=unit)
    pr1 = AlgebraMap(
        P, B,
        {**{f"l.{l}": B.basis_vec(l) for l in B.labels},
         **{f"r.{l}": B.zero() for l in C.labels}},
        name="pr1",
    )
    pr2 = AlgebraMap(
        P, C,
        {**{f"l.{l}": C.zero() for l in B.labels},
         **{f"r.{l}": C.basis_vec(l) for l in C.labels}},
        name="pr2",
    )
    return P, pr1, pr2


# -- algebra file format -------------------------------------------------

_TERM = re.compile(r"^\s*(-?\d+(?:/\d+)?)\s*\*\s*([A-Za-z0-9_]+)\s*$")


def _parse_combo(text: str, labels: Tuple[str, ...]) -> Vec:
    d: Dict[str, Fraction] = {}
    text = text.strip()
    if text == "0":
        return ()
    for part in text.replace("-", "+-").split("+"):
        part = part.strip()
        if not part:
            continue
        if part.startswith("-") and "*" not in part:
            part = f"-1*{part[1:].strip()}"
        if "*" not in part:
            part = f"1*{part}"
        m = _TERM.match(part)
        if not m:
            raise ValueError(f"cannot parse term {part!r}")
        coeff, label = Fraction(m.group(1)), m.group(2)
        if label not in labels:
            raise ValueError(f"unknown label {label!r}")
        d[label] = d.get(label, Fraction(0)) + coeff
    return vec(d)


def parse_algebra_file(text: str) -> FinAlgebra:
    """Parse the algebra definition format.

    ::

        name: my-algebra
        basis: a b c
        unit: 1*a            # optional
        a*b = 1/2*c + -1*a   # missing products are zero

    Coefficients are exact fractions ``p`` or ``p/q``.
    """
    name = "unnamed"
    labels: Tuple[str, ...] = ()
    unit: Optional[Vec] = None
    table: Dict[Tuple[str, str], Vec] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("name:"):
            name = line[5:].strip()
        elif line.startswith("basis:"):
            labels = tuple(line[6:].split())
        elif line.startswith("unit:"):
            unit = _parse_combo(line[5:], labels)
        elif "=" in line:
            lhs, rhs = line.split("=", 1)
            if "*" not in lhs:
                raise ValueError(f"malformed product line {line!r}")
            i, j = (s.strip() for s in lhs.split("*", 1))
            if i not in labels or j not in labels:
                raise ValueError(f"unknown labels in {line!r}")
            table[(i, j)] = _parse_combo(rhs, labels)
        else:
            raise ValueError(f"unrecognized line {line!r}")
    if not labels:
        raise ValueError("algebra file declares no basis")
    return FinAlgebra(name, labels, table, unit=unit)


def format_algebra_file(A: FinAlgebra) -> str:
    lines = [f"name: {A.name}", f"basis: {' '.join(A.labels)}"]
    if A.unit is not None:
        lines.append("unit: " + " + ".join(f"{c}*{k}" for k, c in A.unit))
    for (i, j), v in sorted(A.table.items()):
        rhs = " + ".join(f"{c}*{k}" for k, c in v)
        lines.append(f"{i}*{j} = {rhs}")
    return "\n".join(lines) + "\n"
