"""The carrier protocol and generic compound carriers.

A *carrier* is an algebra whose elements are canonical immutable (hashable)
Python values; the carrier object interprets them (arithmetic, zero test,
membership).  Concrete carriers: finite-dimensional algebras
(:mod:`loopstable.algebras`), polynomial function algebras
(:mod:`loopstable.funalg`), tensor algebras and J-kernels
(:mod:`loopstable.tensorj`); here live the generic pullback and the
polynomial extension ``C[u]`` used by homotopies.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Callable, Dict, Tuple


class Carrier:
    """Base class: an algebra interpreting canonical immutable elements."""

    name: str = "?"
    #: whether ``is_zero`` is a decision procedure (False for formal tensors)
    can_decide_zero: bool = True

    def zero(self) -> Any:
        raise NotImplementedError

    def add(self, x: Any, y: Any) -> Any:
        raise NotImplementedError

    def neg(self, x: Any) -> Any:
        return self.scale(Fraction(-1), x)

    def sub(self, x: Any, y: Any) -> Any:
        return self.add(x, self.neg(y))

    def scale(self, a: Fraction, x: Any) -> Any:
        raise NotImplementedError

    def mul(self, x: Any, y: Any) -> Any:
        raise NotImplementedError

    def is_zero(self, x: Any) -> bool:
        return x == self.zero()

    def eq(self, x: Any, y: Any) -> bool:
        if not self.can_decide_zero:
            raise ValueError(f"equality undecidable in {self.name}")
        return self.is_zero(self.sub(x, y))

    def contains(self, x: Any) -> bool:
        """Structural membership validation (may be expensive)."""
        raise NotImplementedError

    def describe(self) -> str:
        return self.name

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"


class Rationals(Carrier):
    """The ground field as a carrier; elements are plain Fractions."""

    name = "QQ"

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def add(self, x, y):
        return x + y

    def scale(self, a, x):
        return Fraction(a) * x

    def mul(self, x, y):
        return x * y

    def is_zero(self, x):
        return x == 0

    def contains(self, x):
        return isinstance(x, Fraction)


#: shared instance — the ground field never varies
RAT = Rationals()


class PullbackCarrier(Carrier):
    """Fibre product of two carriers over a common target.

    Elements are pairs ``(l, r)`` with ``lmap(l) == rmap(r)`` in ``over``;
    the constraint is validated by :meth:`contains`, making the structural
    identities of projections (e.g. π∘ι = 0) hold by representation.
    """

    def __init__(
        self,
        left: Carrier,
        right: Carrier,
        over: Carrier,
        lmap: Callable[[Any], Any],
        rmap: Callable[[Any], Any],
        name: str = "",
    ) -> None:
        self.left = left
        self.right = right
        self.over = over
        self.lmap = lmap
        self.rmap = rmap
        self.name = name or f"({left.name} x_{over.name} {right.name})"
        self.can_decide_zero = left.can_decide_zero and right.can_decide_zero

    def zero(self):
        return (self.left.zero(), self.right.zero())

    def make(self, l, r):
        el = (l, r)
        if not self.contains(el):
            raise ValueError(f"pair violates the {self.name} compatibility")
        return el

    def add(self, x, y):
        return (self.left.add(x[0], y[0]), self.right.add(x[1], y[1]))

    def scale(self, a, x):
        return (self.left.scale(a, x[0]), self.right.scale(a, x[1]))

    def mul(self, x, y):
        return (self.left.mul(x[0], y[0]), self.right.mul(x[1], y[1]))

    def is_zero(self, x):
        return self.left.is_zero(x[0]) and self.right.is_zero(x[1])

    def contains(self, x):
        if not (isinstance(x, tuple) and len(x) == 2):
            return False
        l, r = x
        if not (self.left.contains(l) and self.right.contains(r)):
            return False
        if not self.over.can_decide_zero:
            return True
        return self.over.eq(self.lmap(l), self.rmap(r))


class PolyExtension(Carrier):
    """``C[u]``: polynomials in one homotopy variable with C coefficients.

    Elements are sorted tuples ``((k, c_k), ...)`` with nonzero ``c_k``.
    """

    def __init__(self, base: Carrier, var: str = "u") -> None:
        self.base = base
        self.var = var
        self.name = f"{base.name}[{var}]"
        self.can_decide_zero = base.can_decide_zero

    def zero(self):
        return ()

    def embed(self, c):
        """The constant polynomial ``c``."""
        if self.base.is_zero(c):
            return ()
        return ((0, c),)

    def monomial(self, k: int, c):
        if self.base.is_zero(c):
            return ()
        return ((k, c),)

    def _norm(self, d: Dict[int, Any]):
        return tuple(sorted((k, c) for k, c in d.items() if not self.base.is_zero(c)))

    def add(self, x, y):
        d = dict(x)
        for k, c in y:
            d[k] = self.base.add(d[k], c) if k in d else c
        return self._norm(d)

    def scale(self, a, x):
        a = Fraction(a)
        if a == 0:
            return ()
        return self._norm({k: self.base.scale(a, c) for k, c in x})

    def mul(self, x, y):
        d: Dict[int, Any] = {}
        for k1, c1 in x:
            for k2, c2 in y:
                c = self.base.mul(c1, c2)
                k = k1 + k2
                d[k] = self.base.add(d[k], c) if k in d else c
        return self._norm(d)

    def is_zero(self, x):
        return all(self.base.is_zero(c) for _, c in x)

    def evaluate(self, x, at: Fraction):
        """Evaluate at a rational value of the homotopy variable."""
        at = Fraction(at)
        out = self.base.zero()
        for k, c in x:
            out = self.base.add(out, self.base.scale(at ** k, c))
        return out

    def contains(self, x):
        return isinstance(x, tuple) and all(
            isinstance(k, int) and k >= 0 and self.base.contains(c) for k, c in x
        )
