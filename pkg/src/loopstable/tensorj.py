"""Nonunital tensor algebras, counit kernels, and classifying-map machinery.

Two flavors of tensor carrier share one element shape
``((word, Fraction), ...)``:

- *based*: the letters of a word are basis keys of the base carrier
  (labels of a finite-dimensional algebra, or length-≥2 words indexing the
  canonical basis of a counit kernel).  Words over a basis are linearly
  independent, so zero is decidable.
- *formal*: letters are literal elements of the base carrier (used over
  function algebras and other unbased carriers).  Elements are only ever
  consumed letterwise; zero is not decidable and equality is refused.

On top of these live the counit ``η`` (multiply the letters), the module
splitting ``σ``, curvature elements ``σ(a)σ(b) − σ(ab)``, the kernel
functor ``J`` on objects and morphisms, the word-map evaluation behind
classifying maps, the loop classifying map ``λ``, and the exchange maps
``κ^{n,m}``.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple

from .algebras import FinAlgebra
from .carriers import Carrier
from .funalg import (
    FunctionAlgebra,
    apply_to_coefficients,
    constant_function,
    affine_coordinate,
    function_algebra,
    sample_element,
    scalar_algebra,
    scalar_to_base,
    random_base_element,
)
from .simplicial import cube, interval_rel_one

Word = Tuple[Any, ...]
TElement = Tuple[Tuple[Word, Fraction], ...]


def is_based(car: Carrier) -> bool:
    """Whether the carrier exposes a canonical basis for σ."""
    if isinstance(car, FinAlgebra):
        return True
    if isinstance(car, JKernel):
        return car.ta.based
    return False


class TensorAlgebra(Carrier):
    """The nonunital tensor algebra T(A) (words of length ≥ 1)."""

    def __init__(self, base: Carrier, formal: Optional[bool] = None) -> None:
        self.base = base
        self.based = not formal if formal is not None else is_based(base)
        flavor = "" if self.based else "'"
        self.name = f"T{flavor}({base.name})"
        self.can_decide_zero = self.based

    # -- canonical arithmetic -------------------------------------------

    def _norm(self, d: Dict[Word, Fraction]) -> TElement:
        return tuple(
            sorted(
                ((w, c) for w, c in d.items() if c != 0),
                key=lambda wc: (len(wc[0]), repr(wc[0])),
            )
        )

    def zero(self) -> TElement:
        return ()

    def word(self, letters: Word, c=Fraction(1)) -> TElement:
        if not letters:
            raise ValueError("tensor words must be nonempty")
        return self._norm({tuple(letters): Fraction(c)})

    def add(self, x: TElement, y: TElement) -> TElement:
        d = dict(x)
        for w, c in y:
            d[w] = d.get(w, Fraction(0)) + c
        return self._norm(d)

    def scale(self, a, x: TElement) -> TElement:
        a = Fraction(a)
        return self._norm({w: a * c for w, c in x})

    def mul(self, x: TElement, y: TElement) -> TElement:
        d: Dict[Word, Fraction] = {}
        for w1, c1 in x:
            for w2, c2 in y:
                w = w1 + w2
                d[w] = d.get(w, Fraction(0)) + c1 * c2
        return self._norm(d)

    def is_zero(self, x: TElement) -> bool:
        # for formal carriers this is only the syntactic zero (sound but
        # not complete); can_decide_zero is False there
        return x == ()

    def contains(self, x) -> bool:
        if not isinstance(x, tuple):
            return False
        for w, c in x:
            if not (isinstance(w, tuple) and w and isinstance(c, Fraction)):
                return False
        return True

    # -- letters, counit, splitting -------------------------------------

    def letters(self, w: Word) -> List[Any]:
        """The carrier elements behind the letters of a word."""
        if self.based:
            return [based_key_element(self.base, k) for k in w]
        return list(w)

    def eta(self, x: TElement):
        """The counit: multiply each word out in the base carrier."""
        out = self.base.zero()
        for w, c in x:
            ls = self.letters(w)
            prod = ls[0]
            for l in ls[1:]:
                prod = self.base.mul(prod, l)
            out = self.base.add(out, self.base.scale(c, prod))
        return out

    def sigma(self, b) -> TElement:
        """The module splitting A → T(A) by length-1 words."""
        if self.based:
            return self._norm(
                {(k,): Fraction(c) for k, c in based_decompose(self.base, b)}
            )
        if b == self.base.zero():
            return ()
        return (((b,), Fraction(1)),)

    def curvature(self, a, b) -> TElement:
        """σ(a)σ(b) − σ(ab), the canonical counit-kernel element."""
        return self.sub(self.mul(self.sigma(a), self.sigma(b)),
                        self.sigma(self.base.mul(a, b)))


class JKernel(Carrier):
    """The counit kernel J(A) ⊆ T(A), as a carrier in its own right.

    When the underlying tensor algebra is based, J(A) is itself based, with
    basis ``e_w = w − σ(η(w))`` indexed by the words of length ≥ 2.
    """

    def __init__(self, ta: TensorAlgebra) -> None:
        self.ta = ta
        flavor = "" if ta.based else "'"
        self.name = f"J{flavor}({ta.base.name})"
        self.can_decide_zero = ta.can_decide_zero

    def zero(self):
        return ()

    def add(self, x, y):
        return self.ta.add(x, y)

    def scale(self, a, x):
        return self.ta.scale(a, x)

    def mul(self, x, y):
        return self.ta.mul(x, y)

    def is_zero(self, x):
        return self.ta.is_zero(x)

    def eta(self, x):
        return self.ta.eta(x)

    def contains(self, x) -> bool:
        if not self.ta.contains(x):
            return False
        if not self.ta.base.can_decide_zero:
            return True
        return self.ta.base.is_zero(self.ta.eta(x))

    def check(self, x):
        if not self.contains(x):
            raise ValueError(f"element has nonzero counit image in {self.name}")
        return x


def based_decompose(car: Carrier, x) -> Tuple[Tuple[Any, Fraction], ...]:
    if isinstance(car, FinAlgebra):
        return x  # already ((label, coeff), ...)
    if isinstance(car, JKernel) and car.ta.based:
        return tuple((w, c) for w, c in x if len(w) >= 2)
    raise ValueError(f"carrier {car.name} has no canonical basis")


def based_key_element(car: Carrier, k):
    if isinstance(car, FinAlgebra):
        return car.basis_vec(k)
    if isinstance(car, JKernel) and car.ta.based:
        w = ((k, Fraction(1)),)
        return car.ta.add(w, car.ta.neg(car.ta.sigma(car.ta.eta(w))))
    raise ValueError(f"carrier {car.name} has no canonical basis")


_T_CACHE: Dict[Tuple[int, bool], TensorAlgebra] = {}
_J_CACHE: Dict[int, JKernel] = {}


def tensor_algebra(base: Carrier, formal: Optional[bool] = None) -> TensorAlgebra:
    f = not is_based(base) if formal is None else formal
    key = (id(base), f)
    if key not in _T_CACHE:
        _T_CACHE[key] = TensorAlgebra(base, formal=f)
    return _T_CACHE[key]


def j_kernel(base: Carrier) -> JKernel:
    key = id(base)
    if key not in _J_CACHE:
        _J_CACHE[key] = JKernel(tensor_algebra(base))
    return _J_CACHE[key]


def j_tower(base: Carrier, depth: int) -> List[Carrier]:
    """[A, J(A), J²(A), ...] up to the requested depth."""
    out: List[Carrier] = [base]
    for _ in range(depth):
        out.append(j_kernel(out[-1]))
    return out


def curvature(base: Carrier, a, b) -> TElement:
    return tensor_algebra(base).curvature(a, b)


def eta(base: Carrier, x) -> Any:
    return tensor_algebra(base).eta(x)


def sigma(base: Carrier, b) -> TElement:
    return tensor_algebra(base).sigma(b)


# -- morphisms -----------------------------------------------------------


class Morphism:
    """A named morphism with exact evaluation semantics.

    The ``name`` is the expression tree in textual form; composites record
    their constituents.  Equality of morphisms is never decided here — only
    observational agreement on sampled elements (see the verifier).
    """

    def __init__(self, source: Carrier, target: Carrier, fn: Callable, name: str):
        self.source = source
        self.target = target
        self.fn = fn
        self.name = name

    def __call__(self, x):
        return self.fn(x)

    def after(self, other: "Morphism") -> "Morphism":
        """The composite self ∘ other."""
        return Morphism(
            other.source,
            self.target,
            lambda x: self.fn(other.fn(x)),
            f"({self.name} . {other.name})",
        )

    def scaled(self, a) -> "Morphism":
        a = Fraction(a)
        return Morphism(
            self.source, self.target,
            lambda x: self.target.scale(a, self.fn(x)),
            f"({a})*{self.name}",
        )

    def __repr__(self):
        return f"<Morphism {self.name}: {self.source.name} -> {self.target.name}>"


def identity_morphism(car: Carrier) -> Morphism:
    return Morphism(car, car, lambda x: x, f"id[{car.name}]")


def zero_morphism(source: Carrier, target: Carrier) -> Morphism:
    return Morphism(source, target, lambda x: target.zero(), "0")


def word_image(ta: TensorAlgebra, x: TElement, letter_fn: Callable, target: Carrier):
    """Σ c_w Π letter_fn(letter): the evaluation scheme of classifying maps."""
    out = target.zero()
    for w, c in x:
        ls = ta.letters(w)
        prod = letter_fn(ls[0])
        for l in ls[1:]:
            prod = target.mul(prod, letter_fn(l))
        out = target.add(out, target.scale(c, prod))
    return out


def j_of(f: Morphism) -> Morphism:
    """J applied to a morphism: letterwise image, formal target words."""
    dom = j_kernel(f.source)
    tgt = j_kernel(f.target)
    ta = tensor_algebra(f.source)
    tta = tensor_algebra(f.target)

    def fn(x):
        # T(f): letter l ↦ σ(f(l)), multiplied out in T(target)
        return word_image(ta, x, lambda l: tta.sigma(f(l)), tta)

    return Morphism(dom, tgt, fn, f"J({f.name})")


def j_of_n(f: Morphism, n: int) -> Morphism:
    for _ in range(n):
        f = j_of(f)
    return f


# -- the loop classifying map λ ------------------------------------------


def path_splitting(B: Carrier, fa_path: FunctionAlgebra) -> Morphism:
    """b ↦ b(1−t) into functions on (I,{1}) (vanishing at the 1-endpoint)."""
    sfa = scalar_algebra(fa_path.pair0, 0)
    one_minus_t = sfa.sub(
        constant_function(sfa, Fraction(1)), affine_coordinate(sfa, 0)
    )
    from .funalg import transition_n

    scal = transition_n(sfa, one_minus_t, fa_path.r)[1]
    return Morphism(
        B, fa_path, lambda b: scalar_to_base(fa_path, scal, b), "s[b->b(1-t)]"
    )


def lambda_(B: Carrier, r: int = 0) -> Morphism:
    """The classifying map J(B) → B^{𝔖_1}_r of the loop extension."""
    fa_path = function_algebra(B, interval_rel_one(), r)
    fa_loop = function_algebra(B, cube(1), r)
    s = path_splitting(B, fa_path)
    dom = j_kernel(B)
    ta = tensor_algebra(B)

    def fn(x):
        mid = word_image(ta, x, s, fa_path)
        return fa_loop.canon(dict(mid))

    return Morphism(dom, fa_loop, fn, f"lambda[{B.name}]_{r}")


# -- the exchange maps κ^{n,m} -------------------------------------------


def kappa1(Bc: Carrier, m: int, r: int = 0) -> Morphism:
    """κ^{1,m}: classifying map of the simplicially-extended universal
    extension: a word of function families goes to the product of their
    coefficientwise σ-lifts, landing in kernel-valued families."""
    C = function_algebra(Bc, cube(m), r)
    TB = tensor_algebra(Bc)
    JB = j_kernel(Bc)
    faT = function_algebra(TB, cube(m), r)
    faJ = function_algebra(JB, cube(m), r)
    dom = j_kernel(C)
    ta = tensor_algebra(C)

    def slift(x):
        return apply_to_coefficients(C, x, TB, TB.sigma)

    def fn(x):
        mid = word_image(ta, x, slift, faT)
        return faJ.canon(dict(mid))

    return Morphism(dom, faJ, fn, f"kappa(1,{m})[{Bc.name}]_{r}")


KAPPA_N_BOUND = 2
KAPPA_M_BOUND = 2


def kappa(n: int, m: int, B: Carrier, r: int = 0) -> Morphism:
    """κ^{n,m}: J^n(B^{𝔖_m}_r) → (J^nB)^{𝔖_m}_r, inductively."""
    if n > KAPPA_N_BOUND or m > KAPPA_M_BOUND:
        raise ValueError(
            f"kappa indices ({n},{m}) exceed bounds "
            f"({KAPPA_N_BOUND},{KAPPA_M_BOUND})"
        )
    if n == 0:
        return identity_morphism(function_algebra(B, cube(m), r))
    if n == 1:
        return kappa1(B, m, r)
    towers = j_tower(B, n)
    return kappa1(towers[n - 1], m, r).after(j_of(kappa(n - 1, m, B, r)))


# -- samplers ------------------------------------------------------------


def sample_algebra_element(car: Carrier, rng: random.Random):
    """A deterministic random element of any supported carrier."""
    if isinstance(car, JKernel):
        return sample_j_element(car.ta.base, rng)
    if isinstance(car, FunctionAlgebra):
        return sample_element(car, rng)
    return random_base_element(car, rng)


def sample_j_element(base: Carrier, rng: random.Random):
    """A random element of J(base): curvature products with multipliers."""
    ta = tensor_algebra(base)
    a = sample_algebra_element(base, rng)
    b = sample_algebra_element(base, rng)
    el = ta.curvature(a, b)
    if rng.random() < 0.3:
        # J(A) is an ideal of T(A): multiplying by σ(c) stays inside
        el = ta.mul(el, ta.sigma(sample_algebra_element(base, rng)))
    return ta.scale(Fraction(rng.randint(1, 2)), el)


def sample_j_elements(
    A: Carrier, depth: int, count: int, seed: int
) -> List[TElement]:
    """Deterministic random elements of J^depth(A)."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    rng = random.Random(seed)
    tower = j_tower(A, depth)
    out = []
    for _ in range(count):
        out.append(sample_j_element(tower[depth - 1], rng))
    return out
