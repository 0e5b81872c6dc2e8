"""The loop-stable category at the representative level.

Objects are pairs (A, m) of an algebra carrier and an integer grading.
Morphisms are stored as concrete representatives f : Jᵃ A → B^{𝔖_b}_r
together with a stabilization index; homotopy classes are never reified.
This module provides the degree-raising operator on representatives, the
⋆ composition with its sign bookkeeping, negation (via interval reversal
or coordinate swaps), the translation shift, triangle assembly, and
finite products.
"""

from dataclasses import dataclass, replace
from typing import Any, Optional, Tuple

from .algebras import FinAlgebra, product_algebra
from .carriers import Carrier
from .extensions import (
    ExtensionData,
    TriangleData,
    classifying_map,
    mapping_path,
)
from .funalg import (
    FunctionAlgebra,
    apply_to_coefficients,
    function_algebra,
    mu_flat,
    omega,
    pullback_along,
)
from .simplicial import SimplicialMap, cube, swap_map
from .tensorj import (
    Morphism,
    identity_morphism,
    j_kernel,
    j_of_n,
    kappa,
    lambda_,
)

INDEX_BOUND = 2
J_DEPTH_BOUND = 3

Obj = Tuple[Carrier, int]


def loop_algebra(B: Carrier, n: int, r: int = 0) -> Carrier:
    """B^{𝔖_n}_r, with the n = 0 convention B itself."""
    if n == 0:
        return B
    return function_algebra(B, cube(n), r)


@dataclass(frozen=True)
class KKHom:
    """A graded morphism representative.

    ``rep`` is a concrete map J^{m+v}A → B^{𝔖_{n+v}}_r.  ``pending_sign``
    records an unmaterialized factor of ±1; it is resolved through an
    interval coordinate as soon as one is available and is part of the
    value until then.
    """

    source: Obj
    target: Obj
    v: int
    r: int
    rep: Morphism
    pending_sign: int = 1

    @property
    def dom_index(self) -> int:
        return self.source[1] + self.v

    @property
    def cod_index(self) -> int:
        return self.target[1] + self.v

    def __call__(self, x):
        return self.rep(x)


def kk_hom(
    source: Obj,
    target: Obj,
    v: int,
    rep: Morphism,
    r: int = 0,
    pending_sign: int = 1,
) -> KKHom:
    m, n = source[1], target[1]
    if not (0 <= m + v <= INDEX_BOUND and 0 <= n + v <= INDEX_BOUND):
        raise ValueError(
            f"indices (m+v, n+v) = ({m + v}, {n + v}) outside [0, {INDEX_BOUND}]"
        )
    if pending_sign not in (1, -1):
        raise ValueError("pending_sign must be ±1")
    return KKHom(source, target, v, r, rep, pending_sign)


def from_algebra_map(f: Morphism, m: int = 0) -> KKHom:
    """An ordinary algebra map viewed in grading (·, m)."""
    return kk_hom((f.source, m), (f.target, m), -m, f)


def identity_hom(B: Carrier, n: int = 0) -> KKHom:
    return from_algebra_map(identity_morphism(B), n)


# -- the degree-raising operator ----------------------------------------


def lambda_rep(f: Morphism, n: int) -> Morphism:
    """Raise a representative's degree: μ^{n,1} ∘ f^{𝔖_1} ∘ λ.

    ``f`` maps some carrier X into B^{𝔖_n} (a plain carrier when n = 0);
    the result maps J(X) into B^{𝔖_{n+1}}.
    """
    X, F = f.source, f.target
    lam = lambda_(X)
    faX1 = lam.target
    dom = j_kernel(X)
    if n == 0:
        faF1 = function_algebra(F, cube(1), 0)

        def fn0(x):
            return apply_to_coefficients(faX1, lam(x), F, f)

        return Morphism(dom, faF1, fn0, f"raise({f.name})")
    if not isinstance(F, FunctionAlgebra):
        raise ValueError("positive degree needs a function-algebra target")
    faF1 = function_algebra(F, cube(1), 0)
    tgt = function_algebra(F.base, cube(n + 1), F.r)

    def fn(x):
        y = apply_to_coefficients(faX1, lam(x), F, f)
        return mu_flat(faF1, y)[1]

    return Morphism(dom, tgt, fn, f"raise({f.name})")


def promote(h: KKHom) -> KKHom:
    """The colimit structure map: bump the stabilization index by one."""
    return kk_hom(
        h.source,
        h.target,
        h.v + 1,
        lambda_rep(h.rep, h.cod_index),
        h.r,
        h.pending_sign,
    )


# -- sign materialization ------------------------------------------------


def swap_pullback(fa: FunctionAlgebra) -> Morphism:
    """Pullback along the swap of the first two interval coordinates.

    An odd permutation of coordinates realizes multiplication by −1 at
    the class level; applied twice it is the identity on the nose.
    """
    if len(fa.pair0.coords) < 2 or fa.r != 0:
        raise ValueError("swap needs at least two coordinates at r = 0")
    n = len(fa.pair0.coords)
    total = fa.levels[0].total

    def vmap(v):
        return (v[1], v[0]) + tuple(v[2:])

    smap = SimplicialMap.from_vertex_map(total, total, vmap, name="swap12")
    return Morphism(fa, fa, lambda x: pullback_along(fa, x, smap, fa), "c*")


def resolve_sign(h: KKHom) -> KKHom:
    """Materialize a pending −1 through an interval coordinate.

    With one coordinate the reversal automorphism represents the class
    inverse; with two or more, the swap of the first two coordinates
    does.  With no coordinate available the flag stays pending.
    """
    if h.pending_sign == 1:
        return h
    N = h.cod_index
    fa = h.rep.target
    if N == 1:
        new = Morphism(
            h.rep.source, fa, lambda x: omega(fa, h.rep(x)), f"rev∘{h.rep.name}"
        )
        return replace(h, rep=new, pending_sign=1)
    if N >= 2 and h.r == 0:
        c = swap_pullback(fa)
        return replace(h, rep=c.after(h.rep), pending_sign=1)
    return h


def negate(h: KKHom) -> KKHom:
    """The class inverse; requires at least one interval coordinate."""
    if h.cod_index < 1:
        raise ValueError("negation needs a positive codomain index")
    return resolve_sign(replace(h, pending_sign=-h.pending_sign))


# -- the ⋆ composition ---------------------------------------------------


def crossing_sign(n2: int, n3: int) -> int:
    """(−1)^{n2·n3}: the sign of moving n3 kernel layers past n2 loop
    coordinates when the middle stages are interleaved."""
    return -1 if (n2 * n3) % 2 else 1


def star(g: KKHom, f: KKHom, resolve: bool = True) -> KKHom:
    """The composite μ ∘ g^{𝔖} ∘ ±κ ∘ Jⁿ(f) of graded representatives."""
    if f.target[0] is not g.source[0] or f.target[1] != g.source[1]:
        raise ValueError("endpoint mismatch: target of f != source of g")
    m, n = f.source[1], f.target[1]
    k = g.target[1]
    N1, N2 = f.dom_index, f.cod_index
    N3, N4 = g.dom_index, g.cod_index
    if N1 + N3 > J_DEPTH_BOUND:
        raise ValueError(f"composite depth {N1 + N3} exceeds {J_DEPTH_BOUND}")
    Bc = g.source[0]
    Cc = g.target[0]
    jf = j_of_n(f.rep, N3)

    if N2 == 0:
        # κ^{N3,0} and μ^{N4,0} are identities
        tgt = g.rep.target
        fn_inner = lambda x: g.rep(jf(x))
    else:
        if N3 == 0:
            kap = None
            mid_fa = f.rep.target
        else:
            kap = kappa(N3, N2, Bc, f.r)
            mid_fa = kap.target
        g_tgt = g.rep.target
        nested = function_algebra(g_tgt, mid_fa.pair0, mid_fa.r, mid_fa.relative)
        if N4 == 0:
            tgt = nested

            def fn_inner(x):
                y = jf(x)
                if kap is not None:
                    y = kap(y)
                return apply_to_coefficients(mid_fa, y, g_tgt, g.rep)

        else:
            tgt = function_algebra(Cc, cube(N4 + N2), mid_fa.r + g.r)

            def fn_inner(x):
                y = jf(x)
                if kap is not None:
                    y = kap(y)
                z = apply_to_coefficients(mid_fa, y, g_tgt, g.rep)
                return mu_flat(nested, z)[1]

    fn = Morphism(jf.source, tgt, fn_inner, f"{g.rep.name}⋆{f.rep.name}")
    sign = f.pending_sign * g.pending_sign * crossing_sign(N2, N3)
    # the composite has J-depth N1+N3 and loop exponent N4+N2, i.e. its
    # stabilization index is v + w + n (which is v + w when n = 0)
    out = kk_hom(
        (f.source[0], m), (Cc, k), f.v + g.v + n, fn, f.r + g.r, sign
    )
    return resolve_sign(out) if resolve else out


# -- translation ---------------------------------------------------------


def translate(h: KKHom, j: int = 1) -> KKHom:
    """The grading shift; it acts as the identity on representatives."""
    return kk_hom(
        (h.source[0], h.source[1] + j),
        (h.target[0], h.target[1] + j),
        h.v - j,
        h.rep,
        h.r,
        h.pending_sign,
    )


# -- triangles -----------------------------------------------------------


def make_triangle(kind: str, data: Any, n: int = 0) -> TriangleData:
    """Assemble a four-term triangle with its signed boundary.

    ``mapping_path``: data is an algebra map f : A → B; the boundary is
    (−1)^{n+1} · (inclusion of loops) ∘ λ.  ``extension``: data is a
    split extension; the boundary is (−1)^n · (classifying map).
    """
    if kind == "mapping_path":
        f = data
        A, Bc = f.source, f.target
        mp = mapping_path(f)
        P = mp.carrier
        lam = lambda_(Bc)
        brep = Morphism(
            j_kernel(Bc), P, lambda x: mp.iota(lam(x)), f"incl∘loops[{f.name}]"
        )
        boundary = kk_hom(
            (Bc, n + 1), (P, n), -n, brep, pending_sign=(-1) ** (n + 1)
        )
        maps = (
            boundary,
            from_algebra_map(mp.pi, n),
            from_algebra_map(f, n),
        )
        objects = ((Bc, n + 1), (P, n), (A, n), (Bc, n))
        return TriangleData(objects, maps, boundary, "mapping_path")
    if kind == "extension":
        E: ExtensionData = data
        xi = classifying_map(E)
        boundary = kk_hom(
            (E.quotient, n + 1), (E.kernel, n), -n, xi, pending_sign=(-1) ** n
        )
        maps = (
            boundary,
            from_algebra_map(E.iota, n),
            from_algebra_map(E.pi, n),
        )
        objects = ((E.quotient, n + 1), (E.kernel, n), (E.mid, n), (E.quotient, n))
        return TriangleData(objects, maps, boundary, "extension")
    raise ValueError(f"unknown triangle kind {kind!r}")


# -- products ------------------------------------------------------------


def product_object(
    B: FinAlgebra, C: FinAlgebra, n: int = 0
) -> Tuple[Obj, KKHom, KKHom]:
    """B × C with componentwise structure, and its graded projections."""
    P, pr1, pr2 = product_algebra(B, C)
    h1 = from_algebra_map(Morphism(P, B, pr1.apply, "pr1"), n)
    h2 = from_algebra_map(Morphism(P, C, pr2.apply, "pr2"), n)
    return (P, n), h1, h2


def pairing(f: Morphism, g: Morphism, P: FinAlgebra) -> Morphism:
    """(f, g) : X → B × C for maps out of a common source."""

    def fn(x):
        out = {f"l.{l}": c for l, c in f(x)}
        out.update({f"r.{l}": c for l, c in g(x)})
        return tuple(sorted(out.items()))

    return Morphism(f.source, P, fn, f"({f.name},{g.name})")


def split_components(
    faP: FunctionAlgebra, x, B: Carrier, C: Carrier, pr1, pr2
):
    """Split a family of product-algebra values into component families."""
    return (
        apply_to_coefficients(faP, x, B, pr1),
        apply_to_coefficients(faP, x, C, pr2),
    )
