"""Algebras of polynomial functions on subdivided simplicial pairs.

An element of ``B^(K,L)_r`` is a family assigning to each nondegenerate
p-simplex of ``sd^r K`` a polynomial in ``t_1..t_p`` with coefficients in the
base carrier ``B``, compatible with faces and vanishing on ``sd^r L``.
Families are canonical sorted tuples ``((simplex, poly), ...)``; values on
degenerate simplices are recovered by degeneracy substitution.

Provides restriction (pullback along simplicial maps), the transition map
(pullback along the last-vertex map), the multiplication morphisms μ, path
concatenation, the reversal ω, deterministic samplers, and the small
integral-lattice computations (decomposition over ``Z^(K,L)_r``).
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .carriers import Carrier, RAT
from .linalg import invert, nullspace, rref
from .poly import (
    CPoly,
    QPoly,
    cp_add,
    cp_constant,
    cp_degree,
    cp_from_scalar,
    cp_is_zero,
    cp_map_coeffs,
    cp_mul,
    cp_neg,
    cp_scale,
    cp_subst,
    cp_zero,
    delta_alpha,
    monotone_images,
    qp_add,
    qp_const,
    qp_mul,
    qp_scale,
    qp_sub,
    qp_var,
    word_alpha,
)
from .simplicial import (
    BoxProduct,
    FinSimplicialSet,
    FormalSimplex,
    SimplicialMap,
    SimplicialPair,
    box_product,
    flatten_vertex,
    interval_rel_one,
    iterated_sd,
    last_vertex_map,
    nd,
    standard_simplex,
    subdivide_map,
)

Element = Tuple[Tuple[Any, CPoly], ...]


class FunctionAlgebra(Carrier):
    """The carrier ``B^(K,L)_r`` (or ``B^{sd^r K}`` when not relative)."""

    def __init__(
        self,
        base: Carrier,
        pair0: SimplicialPair,
        r: int,
        relative: bool = True,
    ) -> None:
        self.base = base
        self.pair0 = pair0
        self.r = r
        self.relative = relative
        self.levels = iterated_sd(pair0, r)
        self.space = self.levels[r]
        self.sset = self.space.total
        self.subset = self.space.sub if relative else frozenset()
        rel = "" if relative else "/abs"
        self.name = f"{base.name}^({pair0.name}){rel}_{r}"
        self.can_decide_zero = base.can_decide_zero
        self._gammas: Dict[int, SimplicialMap] = {}

    # -- tower plumbing --------------------------------------------------

    def gamma(self, k: int) -> SimplicialMap:
        """Last-vertex map sd^{k+1} total → sd^k total (within this tower)."""
        if k not in self._gammas:
            if k + 1 < len(self.levels):
                tgt = self.levels[k + 1].total
            else:
                tgt = None
            self._gammas[k] = last_vertex_map(self.levels[k].total, tgt)
        return self._gammas[k]

    # -- canonical elements ----------------------------------------------

    def canon(self, parts: Dict[Any, CPoly]) -> Element:
        out = []
        for b, p in parts.items():
            if b in self.subset:
                if self.base.can_decide_zero and not cp_is_zero(self.base, p):
                    raise ValueError(f"nonzero value on subobject simplex {b!r}")
                continue
            if p:
                out.append((b, p))
        return tuple(sorted(out, key=lambda kv: repr(kv[0])))

    def zero(self) -> Element:
        return ()

    def value(self, x: Element, fs: FormalSimplex) -> CPoly:
        """Value on any formal simplex, via degeneracy substitution."""
        stored = dict(x).get(fs.base, cp_zero())
        if not fs.word:
            return stored
        q = self.sset.dims[fs.base]
        p = q + len(fs.word)
        alpha = word_alpha(fs.word, p)
        return cp_subst(self.base, stored, monotone_images(alpha, q, p), p)

    def add(self, x: Element, y: Element) -> Element:
        d = dict(x)
        for b, p in y:
            d[b] = cp_add(self.base, d[b], p) if b in d else p
        return self.canon(d)

    def scale(self, a, x: Element) -> Element:
        return self.canon({b: cp_scale(self.base, a, p) for b, p in x})

    def mul(self, x: Element, y: Element) -> Element:
        dx, dy = dict(x), dict(y)
        out = {}
        for b in set(dx) & set(dy):
            out[b] = cp_mul(self.base, dx[b], dy[b])
        return self.canon(out)

    def is_zero(self, x: Element) -> bool:
        return all(cp_is_zero(self.base, p) for _, p in x)

    def contains(self, x) -> bool:
        """Face compatibility plus vanishing (skipped over formal bases)."""
        if not isinstance(x, tuple):
            return False
        d = dict(x)
        if any(b not in self.sset.dims for b in d):
            return False
        if any(b in self.subset for b in d):
            return False
        if not self.base.can_decide_zero:
            return True
        for b in self.sset.bases():
            q = self.sset.dims[b]
            if q == 0:
                continue
            poly = d.get(b, cp_zero())
            for i in range(q + 1):
                lhs = cp_subst(
                    self.base, poly,
                    monotone_images(delta_alpha(i, q), q, q - 1), q - 1,
                )
                rhs = self.value(x, self.sset.faces[b][i])
                if lhs != rhs:
                    return False
        return True

    def check(self, x: Element) -> Element:
        if not self.contains(x):
            raise ValueError(f"invalid element of {self.name}")
        return x

    # -- point evaluation ------------------------------------------------

    def vertex_value(self, x: Element, vbase: Any):
        """The base-carrier value at a vertex."""
        p = dict(x).get(vbase, cp_zero())
        return p[0][1] if p else self.base.zero()


_FA_CACHE: Dict[Tuple[int, str, int, bool], FunctionAlgebra] = {}


def function_algebra(
    base: Carrier, pair0: SimplicialPair, r: int, relative: bool = True
) -> FunctionAlgebra:
    """Cached constructor (pairs are identified by their canonical names)."""
    key = (id(base), pair0.name, r, relative)
    if key not in _FA_CACHE:
        _FA_CACHE[key] = FunctionAlgebra(base, pair0, r, relative)
    return _FA_CACHE[key]


# -- restriction and transition -----------------------------------------


def pullback_along(
    src: FunctionAlgebra, x: Element, smap: SimplicialMap, tgt: FunctionAlgebra
) -> Element:
    """``x ∘ smap`` where ``smap : tgt.sset → src.sset``."""
    return tgt.canon({b: src.value(x, smap.apply(nd(b))) for b in tgt.sset.bases()})


def restrict(src: FunctionAlgebra, x: Element, smap: SimplicialMap, tgt: FunctionAlgebra) -> Element:
    """Public name for pullback of functions along a simplicial map."""
    return pullback_along(src, x, smap, tgt)


def transition(src: FunctionAlgebra, x: Element) -> Tuple[FunctionAlgebra, Element]:
    """Pullback along the last-vertex map; raises the subdivision index."""
    tgt = function_algebra(src.base, src.pair0, src.r + 1, src.relative)
    gamma = tgt.gamma(src.r)
    return tgt, pullback_along(src, x, gamma, tgt)


def transition_n(src: FunctionAlgebra, x: Element, n: int) -> Tuple[FunctionAlgebra, Element]:
    fa = src
    for _ in range(n):
        fa, x = transition(fa, x)
    return fa, x


def tower_map(
    f0: SimplicialMap,
    src_levels: Sequence[SimplicialPair],
    tgt_levels: Sequence[SimplicialPair],
    r: int,
) -> SimplicialMap:
    """``sd^r`` of a map, using the two supplied subdivision towers."""
    f = f0
    for k in range(1, r + 1):
        f = subdivide_map(f, src_levels[k].total, tgt_levels[k].total)
    return f


# -- the multiplication morphism μ --------------------------------------


_MU_CACHE: Dict[Tuple, Tuple] = {}


def mu(outer: FunctionAlgebra, x: Element) -> Tuple[FunctionAlgebra, Element]:
    """μ : (B^(K,L)_r)^(K',L')_s → B^{(K,L)□(K',L')}_{r+s}.

    Direct evaluation: a simplex ``z`` of the subdivided box projects to
    formal simplices ``a``, ``b`` of the factors; the value at ``z`` is the
    value at ``a`` of the (inner-transitioned) coefficients of the value at
    ``b`` of the (outer-transitioned) family.  On decomposable tensors this
    is the projection-pullback formula.
    """
    inner = outer.base
    if not isinstance(inner, FunctionAlgebra):
        raise ValueError("mu needs a function algebra of function algebras")
    B, r, s = inner.base, inner.r, outer.r
    key = (id(B), inner.pair0.name, outer.pair0.name, r, s, inner.relative)
    if key not in _MU_CACHE:
        bp = box_product(inner.pair0, outer.pair0)
        target = function_algebra(B, bp.pair, r + s, relative=True)
        inner_rs = function_algebra(B, inner.pair0, r + s, inner.relative)
        outer_rs = function_algebra(inner, outer.pair0, r + s, outer.relative)
        prK = tower_map(bp.pr1, target.levels, inner_rs.levels, r + s)
        prK2 = tower_map(bp.pr2, target.levels, outer_rs.levels, r + s)
        _MU_CACHE[key] = (target, inner_rs, prK, prK2)
    target, inner_rs, prK, prK2 = _MU_CACHE[key]
    outer_rs_fa, x2 = transition_n(outer, x, r)
    tcache: Dict[Element, Element] = {}
    parts: Dict[Any, CPoly] = {}
    for z in target.sset.bases():
        p = target.sset.dims[z]
        a = prK.apply(nd(z))
        b = prK2.apply(nd(z))
        Q = outer_rs_fa.value(x2, b)  # coefficients are inner elements at r
        acc: Dict[Tuple[int, ...], Any] = {}
        for e, c in Q:
            if c not in tcache:
                tcache[c] = transition_n(inner, c, s)[1]
            v = inner_rs.value(tcache[c], a)
            for e2, c2 in v:
                ee = tuple(m + n for m, n in zip(e2, e))
                acc[ee] = B.add(acc[ee], c2) if ee in acc else c2
        parts[z] = tuple(sorted((e, c) for e, c in acc.items() if not B.is_zero(c)))
    return target, target.canon(parts)


_MAP_CACHE: Dict[Tuple, SimplicialMap] = {}


def unflatten_map(
    flat: FunctionAlgebra, nested: FunctionAlgebra, split: int
) -> SimplicialMap:
    """sd^r of the canonical iso ``I^{a+b} → I^a × I^b`` (vertexwise split)."""
    key = ("unflatten", flat.name, nested.name, split)
    if key not in _MAP_CACHE:
        f0 = SimplicialMap.from_vertex_map(
            flat.levels[0].total,
            nested.levels[0].total,
            lambda v: (v[:split], v[split:]),
            name="unflatten",
        )
        _MAP_CACHE[key] = tower_map(f0, flat.levels, nested.levels, flat.r)
    return _MAP_CACHE[key]


def mu_flat(outer: FunctionAlgebra, x: Element) -> Tuple[FunctionAlgebra, Element]:
    """μ followed by the canonical identification with the flat cube pair.

    Requires both factor pairs to be flat cube-like (coordinate profiles
    present); the result lives on the pair with the concatenated profile.
    """
    inner = outer.base
    box_fa, y = mu(outer, x)
    profile = inner.pair0.coords + outer.pair0.coords
    flat_pair = flat_pair_from_profile(profile)
    target = function_algebra(inner.base, flat_pair, box_fa.r, relative=True)
    g = unflatten_map(target, box_fa, len(inner.pair0.coords))
    return target, pullback_along(box_fa, y, g, target)


def flat_pair_from_profile(profile: Tuple[str, ...]) -> SimplicialPair:
    """The pair on ``I^n`` whose subobject is described per coordinate:
    ``both`` (full boundary), ``one`` (the 1-face), ``free`` (nothing).

    Dispatches to the canonical constructors where one exists, so that
    algebra caching by pair name stays coherent.
    """
    from .simplicial import _bits, _tuple_leq, cube, nerve, path_pair

    n = len(profile)
    if n == 0:
        return standard_simplex(0)
    if all(k == "both" for k in profile):
        return cube(n)
    if profile == ("one",):
        return interval_rel_one()
    if profile[:-1] == ("both",) * (n - 1) and profile[-1] == "one":
        return path_pair(n - 1)
    verts = [tuple(b) for b in _bits(n)]
    total = nerve(verts, _tuple_leq, name=f"I[{','.join(profile)}]")
    sub = frozenset(
        c
        for c in total.bases()
        if any(
            (profile[i] == "both" and len({v[i] for v in c}) == 1)
            or (profile[i] == "one" and all(v[i] == 1 for v in c))
            for i in range(n)
        )
    )
    return SimplicialPair(total, sub, name=total.name, coords=profile)


def cube_pair(n: int) -> SimplicialPair:
    """𝔖_n in profile form (used by all carriers)."""
    return flat_pair_from_profile(("both",) * n)


def path_space_pair(n: int) -> SimplicialPair:
    """𝔖_n □ (I,{1}) in profile form (carrier of the path extension)."""
    return flat_pair_from_profile(("both",) * n + ("one",))


def interval_pair() -> SimplicialPair:
    """(I, ∅) in profile form (mapping cylinders)."""
    return flat_pair_from_profile(("free",))


def relative_interval_pair() -> SimplicialPair:
    """(I, {1}) in profile form."""
    return flat_pair_from_profile(("one",))


# -- interval structure: endpoints, ω, concatenation ---------------------


def endpoint_bases(r: int) -> Tuple[Any, Any]:
    """The global 0- and 1-endpoint vertex bases of sd^r I."""
    e0: Any = ((0,),)
    e1: Any = ((1,),)
    for _ in range(r):
        e0, e1 = (e0,), (e1,)
    return e0, e1


def ev_endpoint(fa: FunctionAlgebra, x: Element, which: int):
    """Evaluation at the global endpoint (0 or 1) of an interval space."""
    e0, e1 = endpoint_bases(fa.r)
    return fa.vertex_value(x, e1 if which else e0)


def d0(fa: FunctionAlgebra, x: Element):
    """Face d₀ = evaluation at the global 1-endpoint."""
    return ev_endpoint(fa, x, 1)


def d1(fa: FunctionAlgebra, x: Element):
    """Face d₁ = evaluation at the global 0-endpoint."""
    return ev_endpoint(fa, x, 0)


def omega(fa: FunctionAlgebra, x: Element) -> Element:
    """The reversal automorphism of functions on a one-coordinate space.

    At r = 0 this is the substitution t ↦ 1−t (the endpoint swap of I is
    not simplicial); at r ≥ 1 it is the pullback along the
    endpoint-exchanging simplicial automorphism of sd^r I.
    """
    if len(fa.pair0.coords) != 1:
        raise ValueError("omega acts on one-coordinate spaces only")
    if fa.r == 0:
        v0, v1, edge = ((0,),), ((1,),), ((0,), (1,))
        d = dict(x)
        flip = [qp_sub(qp_const(1, 1), qp_var(1, 1))]
        parts = {
            v0: d.get(v1, cp_zero()),
            v1: d.get(v0, cp_zero()),
            edge: cp_subst(fa.base, d.get(edge, cp_zero()), flip, 1),
        }
        return fa.canon(parts)
    from .simplicial import interval_reversal

    rev = interval_reversal(fa.r)
    return pullback_along(fa, x, rev, fa)


def _interval_inclusions(fa: FunctionAlgebra) -> Tuple[SimplicialMap, SimplicialMap]:
    """sd^r of the two copies I → sd I (both oriented toward the barycenter).

    Returns maps from ``fa``'s level-r total into the level-(r+1) total.
    """
    key = ("incl", fa.pair0.name, fa.r)
    if key not in _MAP_CACHE:
        tgt = function_algebra(fa.base, fa.pair0, fa.r + 1, fa.relative)
        I0 = fa.levels[0].total
        sdI = tgt.levels[1].total
        v0, v1, edge = ((0,),), ((1,),), ((0,), (1,))
        j1 = SimplicialMap.from_vertex_map(
            I0, sdI, lambda v: v0 if v == (0,) else edge, name="copy1"
        )
        j2 = SimplicialMap.from_vertex_map(
            I0, sdI, lambda v: v1 if v == (0,) else edge, name="copy2"
        )
        _MAP_CACHE[key] = (
            tower_map(j1, fa.levels, tgt.levels[1:], fa.r),
            tower_map(j2, fa.levels, tgt.levels[1:], fa.r),
        )
    return _MAP_CACHE[key]


def concatenate(fa: FunctionAlgebra, x: Element, y: Element) -> Tuple[FunctionAlgebra, Element]:
    """Concatenation of interval families: x on the first half, the
    reversal of y on the second; requires d₀(x) = d₁(y)."""
    if fa.base.can_decide_zero and not fa.base.eq(d0(fa, x), d1(fa, y)):
        raise ValueError("endpoint mismatch: d0(first) != d1(second)")
    tgt = function_algebra(fa.base, fa.pair0, fa.r + 1, fa.relative)
    f1, f2 = _interval_inclusions(fa)
    # the reversal of the second half is computed in the absolute algebra
    # (it moves any endpoint-vanishing condition to the other endpoint)
    fa_abs = function_algebra(fa.base, fa.pair0, fa.r, relative=False)
    yrev = omega(fa_abs, y)
    parts: Dict[Any, CPoly] = {}

    def put(b, p):
        if b in parts and parts[b] != p:
            raise ValueError("concatenation halves disagree on the overlap")
        parts[b] = p

    dx, dy = dict(x), dict(yrev)
    for b in fa.sset.bases():
        put(f1.base_map[b].base, dx.get(b, cp_zero()))
        put(f2.base_map[b].base, dy.get(b, cp_zero()))
    missing = set(tgt.sset.bases()) - set(parts)
    if missing:
        raise AssertionError(f"concatenation did not cover {missing!r}")
    return tgt, tgt.canon(parts)


def apply_to_coefficients(
    src: FunctionAlgebra, x: Element, tgt_base: Carrier, fn
) -> Element:
    """Change of base: apply ``fn`` to every polynomial coefficient.

    For a linear/multiplicative ``fn : src.base → tgt_base`` this is the
    induced map ``src.base^(K,L)_r → tgt_base^(K,L)_r``.
    """
    tgt = function_algebra(tgt_base, src.pair0, src.r, src.relative)
    return tgt.canon({b: cp_map_coeffs(tgt_base, p, fn) for b, p in x})


# -- scalar families, samplers, make_element -----------------------------


def scalar_algebra(pair0: SimplicialPair, r: int, relative: bool = False) -> FunctionAlgebra:
    return function_algebra(RAT, pair0, r, relative)


def constant_function(fa: FunctionAlgebra, c) -> Element:
    """The constant family (only valid on non-relative spaces unless c=0)."""
    return fa.canon(
        {b: cp_constant(fa.base, c, fa.sset.dims[b]) for b in fa.sset.bases()}
    )


def affine_coordinate(sfa: FunctionAlgebra, i: int) -> Element:
    """The i-th cube coordinate as a scalar function (r = 0 spaces)."""
    if sfa.r != 0:
        raise ValueError("build coordinates at r = 0, then transition")
    parts: Dict[Any, CPoly] = {}
    for b in sfa.sset.bases():
        p = sfa.sset.dims[b]
        verts = [flatten_vertex(v[0]) for v in sfa.sset.vertices(nd(b))]
        poly: QPoly = qp_const(verts[0][i], p)
        for j in range(1, p + 1):
            poly = qp_add(
                poly, qp_scale(Fraction(verts[j][i] - verts[0][i]), qp_var(j, p))
            )
        parts[b] = poly
    return sfa.canon(parts)


def vanishing_scalar(pair0: SimplicialPair) -> Element:
    """A scalar family generating the vanishing conditions of the pair:
    the product of (t_i² − t_i) for 'both' coordinates and (t_i − 1) for
    'one' coordinates (constant 1 if the profile is empty/free)."""
    sfa = scalar_algebra(pair0, 0, relative=False)
    out = constant_function(sfa, Fraction(1))
    for i, kind in enumerate(pair0.coords):
        h = affine_coordinate(sfa, i)
        if kind == "both":
            out = sfa.mul(out, sfa.sub(sfa.mul(h, h), h))
        elif kind == "one":
            out = sfa.mul(out, sfa.sub(h, constant_function(sfa, Fraction(1))))
    return out


def scalar_to_base(fa: FunctionAlgebra, scalar: Element, b) -> Element:
    """``b ⊗ q``: scale a scalar family into the base carrier."""
    return fa.canon(
        {
            s: tuple(
                (e, fa.base.scale(c, b))
                for e, c in poly
                if not fa.base.is_zero(fa.base.scale(c, b))
            )
            for s, poly in scalar
        }
    )


def make_element(fa: FunctionAlgebra, b, scalar: Element) -> Element:
    """``b ⊗ q`` with the integral family re-validated on the pair."""
    sfa = scalar_algebra(fa.pair0, fa.r, relative=fa.relative)
    sfa.check(scalar)
    return fa.check(scalar_to_base(fa, scalar, b))


def random_base_element(B: Carrier, rng: random.Random):
    from .algebras import FinAlgebra
    from .carriers import Rationals

    if isinstance(B, Rationals):
        return Fraction(rng.randint(-3, 3))
    if isinstance(B, FunctionAlgebra):
        return sample_element(B, rng)
    if isinstance(B, FinAlgebra):
        out = B.zero()
        for l in B.labels:
            out = B.add(out, B.scale(Fraction(rng.randint(-2, 2)), B.basis_vec(l)))
        return out
    raise ValueError(f"no sampler for base carrier {B.name}")


def sample_element(
    fa: FunctionAlgebra,
    rng: random.Random,
    degree: int = 2,
    terms: int = 2,
) -> Element:
    """Deterministic random element of a cube-like function algebra.

    Sums of ``b · V · (affine combinations of coordinates)`` transitioned to
    the requested subdivision level, where V is the vanishing generator.
    """
    pair0 = fa.pair0
    if pair0.coords is None:
        raise ValueError(f"no sampler for pair {pair0.name}")
    sfa = scalar_algebra(pair0, 0, relative=False)
    V = vanishing_scalar(pair0) if fa.relative else constant_function(sfa, Fraction(1))
    handles = [affine_coordinate(sfa, i) for i in range(len(pair0.coords))]
    fa0 = function_algebra(fa.base, pair0, 0, fa.relative)
    total = fa0.zero()
    for _ in range(terms):
        b = random_base_element(fa.base, rng)
        P = V
        for _ in range(rng.randint(0, max(degree - 1, 0))):
            combo = constant_function(sfa, Fraction(rng.randint(-2, 2)))
            for h in handles:
                combo = sfa.add(
                    combo, sfa.scale(Fraction(rng.randint(-2, 2)), h)
                )
            P = sfa.mul(P, combo)
        total = fa0.add(total, scalar_to_base(fa0, P, b))
    return transition_n(fa0, total, fa.r)[1]


# -- integral lattice (decomposition over Z^(K,L)_r) ---------------------


def lattice_basis(pair0: SimplicialPair, r: int, max_degree: int) -> List[Element]:
    """Basis of the scalar families of total degree ≤ max_degree."""
    sfa = scalar_algebra(pair0, r, relative=True)
    sset, sub = sfa.sset, sfa.space.sub
    slots: List[Tuple[Any, Tuple[int, ...]]] = []
    for b in sset.bases():
        if b in sub:
            continue
        p = sset.dims[b]
        for e in _monomials(p, max_degree):
            slots.append((b, e))
    index = {se: i for i, se in enumerate(slots)}
    rows: List[List[Fraction]] = []

    def add_row(lin: Dict[Tuple[Any, Tuple[int, ...]], Fraction]):
        row = [Fraction(0)] * len(slots)
        for se, c in lin.items():
            row[index[se]] += c
        rows.append(row)

    for b in sset.bases():
        q = sset.dims[b]
        if q == 0:
            continue
        for i in range(q + 1):
            face = sset.faces[b][i]
            y, w = face.base, face.word
            # For each output monomial: (δ_i^* of b's poly) − (word^* of y's poly) = 0
            lin_per_out: Dict[Tuple[int, ...], Dict] = {}
            if b not in sub:
                imgs = monotone_images(delta_alpha(i, q), q, q - 1)
                for e in _monomials(q, max_degree):
                    mono: QPoly = (((e), Fraction(1)),)
                    sub_poly = _qp_subst_mono(mono, imgs, q - 1)
                    for e2, c in sub_poly:
                        lin_per_out.setdefault(e2, {})[(b, e)] = (
                            lin_per_out.get(e2, {}).get((b, e), Fraction(0)) + c
                        )
            if y not in sub:
                qy = sset.dims[y]
                pdim = qy + len(w)
                imgs = monotone_images(word_alpha(w, pdim), qy, pdim)
                for e in _monomials(qy, max_degree):
                    mono = ((e, Fraction(1)),)
                    sub_poly = _qp_subst_mono(mono, imgs, pdim)
                    for e2, c in sub_poly:
                        lin_per_out.setdefault(e2, {})[(y, e)] = (
                            lin_per_out.get(e2, {}).get((y, e), Fraction(0)) - c
                        )
            for _, lin in sorted(lin_per_out.items()):
                add_row(lin)

    basis = nullspace(rows, len(slots))
    out = []
    for v in basis:
        parts: Dict[Any, Dict[Tuple[int, ...], Fraction]] = {}
        for (b, e), c in zip(slots, v):
            if c:
                parts.setdefault(b, {})[e] = c
        out.append(
            tuple(
                sorted(
                    ((b, tuple(sorted(d.items()))) for b, d in parts.items()),
                    key=lambda kv: repr(kv[0]),
                )
            )
        )
    return out


def _qp_subst_mono(mono: QPoly, images: Sequence[QPoly], nvars_out: int) -> QPoly:
    from .poly import qp_subst

    return qp_subst(mono, images, nvars_out)


def _monomials(nvars: int, max_degree: int) -> List[Tuple[int, ...]]:
    if nvars == 0:
        return [()]
    out = []

    def rec(prefix, remaining, left):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for k in range(left + 1):
            rec(prefix + [k], remaining - 1, left - k)

    rec([], nvars, max_degree)
    return sorted(out)


def decompose(
    fa: FunctionAlgebra, x: Element, basis: List[Element]
) -> List[Tuple[Any, Element]]:
    """Write ``x = Σ c_i ⊗ e_i`` over the scalar lattice basis.

    Returns the list of (carrier coefficient, basis element) pairs;
    raises if the decomposition does not exist or is not exact.
    """
    slots = sorted(
        {(b, e) for el in basis for b, poly in el for e, _ in poly},
        key=repr,
    )
    mat = []
    for el in basis:
        d = {(b, e): c for b, poly in el for e, c in poly}
        mat.append([d.get(s, Fraction(0)) for s in slots])
    _, pivots = rref(mat)
    if len(pivots) != len(basis):
        raise ValueError("lattice basis is linearly dependent")
    square = [[mat[i][j] for j in pivots] for i in range(len(basis))]
    inv = invert([list(col) for col in zip(*square)])
    xd = {(b, e): c for b, poly in x for e, c in poly}
    xs = [xd.get(slots[j], fa.base.zero()) for j in pivots]
    coeffs = []
    for i in range(len(basis)):
        c = fa.base.zero()
        for j in range(len(basis)):
            c = fa.base.add(c, fa.base.scale(inv[i][j], xs[j]))
        coeffs.append(c)
    recon = fa.zero()
    for c, el in zip(coeffs, basis):
        recon = fa.add(recon, scalar_to_base(fa, el, c))
    if recon != x:
        raise ValueError("element does not decompose over the lattice basis")
    return list(zip(coeffs, basis))


def lattice_rank(pair0: SimplicialPair, r: int, max_degree: int) -> int:
    return len(lattice_basis(pair0, r, max_degree))
