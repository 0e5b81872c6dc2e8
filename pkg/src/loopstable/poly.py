"""Exact polynomial utilities.

Two layers share one representation ``tuple[(exponent-tuple, coefficient)]``,
sorted by exponents with zero coefficients dropped:

- *scalar* polynomials (``qp_``): coefficients are :class:`~fractions.Fraction`;
  used for substitution images and integral function families;
- *carrier* polynomials (``cp_``): coefficients are elements of an arbitrary
  :class:`~loopstable.carriers.Carrier`; used for polynomial function families.

Variables are ``t_1 .. t_n`` (the simplex coordinate ``t_0`` is always
eliminated via ``t_0 = 1 − Σ t_i``); exponent tuples have length ``n``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Callable, Dict, List, Sequence, Tuple

Exps = Tuple[int, ...]
QPoly = Tuple[Tuple[Exps, Fraction], ...]
CPoly = Tuple[Tuple[Exps, Any], ...]

# -- scalar polynomials -------------------------------------------------


def qp_zero() -> QPoly:
    return ()


def qp_const(c, nvars: int) -> QPoly:
    c = Fraction(c)
    if c == 0:
        return ()
    return (((0,) * nvars, c),)


def qp_var(i: int, nvars: int) -> QPoly:
    """The variable ``t_i`` (1-based)."""
    if not 1 <= i <= nvars:
        raise ValueError(f"t_{i} out of range for {nvars} variables")
    exps = tuple(1 if j == i - 1 else 0 for j in range(nvars))
    return ((exps, Fraction(1)),)


def _qp_norm(d: Dict[Exps, Fraction]) -> QPoly:
    return tuple(sorted((e, c) for e, c in d.items() if c != 0))


def qp_add(p: QPoly, q: QPoly) -> QPoly:
    d: Dict[Exps, Fraction] = dict(p)
    for e, c in q:
        d[e] = d.get(e, Fraction(0)) + c
    return _qp_norm(d)


def qp_neg(p: QPoly) -> QPoly:
    return tuple((e, -c) for e, c in p)


def qp_sub(p: QPoly, q: QPoly) -> QPoly:
    return qp_add(p, qp_neg(q))


def qp_scale(a, p: QPoly) -> QPoly:
    a = Fraction(a)
    if a == 0:
        return ()
    return tuple((e, a * c) for e, c in p)


def qp_mul(p: QPoly, q: QPoly) -> QPoly:
    d: Dict[Exps, Fraction] = {}
    for e1, c1 in p:
        for e2, c2 in q:
            e = tuple(a + b for a, b in zip(e1, e2))
            d[e] = d.get(e, Fraction(0)) + c1 * c2
    return _qp_norm(d)


def qp_pow(p: QPoly, k: int) -> QPoly:
    if k == 0:
        raise ValueError("no unit degree-0 context; use qp_const explicitly")
    out = p
    for _ in range(k - 1):
        out = qp_mul(out, p)
    return out


def qp_subst(p: QPoly, images: Sequence[QPoly], nvars_out: int) -> QPoly:
    """Substitute ``t_i := images[i-1]`` into ``p``."""
    out = qp_zero()
    for e, c in p:
        term = qp_const(c, nvars_out)
        for i, k in enumerate(e):
            if k:
                term = qp_mul(term, qp_pow(images[i], k))
        out = qp_add(out, term)
    return out


def qp_eval(p: QPoly, point: Sequence[Fraction]) -> Fraction:
    total = Fraction(0)
    for e, c in p:
        v = c
        for x, k in zip(point, e):
            v *= Fraction(x) ** k
        total += v
    return total


def qp_degree(p: QPoly) -> int:
    return max((sum(e) for e, _ in p), default=-1)


# -- carrier polynomials ------------------------------------------------


def cp_zero() -> CPoly:
    return ()


def _cp_norm(car, d: Dict[Exps, Any]) -> CPoly:
    return tuple(sorted((e, c) for e, c in d.items() if not car.is_zero(c)))


def cp_add(car, p: CPoly, q: CPoly) -> CPoly:
    d: Dict[Exps, Any] = dict(p)
    for e, c in q:
        d[e] = car.add(d[e], c) if e in d else c
    return _cp_norm(car, d)


def cp_neg(car, p: CPoly) -> CPoly:
    return tuple((e, car.neg(c)) for e, c in p)


def cp_scale(car, a, p: CPoly) -> CPoly:
    a = Fraction(a)
    if a == 0:
        return ()
    return _cp_norm(car, {e: car.scale(a, c) for e, c in p})


def cp_mul(car, p: CPoly, q: CPoly) -> CPoly:
    d: Dict[Exps, Any] = {}
    for e1, c1 in p:
        for e2, c2 in q:
            e = tuple(a + b for a, b in zip(e1, e2))
            c = car.mul(c1, c2)
            d[e] = car.add(d[e], c) if e in d else c
    return _cp_norm(car, d)


def cp_from_scalar(car, q: QPoly, c: Any) -> CPoly:
    """``c · q`` with ``c`` a carrier element and ``q`` scalar."""
    return _cp_norm(car, {e: car.scale(a, c) for e, a in q})


def cp_constant(car, c: Any, nvars: int) -> CPoly:
    if car.is_zero(c):
        return ()
    return (((0,) * nvars, c),)


def cp_map_coeffs(tgt_car, p: CPoly, fn: Callable[[Any], Any]) -> CPoly:
    return _cp_norm(tgt_car, {e: fn(c) for e, c in p})


def cp_subst(car, p: CPoly, images: Sequence[QPoly], nvars_out: int) -> CPoly:
    """Substitute scalar polynomials for the variables of a carrier poly."""
    d: Dict[Exps, Any] = {}
    for e, c in p:
        term = qp_const(1, nvars_out)
        for i, k in enumerate(e):
            if k:
                term = qp_mul(term, qp_pow(images[i], k))
        for e2, a in term:
            v = car.scale(a, c)
            d[e2] = car.add(d[e2], v) if e2 in d else v
    return _cp_norm(car, d)


def cp_is_zero(car, p: CPoly) -> bool:
    return all(car.is_zero(c) for c in dict(p).values())


def cp_degree(p: CPoly) -> int:
    return max((sum(e) for e, _ in p), default=-1)


# -- simplicial operator substitution images ----------------------------


def monotone_images(alpha: Sequence[int], q: int, p: int) -> List[QPoly]:
    """Images of ``t_1..t_q`` under the pullback of a monotone ``α: [p]→[q]``.

    ``t_i ↦ Σ_{α(j)=i} t'_j`` with ``t'_0 = 1 − Σ_{j≥1} t'_j``.
    """
    if len(alpha) != p + 1:
        raise ValueError("operator has wrong arity")
    t0 = qp_const(1, p)
    for j in range(1, p + 1):
        t0 = qp_sub(t0, qp_var(j, p))
    images = []
    for i in range(1, q + 1):
        img = qp_zero()
        for j, a in enumerate(alpha):
            if a == i:
                img = qp_add(img, t0 if j == 0 else qp_var(j, p))
        images.append(img)
    return images


def delta_alpha(i: int, q: int) -> Tuple[int, ...]:
    """The coface ``δ_i : [q−1] → [q]`` as an image tuple."""
    return tuple(j if j < i else j + 1 for j in range(q))


def sigma_alpha(j: int, q: int) -> Tuple[int, ...]:
    """The codegeneracy ``σ_j : [q+1] → [q]`` as an image tuple."""
    return tuple(k if k <= j else k - 1 for k in range(q + 2))


def word_alpha(word: Sequence[int], top: int) -> Tuple[int, ...]:
    """Image tuple of the surjection behind a degeneracy word.

    ``word = (j1 > j2 > ... > jm)`` encodes ``s_{j1}···s_{jm}``; the combined
    operator ``[top] → [top − m]`` sends ``k`` through each ``σ_j`` in turn.
    """
    out = []
    for k in range(top + 1):
        v = k
        for j in word:
            v = v if v <= j else v - 1
        out.append(v)
    return tuple(out)
