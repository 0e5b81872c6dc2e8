"""Function-algebra layer: families, restriction, transition, μ, ω,
concatenation, and the integral lattice."""

import random
from fractions import Fraction as F

import pytest

from loopstable.algebras import AlgebraMap, dual_numbers, rationals
from loopstable.carriers import RAT
from loopstable.funalg import (
    affine_coordinate,
    apply_to_coefficients,
    concatenate,
    constant_function,
    d0,
    d1,
    decompose,
    function_algebra,
    interval_pair,
    lattice_basis,
    lattice_rank,
    make_element,
    mu,
    mu_flat,
    omega,
    pullback_along,
    restrict,
    sample_element,
    scalar_algebra,
    scalar_to_base,
    transition,
    transition_n,
    vanishing_scalar,
)
from loopstable.simplicial import (
    SimplicialMap,
    cube,
    identity_map,
    interval_endpoint,
    point,
    standard_simplex,
)

B = dual_numbers()
BX = B.basis_vec("x")
B1 = B.basis_vec("1")
S1 = cube(1)
V0, V1V, EDGE = ((0,),), ((1,),), ((0,), (1,))
T2MT = (((1,), F(-1)), ((2,), F(1)))  # t² − t


def poly_scaled(qp, b):
    return tuple((e, tuple((k, c * v) for k, v in b)) for e, c in qp)


class TestMakeElement:
    def test_vanishing_generator(self):
        V = vanishing_scalar(S1)
        assert V == ((EDGE, T2MT),)

    def test_product_still_vanishes(self):
        sfa = scalar_algebra(S1, 0)
        V = vanishing_scalar(S1)
        sq = sfa.mul(V, V)
        assert sq == ((EDGE, (((2,), F(1)), ((3,), F(-2)), ((4,), F(1)))),)
        function_algebra(RAT, S1, 0).check(sq)

    def test_make_element(self):
        fa = function_algebra(B, S1, 0)
        x = make_element(fa, BX, vanishing_scalar(S1))
        assert x == ((EDGE, poly_scaled(T2MT, BX)),)

    def test_zero_family(self):
        fa = function_algebra(B, S1, 0)
        assert make_element(fa, BX, ()) == ()

    def test_nonvanishing_family_rejected(self):
        fa = function_algebra(B, S1, 0)
        t = affine_coordinate(scalar_algebra(S1, 0), 0)
        with pytest.raises(ValueError):
            make_element(fa, BX, t)

    def test_ops_revalidate(self):
        fa = function_algebra(B, S1, 0)
        rng = random.Random(7)
        for _ in range(5):
            x, y = sample_element(fa, rng), sample_element(fa, rng)
            fa.check(fa.add(x, y))
            fa.check(fa.mul(x, y))
            fa.check(fa.scale(F(3, 2), x))


class TestRestrict:
    def test_evaluation_at_endpoint(self):
        faI = function_algebra(B, interval_pair(), 0)
        t = affine_coordinate(scalar_algebra(interval_pair(), 0), 0)
        x = scalar_to_base(faI, t, BX)
        fa0 = function_algebra(B, point(), 0)
        y = restrict(faI, x, interval_endpoint(1), fa0)
        assert fa0.vertex_value(y, (0,)) == BX

    def test_identity(self):
        faI = function_algebra(B, interval_pair(), 0)
        x = scalar_to_base(
            faI, affine_coordinate(scalar_algebra(interval_pair(), 0), 0), BX
        )
        assert restrict(faI, x, identity_map(faI.sset), faI) == x

    def test_coordinate_along_bottom_edge(self):
        from loopstable.funalg import flat_pair_from_profile

        I2 = flat_pair_from_profile(("free", "free"))
        fa2 = scalar_algebra(I2, 0)
        t1 = affine_coordinate(fa2, 0)
        faI = scalar_algebra(interval_pair(), 0)
        incl = SimplicialMap.from_vertex_map(
            faI.sset, fa2.sset, lambda v: (v[0], 0), name="bottom"
        )
        assert restrict(fa2, t1, incl, faI) == affine_coordinate(faI, 0)

    def test_restrict_is_multiplicative(self):
        fa = function_algebra(B, S1, 0)
        fa1 = function_algebra(B, S1, 1)
        gamma = fa1.gamma(0)
        rng = random.Random(11)
        for _ in range(10):
            x, y = sample_element(fa, rng), sample_element(fa, rng)
            lhs = pullback_along(fa, fa.mul(x, y), gamma, fa1)
            rhs = fa1.mul(
                pullback_along(fa, x, gamma, fa1), pullback_along(fa, y, gamma, fa1)
            )
            assert lhs == rhs


class TestTransition:
    def test_generator_goes_to_first_half(self):
        fa = function_algebra(B, S1, 0)
        x = make_element(fa, BX, vanishing_scalar(S1))
        fa1, tx = transition(fa, x)
        edge1 = (V0, EDGE)  # first half: original 0-endpoint to barycenter
        assert dict(tx) == {edge1: poly_scaled(T2MT, BX)}
        fa1.check(tx)

    def test_zero(self):
        fa = function_algebra(B, S1, 0)
        assert transition(fa, fa.zero())[1] == ()

    def test_multiplicative_on_samples(self):
        fa = function_algebra(B, S1, 0)
        rng = random.Random(3)
        for _ in range(50):
            x, y = sample_element(fa, rng), sample_element(fa, rng)
            _, t_xy = transition(fa, fa.mul(x, y))
            fa1, tx = transition(fa, x)
            _, ty = transition(fa, y)
            assert t_xy == fa1.mul(tx, ty)

    def test_injective_on_samples(self):
        fa = function_algebra(B, S1, 0)
        rng = random.Random(5)
        for _ in range(10):
            x = sample_element(fa, rng)
            if fa.is_zero(x):
                continue
            assert not fa.is_zero(transition(fa, x)[1])


class TestOmega:
    def setup_method(self):
        self.fa = function_algebra(B, S1, 0)
        self.sfa = scalar_algebra(S1, 0)

    def test_fixed_point(self):
        x = make_element(self.fa, BX, vanishing_scalar(S1))
        assert omega(self.fa, x) == x

    def test_cubic(self):
        h = affine_coordinate(self.sfa, 0)
        one = constant_function(self.sfa, F(1))
        q = self.sfa.mul(self.sfa.mul(h, h), self.sfa.sub(h, one))  # t³ − t²
        x = make_element(self.fa, BX, q)
        expected_poly = (((1,), F(-1)), ((2,), F(2)), ((3,), F(-1)))
        assert omega(self.fa, x) == ((EDGE, poly_scaled(expected_poly, BX)),)

    def test_involution(self):
        rng = random.Random(9)
        for _ in range(5):
            x = sample_element(self.fa, rng)
            assert omega(self.fa, omega(self.fa, x)) == x
            fa1, tx = transition(self.fa, x)
            assert omega(fa1, omega(fa1, tx)) == tx

    def test_swaps_endpoints(self):
        faI = function_algebra(B, interval_pair(), 0, relative=False)
        t = affine_coordinate(scalar_algebra(interval_pair(), 0), 0)
        x = scalar_to_base(faI, t, BX)
        assert d1(faI, omega(faI, x)) == d0(faI, x)
        assert d0(faI, omega(faI, x)) == d1(faI, x)

    def test_subdivided_reversal_is_algebra_map(self):
        rng = random.Random(21)
        for _ in range(5):
            x, y = sample_element(self.fa, rng), sample_element(self.fa, rng)
            fa1, tx = transition(self.fa, x)
            _, ty = transition(self.fa, y)
            assert omega(fa1, fa1.mul(tx, ty)) == fa1.mul(
                omega(fa1, tx), omega(fa1, ty)
            )


class TestConcatenate:
    def test_generator_with_zero(self):
        fa = function_algebra(B, S1, 0)
        x = make_element(fa, BX, vanishing_scalar(S1))
        tgt, z = concatenate(fa, x, fa.zero())
        assert dict(z) == {(V0, EDGE): poly_scaled(T2MT, BX)}
        tgt.check(z)

    def test_zero_with_zero(self):
        fa = function_algebra(B, S1, 0)
        assert concatenate(fa, fa.zero(), fa.zero())[1] == ()

    def test_endpoint_mismatch_rejected(self):
        faI = function_algebra(B, interval_pair(), 0, relative=False)
        sfa = scalar_algebra(interval_pair(), 0)
        t = affine_coordinate(sfa, 0)
        x = scalar_to_base(faI, t, BX)  # d0 = BX
        y = scalar_to_base(faI, sfa.mul(t, t), BX)  # d1 = 0
        with pytest.raises(ValueError):
            concatenate(faI, x, y)

    def test_concatenation_and_reversal_are_homomorphisms(self):
        fa = function_algebra(B, S1, 0)
        rng = random.Random(17)
        for _ in range(100):
            x1, y1 = sample_element(fa, rng), sample_element(fa, rng)
            x2, y2 = sample_element(fa, rng), sample_element(fa, rng)
            tgt, c1 = concatenate(fa, x1, y1)
            _, c2 = concatenate(fa, x2, y2)
            _, c12 = concatenate(fa, fa.mul(x1, x2), fa.mul(y1, y2))
            assert tgt.mul(c1, c2) == c12
            assert omega(fa, fa.mul(x1, x2)) == fa.mul(
                omega(fa, x1), omega(fa, x2)
            )


def box_to_factor_map(box_fa, factor_fa, side):
    """sd^k of a box projection, built directly on vertex chains."""
    def vfun(chain):
        return tuple(v[side] for v in chain) if box_fa.r else chain[side]

    if box_fa.r == 0:
        return SimplicialMap.from_vertex_map(
            box_fa.sset, factor_fa.sset, lambda v: v[side]
        )
    raise NotImplementedError


class TestMu:
    def test_point_factor_is_transition(self):
        inner = function_algebra(B, S1, 0)
        x = make_element(inner, BX, vanishing_scalar(S1))
        outer = function_algebra(inner, point(), 1)
        tgt, res = mu(outer, constant_function(outer, x))
        fa1, tx = transition(inner, x)
        g = SimplicialMap.from_vertex_map(
            tgt.sset, fa1.sset, lambda c: tuple(v[0] for v in c)
        )
        assert res == pullback_along(fa1, tx, g, tgt)

    def test_decomposable_product_of_coordinates(self):
        inner = function_algebra(B, S1, 0)
        x = make_element(inner, BX, vanishing_scalar(S1))
        outer = function_algebra(inner, S1, 0)
        xx = scalar_to_base(outer, vanishing_scalar(S1), x)
        tgt, res = mu_flat(outer, xx)
        sfa2 = scalar_algebra(cube(2), 0)
        p1 = _tsq_minus_t(sfa2, 0)
        p2 = _tsq_minus_t(sfa2, 1)
        expected = scalar_to_base(tgt, sfa2.mul(p1, p2), BX)
        assert res == expected
        tgt.check(res)

    def test_associativity_on_random_triples(self):
        F1 = function_algebra(B, S1, 0)
        F11 = function_algebra(F1, S1, 0)
        F111 = function_algebra(F11, S1, 0)
        F2 = function_algebra(B, cube(2), 0)
        rng = random.Random(23)
        for _ in range(30):
            z = sample_element(F111, rng, degree=1, terms=1)
            # combine the outer two levels first, then the inner one
            _, v1 = mu_flat(F111, z)
            left = mu_flat(function_algebra(F1, cube(2), 0), v1)[1]
            # combine the inner two levels first (coefficientwise), then
            # the outer one
            w1 = apply_to_coefficients(
                F111, z, F2, lambda c: mu_flat(F11, c)[1]
            )
            right = mu_flat(function_algebra(F2, S1, 0), w1)[1]
            assert left == right

    def test_naturality_in_base(self):
        Q = rationals()
        g = AlgebraMap(B, Q, {"1": Q.basis_vec("1"), "x": Q.zero()})
        inner = function_algebra(B, S1, 0)
        innerQ = function_algebra(Q, S1, 0)
        outer = function_algebra(inner, S1, 0)
        outerQ = function_algebra(innerQ, S1, 0)
        rng = random.Random(29)
        for _ in range(10):
            x = sample_element(outer, rng, degree=1, terms=2)
            tgt, m = mu(outer, x)
            tgtQ, mQ = mu(
                outerQ,
                apply_to_coefficients(
                    outer, x, innerQ,
                    lambda c: apply_to_coefficients(inner, c, Q, g.apply),
                ),
            )
            assert mQ == apply_to_coefficients(tgt, m, Q, g.apply)

    def test_commutes_with_outer_transition(self):
        inner = function_algebra(B, S1, 0)
        outer = function_algebra(inner, S1, 0)
        rng = random.Random(31)
        for _ in range(5):
            x = sample_element(outer, rng, degree=1, terms=1)
            tgt, m = mu(outer, x)
            _, tm = transition(tgt, m)
            _, tx = transition(outer, x)
            outer1 = function_algebra(inner, S1, 1)
            tgt1, m1 = mu(outer1, tx)
            assert m1 == tm

    def test_commutes_with_inner_transition(self):
        inner = function_algebra(B, S1, 0)
        inner1 = function_algebra(B, S1, 1)
        outer = function_algebra(inner, S1, 0)
        outer_i1 = function_algebra(inner1, S1, 0)
        rng = random.Random(37)
        for _ in range(5):
            x = sample_element(outer, rng, degree=1, terms=1)
            tgt, m = mu(outer, x)
            _, tm = transition(tgt, m)
            x2 = apply_to_coefficients(
                outer, x, inner1, lambda c: transition(inner, c)[1]
            )
            tgt1, m1 = mu(outer_i1, x2)
            assert m1 == tm

    def test_subdivided_inner_runs_and_validates(self):
        inner = function_algebra(B, S1, 1)
        outer = function_algebra(inner, S1, 0)
        rng = random.Random(41)
        x = sample_element(outer, rng, degree=1, terms=1)
        tgt, m = mu(outer, x)
        assert tgt.r == 1
        tgt.check(m)


def _tsq_minus_t(sfa, i):
    h = affine_coordinate(sfa, i)
    return sfa.sub(sfa.mul(h, h), h)


class TestLattice:
    def test_interval_rank_is_degree_minus_one(self):
        for d in (2, 3, 4):
            assert lattice_rank(S1, 0, d) == d - 1

    def test_subdivided_interval_rank(self):
        # two halves with degree ≤ 2, glued at the barycenter, vanishing at
        # both global endpoints: 3 + 3 + 1 − 4 = 3
        assert lattice_rank(S1, 1, 2) == 3

    def test_unique_decomposition(self):
        fa = function_algebra(B, S1, 0)
        basis = lattice_basis(S1, 0, 3)
        assert len(basis) == 2
        sfa = scalar_algebra(S1, 0)
        h = affine_coordinate(sfa, 0)
        one = constant_function(sfa, F(1))
        q2 = sfa.sub(sfa.mul(h, h), h)
        q3 = sfa.mul(sfa.mul(h, h), sfa.sub(h, one))
        x = fa.add(scalar_to_base(fa, q2, BX), scalar_to_base(fa, q3, B1))
        pieces = decompose(fa, x, basis)
        recon = fa.zero()
        for c, el in pieces:
            recon = fa.add(recon, scalar_to_base(fa, el, c))
        assert recon == x
        assert decompose(fa, x, basis) == pieces

    def test_out_of_span_rejected(self):
        fa = function_algebra(B, S1, 0)
        basis = lattice_basis(S1, 0, 3)
        sfa = scalar_algebra(S1, 0)
        h = affine_coordinate(sfa, 0)
        q4 = sfa.mul(_tsq_minus_t(sfa, 0), sfa.mul(h, h))  # degree 4
        with pytest.raises(ValueError):
            decompose(fa, scalar_to_base(fa, q4, BX), basis)
