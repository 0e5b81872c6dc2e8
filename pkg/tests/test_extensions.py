"""Split extensions, mapping paths/cylinders, and homotopy certificates."""

import random
from fractions import Fraction as F

import pytest

from loopstable.algebras import AlgebraMap, dual_numbers, rationals
from loopstable.extensions import (
    CertificateError,
    ExtensionError,
    HomotopyCertificate,
    TriangleData,
    alternate_path_splitting,
    certificate_text,
    classifying_map,
    mapping_cylinder,
    mapping_path,
    make_extension,
    naturality_check,
    parse_certificate_text,
    path_extension,
    pb_contraction_certificate,
    phi,
    poly_carrier,
    search_homotopy,
    splitting_homotopy,
    square_contraction_certificate,
    strong_morphism_check,
    tr2_certificate,
    tr4_tower,
    universal_extension,
)
from loopstable.funalg import (
    apply_to_coefficients,
    d1,
    function_algebra,
    make_element,
    omega,
    sample_element,
    scalar_algebra,
    scalar_to_base,
    transition,
    vanishing_scalar,
)
from loopstable.simplicial import cube, interval_rel_one, path_pair
from loopstable.tensorj import (
    Morphism,
    curvature,
    identity_morphism,
    lambda_,
    sample_j_element,
    tensor_algebra,
    word_image,
    zero_morphism,
)

B = dual_numbers()
Q = rationals()
BX = B.basis_vec("x")
B1 = B.basis_vec("1")
V0, V1, EDGE = ((0,),), ((1,),), ((0,), (1,))


def _g_map():
    g = AlgebraMap(B, Q, {"1": Q.basis_vec("1"), "x": Q.zero()})
    return Morphism(B, Q, g.apply, "g")


def _a_map():
    a = AlgebraMap(Q, B, {"1": B1})
    return Morphism(Q, B, a.apply, "a")


class TestUniversalExtension:
    def test_counit_splitting(self):
        U = universal_extension(B)
        for l in B.labels:
            v = B.basis_vec(l)
            assert U.pi(U.s(v)) == v

    def test_counit_kills_kernel(self):
        U = universal_extension(B)
        assert B.is_zero(U.pi(U.iota(curvature(B, BX, B1))))

    def test_splitting_not_multiplicative(self):
        U = universal_extension(B)
        ta = U.mid
        assert ta.mul(U.s(BX), U.s(BX)) == ((("x", "x"), F(1)),)
        assert U.s(B.mul(BX, BX)) == ()

    def test_classifying_is_expansion(self):
        U = universal_extension(B)
        xi = classifying_map(U)
        x = curvature(B, BX, B1)
        assert xi(x) == x


class TestPathExtension:
    def test_presentation_r0(self):
        E = path_extension(0, B, 0)
        # kernel: families vanishing at both endpoints, generated by t^2-t
        gen = make_element(E.kernel, B1, vanishing_scalar(cube(1)))
        assert gen == ((EDGE, (((1,), B.neg(B1)), ((2,), B1))),)
        # mid: families vanishing at the 1-endpoint only
        sfa = scalar_algebra(interval_rel_one(), 0)
        tm1 = vanishing_scalar(interval_rel_one())
        assert make_element(E.mid, B1, tm1)  # (t-1)·1 is a valid element

    def test_splitting_formula_r0(self):
        E = path_extension(0, B, 0)
        sfa = scalar_algebra(interval_rel_one(), 0)
        from loopstable.funalg import affine_coordinate, constant_function

        one_minus_t = sfa.sub(
            constant_function(sfa, F(1)), affine_coordinate(sfa, 0)
        )
        for l in B.labels:
            v = B.basis_vec(l)
            assert E.s(v) == scalar_to_base(E.mid, one_minus_t, v)

    def test_splitting_formula_r1(self):
        # at one subdivision the splitting is supported on the first half
        E = path_extension(0, B, 1)
        x = E.s(BX)
        halves = {bsx for bsx, _ in x}
        first_edge = (V0, (V0, V1))
        for bsx in halves:
            assert V1 not in bsx or bsx == ((V0, V1),) or first_edge == bsx
        # value at the global 0-endpoint is the original element
        assert d1(E.mid, x) == BX
        # second-half edge carries no value: matches the (p, 0) presentation
        second_edge = (V1, (V0, V1))
        assert second_edge not in dict(x)

    def test_transition_is_strong_morphism(self):
        E0 = path_extension(0, B, 0)
        E1 = path_extension(0, B, 1)
        a = Morphism(E0.kernel, E1.kernel, lambda x: transition(E0.kernel, x)[1], "tr")
        b = Morphism(E0.mid, E1.mid, lambda x: transition(E0.mid, x)[1], "tr")
        c = identity_morphism(B)
        assert strong_morphism_check(E0, E1, a, b, c, samples=6, seed=1)

    def test_classifying_equals_loop_map(self):
        E = path_extension(0, B, 0)
        xi = classifying_map(E)
        lam = lambda_(B)
        rng = random.Random(2)
        for _ in range(10):
            x = sample_j_element(B, rng)
            assert xi(x) == lam(x)

    def test_index_one(self):
        E = path_extension(1, B, 0)
        rng = random.Random(3)
        for _ in range(3):
            q = sample_element(E.quotient, rng)
            assert E.quotient.eq(E.pi(E.s(q)), q)

    def test_bounds(self):
        with pytest.raises(ValueError):
            path_extension(3, B, 0)


class TestClassifyingNaturality:
    def test_universal_base_change(self):
        gm = _g_map()
        U1, U2 = universal_extension(B), universal_extension(Q)
        ta1, ta2 = U1.mid, U2.mid
        from loopstable.tensorj import j_of

        a = j_of(gm)
        b = Morphism(
            ta1,
            ta2,
            lambda x: word_image(ta1, x, lambda l: ta2.sigma(gm(l)), ta2),
            "T(g)",
        )
        assert strong_morphism_check(U1, U2, a, b, gm, samples=5, seed=4)
        assert naturality_check(U1, U2, a, gm, samples=10, seed=5)

    def test_path_base_change(self):
        gm = _g_map()
        E1, E2 = path_extension(0, B, 0), path_extension(0, Q, 0)
        a = Morphism(
            E1.kernel,
            E2.kernel,
            lambda x: apply_to_coefficients(E1.kernel, x, Q, gm),
            "g*",
        )
        b = Morphism(
            E1.mid,
            E2.mid,
            lambda x: apply_to_coefficients(E1.mid, x, Q, gm),
            "g*",
        )
        assert strong_morphism_check(E1, E2, a, b, gm, samples=5, seed=6)
        assert naturality_check(E1, E2, a, gm, samples=10, seed=7)

    def test_subdivision_change(self):
        E0, E1 = path_extension(0, B, 0), path_extension(0, B, 1)
        a = Morphism(E0.kernel, E1.kernel, lambda x: transition(E0.kernel, x)[1], "tr")
        assert naturality_check(E0, E1, a, identity_morphism(B), samples=10, seed=8)


class TestMappingPath:
    def test_identity_map_is_path_algebra(self):
        idb = identity_morphism(B)
        mp = mapping_path(idb)
        PB = mp.path_algebra
        rng = random.Random(9)
        for _ in range(6):
            z = mp.mid_sampler(rng)
            p, a = z
            # the path determines the pair: a = p(0)
            assert a == d1(PB, p)
            assert mp.carrier.make(p, d1(PB, p)) == z

    def test_compatibility_enforced(self):
        gm = _g_map()
        mp = mapping_path(gm)
        bad_p = mp.extension.s(Q.basis_vec("1"))[0]  # p with p(0) = 1
        with pytest.raises(ValueError):
            mp.carrier.make(bad_p, Q.zero())

    def test_projection_section(self):
        gm = _g_map()
        mp = mapping_path(gm)
        rng = random.Random(10)
        for _ in range(6):
            a = sample_j_element(B, rng) and None  # keep rng moving
            v = mp.extension.quotient_sampler(rng)
            z = mp.section(v)
            assert mp.pi(z) == v
            assert d1(mp.path_algebra, z[0]) == gm(v)

    def test_loops_include_with_zero_component(self):
        gm = _g_map()
        mp = mapping_path(gm)
        rng = random.Random(11)
        q = sample_element(mp.loop_algebra, rng)
        z = mp.iota(q)
        assert B.is_zero(mp.pi(z))


class TestPhi:
    def test_formula_and_projection(self):
        gm = _g_map()
        ph = phi(gm)
        rng = random.Random(12)
        for _ in range(8):
            p = sample_element(ph.mp_f.loop_algebra, rng)
            z = ph.phi(p)
            # the path component is zero ...
            assert ph.mp_pi.path_algebra.is_zero(z[0])
            # ... and the double projection recovers the loop inclusion
            assert ph.mp_pi.pi(z) == ph.mp_f.iota(p)


class TestCertificates:
    def test_rotation_certificate(self):
        cert = tr2_certificate(_g_map())
        cert.verify(samples=25, seed=13)

    def test_path_contraction(self):
        cert = pb_contraction_certificate(B)
        cert.verify(samples=25, seed=14)

    def test_path_contraction_endpoint_values(self):
        cert = pb_contraction_certificate(Q)
        fa = cert.left.source
        rng = random.Random(15)
        x = sample_element(fa, rng)
        px = cert.chain[0].target
        v = cert.chain[0](x)
        assert px.evaluate(v, 0) == x
        assert fa.is_zero(px.evaluate(v, 1))

    def test_square_contraction(self):
        cert = square_contraction_certificate(B)
        cert.verify(samples=10, seed=16)

    def test_splitting_independence(self):
        E = path_extension(0, B, 0)
        s2 = alternate_path_splitting(B, E.mid)
        cert = splitting_homotopy(E, s2)
        cert.verify(samples=20, seed=17)

    def test_text_roundtrip(self):
        cert = pb_contraction_certificate(B)
        text = certificate_text(cert, samples=12, seed=3)
        rec = parse_certificate_text(text)
        assert rec["name"] == cert.name
        assert rec["links"] == [cert.chain[0].name]
        assert rec["samples"] == 12 and rec["seed"] == 3

    def test_bad_certificate_detected(self):
        # swapping the endpoints must fail verification
        good = pb_contraction_certificate(B)
        bad = HomotopyCertificate(
            name="swapped",
            left=good.right,
            right=good.left,
            chain=good.chain,
            sampler=good.sampler,
        )
        with pytest.raises(CertificateError):
            bad.verify(samples=5, seed=18)


class TestMappingCylinder:
    def setup_method(self):
        self.gm = _g_map()
        self.cyl = mapping_cylinder(self.gm)

    def test_evaluation_formula(self):
        rng = random.Random(19)
        for _ in range(5):
            z = self.cyl.extension.kernel_sampler(rng)
            # the kernel consists of pairs whose path vanishes at 1
            zz = self.cyl.extension.iota(z)
            assert Q.is_zero(self.cyl.extension.pi(zz))

    def test_projection_section(self):
        rng = random.Random(20)
        for _ in range(5):
            v = B.basis_vec("x") if rng.random() < 0.5 else B.basis_vec("1")
            assert self.cyl.pr(self.cyl.section(v)) == v

    def test_retract_homotopy(self):
        self.cyl.retract.verify(samples=10, seed=21)

    def test_classifying_is_reversed_loop_inclusion(self):
        lam = lambda_(Q)
        loopQ = function_algebra(Q, cube(1), 0)
        xi = classifying_map(self.cyl.extension)
        rng = random.Random(22)
        for _ in range(12):
            x = sample_j_element(Q, rng)
            assert xi(x) == self.cyl.mp.iota(omega(loopQ, lam(x)))

    def test_reversal_inclusion_is_strong(self):
        # the path extension of the target maps strongly into the cylinder
        E1 = path_extension(0, Q, 0)
        lam = lambda_(Q)
        loopQ = E1.kernel
        a = Morphism(
            loopQ,
            self.cyl.extension.kernel,
            lambda q: self.cyl.mp.iota(omega(loopQ, q)),
            "incl∘rev",
        )
        assert strong_morphism_check(
            E1, self.cyl.extension, a, self.cyl.beta, identity_morphism(Q),
            samples=5, seed=23,
        )
        assert naturality_check(
            E1, self.cyl.extension, a, identity_morphism(Q), samples=8, seed=24
        )


class TestTowerOfThree:
    def setup_method(self):
        self.tw = tr4_tower(_a_map(), _g_map())

    def test_section(self):
        rng = random.Random(25)
        for _ in range(6):
            v = self.tw.mp_a.mid_sampler(rng)
            assert self.tw.theta(self.tw.section_theta(v)) == v

    def test_homotopy_endpoints(self):
        rng = random.Random(26)
        px = self.tw.H1.target
        for _ in range(6):
            z = self.tw.mp_eta.mid_sampler(rng)
            v1, v2 = self.tw.H1(z), self.tw.H2(z)
            assert px.evaluate(v1, 0) == self.tw.xi(self.tw.theta(z))
            assert px.evaluate(v1, 1) == px.evaluate(v2, 1)
            assert px.evaluate(v2, 0) == self.tw.mp_eta.pi(z)

    def test_triangle_certificate(self):
        self.tw.triangle.verify(samples=8, seed=27)

    def test_kernel_contraction(self):
        self.tw.ker_theta_contraction.verify(samples=8, seed=28)

    def test_kernel_embedding(self):
        K = function_algebra(Q, path_pair(1), 0)
        rng = random.Random(29)
        for _ in range(5):
            x = sample_element(K, rng)
            z = self.tw.ker_embed(x)
            assert self.tw.mp_a.carrier.is_zero(self.tw.theta(z))


class TestSearch:
    def test_trivial_equality(self):
        fa = function_algebra(B, cube(1), 0)
        cert = search_homotopy(
            identity_morphism(fa),
            identity_morphism(fa),
            lambda rng: sample_element(fa, rng),
        )
        assert cert is not None and cert.provenance == "trivial"
        assert cert.chain == []

    def test_derives_contraction(self):
        fa = function_algebra(B, interval_rel_one(), 0)
        cert = search_homotopy(
            identity_morphism(fa),
            zero_morphism(fa, fa),
            lambda rng: sample_element(fa, rng),
            fa=fa,
            degree_cap=2,
        )
        assert cert is not None and cert.provenance == "search-derived"
        cert.verify(samples=10, seed=30)

    def test_not_found(self):
        fa = function_algebra(B, cube(1), 0)
        double = Morphism(fa, fa, lambda x: fa.scale(F(2), x), "double")
        cert = search_homotopy(
            identity_morphism(fa),
            double,
            lambda rng: sample_element(fa, rng),
            fa=fa,
            degree_cap=1,
        )
        assert cert is None


class TestTriangleData:
    def test_shape_checks(self):
        fa = function_algebra(B, cube(1), 0)
        objs = ((fa, 1), (B, 0), (B, 0), (B, 0))
        t = TriangleData(objs, (None, None, None), None, "extension")
        assert t.tag == "extension"
        with pytest.raises(ValueError):
            TriangleData(objs[:3], (None, None, None), None, "extension")
        with pytest.raises(ValueError):
            TriangleData(objs, (None, None, None), None, "bogus")


class TestExtensionInvariants:
    def test_broken_splitting_rejected(self):
        ta = tensor_algebra(B)
        from loopstable.tensorj import j_kernel

        J = j_kernel(B)
        with pytest.raises(ExtensionError):
            make_extension(
                kernel=J,
                mid=ta,
                quotient=B,
                iota=Morphism(J, ta, lambda x: x, "incl"),
                pi=Morphism(ta, B, ta.eta, "counit"),
                s=Morphism(B, ta, lambda b: ta.zero(), "bad"),
                name="broken",
            )
