import math

import pytest

from torus_planes import (
    CircleHomeo,
    ConfigError,
    DiagonalPSL,
    FamilyMismatch,
    KernelMinusPSL,
    KernelPlusPSL,
    MobiusMap,
    PhiStd,
    PhiTwoFixed,
    ProjPoint,
    TorusPoint,
    act,
    chordal,
    classical_plane,
    compose,
    diagonal_transitivity_witness,
    group_literal,
    half_classical_plane,
    homeo_sup_distance,
    induced_factor_action,
    parse_group_literal,
    so2_times_l2_factor_model,
    torus_dist,
)
from torus_planes.groups import factor_fixed_sets

from helpers import random_proj_point, random_psl, random_triple, rng_for

P = ProjPoint.from_real
pt = TorusPoint.from_reals
INF = math.inf


def _random_element(family, rng):
    if family == "kplus":
        return KernelPlusPSL(random_psl(rng))
    if family == "kminus":
        return KernelMinusPSL(random_psl(rng))
    if family == "diag":
        return DiagonalPSL(random_psl(rng))
    if family == "phi":
        return PhiStd(2.0, rng.uniform(0.3, 3.0), rng.normal(), rng.normal())
    if family == "phi-inf":
        return PhiStd(math.inf, rng.uniform(0.3, 3.0), rng.normal(), rng.normal())
    if family == "phi2":
        return PhiTwoFixed(
            -1.0, rng.uniform(0.3, 3.0), rng.uniform(0.3, 3.0), rng.normal()
        )
    if family == "phi2-zero":
        return PhiTwoFixed(
            0.0, rng.uniform(0.3, 3.0), rng.uniform(0.3, 3.0), rng.normal()
        )
    raise ValueError(family)


FAMILIES = ("kplus", "kminus", "diag", "phi", "phi-inf", "phi2", "phi2-zero")


class TestAct:
    def test_phi_two_fixed_formula(self):
        out = act(PhiTwoFixed(-1, 1, 2, 0), pt(4, 3))
        assert math.isclose(out.x.value(), 16.0, rel_tol=1e-12)
        assert math.isclose(out.y.value(), 1.5, rel_tol=1e-12)

    def test_phi_two_fixed_fixes_both_parallel_points(self):
        rng = rng_for(401)
        for _ in range(20):
            g = _random_element("phi2", rng)
            for fixed in (pt(INF, INF), pt(0, INF)):
                image = act(g, fixed)
                assert torus_dist(image, fixed) < 1e-12

    def test_phi_std_infinite_exponent(self):
        g = PhiStd(math.inf, 2.0, 3.0, 1.0)
        out = act(g, pt(4, 5))
        assert math.isclose(out.x.value(), 7.0, rel_tol=1e-12)
        assert math.isclose(out.y.value(), 11.0, rel_tol=1e-12)
        assert torus_dist(act(g, pt(INF, INF)), pt(INF, INF)) < 1e-12

    def test_diagonal_fixes_diagonal_setwise(self):
        rng = rng_for(402)
        for _ in range(20):
            g = DiagonalPSL(random_psl(rng))
            x = random_proj_point(rng)
            image = act(g, TorusPoint(x, x))
            assert chordal(image.x, image.y) < 1e-12

    def test_kernel_sides(self):
        mu = MobiusMap([[2.0, 1.0], [1.0, 1.0]])
        p = pt(3, 4)
        up = act(KernelPlusPSL(mu), p)
        assert up.x.value() == 3.0 and up.y.value() != 4.0
        um = act(KernelMinusPSL(mu), p)
        assert um.y.value() == 4.0 and um.x.value() != 3.0

    def test_psl_families_require_positive_det(self):
        with pytest.raises(ConfigError):
            DiagonalPSL(MobiusMap([[0.0, 1.0], [1.0, 0.0]]))


class TestCompose:
    def test_identity_neutral_everywhere(self):
        rng = rng_for(403)
        for family in FAMILIES:
            g = _random_element(family, rng)
            e = type(g).identity(g.d) if isinstance(g, (PhiStd, PhiTwoFixed)) else type(g).identity()
            assert compose(e, g).__class__ is g.__class__
            p = pt(0.7, -1.3)
            assert torus_dist(act(compose(e, g), p), act(g, p)) < 1e-12
            assert torus_dist(act(compose(g, e), p), act(g, p)) < 1e-12

    def test_phi_std_example_with_pointwise_oracle(self):
        comp = compose(PhiStd(2, 2, 0, 0), PhiStd(2, 1, 1, 0))
        assert (comp.a, comp.b, comp.c) == (2.0, 2.0, 0.0)
        rng = rng_for(404)
        for _ in range(20):
            p = pt(rng.normal(), rng.normal())
            direct = act(PhiStd(2, 2, 0, 0), act(PhiStd(2, 1, 1, 0), p))
            assert torus_dist(act(comp, p), direct) < 1e-12

    def test_phi_two_fixed_example_with_pointwise_oracle(self):
        # frozen from the double-application oracle: applying (3,1,5) then
        # (1,2,0) sends x to 9 sgn(x) x^2 and y to y/2 + 2.5
        g1 = PhiTwoFixed(-1, 1, 2, 0)
        g2 = PhiTwoFixed(-1, 3, 1, 5)
        comp = compose(g1, g2)
        assert (comp.a, comp.b, comp.c) == (9.0, 2.0, 2.5)
        rng = rng_for(405)
        for _ in range(20):
            p = pt(rng.normal() or 0.5, rng.normal())
            direct = act(g1, act(g2, p))
            assert torus_dist(act(comp, p), direct) < 1e-12

    def test_family_mismatch(self):
        with pytest.raises(FamilyMismatch):
            compose(PhiStd(2, 1, 0, 0), PhiStd(3, 1, 0, 0))
        with pytest.raises(FamilyMismatch):
            compose(PhiTwoFixed(0, 1, 1, 0), PhiTwoFixed(-1, 1, 1, 0))
        with pytest.raises(FamilyMismatch):
            compose(KernelPlusPSL.identity(), KernelMinusPSL.identity())
        with pytest.raises(FamilyMismatch):
            compose(PhiStd(2, 1, 0, 0), 3.0)

    def test_group_laws_all_families(self):
        rng = rng_for(406)
        probes = [pt(rng.normal(), rng.normal()) for _ in range(5)]
        for family in FAMILIES:
            for _ in range(20):
                a, b, c = (_random_element(family, rng) for _ in range(3))
                ab_c = compose(compose(a, b), c)
                a_bc = compose(a, compose(b, c))
                inv = a.inverse()
                for p in probes:
                    assert torus_dist(act(ab_c, p), a_bc and act(a_bc, p)) < 1e-10
                    assert torus_dist(act(compose(a, b), p), act(a, act(b, p))) < 1e-10
                    assert torus_dist(act(compose(a, inv), p), p) < 1e-10


class TestInducedActions:
    def test_kernel_plus_trivial_on_plus(self):
        _, report = induced_factor_action(KernelPlusPSL(MobiusMap([[2, 1], [1, 1]])), "plus")
        assert report.action_kind == "trivial"
        assert report.fixes_every_class

    def test_phi_scaling_fixed_classes(self):
        hmap, report = induced_factor_action(PhiStd(3, 2, 0, 0), "plus")
        assert report.action_kind == "L2-on-line"
        assert math.isclose(hmap.apply(P(1.0)).value(), 2.0, rel_tol=1e-12)
        values = sorted(c.coordinate.value() for c in report.fixed_classes)
        assert values == [0.0, INF]

    def test_phi2_minus_side_derived_example(self):
        # y -> y/2 + 1 fixes y = 2 and infinity
        hmap, report = induced_factor_action(PhiTwoFixed(-1, 1, 2, 1), "minus")
        values = sorted(c.coordinate.value() for c in report.fixed_classes)
        assert len(values) == 2
        assert math.isclose(values[0], 2.0, abs_tol=1e-9)
        assert values[1] == INF

    def test_diagonal_is_psl_kind(self):
        _, report = induced_factor_action(DiagonalPSL(MobiusMap([[2, 1], [1, 1]])), "minus")
        assert report.action_kind == "PSL-on-circle"
        assert not report.fixes_every_class

    def test_phi2_power_factor_fixed_set(self):
        # 2 sgn(x)|x|^3 fixes 0, infinity, and +-(1/2)^(1/2)
        g = PhiTwoFixed(-1, 2, 3, 1)
        (fx_all, fx_pts), (fy_all, fy_pts) = factor_fixed_sets(g)
        assert not fx_all and not fy_all
        values = sorted(p.value() for p in fx_pts)
        root = math.sqrt(0.5)
        assert len(values) == 4
        assert math.isclose(values[0], -root, rel_tol=1e-7)
        assert math.isclose(values[1], 0.0, abs_tol=1e-9)
        assert math.isclose(values[2], root, rel_tol=1e-7)
        assert values[3] == INF


class TestAutomorphismBehaviour:
    def test_kernel_plus_preserves_half_classical_circles(self):
        plane = half_classical_plane(CircleHomeo.power(2))
        g = KernelPlusPSL(MobiusMap([[2.0, 1.0], [1.0, 1.0]]))
        rng = rng_for(407)
        for _ in range(30):
            circle = plane.join(*random_triple(rng))
            image = plane.join(*(act(g, circle.point_at(ProjPoint.from_chart(t)))
                                 for t in (0.1, 0.45, 0.8)))
            worst = max(
                plane.membership_residual(
                    image, act(g, circle.point_at(ProjPoint.from_chart((j + 0.5) / 16)))
                )
                for j in range(16)
            )
            assert worst < 1e-8

    def test_kernel_minus_translation_breaks_circles(self):
        plane = half_classical_plane(CircleHomeo.power(2))
        g = KernelMinusPSL(MobiusMap([[1.0, 1.0], [0.0, 1.0]]))
        rng = rng_for(408)
        broken = 0
        for _ in range(40):
            circle = plane.join(*random_triple(rng))
            image = plane.join(*(act(g, circle.point_at(ProjPoint.from_chart(t)))
                                 for t in (0.1, 0.45, 0.8)))
            worst = max(
                plane.membership_residual(
                    image, act(g, circle.point_at(ProjPoint.from_chart((j + 0.5) / 16)))
                )
                for j in range(16)
            )
            if worst > 1e-6:
                broken += 1
        assert broken >= 1

    def test_kernel_minus_scaling_commutes_with_power_twist(self):
        # scalings conjugate through the power map, so this kernel member
        # genuinely is an automorphism of the twisted plane
        plane = half_classical_plane(CircleHomeo.power(2))
        g = KernelMinusPSL(MobiusMap([[2.0, 0.0], [0.0, 1.0]]))
        rng = rng_for(409)
        for _ in range(20):
            circle = plane.join(*random_triple(rng))
            image = plane.join(*(act(g, circle.point_at(ProjPoint.from_chart(t)))
                                 for t in (0.1, 0.45, 0.8)))
            worst = max(
                plane.membership_residual(
                    image, act(g, circle.point_at(ProjPoint.from_chart((j + 0.5) / 16)))
                )
                for j in range(16)
            )
            assert worst < 1e-8


class TestDiagonalOrbits:
    def test_transitivity_witness(self):
        rng = rng_for(410)
        for _ in range(30):
            src = TorusPoint(random_proj_point(rng), random_proj_point(rng))
            dst = TorusPoint(random_proj_point(rng), random_proj_point(rng))
            if chordal(src.x, src.y) < 1e-2 or chordal(dst.x, dst.y) < 1e-2:
                continue
            witness = diagonal_transitivity_witness(src, dst)
            assert witness.mu.orientation == 1
            assert torus_dist(act(witness, src), dst) < 1e-9

    def test_two_point_stabilizer_orbit_rays(self):
        # elements fixing (0,0) and (inf,inf) diagonally are the scalings;
        # their orbits lie on rays y = a x of fixed slope
        start = pt(1.0, 3.0)
        for t in (0.3, 0.9, 2.7):
            g = DiagonalPSL(MobiusMap.scaling(t))
            image = act(g, start)
            assert math.isclose(
                image.y.value() / image.x.value(), 3.0, rel_tol=1e-12
            )
            assert (image.x.value() > 0) == (start.x.value() > 0)


class TestCase3:
    def test_identity_factors(self):
        e = so2_times_l2_factor_model(0.0, (1.0, 0.0))
        assert e.is_identity()
        plus, minus = e.factor_maps()
        assert plus.is_identity() and minus.is_identity()

    def test_rotation_group_law(self):
        half_turn = so2_times_l2_factor_model(math.pi, (1.0, 0.0))
        assert half_turn.compose(half_turn).is_identity(1e-12)

    def test_factorwise_composition_example(self):
        left = so2_times_l2_factor_model(math.pi / 3, (2.0, 1.0))
        right = so2_times_l2_factor_model(math.pi / 6, (1.0, -1.0))
        comp = left.compose(right)
        assert math.isclose(comp.angle, math.pi / 2, rel_tol=1e-12)
        assert math.isclose(comp.a, 2.0, rel_tol=1e-12)
        assert math.isclose(comp.b, -1.0, rel_tol=1e-12)

    def test_minus_factor_is_rotation(self):
        e = so2_times_l2_factor_model(math.pi, (1.0, 0.0))
        rotated = e.minus_map.apply(P(0.0))
        # a half turn moves 0 to infinity (up to the pi/2 rounding of cos)
        assert chordal(rotated, ProjPoint.infinity()) < 1e-15

    def test_plus_factor_pins_infinity(self):
        e = so2_times_l2_factor_model(0.7, (2.0, 5.0))
        assert e.plus_map.apply(ProjPoint.infinity()).value() == INF

    def test_inverse(self):
        e = so2_times_l2_factor_model(1.1, (2.0, -3.0))
        assert e.compose(e.inverse()).is_identity(1e-12)

    def test_no_point_action(self):
        e = so2_times_l2_factor_model(1.0, (2.0, 0.0))
        assert not hasattr(e, "act")


class TestLiterals:
    @pytest.mark.parametrize(
        "literal",
        [
            "diag:psl:2,1,1,1",
            "kplus:psl:2,1,1,1",
            "kminus:psl:1,1,0,1",
            "phi:2:2:3:1",
            "phi:inf:2:3:1",
            "phi2:-1:2:3:1",
            "phi2:0:2:3:1",
            "case3:0.5:2:1",
        ],
    )
    def test_round_trip(self, literal):
        g = parse_group_literal(literal)
        again = parse_group_literal(group_literal(g))
        assert type(again) is type(g)
        if hasattr(g, "act"):
            p = pt(0.37, -1.21)
            assert torus_dist(act(g, p), act(again, p)) < 1e-12

    def test_bad_literals(self):
        for literal in [
            "diag:psl:1,2,3",
            "diag:psl:0,1,1,0",  # det < 0 is not a PSL member
            "phi:2:2:3",
            "phi2:1:2:3:1",  # d must be <= 0
            "spin:1:2:3",
            "case3:a:b:c",
        ]:
            with pytest.raises(ConfigError):
                parse_group_literal(literal)


def test_classical_plane_diagonal_automorphisms():
    plane = classical_plane()
    rng = rng_for(411)
    g = DiagonalPSL(random_psl(rng))
    identity_circle = plane.mobius_circle(MobiusMap.identity())
    for _ in range(20):
        circle = plane.join(*random_triple(rng))
        image = plane.join(*(act(g, circle.point_at(ProjPoint.from_chart(t)))
                             for t in (0.2, 0.5, 0.9)))
        worst = max(
            plane.membership_residual(
                image, act(g, circle.point_at(ProjPoint.from_chart((j + 0.5) / 16)))
            )
            for j in range(16)
        )
        assert worst < 1e-8
    # the diagonal circle is setwise invariant
    image = plane.join(*(act(g, identity_circle.point_at(ProjPoint.from_chart(t)))
                         for t in (0.15, 0.5, 0.85)))
    assert homeo_sup_distance(image.graph, identity_circle.graph, 64) < 1e-9
