import math

import numpy as np
import pytest

from torus_planes import (
    CircleHomeo,
    CoincidentPoints,
    ConfigError,
    EqualCircles,
    MobiusMap,
    ParallelInput,
    PointOnBaseCross,
    PreconditionViolated,
    ProjPoint,
    TorusPoint,
    chordal,
    classical_plane,
    corrupted_half_classical,
    half_classical_plane,
    homeo_from_spec,
    homeo_sup_distance,
    parallel,
    parse_plane_spec,
    plane_from_config,
    proj_matrix_equal,
)
from torus_planes.planes import TAG_CLASSICAL, TAG_PSL, TAG_TWISTED, parse_config_text

from helpers import random_proj_point, random_triple, rng_for

P = ProjPoint.from_real
pt = TorusPoint.from_reals
INF = math.inf


@pytest.fixture(scope="module")
def classical():
    return classical_plane()


@pytest.fixture(scope="module")
def half2():
    return half_classical_plane(CircleHomeo.power(2))


class TestParallel:
    def test_plus(self):
        assert parallel(pt(0, 1), pt(0, 5)) == "plus"

    def test_minus(self):
        assert parallel(pt(INF, 2), pt(3, 2)) == "minus"

    def test_none(self):
        assert parallel(pt(1, 2), pt(3, 4)) == "none"

    def test_both(self):
        assert parallel(pt(1, 2), pt(1, 2)) == "both"


class TestJoinClassical:
    def test_identity_circle(self, classical):
        c = classical.join(pt(0, 0), pt(1, 1), pt(INF, INF))
        assert c.tag == TAG_CLASSICAL
        assert c.mobius.is_identity(1e-12)

    def test_one_minus_x(self, classical):
        c = classical.join(pt(0, 1), pt(1, 0), pt(INF, INF))
        assert proj_matrix_equal(c.mobius, MobiusMap([[-1.0, 1.0], [0.0, 1.0]]), 1e-12)
        assert c.mobius.orientation == -1

    def test_parallel_rejected(self, classical):
        with pytest.raises(ParallelInput):
            classical.join(pt(0, 0), pt(0, 1), pt(2, 2))
        with pytest.raises(ParallelInput):
            classical.join(pt(0, 0), pt(1, 0), pt(2, 2))

    def test_join_symmetry(self, classical):
        rng = rng_for(301)
        for _ in range(50):
            a, b, c = random_triple(rng)
            c1 = classical.join(a, b, c)
            c2 = classical.join(c, a, b)
            assert homeo_sup_distance(c1.graph, c2.graph, 64) < 1e-9

    def test_diagonal_is_a_circle(self, classical):
        rng = rng_for(302)
        identity = classical.mobius_circle(MobiusMap.identity())
        for _ in range(30):
            xs = sorted(rng.random(3))
            if min(np.diff(xs)) < 1e-3:
                continue
            points = [TorusPoint(ProjPoint.from_chart(t), ProjPoint.from_chart(t)) for t in xs]
            joined = classical.join(*points)
            assert homeo_sup_distance(joined.graph, identity.graph, 64) < 1e-9


class TestJoinHalfClassical:
    def test_psl_branch(self, half2):
        c = half2.join(pt(0, 0), pt(1, 1), pt(INF, INF))
        assert c.tag == TAG_PSL
        assert c.mobius.orientation == 1

    def test_twisted_branch_example(self, half2):
        # mu through (0,1,inf)->(0,-1,inf) is x -> -x with det < 0, so the
        # twisted branch must fire; both-branch oracle: exactly one valid
        p, q, r = pt(0, 0), pt(1, -1), pt(INF, INF)
        branches = half2.join_branches(p, q, r)
        assert [ok for _, ok in branches.values()].count(True) == 1
        assert branches["psl"][1] is False
        c = half2.join(p, q, r)
        assert c.tag == TAG_TWISTED
        assert c.mobius.orientation == -1
        for point in (p, q, r):
            assert half2.membership_residual(c, point) < 1e-9
        assert half2.circle_in_set(c)
        # graph is -(sgn x) x^2
        assert math.isclose(c.graph.apply(P(2.0)).value(), -4.0, rel_tol=1e-12)

    def test_joining_closure_sample(self, half2):
        rng = rng_for(303)
        for _ in range(100):
            a, b, c = random_triple(rng)
            circle = half2.join(a, b, c)
            assert max(half2.membership_residual(circle, s) for s in (a, b, c)) < 1e-9
            branches = half2.join_branches(a, b, c)
            assert [ok for _, ok in branches.values()].count(True) == 1

    def test_classical_specialization(self, classical):
        # HalfClassical(id, id) carries the same circle set as the
        # classical plane and joins must agree
        degenerate = half_classical_plane(CircleHomeo.identity())
        rng = rng_for(304)
        for _ in range(500):
            a, b, c = random_triple(rng)
            c1 = degenerate.join(a, b, c)
            c2 = classical.join(a, b, c)
            assert homeo_sup_distance(c1.graph, c2.graph, 16) < 1e-9

    def test_no_branch_reported_on_corrupted_set(self):
        bad = corrupted_half_classical(CircleHomeo.power(2))
        c = bad.join(pt(0, 0), pt(1, -1), pt(INF, INF))
        assert not bad.circle_in_set(c)
        assert bad.membership_residual(c, pt(1, -1)) > 1e-3


class TestIntersect:
    def test_parabolic_tangent_at_infinity(self, classical):
        ident = classical.mobius_circle(MobiusMap.identity())
        trans = classical.mobius_circle(MobiusMap([[1.0, 1.0], [0.0, 1.0]]))
        pts = classical.circle_intersect(ident, trans)
        assert len(pts) == 1
        assert pts[0].x.value() == INF and pts[0].y.value() == INF

    def test_inversion_two_points(self, classical):
        ident = classical.mobius_circle(MobiusMap.identity())
        inv = classical.mobius_circle(MobiusMap([[0.0, 1.0], [1.0, 0.0]]))
        values = sorted(p.x.value() for p in classical.circle_intersect(ident, inv))
        assert values == [-1.0, 1.0]

    def test_scaling_fixed_points(self, classical):
        ident = classical.mobius_circle(MobiusMap.identity())
        scale = classical.mobius_circle(MobiusMap([[2.0, 0.0], [0.0, 1.0]]))
        values = sorted(p.x.value() for p in classical.circle_intersect(ident, scale))
        assert values == [0.0, INF]

    def test_equal_circles_rejected(self, classical):
        ident = classical.mobius_circle(MobiusMap.identity())
        same = classical.mobius_circle(MobiusMap([[3.0, 0.0], [0.0, 3.0]]))
        with pytest.raises(EqualCircles):
            classical.circle_intersect(ident, same)

    def test_at_most_two_for_mobius_pairs(self, classical):
        rng = rng_for(305)
        for _ in range(200):
            c1 = classical.join(*random_triple(rng))
            c2 = classical.join(*random_triple(rng))
            if homeo_sup_distance(c1.graph, c2.graph, 64) < 1e-6:
                continue
            assert len(classical.circle_intersect(c1, c2)) <= 2

    def test_mixed_branch_scan(self, half2):
        psl = half2.mobius_circle(MobiusMap.identity())
        twisted = half2.join(pt(0, 0), pt(1, -1), pt(INF, INF))
        pts = half2.circle_intersect(psl, twisted)
        # x = -sgn(x)x^2 holds exactly at 0 and infinity
        assert len(pts) == 2
        assert chordal(pts[0].x, P(0)) < 1e-9
        assert chordal(pts[1].x, ProjPoint.infinity()) < 1e-9
        for point in pts:
            assert half2.membership_residual(twisted, point) < 1e-8

    def test_twisted_pair_quadratic_route(self, half2):
        c1 = half2.join(pt(0, 0), pt(1, -1), pt(INF, INF))
        c2 = half2.join(pt(0, 1), pt(1, 0), pt(2, -8))
        assert c1.tag == TAG_TWISTED and c2.tag == TAG_TWISTED
        pts = half2.circle_intersect(c1, c2)
        assert 1 <= len(pts) <= 2
        for point in pts:
            assert half2.membership_residual(c1, point) < 1e-8
            assert half2.membership_residual(c2, point) < 1e-8


class TestTouch:
    def test_classical_example_frozen(self, classical):
        # tangent to the identity circle at (0,0) through (1,2):
        # x -> 2x / (2 - x), double root of delta at 0
        ident = classical.mobius_circle(MobiusMap.identity())
        d = classical.touch(ident, pt(0, 0), pt(1, 2))
        assert proj_matrix_equal(d.mobius, MobiusMap([[2.0, 0.0], [-1.0, 2.0]]), 1e-8)
        far, sep = classical.tangency_separation(ident, d, pt(0, 0))
        assert not far and sep <= classical.tangency_band
        count, _ = classical.count_tangency_brackets(ident, pt(0, 0), pt(1, 2))
        assert count == 1

    def test_classical_parabolic_example(self, classical):
        ident = classical.mobius_circle(MobiusMap.identity())
        d = classical.touch(ident, pt(INF, INF), pt(0, 1))
        assert proj_matrix_equal(d.mobius, MobiusMap([[1.0, 1.0], [0.0, 1.0]]), 1e-8)
        pts = classical.circle_intersect(ident, d)
        assert len(pts) == 1
        assert chordal(pts[0].x, ProjPoint.infinity()) < 1e-9

    def test_preconditions(self, classical):
        ident = classical.mobius_circle(MobiusMap.identity())
        with pytest.raises(PreconditionViolated):
            classical.touch(ident, pt(0, 1), pt(1, 2))  # p not on circle
        with pytest.raises(PreconditionViolated):
            classical.touch(ident, pt(0, 0), pt(2, 2))  # q on circle
        with pytest.raises(PreconditionViolated):
            classical.touch(ident, pt(0, 0), pt(0, 2))  # parallel

    def test_half_classical_dense_scan_oracle(self, half2):
        rng = rng_for(306)
        done = 0
        while done < 25:
            base = random_triple(rng)
            circle = half2.join(*base)
            p = circle.point_at(random_proj_point(rng))
            q = TorusPoint(random_proj_point(rng), random_proj_point(rng))
            if parallel(p, q, 1e-3) != "none":
                continue
            if half2.membership_residual(circle, q) < 1e-2:
                continue
            d = half2.touch(circle, p, q)
            assert half2.membership_residual(d, q) < 1e-9
            far, sep = half2.tangency_separation(circle, d, p)
            assert not far and sep <= half2.tangency_band
            count, _ = half2.count_tangency_brackets(circle, p, q)
            assert count == 1
            done += 1

    def test_touch_stays_in_circle_set(self, half2):
        circle = half2.join(pt(0, 0), pt(1, -1), pt(INF, INF))
        p = circle.point_at(P(2.0))
        d = half2.touch(circle, p, pt(1, 5))
        assert half2.circle_in_set(d)


class TestDerived:
    def test_vertical_class(self, classical):
        line = classical.derived_line_through(pt(INF, INF), pt(0, 0), pt(0, 5))
        assert line.kind == "plus-class"
        assert chordal(line.pclass.coordinate, P(0)) < 1e-12

    def test_identity_line(self, classical):
        line = classical.derived_line_through(pt(INF, INF), pt(0, 0), pt(1, 1))
        assert line.kind == "circle"
        assert line.circle.mobius.is_identity(1e-12)

    def test_base_cross_rejected(self, classical):
        with pytest.raises(PointOnBaseCross):
            classical.derived_line_through(pt(INF, INF), pt(INF, 0), pt(1, 1))

    def test_coincident_rejected(self, classical):
        with pytest.raises(CoincidentPoints):
            classical.derived_line_through(pt(INF, INF), pt(1, 1), pt(1, 1))

    def test_uniqueness_permuted_half_classical(self):
        plane = half_classical_plane(CircleHomeo.power(3))
        base = pt(INF, INF)
        rng = rng_for(307)
        done = 0
        while done < 40:
            a = TorusPoint(random_proj_point(rng), random_proj_point(rng))
            b = TorusPoint(random_proj_point(rng), random_proj_point(rng))
            if parallel(a, b) != "none":
                continue
            if chordal(a.x, base.x) < 1e-3 or chordal(a.y, base.y) < 1e-3:
                continue
            if chordal(b.x, base.x) < 1e-3 or chordal(b.y, base.y) < 1e-3:
                continue
            l1 = plane.derived_line_through(base, a, b)
            l2 = plane.derived_line_through(base, b, a)
            assert l1.kind == l2.kind == "circle"
            assert homeo_sup_distance(l1.circle.graph, l2.circle.graph, 64) < 1e-9
            done += 1


class TestConfig:
    def test_parse_config_text(self):
        cfg = parse_config_text(
            "# plane block\nfamily = half-classical\nf = power:2\ng = id\ntolerance = 1e-8\n"
        )
        assert cfg == {
            "family": "half-classical",
            "f": "power:2",
            "g": "id",
            "tolerance": "1e-8",
        }
        plane = plane_from_config(cfg)
        assert plane.is_half_classical and plane.tol == 1e-8

    def test_parse_plane_specs(self):
        assert parse_plane_spec("classical").family == "classical"
        plane = parse_plane_spec("half:power:2")
        assert plane.is_half_classical
        assert parse_plane_spec("half:power:2:power:3").describe().startswith(
            "half-classical(f=power:2, g=power:3)"
        )

    def test_bad_specs_rejected(self):
        with pytest.raises(ConfigError):
            parse_plane_spec("spherical")
        with pytest.raises(ConfigError):
            homeo_from_spec("power:zero")
        with pytest.raises(ConfigError):
            plane_from_config({"family": "projective"})
        with pytest.raises(ConfigError):
            parse_config_text("family half-classical")

    def test_twist_must_preserve_orientation(self):
        reversing = CircleHomeo.from_mobius(MobiusMap([[0.0, 1.0], [1.0, 0.0]]))
        with pytest.raises(ConfigError):
            half_classical_plane(reversing)
