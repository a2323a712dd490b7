import json
import math

import pytest

from torus_planes import (
    CircleHomeo,
    MobiusMap,
    TorusPoint,
    UnsupportedPlane,
    classical_plane,
    corrupted_half_classical,
    half_classical_plane,
    recheck_counterexample,
)
from torus_planes.groups import DiagonalPSL, KernelPlusPSL
from torus_planes.verify import (
    SUITES,
    TrialConfig,
    control_automorphism,
    control_derived_plane,
    control_fixed_configuration,
    control_joining,
    control_rigidity,
    control_touching,
    sample_triple,
    verify_automorphism,
    verify_derived_plane,
    verify_fixed_configuration,
    verify_joining,
    verify_rigidity,
    verify_touching,
)

CFG = TrialConfig(seed=42, trials=60)
pt = TorusPoint.from_reals


@pytest.fixture(scope="module")
def classical():
    return classical_plane()


@pytest.fixture(scope="module")
def half2():
    return half_classical_plane(CircleHomeo.power(2))


class TestSampling:
    def test_triples_respect_separation(self):
        from torus_planes import chordal

        for trial in range(50):
            rng = CFG.rng_for(trial)
            a, b, c = sample_triple(rng, 1e-3)
            for u in (a, b, c):
                for v in (a, b, c):
                    if u is v:
                        continue
                    assert chordal(u.x, v.x) >= 1e-3
                    assert chordal(u.y, v.y) >= 1e-3

    def test_rng_streams_are_per_trial(self):
        assert CFG.rng_for(3).random() == CFG.rng_for(3).random()
        assert CFG.rng_for(3).random() != CFG.rng_for(4).random()


class TestSuitesPass:
    def test_joining(self, classical, half2):
        assert verify_joining(classical, CFG).passed
        assert verify_joining(half2, CFG).passed

    def test_joining_stress_reports_conditioning(self, classical):
        report = verify_joining(classical, TrialConfig(seed=42, trials=30), stress=True)
        assert report.suite == "joining-stress"
        assert report.statistics["separation"] == 1e-7

    def test_touching(self, classical, half2):
        cfg = TrialConfig(seed=42, trials=25)
        assert verify_touching(classical, cfg).passed
        assert verify_touching(half2, cfg).passed

    def test_automorphism(self, classical, half2):
        cfg = TrialConfig(seed=42, trials=25)
        g = DiagonalPSL(MobiusMap([[2.0, 1.0], [1.0, 1.0]]))
        assert verify_automorphism(classical, g, cfg).passed
        g2 = KernelPlusPSL(MobiusMap([[2.0, 1.0], [1.0, 1.0]]))
        assert verify_automorphism(half2, g2, cfg).passed

    def test_rigidity(self, classical, half2):
        assert verify_rigidity(classical, CFG).passed
        with pytest.raises(UnsupportedPlane):
            verify_rigidity(half2, CFG)

    def test_fixed_configuration_families(self):
        for key in ("diag", "kplus", "kminus", "phi:2", "phi:inf", "phi2:0", "phi2:-1"):
            report = verify_fixed_configuration(key, CFG)
            assert report.passed, (key, report.counterexamples)

    def test_derived_plane(self, classical, half2):
        base = pt(math.inf, math.inf)
        assert verify_derived_plane(classical, base, CFG).passed
        assert verify_derived_plane(half2, base, TrialConfig(seed=42, trials=30)).passed


class TestNegativeControls:
    def test_every_suite_has_a_control(self):
        for name, spec in SUITES.items():
            assert callable(spec.control), name

    def test_joining_control_fails(self):
        report = control_joining(CFG)
        assert not report.passed and report.negative_control
        assert report.counterexamples

    def test_touching_control_fails(self):
        report = control_touching(TrialConfig(seed=42, trials=8))
        assert not report.passed and report.counterexamples

    def test_automorphism_control_fails(self):
        report = control_automorphism(CFG)
        assert not report.passed and report.counterexamples

    def test_rigidity_control_fails(self):
        report = control_rigidity(CFG)
        assert not report.passed

    def test_fixed_configuration_control_fails(self):
        report = control_fixed_configuration(CFG)
        assert not report.passed

    def test_derived_plane_control_fails(self):
        report = control_derived_plane(CFG)
        assert not report.passed


class TestReports:
    def test_fail_iff_counterexamples(self, classical):
        good = verify_joining(classical, TrialConfig(seed=42, trials=20))
        assert good.passed and not good.counterexamples
        bad = control_joining(TrialConfig(seed=42, trials=20))
        assert not bad.passed and bad.counterexamples

    def test_payload_schema(self, classical):
        report = verify_joining(classical, TrialConfig(seed=42, trials=10))
        payload = json.loads(report.full_json())
        for key in ("schema", "suite", "plane", "seed", "trials", "pass",
                    "max_residual", "counterexamples", "runtime_ms"):
            assert key in payload
        assert payload["pass"] is True
        assert payload["suite"] == "joining"

    def test_determinism_excluding_runtime(self, classical, half2):
        cfg = TrialConfig(seed=7, trials=30)
        a = verify_joining(classical, cfg).canonical_json()
        b = verify_joining(classical, cfg).canonical_json()
        assert a == b
        cfg_t = TrialConfig(seed=7, trials=8)
        assert (
            verify_touching(half2, cfg_t).canonical_json()
            == verify_touching(half2, cfg_t).canonical_json()
        )

    def test_different_seed_changes_payload(self, classical):
        a = verify_joining(classical, TrialConfig(seed=1, trials=20)).canonical_json()
        b = verify_joining(classical, TrialConfig(seed=2, trials=20)).canonical_json()
        assert a != b

    def test_monotone_tolerance(self, classical):
        tight = verify_joining(classical, TrialConfig(seed=42, trials=50, tol=1e-9))
        loose = verify_joining(classical, TrialConfig(seed=42, trials=50, tol=1e-6))
        assert tight.passed and loose.passed


class TestRecheck:
    def test_joining_counterexamples_reverify(self):
        plane = corrupted_half_classical(CircleHomeo.power(2))
        report = verify_joining(plane, TrialConfig(seed=42, trials=20))
        assert report.counterexamples
        for ce in report.counterexamples[:3]:
            assert recheck_counterexample("joining", plane, ce, resolution_factor=10)

    def test_automorphism_counterexamples_reverify(self):
        report = control_automorphism(TrialConfig(seed=42, trials=20))
        plane = half_classical_plane(CircleHomeo.power(2))
        assert report.counterexamples
        ce = report.counterexamples[0]
        assert recheck_counterexample("automorphism", plane, ce, resolution_factor=10)

    def test_touching_counterexamples_reverify(self):
        plane = half_classical_plane(CircleHomeo.power(2))
        report = control_touching(TrialConfig(seed=42, trials=4))
        assert report.counterexamples
        ce = report.counterexamples[0]
        assert "claimed_points" in ce
        assert recheck_counterexample("touching", plane, ce, resolution_factor=10)

    def test_sound_reports_have_nothing_to_recheck(self, classical):
        report = verify_joining(classical, TrialConfig(seed=42, trials=30))
        assert report.counterexamples == []
