"""Randomized property harness for plane axioms and group-action claims.

Each suite runs seeded trials against a plane (and possibly a group
element) and produces a VerifyReport: pass/fail, the worst residual, and
a counterexample list carrying full inputs so any failure can be replayed
in isolation. Reports are deterministic: trial i draws from an RNG
substream keyed by (seed, i), so serial and parallel execution, or two
runs on the same manifest, produce byte-identical payloads (wall time is
excluded from the canonical form).

Every suite has a paired negative control, a deliberately broken input
that must fail; a passing control fails the whole run. Controls are how
the harness distinguishes "the property holds" from "the test is vacuous".
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import (
    NoBranch,
    NotFound,
    ParallelInput,
    PlaneGeometryError,
    UnsupportedPlane,
)
from .groups import (
    DiagonalPSL,
    KernelMinusPSL,
    KernelPlusPSL,
    PhiStd,
    PhiTwoFixed,
    fixed_coordinates,
    group_literal,
    parse_group_literal,
)
from .homeo import CircleHomeo, homeo_sup_distance
from .planes import (
    PLUS,
    PlaneModel,
    classical_plane,
    corrupted_half_classical,
    half_classical_plane,
    parallel,
)
from .projline import (
    MobiusMap,
    ProjPoint,
    TorusPoint,
    chordal,
    mobius_from_three,
)

SCHEMA = "torus-planes/verify-report/v1"


@dataclass(frozen=True)
class TrialConfig:
    """Deterministic trial plan: same config, plane, suite => same report."""

    seed: int = 42
    trials: int = 200
    grid: int = 64
    separation: float = 1e-3
    tol: float | None = None

    def rng_for(self, trial: int) -> np.random.Generator:
        return np.random.default_rng((int(self.seed), int(trial)))

    def with_trials(self, trials: int) -> "TrialConfig":
        return TrialConfig(self.seed, trials, self.grid, self.separation, self.tol)


@dataclass
class VerifyReport:
    """Outcome of one suite run; fails exactly when counterexamples exist."""

    suite: str
    plane: str
    seed: int
    trials: int
    passed: bool
    max_residual: float
    counterexamples: list
    runtime_ms: float
    statistics: dict = field(default_factory=dict)
    negative_control: bool = False
    manifest: dict | None = None

    def payload(self, include_runtime: bool = True) -> dict:
        out = {
            "schema": SCHEMA,
            "suite": self.suite,
            "plane": self.plane,
            "seed": self.seed,
            "trials": self.trials,
            "pass": self.passed,
            "max_residual": self.max_residual,
            "counterexamples": self.counterexamples,
            "statistics": self.statistics,
            "negative_control": self.negative_control,
        }
        if self.manifest is not None:
            out["manifest"] = self.manifest
        if include_runtime:
            out["runtime_ms"] = self.runtime_ms
        return out

    def canonical_json(self) -> str:
        """Deterministic serialization: the wall-time field is excluded."""
        return json.dumps(self.payload(include_runtime=False), sort_keys=True, indent=2)

    def full_json(self) -> str:
        return json.dumps(self.payload(include_runtime=True), sort_keys=True, indent=2)

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.full_json())
            fh.write("\n")


_MAX_COUNTEREXAMPLES = 20


def _run_trials(
    suite: str,
    plane_desc: str,
    cfg: TrialConfig,
    trial_fn: Callable[[int, np.random.Generator], tuple[float, dict | None]],
    statistics: dict | None = None,
    negative_control: bool = False,
) -> VerifyReport:
    t0 = time.perf_counter()
    counterexamples = []
    dropped = 0
    max_residual = 0.0
    for i in range(cfg.trials):
        residual, ce = trial_fn(i, cfg.rng_for(i))
        if math.isfinite(residual):
            max_residual = max(max_residual, residual)
        if ce is not None:
            if len(counterexamples) < _MAX_COUNTEREXAMPLES:
                counterexamples.append({"trial": i, **ce})
            else:
                dropped += 1
    stats = dict(statistics or {})
    if dropped:
        stats["counterexamples_dropped"] = dropped
    return VerifyReport(
        suite=suite,
        plane=plane_desc,
        seed=cfg.seed,
        trials=cfg.trials,
        passed=not counterexamples and not dropped,
        max_residual=max_residual,
        counterexamples=counterexamples,
        runtime_ms=(time.perf_counter() - t0) * 1000.0,
        statistics=stats,
        negative_control=negative_control,
    )


# ----------------------------------------------------------------------
# sampling


def sample_proj_point(rng: np.random.Generator) -> ProjPoint:
    return ProjPoint.from_chart(rng.random())


def _sample_separated(rng, count: int, separation: float) -> list[ProjPoint]:
    pts: list[ProjPoint] = []
    while len(pts) < count:
        cand = sample_proj_point(rng)
        if all(chordal(cand, p) >= separation for p in pts):
            pts.append(cand)
    return pts


def sample_triple(rng: np.random.Generator, separation: float) -> list[TorusPoint]:
    """Three pairwise non-parallel torus points, coordinates separated."""
    xs = _sample_separated(rng, 3, separation)
    ys = _sample_separated(rng, 3, separation)
    return [TorusPoint(x, y) for x, y in zip(xs, ys)]


def _ser_proj(p: ProjPoint) -> list:
    return [p.h0, p.h1]


def _ser_point(p: TorusPoint) -> list:
    return [_ser_proj(p.x), _ser_proj(p.y)]


def _deser_proj(obj) -> ProjPoint:
    return ProjPoint(obj[0], obj[1])


def _deser_point(obj) -> TorusPoint:
    return TorusPoint(_deser_proj(obj[0]), _deser_proj(obj[1]))


# ----------------------------------------------------------------------
# joining


def verify_joining(
    plane: PlaneModel,
    cfg: TrialConfig,
    stress: bool = False,
    negative_control: bool = False,
) -> VerifyReport:
    """Axiom of Joining at trial scale.

    Per trial: a pairwise-non-parallel triple is joined; the circle must
    contain the points within tolerance, lie in the plane's circle set,
    and be the only branch solution. The stress variant samples nearly
    degenerate triples and only reports conditioning, with a loose bound.
    """
    separation = 1e-7 if stress else cfg.separation
    threshold = cfg.tol if cfg.tol is not None else (1e-5 if stress else plane.tol)

    def trial(i, rng):
        p, q, r = sample_triple(rng, separation)
        inputs = {"points": [_ser_point(p), _ser_point(q), _ser_point(r)]}
        try:
            circle = plane.join(p, q, r)
        except (NoBranch, ParallelInput) as exc:
            return math.inf, {**inputs, "reason": f"join failed: {exc}"}
        residual = max(
            plane.membership_residual(circle, pt) for pt in (p, q, r)
        )
        branches = plane.join_branches(p, q, r)
        valid = sum(1 for _, ok in branches.values() if ok)
        reasons = []
        if residual > threshold:
            reasons.append(f"membership residual {residual:.3e}")
        if not plane.circle_in_set(circle):
            reasons.append("circle not in the plane's circle set")
        if valid != 1:
            reasons.append(f"branch uniqueness violated ({valid} branches valid)")
        if plane.family == "classical":
            again = plane.join(r, p, q)
            agreement = homeo_sup_distance(circle.graph, again.graph, cfg.grid)
            if agreement > plane.uniq_tol:
                reasons.append(f"permuted rejoin disagrees by {agreement:.3e}")
        if reasons:
            return residual, {**inputs, "reason": "; ".join(reasons),
                              "residual": residual}
        return residual, None

    return _run_trials(
        "joining-stress" if stress else "joining",
        plane.describe(),
        cfg,
        trial,
        statistics={"separation": separation, "threshold": threshold},
        negative_control=negative_control,
    )


def control_joining(cfg: TrialConfig) -> VerifyReport:
    """Negative control: a plane whose twisted branch uses det > 0 members."""
    plane = corrupted_half_classical(CircleHomeo.power(2.0))
    return verify_joining(plane, cfg.with_trials(min(cfg.trials, 60)),
                          negative_control=True)


# ----------------------------------------------------------------------
# touching


def _twist_slope(plane: PlaneModel, x: ProjPoint) -> float:
    """Chart-space slope of the plane's twist map at x, by central difference."""
    eps = 1e-4
    theta = x.chart()
    lo = plane.f.apply(ProjPoint.from_chart(theta - eps)).chart()
    hi = plane.f.apply(ProjPoint.from_chart(theta + eps)).chart()
    return abs(float((hi - lo + 0.5) % 1.0 - 0.5)) / (2.0 * eps)


_SLOPE_BOUNDS = (0.05, 20.0)


def verify_touching(
    plane: PlaneModel,
    cfg: TrialConfig,
    negative_control: bool = False,
    _claim_secant: bool = False,
) -> VerifyReport:
    """Axiom of Touching at trial scale.

    Per trial: a circle c, a point p on it and a point q off it are
    sampled; touch() must produce a circle through p and q meeting c only
    at p (within the tangency band), and the full pencil scan must hold
    exactly one validated tangency.

    Sampling keeps the anchors away from the twist's critical points
    (chart slope of f outside the bounds): there the tangency exists but
    its double root lives beyond double-precision resolution in torus
    coordinates, which is conditioning, not geometry. The opt-in stress
    suite is the place for such trials.

    The `_claim_secant` flag powers the negative control: instead of the
    touch() result, a secant circle through p and q is claimed to be the
    tangent, and the tangency assertions must catch it.
    """
    off_margin = max(10.0 * cfg.separation, 1e-2)

    def conditioned(x: ProjPoint) -> bool:
        slope = _twist_slope(plane, x)
        return _SLOPE_BOUNDS[0] <= slope <= _SLOPE_BOUNDS[1]

    def trial(i, rng):
        base = sample_triple(rng, cfg.separation)
        try:
            circle = plane.join(*base)
        except (NoBranch, ParallelInput) as exc:
            return math.inf, {
                "points": [_ser_point(pt) for pt in base],
                "reason": f"carrier join failed: {exc}",
            }
        while True:
            x0 = sample_proj_point(rng)
            if conditioned(x0):
                break
        p = circle.point_at(x0)
        while True:
            q = TorusPoint(sample_proj_point(rng), sample_proj_point(rng))
            if parallel(p, q, cfg.separation) != "none":
                continue
            if plane.membership_residual(circle, q) < off_margin:
                continue
            if not conditioned(q.x):
                continue
            break
        inputs = {
            "points": [_ser_point(pt) for pt in base],
            "p": _ser_point(p),
            "q": _ser_point(q),
        }
        if _claim_secant:
            while True:
                r_extra = TorusPoint(sample_proj_point(rng), sample_proj_point(rng))
                if parallel(p, r_extra, cfg.separation) != "none":
                    continue
                if parallel(q, r_extra, cfg.separation) != "none":
                    continue
                break
            inputs["claimed_points"] = [
                _ser_point(p), _ser_point(q), _ser_point(r_extra)
            ]
            try:
                tangent = plane.join(p, q, r_extra)
            except (NoBranch, ParallelInput) as exc:
                return math.inf, {**inputs, "reason": f"claim join failed: {exc}"}
        else:
            try:
                tangent = plane.touch(circle, p, q)
            except (NotFound, PlaneGeometryError) as exc:
                return math.inf, {**inputs, "reason": f"touch failed: {exc}"}
        far, sep = plane.tangency_separation(circle, tangent, p)
        residual_q = plane.membership_residual(tangent, q)
        reasons = []
        if far:
            reasons.append("intersection far from p remains")
        if sep > plane.tangency_band:
            reasons.append(f"tangency separation {sep:.3e} beyond band")
        if residual_q > plane.tol:
            reasons.append(f"q membership residual {residual_q:.3e}")
        if not _claim_secant:
            count, details = plane.count_tangency_brackets(circle, p, q)
            if count != 1:
                reasons.append(
                    f"pencil scan found {count} tangency brackets {details}"
                )
        if reasons:
            return max(sep, residual_q), {**inputs, "reason": "; ".join(reasons)}
        return max(sep, residual_q), None

    return _run_trials(
        "touching",
        plane.describe(),
        cfg,
        trial,
        statistics={
            "tangency_band": plane.tangency_band,
            "off_circle_margin": off_margin,
            "twist_slope_bounds": list(_SLOPE_BOUNDS),
        },
        negative_control=negative_control,
    )


def control_touching(cfg: TrialConfig) -> VerifyReport:
    """Negative control: secant circles claimed as tangents must be caught."""
    plane = half_classical_plane(CircleHomeo.power(2.0))
    return verify_touching(
        plane,
        cfg.with_trials(min(cfg.trials, 10)),
        negative_control=True,
        _claim_secant=True,
    )


# ----------------------------------------------------------------------
# automorphisms


def verify_automorphism(
    plane: PlaneModel,
    g,
    cfg: TrialConfig,
    negative_control: bool = False,
) -> VerifyReport:
    """Circles map to circles under g, checked through re-joined images.

    Per trial: join a random triple, push the triple through g, join the
    images, then require the g-images of 16 further carrier points to lie
    on the re-joined circle. Parallel classes must also map to parallel
    classes of the same kind.
    """
    threshold = cfg.tol if cfg.tol is not None else 1e-8
    probe = [(j + 0.5) / 16.0 for j in range(16)]

    def trial(i, rng):
        triple = sample_triple(rng, cfg.separation)
        inputs = {
            "points": [_ser_point(pt) for pt in triple],
            "group": group_literal(g),
        }
        try:
            circle = plane.join(*triple)
            image = plane.join(*(g.act(pt) for pt in triple))
        except (NoBranch, ParallelInput) as exc:
            return math.inf, {**inputs, "reason": f"join failed: {exc}"}
        residual = 0.0
        for theta in probe:
            pt = circle.point_at(ProjPoint.from_chart(theta))
            residual = max(residual, plane.membership_residual(image, g.act(pt)))
        reasons = []
        if residual > threshold:
            reasons.append(f"image circle residual {residual:.3e}")
        a = TorusPoint(triple[0].x, triple[1].y)
        if parallel(g.act(triple[0]), g.act(a)) != PLUS:
            reasons.append("(+)-parallelity not preserved")
        b = TorusPoint(triple[1].x, triple[0].y)
        if parallel(g.act(triple[0]), g.act(b)) != "minus":
            reasons.append("(-)-parallelity not preserved")
        if reasons:
            return residual, {**inputs, "reason": "; ".join(reasons),
                              "residual": residual}
        return residual, None

    return _run_trials(
        "automorphism",
        plane.describe(),
        cfg,
        trial,
        statistics={"group": group_literal(g), "threshold": threshold},
        negative_control=negative_control,
    )


def control_automorphism(cfg: TrialConfig) -> VerifyReport:
    """Negative control: the wrong-side kernel on a twisted plane."""
    plane = half_classical_plane(CircleHomeo.power(2.0))
    g = KernelMinusPSL(MobiusMap.affine(1.0, 1.0))
    return verify_automorphism(plane, g, cfg.with_trials(min(cfg.trials, 40)),
                               negative_control=True)


# ----------------------------------------------------------------------
# rigidity


def verify_rigidity(
    plane: PlaneModel,
    cfg: TrialConfig,
    negative_control: bool = False,
    _permute_targets: bool = False,
) -> VerifyReport:
    """Class-preserving automorphisms fixing three points are the identity.

    Coordinatewise candidates (mu, nu) fixing a pairwise-non-parallel
    triple are solved from the three-point constraints on each factor;
    both must come out as the identity. Only defined for the classical
    plane, where the class-preserving automorphisms are exactly the
    coordinatewise Mobius pairs.
    """
    if plane.family != "classical":
        raise UnsupportedPlane("rigidity enumeration needs the classical plane")

    def identity_deviation(m: MobiusMap) -> float:
        eye = np.eye(2)
        return float(min(np.max(np.abs(m.m - eye)), np.max(np.abs(m.m + eye))))

    def trial(i, rng):
        p, q, r = sample_triple(rng, cfg.separation)
        xs = (p.x, q.x, r.x)
        ys = (p.y, q.y, r.y)
        tx = (xs[1], xs[2], xs[0]) if _permute_targets else xs
        ty = (ys[1], ys[2], ys[0]) if _permute_targets else ys
        mu = mobius_from_three(*xs, *tx)
        nu = mobius_from_three(*ys, *ty)
        deviation = max(identity_deviation(mu), identity_deviation(nu))
        inputs = {"points": [_ser_point(pt) for pt in (p, q, r)]}
        if deviation > 1e-9:
            return deviation, {
                **inputs,
                "reason": f"non-identity solution, deviation {deviation:.3e}",
            }
        return deviation, None

    return _run_trials(
        "rigidity",
        plane.describe(),
        cfg,
        trial,
        statistics={"form": "(+)-class-preserving corollary"},
        negative_control=negative_control,
    )


def control_rigidity(cfg: TrialConfig) -> VerifyReport:
    """Negative control: cyclically permuted targets must be caught."""
    return verify_rigidity(
        classical_plane(),
        cfg.with_trials(min(cfg.trials, 20)),
        negative_control=True,
        _permute_targets=True,
    )


# ----------------------------------------------------------------------
# fixed configurations


_PSL_SAMPLE = (
    MobiusMap([[2.0, 1.0], [1.0, 1.0]]),
    MobiusMap([[1.0, 1.0], [0.0, 1.0]]),
    MobiusMap.rotation(0.15),
    MobiusMap([[3.0, 0.0], [0.0, 1.0 / 3.0]]),
)

_PHI_PARAM_SAMPLE = ((2.0, 3.0, 1.0), (1.5, 0.5, -1.0), (3.0, 1.25, 2.0))
_PHI2_PARAM_SAMPLE = ((2.0, 3.0, 1.0), (1.5, 2.0, -1.0), (3.0, 0.5, 2.0))


def family_sample(family_key: str):
    """Deterministic non-identity elements of one family.

    The generic parameters (a, b, c) = (2, 3, 1) lead each Phi sample;
    the common fixed configuration is read off the whole sample, since a
    single element may fix more than the group does.
    """
    if family_key == "diag":
        return [DiagonalPSL(m) for m in _PSL_SAMPLE]
    if family_key == "kplus":
        return [KernelPlusPSL(m) for m in _PSL_SAMPLE]
    if family_key == "kminus":
        return [KernelMinusPSL(m) for m in _PSL_SAMPLE]
    if family_key.startswith("phi2:"):
        d = float(family_key.split(":")[1])
        return [PhiTwoFixed(d, a, b, c) for a, b, c in _PHI2_PARAM_SAMPLE]
    if family_key.startswith("phi:"):
        text = family_key.split(":")[1]
        d = math.inf if text == "inf" else float(text)
        return [PhiStd(d, a, b, c) for a, b, c in _PHI_PARAM_SAMPLE]
    raise UnsupportedPlane(f"unknown family key {family_key!r}")


def family_key_of(g) -> str:
    if isinstance(g, DiagonalPSL):
        return "diag"
    if isinstance(g, KernelPlusPSL):
        return "kplus"
    if isinstance(g, KernelMinusPSL):
        return "kminus"
    if isinstance(g, PhiStd):
        d = "inf" if math.isinf(g.d) else f"{g.d:g}"
        return f"phi:{d}"
    if isinstance(g, PhiTwoFixed):
        return f"phi2:{g.d:g}"
    raise UnsupportedPlane(f"no fixed-configuration family for {g!r}")


def _common_factor_fixed(elements, side_index: int, tol: float = 1e-7):
    """(fixes_all, common fixed coordinates) across a family sample."""
    fixes_all = True
    candidate_pts: list[ProjPoint] | None = None
    factors = [el.factor_homeos()[side_index] for el in elements]
    for h in factors:
        all_fixed, pts = fixed_coordinates(h)
        if all_fixed:
            continue
        fixes_all = False
        if candidate_pts is None:
            candidate_pts = list(pts)
        else:
            candidate_pts = [
                p for p in candidate_pts if any(chordal(p, q) <= tol for q in pts)
            ]
    if fixes_all:
        return True, ()
    survivors = []
    for p in candidate_pts or ():
        if all(chordal(h.apply(p), p) <= tol for h in factors):
            survivors.append(p)
    return False, tuple(survivors)


_EXPECTED_CONFIG = {
    "diag": {"points": [], "plus": [], "minus": [], "diagonal_fixed": True},
    "kplus": {"points": [], "plus": "all", "minus": []},
    "kminus": {"points": [], "plus": [], "minus": "all"},
    "phi": {"points": [[math.inf, math.inf]], "plus": [math.inf], "minus": [math.inf]},
    "phi2": {
        "points": [[0.0, math.inf], [math.inf, math.inf]],
        "plus": [0.0, math.inf],
        "minus": [math.inf],
    },
}


def _coord_set_matches(found, expected, tol: float = 1e-7) -> bool:
    if expected == "all":
        return found == "all"
    if found == "all":
        return False
    if len(found) != len(expected):
        return False
    exp_pts = [ProjPoint.from_real(v) for v in expected]
    return all(any(chordal(f, e) <= tol for e in exp_pts) for f in found) and all(
        any(chordal(f, e) <= tol for f in found) for e in exp_pts
    )


def verify_fixed_configuration(
    family_key: str,
    cfg: TrialConfig,
    negative_control: bool = False,
    _expect_key: str | None = None,
) -> VerifyReport:
    """Common fixed elements of a family sample match its classification.

    Factor maps are scanned on a 512-point coordinate grid (the product
    scan covers the 512 x 512 torus grid plus the infinity cross, since
    the actions are componentwise); fixed points, fixed parallel classes
    and, for the diagonal family, the invariant diagonal circle are
    compared against the case labels of the classification.
    """
    elements = family_sample(family_key)
    expect_key = _expect_key or family_key.split(":")[0]
    expected = _EXPECTED_CONFIG[expect_key]
    counterexamples = []
    t0 = time.perf_counter()

    fx_all, fx_pts = _common_factor_fixed(elements, 0)
    fy_all, fy_pts = _common_factor_fixed(elements, 1)
    found_plus = "all" if fx_all else fx_pts
    found_minus = "all" if fy_all else fy_pts

    if not _coord_set_matches(found_plus, expected["plus"]):
        counterexamples.append(
            {
                "reason": "fixed (+)-classes mismatch",
                "found": "all" if fx_all else [p.value() for p in fx_pts],
                "expected": "all" if expected["plus"] == "all" else expected["plus"],
            }
        )
    if not _coord_set_matches(found_minus, expected["minus"]):
        counterexamples.append(
            {
                "reason": "fixed (-)-classes mismatch",
                "found": "all" if fy_all else [p.value() for p in fy_pts],
                "expected": "all" if expected["minus"] == "all" else expected["minus"],
            }
        )

    # fixed points: products of commonly fixed factor coordinates
    if fx_all or fy_all:
        found_points = []  # a kernel family fixes whole classes, never isolated points
    else:
        found_points = [TorusPoint(x, y) for x in fx_pts for y in fy_pts]
    exp_points = [TorusPoint.from_reals(*xy) for xy in expected["points"]]

    def near(f, e):
        return chordal(f.x, e.x) <= 1e-7 and chordal(f.y, e.y) <= 1e-7

    points_ok = (
        len(found_points) == len(exp_points)
        and all(any(near(f, e) for e in exp_points) for f in found_points)
        and all(any(near(f, e) for f in found_points) for e in exp_points)
    )
    if not points_ok:
        counterexamples.append(
            {
                "reason": "common fixed points mismatch",
                "found": [[p.x.value(), p.y.value()] for p in found_points],
                "expected": expected["points"],
            }
        )

    max_residual = 0.0
    if expected.get("diagonal_fixed"):
        # the diagonal is setwise invariant under every sampled element...
        for el in elements:
            for k in range(16):
                pt = el.act(TorusPoint.from_reals(*2 * (math.tan(1.2 * k - 7.0),)))
                drift = chordal(pt.x, pt.y)
                max_residual = max(max_residual, drift)
                if drift > 1e-9:
                    counterexamples.append(
                        {"reason": "diagonal not setwise fixed",
                         "element": group_literal(el), "drift": drift}
                    )
                    break
        # ...and no sampled non-diagonal circle is fixed by the whole family
        plane = classical_plane()
        rng = cfg.rng_for(0)
        for _ in range(12):
            circle = plane.join(*sample_triple(rng, cfg.separation))
            if all(
                max(
                    plane.membership_residual(circle, el.act(
                        circle.point_at(ProjPoint.from_chart((j + 0.5) / 8.0))
                    ))
                    for j in range(8)
                )
                <= 1e-6
                for el in elements
            ):
                diag = plane.mobius_circle(MobiusMap.identity())
                if homeo_sup_distance(circle.graph, diag.graph, 64) > plane.uniq_tol:
                    counterexamples.append(
                        {"reason": "unexpected invariant circle found"}
                    )

    return VerifyReport(
        suite="fixed-configuration",
        plane=f"family:{family_key}",
        seed=cfg.seed,
        trials=len(elements),
        passed=not counterexamples,
        max_residual=max_residual,
        counterexamples=counterexamples,
        runtime_ms=(time.perf_counter() - t0) * 1000.0,
        statistics={"factor_scan_grid": 512, "sampled_elements": len(elements)},
        negative_control=negative_control,
    )


def control_fixed_configuration(cfg: TrialConfig) -> VerifyReport:
    """Negative control: a family checked against the wrong case label."""
    return verify_fixed_configuration(
        "phi:2", cfg, negative_control=True, _expect_key="phi2"
    )


# ----------------------------------------------------------------------
# derived planes


def verify_derived_plane(
    plane: PlaneModel,
    base: TorusPoint,
    cfg: TrialConfig,
    negative_control: bool = False,
    _perturb_base: bool = False,
) -> VerifyReport:
    """Unique derived-plane lines through random point pairs.

    Per trial: two derived points off the base cross; the line through
    them must re-join identically under permuted arguments, and the
    parallel-class cases must stay disjoint from the circle cases.
    """

    def sample_derived_point(rng):
        while True:
            pt = TorusPoint(sample_proj_point(rng), sample_proj_point(rng))
            if (
                chordal(pt.x, base.x) >= cfg.separation
                and chordal(pt.y, base.y) >= cfg.separation
            ):
                return pt

    base2 = (
        TorusPoint(
            ProjPoint.from_chart(base.x.chart() + 0.11),
            ProjPoint.from_chart(base.y.chart() + 0.23),
        )
        if _perturb_base
        else base
    )

    def trial(i, rng):
        a = sample_derived_point(rng)
        while True:
            b = sample_derived_point(rng)
            if parallel(a, b) != "both":
                break
        inputs = {"a": _ser_point(a), "b": _ser_point(b), "base": _ser_point(base)}
        line = plane.derived_line_through(base, a, b)
        rel = parallel(a, b)
        if line.kind != "circle":
            expected_kind = "plus-class" if rel == PLUS else "minus-class"
            if line.kind != expected_kind:
                return math.inf, {**inputs, "reason": "parallel case misclassified"}
            return 0.0, None
        if rel != "none":
            return math.inf, {**inputs, "reason": "circle returned for parallel pair"}
        other = plane.derived_line_through(base2, b, a)
        if other.kind != "circle":
            return math.inf, {**inputs, "reason": "permuted rejoin changed kind"}
        distance = homeo_sup_distance(line.circle.graph, other.circle.graph, cfg.grid)
        if distance > plane.uniq_tol:
            return distance, {
                **inputs,
                "reason": f"permuted rejoin disagrees by {distance:.3e}",
            }
        return distance, None

    return _run_trials(
        "derived-plane",
        plane.describe(),
        cfg,
        trial,
        statistics={"base": [base.x.value(), base.y.value()]},
        negative_control=negative_control,
    )


def control_derived_plane(cfg: TrialConfig) -> VerifyReport:
    """Negative control: rejoin against a shifted base must disagree."""
    return verify_derived_plane(
        classical_plane(),
        TorusPoint.from_reals(math.inf, math.inf),
        cfg.with_trials(min(cfg.trials, 20)),
        negative_control=True,
        _perturb_base=True,
    )


# ----------------------------------------------------------------------
# counterexample recheck


def recheck_counterexample(
    suite: str, plane: PlaneModel, ce: dict, resolution_factor: int = 10
) -> bool:
    """Re-verify a counterexample in isolation at boosted scan resolution.

    Returns True when the violation reproduces; sound reports only carry
    counterexamples that do.
    """
    boosted = PlaneModel(
        plane.family,
        f=plane.f,
        g=plane.g,
        tol=plane.tol,
        uniq_tol=plane.uniq_tol,
        tangency_band=plane.tangency_band,
        scan_grid=plane.scan_grid * resolution_factor,
        corrupt_twisted=plane.corrupt_twisted,
    )
    if suite in ("joining", "joining-stress"):
        pts = [_deser_point(obj) for obj in ce["points"]]
        try:
            circle = boosted.join(*pts)
        except (NoBranch, ParallelInput):
            return True
        residual = max(boosted.membership_residual(circle, pt) for pt in pts)
        return residual > boosted.tol or not boosted.circle_in_set(circle)
    if suite == "touching":
        pts = [_deser_point(obj) for obj in ce["points"]]
        p = _deser_point(ce["p"])
        q = _deser_point(ce["q"])
        try:
            circle = boosted.join(*pts)
            if "claimed_points" in ce:
                # replay of a claimed (non-touch) circle: the violation is
                # that this specific circle is not tangent at p
                claimed = boosted.join(
                    *(_deser_point(obj) for obj in ce["claimed_points"])
                )
                far, sep = boosted.tangency_separation(circle, claimed, p)
                return far or sep > boosted.tangency_band
            tangent = boosted.touch(circle, p, q)
        except (NoBranch, ParallelInput, NotFound, PlaneGeometryError):
            return True
        far, sep = boosted.tangency_separation(circle, tangent, p)
        count, _ = boosted.count_tangency_brackets(circle, p, q)
        return far or sep > boosted.tangency_band or count != 1
    if suite == "automorphism":
        pts = [_deser_point(obj) for obj in ce["points"]]
        g = parse_group_literal(ce["group"])
        try:
            circle = boosted.join(*pts)
            image = boosted.join(*(g.act(pt) for pt in pts))
        except (NoBranch, ParallelInput):
            return True
        residual = max(
            boosted.membership_residual(
                image, g.act(circle.point_at(ProjPoint.from_chart((j + 0.5) / 16.0)))
            )
            for j in range(16)
        )
        return residual > 1e-8
    raise UnsupportedPlane(f"no recheck routine for suite {suite!r}")


# ----------------------------------------------------------------------
# registry


@dataclass(frozen=True)
class SuiteSpec:
    name: str
    run: Callable
    control: Callable[[TrialConfig], VerifyReport]
    needs_group: bool = False


def _run_joining(plane, cfg, group=None):
    return verify_joining(plane, cfg)


def _run_joining_stress(plane, cfg, group=None):
    return verify_joining(plane, cfg, stress=True)


def _run_touching(plane, cfg, group=None):
    return verify_touching(plane, cfg)


def _run_automorphism(plane, cfg, group=None):
    if group is None:
        group = (
            DiagonalPSL(MobiusMap([[2.0, 1.0], [1.0, 1.0]]))
            if plane.family == "classical"
            else KernelPlusPSL(MobiusMap([[2.0, 1.0], [1.0, 1.0]]))
        )
    return verify_automorphism(plane, group, cfg)


def _run_rigidity(plane, cfg, group=None):
    return verify_rigidity(plane, cfg)


def _run_fixed_configuration(plane, cfg, group=None):
    key = family_key_of(group) if group is not None else "diag"
    return verify_fixed_configuration(key, cfg)


def _run_derived_plane(plane, cfg, group=None):
    return verify_derived_plane(plane, TorusPoint.from_reals(math.inf, math.inf), cfg)


SUITES = {
    "joining": SuiteSpec("joining", _run_joining, control_joining),
    "joining-stress": SuiteSpec("joining-stress", _run_joining_stress, control_joining),
    "touching": SuiteSpec("touching", _run_touching, control_touching),
    "automorphism": SuiteSpec(
        "automorphism", _run_automorphism, control_automorphism, needs_group=True
    ),
    "rigidity": SuiteSpec("rigidity", _run_rigidity, control_rigidity),
    "fixed-configuration": SuiteSpec(
        "fixed-configuration",
        _run_fixed_configuration,
        control_fixed_configuration,
        needs_group=True,
    ),
    "derived-plane": SuiteSpec(
        "derived-plane", _run_derived_plane, control_derived_plane
    ),
}
