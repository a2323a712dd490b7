"""Shared sampling and oracle helpers for the test suite."""

import math

import numpy as np

from torus_planes import MobiusMap, ProjPoint, TorusPoint, chordal


def rng_for(seed, trial=0):
    return np.random.default_rng((seed, trial))


def random_proj_point(rng) -> ProjPoint:
    return ProjPoint.from_chart(rng.random())


def random_separated_points(rng, count, separation=1e-3):
    pts = []
    while len(pts) < count:
        cand = random_proj_point(rng)
        if all(chordal(cand, p) >= separation for p in pts):
            pts.append(cand)
    return pts


def random_triple(rng, separation=1e-3):
    xs = random_separated_points(rng, 3, separation)
    ys = random_separated_points(rng, 3, separation)
    return [TorusPoint(x, y) for x, y in zip(xs, ys)]


def random_psl(rng) -> MobiusMap:
    while True:
        m = rng.normal(size=(2, 2))
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        if det > 0.1:
            return MobiusMap(m)


def random_pgl(rng) -> MobiusMap:
    while True:
        m = rng.normal(size=(2, 2))
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        if abs(det) > 0.1:
            return MobiusMap(m)


# ----------------------------------------------------------------------
# independent cross-ratio oracle on the extended real line


def cross_ratio_to_standard(x1, x2, x3):
    """The elementary chart map sending (x1, x2, x3) to (0, 1, inf).

    Pure extended-real arithmetic, independent of the homogeneous-frame
    solver under test.
    """

    def ratio(num, den):
        if math.isinf(num) and math.isinf(den):
            raise ValueError("indeterminate")
        if den == 0.0:
            return math.inf
        if math.isinf(num):
            return math.inf
        if math.isinf(den):
            return 0.0
        return num / den

    def s(x):
        if math.isinf(x1):
            # limit of ((x - x1)(x2 - x3)) / ((x - x3)(x2 - x1))
            return ratio(x2 - x3, x - x3) if not math.isinf(x) else 0.0
        if math.isinf(x2):
            return ratio(x - x1, x - x3) if not math.isinf(x) else 1.0
        if math.isinf(x3):
            return ratio(x - x1, x2 - x1) if not math.isinf(x) else math.inf
        if math.isinf(x):
            return ratio(x2 - x3, x2 - x1)
        return ratio((x - x1) * (x2 - x3), (x - x3) * (x2 - x1))

    return s
