"""Numerics on the real projective line and its Mobius transformations.

Each torus factor is a copy of the circle modelled as RP^1: a point is a
homogeneous pair [h0 : h1] with value h0/h1, and [1 : 0] plays infinity.
Every map acts linearly on the homogeneous pair, so infinity needs no
special-casing anywhere. An angle chart (used for plotting and grid scans
only) wraps the circle once around the half-open unit interval, with 0 at
chart 0 and infinity at chart 0.5.

Conventions:

* Canonical point representative: h0^2 + h1^2 = 1 with h1 > 0, or h1 = 0
  and h0 > 0. Distances use the chordal metric min(|p - q|, |p + q|) on
  canonical representatives, so the seam of the sign choice is harmless.
* Mobius matrices are normalized to |det| = 1 and sign-canonicalized by
  making the entry of largest magnitude positive. Orientation is the sign
  of the determinant: +1 exactly for PSL(2,R) members, -1 otherwise.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import CoincidentPoints, IdentityMap

#: chordal tolerance below which two points count as equal
EQUALITY_TOL = 1e-9

#: |trace^2 - 4 det| below this counts as parabolic (one fixed point)
DISC_BAND = 1e-10

# slack under which a representative already counts as unit-norm; skipping
# the division keeps canonicalization bit-for-bit idempotent
_NORM_SLACK = 4.0 * np.finfo(float).eps


def normalize_h(h: np.ndarray) -> np.ndarray:
    """Canonicalize homogeneous coordinates, shape (2, ...) -> (2, ...)."""
    h = np.asarray(h, dtype=float)
    n = np.hypot(h[0], h[1])
    if np.any(n == 0.0) or not np.all(np.isfinite(n)):
        raise ValueError("homogeneous pair must be finite and nonzero")
    scale = np.where(np.abs(n - 1.0) <= _NORM_SLACK, 1.0, n)
    out = h / scale
    flip = (out[1] < 0.0) | ((out[1] == 0.0) & (out[0] < 0.0))
    out = np.where(flip, -out, out)
    return out + 0.0


def chart_h(h: np.ndarray) -> np.ndarray:
    """Angle chart of homogeneous pairs: theta in [0, 1), infinity at 0.5."""
    h = np.asarray(h, dtype=float)
    return (np.arctan2(h[0], h[1]) / math.pi) % 1.0


def h_from_chart(theta) -> np.ndarray:
    """Inverse of the angle chart, returns canonical pairs of shape (2, ...)."""
    alpha = np.asarray(theta, dtype=float) * math.pi
    return normalize_h(np.stack([np.sin(alpha), np.cos(alpha)]))


def chordal_h(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Chordal distance between canonical representatives, broadcasting."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    d_minus = np.hypot(a[0] - b[0], a[1] - b[1])
    d_plus = np.hypot(a[0] + b[0], a[1] + b[1])
    return np.minimum(d_minus, d_plus)


def wrap_half(x):
    """Wrap a chart difference into [-0.5, 0.5)."""
    return (np.asarray(x, dtype=float) + 0.5) % 1.0 - 0.5


class ProjPoint:
    """A point of RP^1 stored as its canonical homogeneous representative."""

    __slots__ = ("h0", "h1")

    def __init__(self, h0: float, h1: float):
        h0 = float(h0)
        h1 = float(h1)
        n = math.hypot(h0, h1)
        if n == 0.0 or not math.isfinite(n):
            raise ValueError("homogeneous pair must be finite and nonzero")
        if abs(n - 1.0) > _NORM_SLACK:
            h0 /= n
            h1 /= n
        if h1 < 0.0 or (h1 == 0.0 and h0 < 0.0):
            h0, h1 = -h0, -h1
        object.__setattr__(self, "h0", h0 + 0.0)
        object.__setattr__(self, "h1", h1 + 0.0)

    def __setattr__(self, name, value):
        raise AttributeError("ProjPoint is immutable")

    @classmethod
    def from_real(cls, x: float) -> "ProjPoint":
        """Point for a real value; math.inf gives the point at infinity."""
        if math.isinf(x):
            return cls(1.0, 0.0)
        return cls(float(x), 1.0)

    @classmethod
    def infinity(cls) -> "ProjPoint":
        return cls(1.0, 0.0)

    @classmethod
    def from_chart(cls, theta: float) -> "ProjPoint":
        alpha = float(theta) * math.pi
        return cls(math.sin(alpha), math.cos(alpha))

    @property
    def h(self) -> np.ndarray:
        return np.array([self.h0, self.h1])

    def value(self) -> float:
        """Real value of the point; infinity for [1 : 0]."""
        if self.h1 == 0.0:
            return math.inf
        return self.h0 / self.h1

    def chart(self) -> float:
        return (math.atan2(self.h0, self.h1) / math.pi) % 1.0

    def is_infinity(self, tol: float = EQUALITY_TOL) -> bool:
        return abs(self.h1) <= tol

    def __repr__(self):
        if self.h1 == 0.0:
            return "ProjPoint(inf)"
        return f"ProjPoint({self.h0 / self.h1:.12g})"


def chordal(p: ProjPoint, q: ProjPoint) -> float:
    """Chordal distance between two projective points."""
    d_minus = math.hypot(p.h0 - q.h0, p.h1 - q.h1)
    d_plus = math.hypot(p.h0 + q.h0, p.h1 + q.h1)
    return min(d_minus, d_plus)


def proj_equal(p: ProjPoint, q: ProjPoint, tol: float = EQUALITY_TOL) -> bool:
    return chordal(p, q) <= tol


class TorusPoint:
    """A point of the torus S^1 x S^1, one projective point per factor."""

    __slots__ = ("x", "y")

    def __init__(self, x: ProjPoint, y: ProjPoint):
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __setattr__(self, name, value):
        raise AttributeError("TorusPoint is immutable")

    @classmethod
    def from_reals(cls, x: float, y: float) -> "TorusPoint":
        return cls(ProjPoint.from_real(x), ProjPoint.from_real(y))

    def __repr__(self):
        return f"TorusPoint({self.x!r}, {self.y!r})"


def torus_dist(p: TorusPoint, q: TorusPoint) -> float:
    """max of the factor chordal distances."""
    return max(chordal(p.x, q.x), chordal(p.y, q.y))


class MobiusMap:
    """A fractional-linear map of RP^1: a 2x2 real matrix up to scale.

    The stored matrix has |det| = 1 and its largest-magnitude entry
    positive, so projective equality is entrywise comparison. The
    orientation attribute is sign(det), exact in {+1, -1}.
    """

    __slots__ = ("m", "orientation")

    def __init__(self, m):
        m = np.array(m, dtype=float).reshape(2, 2)
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        if not math.isfinite(det) or abs(det) < 1e-250:
            raise ValueError("matrix is singular or non-finite")
        m = m / math.sqrt(abs(det))
        flat = np.abs(m).argmax()
        if m.flat[flat] < 0.0:
            m = -m
        object.__setattr__(self, "m", m + 0.0)
        object.__setattr__(self, "orientation", 1 if det > 0.0 else -1)

    def __setattr__(self, name, value):
        raise AttributeError("MobiusMap is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def identity(cls) -> "MobiusMap":
        return cls([[1.0, 0.0], [0.0, 1.0]])

    @classmethod
    def affine(cls, a: float, b: float) -> "MobiusMap":
        """x -> a x + b (a != 0)."""
        return cls([[a, b], [0.0, 1.0]])

    @classmethod
    def scaling(cls, t: float) -> "MobiusMap":
        return cls.affine(t, 0.0)

    @classmethod
    def rotation(cls, shift: float) -> "MobiusMap":
        """Rotation of the circle by `shift` in chart units (period 1)."""
        beta = shift * math.pi
        c, s = math.cos(beta), math.sin(beta)
        return cls([[c, s], [-s, c]])

    # -- algebra ------------------------------------------------------

    def compose(self, other: "MobiusMap") -> "MobiusMap":
        """self after other: (self . other)(x) = self(other(x))."""
        return MobiusMap(self.m @ other.m)

    def __matmul__(self, other: "MobiusMap") -> "MobiusMap":
        return self.compose(other)

    def inverse(self) -> "MobiusMap":
        a, b, c, d = self.m[0, 0], self.m[0, 1], self.m[1, 0], self.m[1, 1]
        return MobiusMap([[d, -b], [-c, a]])

    def trace(self) -> float:
        return self.m[0, 0] + self.m[1, 1]

    def is_identity(self, tol: float = 1e-12) -> bool:
        if self.orientation != 1:
            return False
        m = self.m
        return (
            abs(m[0, 1]) <= tol
            and abs(m[1, 0]) <= tol
            and abs(m[0, 0] - m[1, 1]) <= tol
        )

    # -- action -------------------------------------------------------

    def apply(self, p: ProjPoint) -> ProjPoint:
        m = self.m
        return ProjPoint(
            m[0, 0] * p.h0 + m[0, 1] * p.h1,
            m[1, 0] * p.h0 + m[1, 1] * p.h1,
        )

    def apply_h(self, h: np.ndarray) -> np.ndarray:
        """Vectorized action on homogeneous pairs of shape (2, ...)."""
        h = np.asarray(h, dtype=float)
        return normalize_h(np.tensordot(self.m, h, axes=(1, 0)))

    def __call__(self, p: ProjPoint) -> ProjPoint:
        return self.apply(p)

    def __repr__(self):
        a, b, c, d = self.m.ravel()
        return f"MobiusMap([[{a:.6g}, {b:.6g}], [{c:.6g}, {d:.6g}]])"


def proj_matrix_equal(m1: MobiusMap, m2: MobiusMap, tol: float = 1e-10) -> bool:
    """Projective equality of two maps via their canonical matrices."""
    d_minus = np.max(np.abs(m1.m - m2.m))
    d_plus = np.max(np.abs(m1.m + m2.m))
    return min(d_minus, d_plus) <= tol


def mobius_apply(m: MobiusMap, x: ProjPoint) -> ProjPoint:
    """Canonical representative of the matrix action on x."""
    return m.apply(x)


def _frame_map(p0: ProjPoint, p1: ProjPoint, p2: ProjPoint, tol: float) -> MobiusMap:
    """The map sending (infinity, 0, 1) to (p0, p1, p2).

    Columns are scaled representatives of p0 and p1; the scales solve a
    2x2 linear system so the third frame point lands on p2.
    """
    det = p0.h0 * p1.h1 - p1.h0 * p0.h1
    if abs(det) <= tol:
        raise CoincidentPoints("first two points coincide")
    mu = (p2.h0 * p1.h1 - p1.h0 * p2.h1) / det
    lam = (p0.h0 * p2.h1 - p2.h0 * p0.h1) / det
    if abs(mu) <= tol or abs(lam) <= tol:
        raise CoincidentPoints("third point coincides with an anchor")
    return MobiusMap([[mu * p0.h0, lam * p1.h0], [mu * p0.h1, lam * p1.h1]])


def mobius_from_three(
    x1: ProjPoint,
    x2: ProjPoint,
    x3: ProjPoint,
    y1: ProjPoint,
    y2: ProjPoint,
    y3: ProjPoint,
    tol: float = EQUALITY_TOL,
) -> MobiusMap:
    """The unique Mobius map sending x1, x2, x3 to y1, y2, y3.

    Raises CoincidentPoints when either triple has a pair within the
    equality tolerance.
    """
    for triple in ((x1, x2, x3), (y1, y2, y3)):
        a, b, c = triple
        if chordal(a, b) <= tol or chordal(a, c) <= tol or chordal(b, c) <= tol:
            raise CoincidentPoints("triple points must be pairwise distinct")
    fx = _frame_map(x1, x2, x3, tol)
    fy = _frame_map(y1, y2, y3, tol)
    return fy.compose(fx.inverse())


_THIRD_POINT_CANDIDATES = tuple(
    ProjPoint.from_chart(k / 8.0) for k in range(8)
)


def _pick_third_point(anchors) -> ProjPoint:
    """Deterministically pick a fixed point well separated from the anchors."""
    best, best_sep = None, -1.0
    for cand in _THIRD_POINT_CANDIDATES:
        sep = min(chordal(cand, a) for a in anchors)
        if sep > best_sep:
            best, best_sep = cand, sep
    return best


class TwoPointFamily:
    """The one-parameter family of Mobius maps sending x1 -> x2, y1 -> y2.

    Members are m(t) = C . scale(sigma t) . A for t in (0, inf), where A
    moves (x1, y1) to (0, infinity) and C moves (0, infinity) to (x2, y2).
    All members with sigma = +1 share one orientation; flipping sigma
    flips it, which is how the selector picks a member of either sign.
    """

    __slots__ = ("pre", "post", "base_orientation")

    def __init__(self, x1: ProjPoint, x2: ProjPoint, y1: ProjPoint, y2: ProjPoint,
                 tol: float = EQUALITY_TOL):
        if chordal(x1, y1) <= tol:
            raise CoincidentPoints("source points coincide")
        if chordal(x2, y2) <= tol:
            raise CoincidentPoints("target points coincide")
        w_src = _pick_third_point((x1, y1))
        w_dst = _pick_third_point((x2, y2))
        self_pre = _frame_map(y1, x1, w_src, tol).inverse()
        self_post = _frame_map(y2, x2, w_dst, tol)
        object.__setattr__(self, "pre", self_pre)
        object.__setattr__(self, "post", self_post)
        object.__setattr__(
            self, "base_orientation", self_pre.orientation * self_post.orientation
        )

    def __setattr__(self, name, value):
        raise AttributeError("TwoPointFamily is immutable")

    def member(self, t: float, orientation: int | None = None) -> MobiusMap:
        """The member at parameter t > 0, optionally of a chosen orientation."""
        if t <= 0.0:
            raise ValueError("family parameter must be positive")
        lam = t
        if orientation is not None and orientation != self.base_orientation:
            lam = -t
        mid = MobiusMap([[lam, 0.0], [0.0, 1.0]])
        return self.post.compose(mid).compose(self.pre)

    def psl_member(self, t: float) -> MobiusMap:
        """The det > 0 member at parameter t."""
        return self.member(t, orientation=1)

    def __call__(self, t: float) -> MobiusMap:
        return self.member(t)


def mobius_two_pairs(
    x1: ProjPoint, x2: ProjPoint, y1: ProjPoint, y2: ProjPoint,
    tol: float = EQUALITY_TOL,
) -> TwoPointFamily:
    """One-parameter family of maps with x1 -> x2 and y1 -> y2."""
    return TwoPointFamily(x1, x2, y1, y2, tol=tol)


def mobius_fixed_points(m: MobiusMap, disc_band: float = DISC_BAND):
    """Fixed points of a non-identity Mobius map: zero, one, or two.

    Solves the homogeneous eigenvector problem; |trace^2 - 4 det| below
    the band classifies as parabolic with a single fixed point.
    """
    if m.is_identity(tol=1e-9):
        raise IdentityMap("fixed points of the identity are everywhere")
    a, b = m.m[0, 0], m.m[0, 1]
    c, d = m.m[1, 0], m.m[1, 1]
    # fixed direction [X : Y]: c X^2 + (d - a) X Y - b Y^2 = 0
    A = c
    B = d - a
    C = -b
    disc = B * B - 4.0 * A * C
    if disc < -disc_band:
        return []
    if disc <= disc_band:
        # parabolic: kernel of (m - (tr/2) I), using the larger row
        tau = 0.5 * (a + d)
        r0 = (a - tau, b)
        r1 = (c, d - tau)
        row = r0 if math.hypot(*r0) >= math.hypot(*r1) else r1
        return [ProjPoint(row[1], -row[0])]
    root = math.sqrt(disc)
    sgn = 1.0 if B >= 0.0 else -1.0
    q = -0.5 * (B + sgn * root)
    # homogeneous roots [q : A] and [C : q]; q != 0 because disc > band
    return [ProjPoint(q, A), ProjPoint(C, q)]
