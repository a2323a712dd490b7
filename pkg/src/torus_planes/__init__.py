"""Toroidal circle planes and flat Minkowski planes, numerically.

A toolkit for building circle planes on the torus (the classical model
and the half-classical family twisted by circle homeomorphisms), acting
on them with the classified automorphism families, and verifying the
incidence axioms and action claims by seeded randomized property testing.
"""

from .errors import (
    CoincidentPoints,
    ConfigError,
    EqualCircles,
    FamilyMismatch,
    IdentityMap,
    MonotonicityError,
    NoBranch,
    NotFound,
    ParallelInput,
    PlaneGeometryError,
    PointOnBaseCross,
    PreconditionViolated,
    UnsupportedPlane,
)
from .groups import (
    Case3Element,
    DiagonalPSL,
    FactorActionReport,
    KernelMinusPSL,
    KernelPlusPSL,
    PhiStd,
    PhiTwoFixed,
    act,
    compose,
    diagonal_transitivity_witness,
    factor_fixed_sets,
    fixed_coordinates,
    group_literal,
    induced_factor_action,
    parse_group_literal,
    so2_times_l2_factor_model,
)
from .homeo import (
    CircleHomeo,
    MonotoneSpline,
    PowerMap,
    homeo_apply,
    homeo_inverse,
    homeo_sup_distance,
    load_spline_knots,
)
from .planes import (
    Circle,
    DerivedLine,
    ParallelClass,
    PlaneModel,
    circle_intersect,
    classical_plane,
    corrupted_half_classical,
    derived_line_through,
    half_classical_plane,
    homeo_from_spec,
    join,
    parallel,
    parse_plane_spec,
    plane_from_config,
    touch,
)
from .projline import (
    MobiusMap,
    ProjPoint,
    TorusPoint,
    chordal,
    mobius_apply,
    mobius_fixed_points,
    mobius_from_three,
    mobius_two_pairs,
    proj_matrix_equal,
    torus_dist,
)
from .svgplot import render_svg
from .verify import (
    SUITES,
    TrialConfig,
    VerifyReport,
    recheck_counterexample,
    verify_automorphism,
    verify_derived_plane,
    verify_fixed_configuration,
    verify_joining,
    verify_rigidity,
    verify_touching,
)

__version__ = "0.1.0"
