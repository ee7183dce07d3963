"""Exact computational convex geometry: mixed volumes, Minkowski valuations on
polytopes and zonotopes, and Brunn-Minkowski type verification suites."""

from .bodies import (
    EMPTY,
    MinkowskiSum,
    Polytope,
    SupportBody,
    Zonotope,
    ball_zonotope,
    body_volume,
    clip,
    convex_hull,
    generating_measure,
    minkowski_sum,
    polytope_volume,
    scale,
    support,
    translate,
    zonotope_volume,
)
from .kernel import Frame, Halfspace, Tolerance, bracket, direction_set
from .mixed import (
    MixedVolumeSpec,
    intrinsic_volume,
    mixed_volume,
    mixed_volume_interpolation,
    mixed_volume_zonotopes,
    quermassintegral,
    steiner_volume_polynomial,
)
from .report import InequalityCase, VerificationReport
from .valuations import (
    ValuationOperator,
    klain_invert,
    lambda_derive,
    projection_body,
    steiner_decompose,
    steiner_point,
)

__all__ = [name for name in dir() if not name.startswith("_")]
