"""Elliptic curves over Q: invariants, minimal models, conductors and a height-box census."""

from .curves import (
    CurveInvariants,
    WeierstrassCurve,
    invariants,
    is_minimal,
    kraus_integral,
    minimal_model,
    model_from_c4c6,
    transform,
)
from .tate import conductor, local_data, tate_local_conductor
from .census import (
    BrumerSilverman,
    CensusTable,
    ECConstants,
    brumer_silverman_map,
    census,
    delta_factor,
    divisor_sum_check,
    ec_moment_comparison,
)
