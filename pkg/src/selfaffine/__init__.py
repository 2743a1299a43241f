"""Self-affine sets from affine iterated function systems and their dimensions."""

from .carpets import (
    CarpetSpec,
    GridSpec,
    carpet_box_dimension,
    carpet_hausdorff_dimension,
    carpet_to_ifs,
    grid_to_ifs,
    load_carpet,
    make_carpet,
)
from .conditions import ConditionReport, check_hueter_lalley, check_osc_rectangle
from .covers import (
    Ellipse,
    StoppingSet,
    ball_cover_from_ellipse,
    ball_cover_from_ellipses,
    cylinder_cover,
    stopping_set,
    union_contains,
)
from .dimension import (
    PressureCurve,
    affinity_dimension,
    affinity_dimension_sequence,
    pressure_approx,
    similarity_dimension,
    svf,
)
from .errors import BudgetExceededError, InvalidInputError, ParseError, UnsupportedDimensionError
from .estimators import (
    BoxCountSeries,
    PointCloud,
    box_count,
    boxdim_estimate,
    chaos_game,
    deterministic_points,
    dyadic_scales,
    estimate_box_dimension,
    randomized_attractor,
)
from .ifs import (
    IFS,
    AffineMap,
    bounding_radius,
    compose,
    dumps_ifs,
    load_ifs,
    loads_ifs,
    sierpinski_triangle,
    similarity,
    validate_ifs,
)
from .linalg_small import operator_norm, singular_values, svd_small

__version__ = "0.1.0"
