"""Exact grid counting and graph box dimension estimates for sets in [0, 1]."""

from .analysis import (
    construction_report,
    estimate_dimension,
    finite_bounds_check,
    geometric_schedule,
    gm,
    gm_capped,
    log_log_slope,
    parse_schedule,
    ratio_series,
    scale_schedule,
)
from .errors import (
    CapacityError,
    DomainError,
    EmptySetError,
    GBoxDimError,
    PreconditionError,
    ResolutionError,
    ScheduleError,
)
from .grid import (
    box_count_1d,
    box_index,
    column_profile,
    graph_box_count,
    graph_box_count_of,
    graph_cells,
    occupancy,
)
from .polyline import PiecewiseLinear
from .sets import (
    ExplicitSet,
    PaperSetParams,
    PowerSet,
    cantor_set,
    explicit_from_points,
    paper_set,
    parse_set_spec,
    power_sequence,
    valid_scale_range,
)
from .witness import build_witness, iterate_theorem1, shifted_sum_count

__version__ = "0.1.0"
