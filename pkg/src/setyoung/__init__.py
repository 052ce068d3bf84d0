"""Set-valued Young integration with bounded-Hölder selections."""

from .aumann import (
    AumannYoungResult,
    SelectionFamily,
    SetValuedPath,
    aumann_young_integral,
    build_selection_family,
    example3_divergence,
    indefinite_aumann_integral,
    integral_lipschitz_in_w_check,
    interpolate_family,
    interpolate_multifunction,
    r_min_estimate,
)
from .convex_bodies import (
    ConvexBody,
    NonUnique,
    SmoothBallMeasure,
    demyanov_distance,
    distance_to_set,
    exposed_point,
    generalized_steiner_point,
    hausdorff_distance,
    minkowski_combine,
    project,
    steiner_point,
    support_function,
)
from .inclusions import (
    InclusionProblem,
    SolutionReport,
    Strategy,
    make_phi,
    solution_funnel,
    solve_first_order,
    solve_second_order,
    stochastic_inclusion_run,
)
from .paths import SampledPath, holder_seminorm, sample_fbm, time_augmented
from .young import YoungConfig, iterated_integral, verify_young_love, young_integral

__version__ = "0.1.0"
