"""Fair coverage: pick one subset per round to maximize smoothed Nash social welfare."""

from .core import (
    CoverageProfile,
    Instance,
    Solution,
    coverage_values,
    log_welfare,
    nsw,
    ratio_certificate,
    replace,
    suboptimal_agents,
    validate_instance,
    validate_solution,
)
from .errors import (
    EnumerationTooLargeError,
    GenerationError,
    InternalConsistencyError,
    InvalidInputError,
    IterationGuardError,
    NashCoverError,
    UnsatisfiableFamilyError,
)
from .exact import brute_force_max_weight, brute_force_opt, brute_force_unsmoothed_opt
from .families import (
    CardinalityFamily,
    ExplicitFamily,
    KnapsackFamily,
    MatchingFamily,
    PartitionFamily,
    approx_max_weight,
    contains,
    enumerate_members,
    some_member,
)
from .generators import GenSpec, generate
from .solver import SolverConfig, compute_weights, iteration_bound, phi_delta, solve
from .verify import verify

__version__ = "0.1.0"
