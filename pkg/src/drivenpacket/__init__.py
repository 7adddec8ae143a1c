"""Wave-packet dynamics of a periodically forced particle, quantized two ways.

The Hamiltonian route evolves momentum coefficients under
H = p^2/2m + x A cos(wt); the invariant route replaces H with one of three
energy-unit constants of motion and a velocity operator. The library
provides closed-form and characteristic-curve solutions for all four
evolutions, independent split-step and method-of-lines oracles, moment and
distance observables, and an audit of the published closed forms against
independently derived ones.
"""

from .core import (
    GaussianPacketSpec,
    MomentumGrid,
    PhysicalParams,
    SpectralState,
    align_global_phase,
    build_grid,
    gaussian_profile,
    gaussian_profile_fn,
    gaussian_profile_values,
    norm,
)
from .classical import (
    CONSTANT_KINDS,
    ClassicalState,
    characteristic_values,
    constant_of_motion,
    exact_trajectory,
    k1_expanded,
    rk4_orbit,
    rk4_trajectory,
)
from .characteristics import (
    AdvectionProblem,
    ExponentOverflowError,
    NonFiniteCoefficientError,
    default_steps,
    evolve_linear_pde,
    trace_characteristic_backward,
    trace_characteristic_forward,
)
from .hamiltonian import (
    HAMILTONIAN_VARIANTS,
    GaugeQuadratureError,
    apply_gauge,
    closed_form_phase_mismatch,
    coefficient_problem,
    evolve_hamiltonian,
    hamiltonian_value,
)
from .schemes import (
    FORMULA_VARIANTS,
    SCHEMES,
    Scheme3CharMap,
    derived_phase_s1,
    diagonal_symbol,
    evolve_scheme,
    published_phase_s1,
    published_scheme3_map_shift,
    published_uncertainty_bound,
    scheme3_char_map,
    scheme_problem,
    uncertainty_bound,
    weyl_generator_check,
)
from .reference import (
    BoundaryLeakError,
    PositionGrid,
    StabilityError,
    first_derivative,
    gaussian_position_profile,
    mol_evolve,
    momentum_coefficients,
    position_norm,
    position_spread,
    splitstep_evolve,
)
from .observables import (
    MomentSet,
    SchemeReport,
    audit_table,
    build_scheme_report,
    density_distance,
    ehrenfest_residual,
    moments,
)
from .runner import (
    ConfigError,
    GridSupportError,
    OracleDivergenceError,
    ScenarioConfig,
    default_config,
    ensure_grid_support,
    parse_config,
    required_k_reach,
    run_scenario,
    serialize_config,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
