"""Kinematics, dynamics and free wave equations with an invariant maximum speed ``c_m > c``."""

from .core import (
    DEFAULT_TOL,
    FourVector,
    InvariantSpeedContext,
    MaxSpeedNotAboveLightSpeed,
    NonPositiveConstant,
    ParticleState,
    RegimeTag,
    SpeedBelowLight,
    SpeedExceedsMaximum,
    SuperluminalError,
    Velocity3,
    classify_regime,
    make_context,
    natural_context,
)
from .xform import (
    BoostAtMaximumSpeed,
    BoostParameter,
    CompositionSingularity,
    ImaginaryProperTime,
    boost_event,
    compose_velocity,
    gamma_composition_residual,
    gamma_factor,
    interval_squared,
    inverse_boost_event,
    inverse_compose_velocity,
    proper_time,
)
from .kinematics import (
    FourMomentum,
    PhotonSpec,
    einstein_mass,
    energy_from_mass,
    energy_momentum_residual,
    four_momentum,
    four_velocity,
    invariant_mass_product,
    mass_of_velocity,
    photon_mass_at_c,
    superluminal_photon,
)
from .dynamics import (
    ForceLawNonFinite,
    NonPositiveStep,
    TooFewSamples,
    TrajectoryRecord,
    constant_force,
    four_force,
    observed_order,
    power_residual,
    simulate_trajectory,
    step_state,
)
from .collision import (
    CollisionScenario,
    invariant_product_check,
    lab_velocities,
    mass_ratio_residual,
    momentum_conservation_residual,
)
from .wavesolver import (
    CflViolation,
    NonFiniteField,
    ScalarFieldGrid,
    SolverParams,
    SpinorFieldGrid,
    StabilityViolation,
    dirac_apply,
    evolve_dirac,
    evolve_kg,
    kg_dispersion,
    measure_dispersion,
)

__version__ = "0.1.0"
