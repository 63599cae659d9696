"""Near-field binaural signal matching on a rigid sphere."""

from .bsm import (
    ArrayGeometry,
    BsmFilter,
    EarValues,
    NoiseModel,
    SteeringMatrix,
    design_filter,
    evaluate_error,
    monte_carlo_mse,
    steering_matrix_farfield,
    steering_matrix_nearfield,
)
from .errors import (
    ContractError,
    DataError,
    DegenerateFieldError,
    DegenerateTargetError,
    DomainError,
    Error,
    FormatError,
    NumericalRankError,
    SchemaError,
    UnsupportedOrderError,
    ValidationError,
)
from .experiment import (
    ErrorRecord,
    ErrorSurface,
    ExperimentConfig,
    emit_csv,
    fibonacci_directions,
    load_csv,
    parse_config,
    parse_config_text,
    reference_hrtf_set,
    run_sweep,
    serialize_config,
)
from .field import (
    FieldPoint,
    RigidSphere,
    SourcePosition,
    dvf,
    modal_coefficients,
    plane_wave_pressure,
    point_source_pressure,
    pressure_at_cosines,
)
from .hrtf import (
    EarGeometry,
    HrtfSet,
    SourceModel,
    analytic_sphere_hrtf,
    load_hrtf,
    nearfield_transform,
    save_hrtf,
)
from .sphmath import (
    DEFAULT_MAX_ORDER,
    Direction,
    cos_angle_between,
    sph_harm,
    spherical_bessel_j,
    spherical_bessel_j_prime,
    spherical_bessel_y,
    spherical_hankel2,
    spherical_hankel2_prime,
)

__version__ = "0.1.0"
