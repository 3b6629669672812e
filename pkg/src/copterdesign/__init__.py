"""Electric multicopter design optimizer.

Two stages: an offline optimizer distills component catalogs and bench
measurements into a database of best motor+ESC+propeller combinations;
an online designer sizes complete vehicles from that database against
mission requirements in milliseconds. A FastAPI service and a CLI wrap
the same pipeline.
"""

from .catalog import (
    ComboDatabase,
    CompatibilityTable,
    EscSpec,
    MotorSpec,
    PropSpec,
    PropulsionCombo,
    check_compatibility,
    load_catalog,
    load_compatibility,
    load_database,
    manufacturer,
    save_database,
    validate_combo,
)
from .designer import (
    AirframeDesign,
    BatteryDesign,
    CandidateDraft,
    ComboRef,
    DesignCandidate,
    DesignDefaults,
    DesignRequirements,
    EvaluationConfig,
    NormalizerBand,
    ScreenResult,
    default_class_table,
    design,
    design_airframe,
    design_battery,
    discharge_time,
    evaluate,
    hover_current,
    load_normalizer_table,
    max_vertical_accel,
    screen,
    size_vehicle,
)
from .errors import (
    BatteryInfeasibleError,
    CatalogError,
    CatalogParseError,
    CatalogValidationError,
    CopterDesignError,
    DomainError,
    DuplicateIdError,
    FitError,
    NoFeasibleDesignError,
    SchemaVersionError,
    UnresolvedNormalizerError,
    UnsupportedLayoutError,
)
from .offline import (
    BuildResult,
    CandidateMeasurement,
    MepObjectiveConfig,
    PhysicsMeasurementProvider,
    TableMeasurementProvider,
    build_database,
    check_safety,
    load_measurements,
    mep_objective,
    optimize_motor,
    score_combination,
    thrust_efficiency,
)
from .physics import (
    AtmosphereModel,
    OperatingPoint,
    ThrustCurrentFit,
    air_density,
    convert_full_throttle,
    convert_hover_current,
    esc_motor_balance,
    eval_thrust_current,
    fit_thrust_current,
    hover_current_physics,
    hover_speed,
    hover_speed_at_density,
    motor_constants,
    propeller_thrust,
    propeller_torque,
    solve_kn,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
