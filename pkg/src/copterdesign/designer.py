"""Online multicopter designer.

Takes mission requirements (hover endurance, payload, maneuverability
margin, rotor count, air density, battery energy density) and walks a
database of pre-optimized propulsion combinations:

1. convert each combination's full-throttle record to the mission air
   density,
2. size the vehicle around it (total mass, airframe mass, battery mass),
3. predict the battery discharge time at hover and screen out
   combinations that miss the requirement,
4. size a battery and airframe for each survivor,
5. score survivors with a seven-index weighted objective and return the
   best (lowest) ones.

All masses kg, thrust N, speed RPM, current A, voltage V, time minutes.
"""

from __future__ import annotations

import json
import math
import statistics
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

from .catalog import ComboDatabase, PropulsionCombo
from .errors import (
    BatteryInfeasibleError,
    CatalogParseError,
    CatalogValidationError,
    DomainError,
    NoFeasibleDesignError,
    UnresolvedNormalizerError,
    UnsupportedLayoutError,
)

SCREENING_MODES = ("time", "payload", "ratio")
LAYOUTS = ("common", "coaxial")

# enough float headroom that gamma*T <= T holds after conversion round-trips
_REL_EPS = 1e-9


@dataclass(frozen=True, slots=True)
class DesignRequirements:
    """Mission statement the designer must satisfy.

    Exactly one of air density or altitude is given by the caller;
    altitude is converted before this object is built, so here density
    is always concrete. thrust_ratio is hover thrust over full-throttle
    thrust: lower means more acceleration reserve.
    """

    hover_time: float        # minutes
    payload: float           # kg
    thrust_ratio: float      # hover thrust / full-throttle thrust
    rotor_count: int
    air_density: float       # kg/m^3 at the mission site
    battery_density: float   # Wh/kg
    screening_mode: str = "time"
    layout: str = "common"

    def __post_init__(self):
        if self.hover_time <= 0:
            raise DomainError("hover_time must be > 0")
        if self.payload <= 0:
            raise DomainError("payload must be > 0")
        if not 0 < self.thrust_ratio < 1:
            raise DomainError("thrust_ratio must be within (0, 1)")
        if self.rotor_count != int(self.rotor_count):
            raise DomainError("rotor_count must be an integer")
        n = int(self.rotor_count)
        # 3 or 4 arms work; above that only symmetric even layouts do
        if n < 3 or (n > 4 and n % 2 != 0):
            raise DomainError("rotor_count must be 3, 4, or an even number")
        if not 0 < self.air_density <= 1.5:
            raise DomainError("air_density must be within (0, 1.5] kg/m^3")
        if self.battery_density <= 0:
            raise DomainError("battery_density must be > 0")
        if self.screening_mode not in SCREENING_MODES:
            raise DomainError(f"screening_mode must be one of {SCREENING_MODES}")
        if self.layout not in LAYOUTS:
            raise DomainError(f"layout must be one of {LAYOUTS}")


@dataclass(frozen=True, slots=True)
class DesignDefaults:
    """Engineering margins and empirical ratios used across the pipeline."""

    airframe_ratio: float = 0.19       # airframe mass / total mass
    discharge_ratio: float = 0.9       # usable fraction of battery capacity
    other_current: float = 0.5         # A, avionics draw on the battery
    battery_margin: float = 1.5        # max discharge / worst-case draw
    prop_gap: float = 1.1              # airframe diameter growth over tip circle
    gravity: float = 9.8               # m/s^2
    screening_tolerance: float = 0.10  # relative mismatch accepted at screening

    def __post_init__(self):
        if not 0 < self.airframe_ratio < 0.5:
            raise DomainError("airframe_ratio must be within (0, 0.5)")
        if not 0 < self.discharge_ratio < 1:
            raise DomainError("discharge_ratio must be within (0, 1)")
        if self.other_current < 0:
            raise DomainError("other_current must be >= 0")
        if self.battery_margin < 1.5:
            raise DomainError("battery_margin must be >= 1.5")
        if not 1.0 <= self.prop_gap <= 1.5:
            raise DomainError("prop_gap must be within [1.0, 1.5]")
        if self.gravity <= 0:
            raise DomainError("gravity must be > 0")
        if self.screening_tolerance <= 0:
            raise DomainError("screening_tolerance must be > 0")


@dataclass(frozen=True, slots=True)
class NormalizerBand:
    """One vehicle-class row of the evaluation normalizer table."""

    label: str
    mass_min: float   # kg, exclusive
    mass_max: float   # kg, inclusive
    values: tuple[float, float, float, float, float, float, float]
    authoritative: bool = True

    def covers(self, mass: float) -> bool:
        return self.mass_min < mass <= self.mass_max


@dataclass(frozen=True, slots=True)
class EvaluationConfig:
    """Weights and normalizers for the seven-index design objective.

    With normalizers=None the table is consulted: design() picks the
    band containing the median screened vehicle mass so the whole batch
    shares one scale, while a standalone evaluate() call uses the band
    of the candidate itself.
    """

    weights: tuple[float, ...] = (1.0,) * 7
    normalizers: tuple[float, ...] | None = None
    class_table: tuple[NormalizerBand, ...] | None = None

    def __post_init__(self):
        if len(self.weights) != 7 or any(w <= 0 for w in self.weights):
            raise DomainError("weights must be 7 positive numbers")
        if self.normalizers is not None:
            if len(self.normalizers) != 7 or any(x <= 0 for x in self.normalizers):
                raise DomainError("normalizers must be 7 positive numbers")

    def resolve_normalizers(self, copter_mass: float) -> tuple[float, ...]:
        if self.normalizers is not None:
            return self.normalizers
        table = self.class_table or default_class_table()
        for band in table:
            if band.covers(copter_mass):
                return band.values
        low = min(b.mass_min for b in table)
        high = max(b.mass_max for b in table)
        raise UnresolvedNormalizerError(
            f"no normalizer band covers a {copter_mass:.3f} kg vehicle; "
            f"the table spans ({low:g}, {high:g}] kg"
        )


@dataclass(frozen=True, slots=True)
class ComboRef:
    """Identity triple of the propulsion combination behind a candidate."""

    motor_id: str
    esc_id: str
    prop_id: str

    def key(self) -> str:
        return f"{self.motor_id}+{self.esc_id}+{self.prop_id}"


@dataclass(frozen=True, slots=True)
class BatteryDesign:
    voltage: float        # V
    capacity: float       # mAh
    max_discharge: float  # A, required continuous discharge capability
    mass: float           # kg


@dataclass(frozen=True, slots=True)
class AirframeDesign:
    diameter: float  # m, across opposing rotor hubs times the gap factor
    mass: float      # kg


@dataclass(frozen=True, slots=True)
class DesignCandidate:
    """One fully sized design proposal, scored and ready to rank."""

    combo_ref: ComboRef
    achieved_time: float      # minutes of hover the sized battery gives
    achieved_payload: float   # kg of payload the sized vehicle carries
    achieved_ratio: float     # hover thrust / full-throttle thrust
    copter_mass: float        # kg, everything included
    battery: BatteryDesign
    airframe: AirframeDesign
    hover_current: float      # A drawn from the battery at hover
    indexes: tuple[float, float, float, float, float, float, float]
    objective: float          # weighted sum, lower is better
    density_converted: bool


@dataclass(slots=True)
class CandidateDraft:
    """Mutable working record for a combo moving through the pipeline.

    screen() fills the sizing fields; design_battery / design_airframe
    results are attached before evaluate() reads the whole thing.
    """

    combo: PropulsionCombo
    converted: bool
    full_throttle_speed: float   # RPM at mission density
    full_throttle_thrust: float  # N at mission density
    hover_thrust: float          # N per rotor
    ratio: float                 # achieved thrust ratio
    copter_mass: float
    airframe_mass: float
    battery_mass: float
    esc_hover_current: float     # A per ESC at mission density
    hover_current: float         # A total battery draw at hover
    achieved_time: float
    achieved_payload: float
    battery: BatteryDesign | None = None
    airframe: AirframeDesign | None = None
    indexes: tuple[float, ...] | None = None
    objective: float | None = None


@dataclass(frozen=True, slots=True)
class ScreenResult:
    accepted: bool
    reason: str | None = None
    draft: CandidateDraft | None = None
    mismatch: float | None = None   # relative error that drove a rejection


# ---------------------------------------------------------------------------
# normalizer table

_DEFAULT_TABLE: tuple[NormalizerBand, ...] | None = None


def load_normalizer_table(path: str | Path) -> tuple[NormalizerBand, ...]:
    """Read a vehicle-class normalizer table from JSON.

    The file holds a "bands" array; each band gives an exclusive-min /
    inclusive-max mass range and seven positive normalizer values.
    Bands must be sorted and contiguous so every mass in the overall
    span resolves to exactly one row.
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise CatalogParseError(f"{path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CatalogParseError(f"{path}: invalid JSON: {exc}") from exc
    return _parse_table(data, str(path))


def _parse_table(data, where: str) -> tuple[NormalizerBand, ...]:
    if not isinstance(data, dict) or not isinstance(data.get("bands"), list):
        raise CatalogParseError(f"{where}: expected an object with a 'bands' array")
    bands: list[NormalizerBand] = []
    for idx, obj in enumerate(data["bands"]):
        rid = f"band#{idx}"
        try:
            values = tuple(float(v) for v in obj["normalizers"])
            band = NormalizerBand(
                label=str(obj["label"]),
                mass_min=float(obj["mass_min"]),
                mass_max=float(obj["mass_max"]),
                values=values,  # type: ignore[arg-type]
                authoritative=bool(obj.get("authoritative", True)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise CatalogValidationError(rid, "band", str(exc)) from exc
        if len(band.values) != 7 or any(v <= 0 for v in band.values):
            raise CatalogValidationError(
                rid, "normalizers", "7 positive values required"
            )
        if band.mass_max <= band.mass_min:
            raise CatalogValidationError(rid, "mass_max", "must exceed mass_min")
        if bands and band.mass_min != bands[-1].mass_max:
            raise CatalogValidationError(
                rid, "mass_min", "bands must be contiguous and ascending"
            )
        bands.append(band)
    if not bands:
        raise CatalogParseError(f"{where}: table has no bands")
    return tuple(bands)


def default_class_table() -> tuple[NormalizerBand, ...]:
    """The table shipped with the package, loaded once on first use."""
    global _DEFAULT_TABLE
    if _DEFAULT_TABLE is None:
        ref = resources.files("copterdesign").joinpath("data/normalizers.json")
        _DEFAULT_TABLE = _parse_table(
            json.loads(ref.read_text()), "data/normalizers.json"
        )
    return _DEFAULT_TABLE


# ---------------------------------------------------------------------------
# sizing operations

def max_vertical_accel(thrust_ratio: float, gravity: float = 9.8) -> float:
    """Acceleration reserve implied by the hover thrust ratio, m/s^2.

    At full throttle the rotors lift 1/ratio times the weight, so
    (1/ratio - 1) g remains for climbing.
    """
    if not 0 < thrust_ratio < 1:
        raise DomainError("thrust_ratio must be within (0, 1)")
    if gravity <= 0:
        raise DomainError("gravity must be > 0")
    return (1.0 / thrust_ratio - 1.0) * gravity


def _convert_record(
    combo: PropulsionCombo, rho_target: float
) -> tuple[bool, float, float, float]:
    """Full-throttle speed/thrust at the mission density.

    Returns (converted, k_n, speed, thrust); k_n is 0 when no
    conversion happened. Exact density equality short-circuits so a
    same-density run never touches conversion arithmetic.
    """
    rho_ref = combo.ref_air_density
    if rho_target == rho_ref:
        return False, 0.0, combo.full_throttle_speed, combo.full_throttle_thrust
    kv = combo.kv
    u_b = combo.battery_voltage
    n_ref = combo.full_throttle_speed
    surplus = kv * u_b - n_ref
    if surplus <= 0:
        raise DomainError(
            f"{combo.key()}: full-throttle speed reaches the ideal no-load "
            "speed, leaving no margin to model the density change"
        )
    k_n = surplus / (rho_ref * n_ref * n_ref * kv)
    lin = 1.0 / kv
    quad = k_n * rho_target
    speed = 2.0 * u_b / (lin + math.sqrt(lin * lin + 4.0 * quad * u_b))
    thrust = (
        rho_target * speed * speed / (rho_ref * n_ref * n_ref)
    ) * combo.full_throttle_thrust
    return True, k_n, speed, thrust


def _hover_current_at(
    combo: PropulsionCombo,
    hover_thrust: float,
    converted: bool,
    k_n: float,
    rho_target: float,
) -> float:
    """Per-ESC hover current, density-corrected when needed."""
    i_ref = combo.fit_current(hover_thrust)
    if not converted:
        return i_ref
    rho_ref = combo.ref_air_density
    n_ref = combo.full_throttle_speed
    t_ref = combo.full_throttle_thrust
    n_h = n_ref * math.sqrt(hover_thrust / t_ref)
    n_h_tgt = n_ref * math.sqrt(rho_ref * hover_thrust / (rho_target * t_ref))
    inv_kv = 1.0 / combo.kv
    # electrical power ratio between the two densities at equal thrust
    scale = (k_n * rho_target * n_h_tgt * n_h_tgt + n_h_tgt * inv_kv) / (
        k_n * rho_ref * n_h * n_h + n_h * inv_kv
    )
    return i_ref * scale


def size_vehicle(
    combo: PropulsionCombo,
    req: DesignRequirements,
    defaults: DesignDefaults = DesignDefaults(),
) -> tuple[float, float, float, float]:
    """Masses implied by flying this combo at the requested thrust ratio.

    The combo's full-throttle thrust is converted to the mission air
    density first. Returns (hover_thrust per rotor, copter mass,
    airframe mass, battery mass).

    Raises:
        BatteryInfeasibleError: the mass budget leaves nothing for a
            battery once payload, airframe, and drives are accounted.
    """
    _, _, _, t_full = _convert_record(combo, req.air_density)
    hover_thrust = req.thrust_ratio * t_full
    n_p = req.rotor_count
    copter_mass = n_p * hover_thrust / defaults.gravity
    airframe_mass = defaults.airframe_ratio * copter_mass
    battery_mass = (
        (1.0 - defaults.airframe_ratio) * copter_mass
        - req.payload
        - n_p * combo.mass
    )
    if battery_mass <= 0:
        raise BatteryInfeasibleError(
            f"{combo.key()}: payload and drives leave no battery mass "
            f"(budget {battery_mass:.3f} kg)"
        )
    return hover_thrust, copter_mass, airframe_mass, battery_mass


def hover_current(
    combo: PropulsionCombo,
    hover_thrust: float,
    req: DesignRequirements,
    defaults: DesignDefaults = DesignDefaults(),
) -> tuple[float, float]:
    """Battery draw at hover: (per-ESC current, total battery current).

    hover_thrust is per rotor at mission density and must not exceed
    the combo's full-throttle thrust there, nor its bench full-throttle
    thrust (the fitted polynomial has no data beyond that).
    """
    if hover_thrust <= 0:
        raise DomainError("hover_thrust must be > 0")
    converted, k_n, _, t_full = _convert_record(combo, req.air_density)
    limit = min(t_full, combo.full_throttle_thrust)
    if hover_thrust > limit * (1.0 + _REL_EPS):
        raise DomainError(
            f"hover thrust {hover_thrust:.2f} N exceeds the usable "
            f"full-throttle thrust {limit:.2f} N"
        )
    esc_current = _hover_current_at(
        combo, hover_thrust, converted, k_n, req.air_density
    )
    total = req.rotor_count * esc_current + defaults.other_current
    return esc_current, total


def discharge_time(
    battery_mass: float,
    battery_voltage: float,
    hover_current_total: float,
    req: DesignRequirements,
    defaults: DesignDefaults = DesignDefaults(),
) -> float:
    """Minutes of hover a battery of the given mass sustains."""
    if battery_mass <= 0:
        raise BatteryInfeasibleError("battery_mass must be > 0")
    if battery_voltage <= 0 or hover_current_total <= 0:
        raise DomainError("battery_voltage and hover current must be > 0")
    energy = req.battery_density * battery_mass          # Wh
    usable_hours = defaults.discharge_ratio * energy / (
        battery_voltage * hover_current_total
    )
    return 60.0 * usable_hours


def design_battery(
    combo: PropulsionCombo,
    hover_current_total: float,
    achieved_time: float,
    req: DesignRequirements,
    defaults: DesignDefaults = DesignDefaults(),
) -> tuple[float, float, float]:
    """Battery electrical spec: (voltage V, capacity mAh, discharge A).

    Capacity is what the achieved hover time consumes scaled back up by
    the usable-fraction margin; required discharge capability covers
    every ESC at its full-throttle current plus avionics, with margin.
    """
    if hover_current_total <= 0:
        raise DomainError("hover current must be > 0")
    if achieved_time <= 0:
        raise DomainError("achieved_time must be > 0")
    capacity = 1000.0 * hover_current_total * (
        achieved_time / defaults.discharge_ratio
    ) / 60.0
    max_discharge = defaults.battery_margin * (
        req.rotor_count * combo.full_throttle_current + defaults.other_current
    )
    return combo.battery_voltage, capacity, max_discharge


def design_airframe(
    combo: PropulsionCombo,
    req: DesignRequirements,
    defaults: DesignDefaults = DesignDefaults(),
) -> tuple[float, float]:
    """Smallest airframe that fits the rotors: (hub radius m, diameter m).

    Hub radius keeps adjacent tip circles from touching; the overall
    diameter spans two opposing rotors plus the configured gap factor.
    """
    if req.layout != "common":
        raise UnsupportedLayoutError(
            f"layout {req.layout!r} is not supported; only flat single-rotor "
            "arms are modeled"
        )
    half_angle = math.pi / req.rotor_count
    radius_min = combo.prop_diameter / (2.0 * math.sin(half_angle))
    diameter = defaults.prop_gap * combo.prop_diameter / math.sin(half_angle)
    return radius_min, diameter


# ---------------------------------------------------------------------------
# screening

def screen(
    combo: PropulsionCombo,
    req: DesignRequirements,
    defaults: DesignDefaults = DesignDefaults(),
) -> ScreenResult:
    """Size one combo against the requirements and accept or reject it.

    The three screening modes pin two requirements exactly and let the
    third float within the screening tolerance:

    - "time": thrust ratio and payload are exact, predicted hover time
      must land near the requirement;
    - "payload": thrust ratio and hover time are exact, the payload
      that closes the mass budget must land near the requirement;
    - "ratio": hover time and payload are exact, the thrust ratio that
      makes them consistent must land near the requirement.
    """
    try:
        converted, k_n, n_full, t_full = _convert_record(combo, req.air_density)
    except DomainError:
        return ScreenResult(False, "conversion_failed")

    if req.screening_mode == "ratio":
        return _screen_ratio(combo, req, defaults, converted, k_n, n_full, t_full)

    hover_thrust = req.thrust_ratio * t_full
    n_p = req.rotor_count
    copter_mass = n_p * hover_thrust / defaults.gravity
    airframe_mass = defaults.airframe_ratio * copter_mass
    budget = (1.0 - defaults.airframe_ratio) * copter_mass - n_p * combo.mass

    if hover_thrust > combo.full_throttle_thrust * (1.0 + _REL_EPS):
        # fitted bench data stops at the reference full-throttle thrust
        return ScreenResult(False, "hover_beyond_reference")
    esc_current = _hover_current_at(
        combo, hover_thrust, converted, k_n, req.air_density
    )
    total_current = n_p * esc_current + defaults.other_current
    # defense in depth: hover draw must stay under the worst-case draw
    # the battery will be sized for
    draw_limit = n_p * combo.full_throttle_current + defaults.other_current
    if total_current > draw_limit * (1.0 + _REL_EPS):
        return ScreenResult(False, "hover_current_over_limit")

    if req.screening_mode == "payload":
        battery_mass = (
            req.hover_time
            * combo.battery_voltage
            * total_current
            / (defaults.discharge_ratio * 60.0 * req.battery_density)
        )
        payload = budget - battery_mass
        if payload <= 0:
            return ScreenResult(False, "payload_infeasible")
        mismatch = abs(payload - req.payload) / req.payload
        if mismatch > defaults.screening_tolerance:
            return ScreenResult(False, "payload_mismatch", mismatch=mismatch)
        achieved_time = req.hover_time
        achieved_payload = payload
    else:
        battery_mass = budget - req.payload
        if battery_mass <= 0:
            return ScreenResult(False, "battery_mass")
        achieved_time = (
            defaults.discharge_ratio
            * 60.0
            * req.battery_density
            * battery_mass
            / (combo.battery_voltage * total_current)
        )
        mismatch = abs(achieved_time - req.hover_time) / req.hover_time
        if mismatch > defaults.screening_tolerance:
            return ScreenResult(False, "time_mismatch", mismatch=mismatch)
        achieved_payload = req.payload

    draft = CandidateDraft(
        combo=combo,
        converted=converted,
        full_throttle_speed=n_full,
        full_throttle_thrust=t_full,
        hover_thrust=hover_thrust,
        ratio=req.thrust_ratio,
        copter_mass=copter_mass,
        airframe_mass=airframe_mass,
        battery_mass=battery_mass,
        esc_hover_current=esc_current,
        hover_current=total_current,
        achieved_time=achieved_time,
        achieved_payload=achieved_payload,
    )
    return ScreenResult(True, draft=draft)


def _screen_ratio(
    combo: PropulsionCombo,
    req: DesignRequirements,
    defaults: DesignDefaults,
    converted: bool,
    k_n: float,
    n_full: float,
    t_full: float,
) -> ScreenResult:
    """Find the thrust ratio at which time and payload hold exactly."""
    n_p = req.rotor_count
    g = defaults.gravity

    def predicted_time(ratio: float) -> float | None:
        hover_thrust = ratio * t_full
        if hover_thrust > combo.full_throttle_thrust:
            return None
        battery_mass = (
            (1.0 - defaults.airframe_ratio) * n_p * hover_thrust / g
            - req.payload
            - n_p * combo.mass
        )
        if battery_mass <= 0:
            return None
        esc_current = _hover_current_at(
            combo, hover_thrust, converted, k_n, req.air_density
        )
        total = n_p * esc_current + defaults.other_current
        return (
            defaults.discharge_ratio
            * 60.0
            * req.battery_density
            * battery_mass
            / (combo.battery_voltage * total)
        )

    # lowest ratio that leaves any battery mass; highest that the bench
    # data can still interpolate
    lo = (
        g
        * (req.payload + n_p * combo.mass)
        / ((1.0 - defaults.airframe_ratio) * n_p * t_full)
    )
    hi = min(0.999, combo.full_throttle_thrust / t_full)
    if lo >= hi:
        return ScreenResult(False, "ratio_unsolvable")
    lo = lo + (hi - lo) * 1e-6

    grid = [lo + (hi - lo) * i / 32.0 for i in range(33)]
    values = [(r, predicted_time(r)) for r in grid]
    target = req.hover_time

    # bracket every sign change of predicted_time - target, bisect each,
    # keep the root closest to the requested ratio
    best_root: float | None = None
    for (r0, t0), (r1, t1) in zip(values, values[1:]):
        if t0 is None or t1 is None:
            continue
        f0, f1 = t0 - target, t1 - target
        if f0 == 0.0:
            root = r0
        elif f0 * f1 < 0:
            a, b, fa = r0, r1, f0
            for _ in range(80):
                mid = 0.5 * (a + b)
                fm = (predicted_time(mid) or 0.0) - target
                if fm == 0.0:
                    a = b = mid
                    break
                if fa * fm < 0:
                    b = mid
                else:
                    a, fa = mid, fm
            root = 0.5 * (a + b)
        else:
            continue
        if best_root is None or abs(root - req.thrust_ratio) < abs(
            best_root - req.thrust_ratio
        ):
            best_root = root
    if best_root is None and values and values[-1][1] is not None:
        if values[-1][1] == target:
            best_root = hi
    if best_root is None:
        return ScreenResult(False, "ratio_unsolvable")

    mismatch = abs(best_root - req.thrust_ratio) / req.thrust_ratio
    if mismatch > defaults.screening_tolerance:
        return ScreenResult(False, "ratio_mismatch", mismatch=mismatch)

    ratio = best_root
    hover_thrust = ratio * t_full
    copter_mass = n_p * hover_thrust / g
    airframe_mass = defaults.airframe_ratio * copter_mass
    battery_mass = (
        (1.0 - defaults.airframe_ratio) * copter_mass
        - req.payload
        - n_p * combo.mass
    )
    esc_current = _hover_current_at(
        combo, hover_thrust, converted, k_n, req.air_density
    )
    total_current = n_p * esc_current + defaults.other_current
    draw_limit = n_p * combo.full_throttle_current + defaults.other_current
    if total_current > draw_limit * (1.0 + _REL_EPS):
        return ScreenResult(False, "hover_current_over_limit")
    achieved_time = predicted_time(ratio)
    assert achieved_time is not None and battery_mass > 0

    draft = CandidateDraft(
        combo=combo,
        converted=converted,
        full_throttle_speed=n_full,
        full_throttle_thrust=t_full,
        hover_thrust=hover_thrust,
        ratio=ratio,
        copter_mass=copter_mass,
        airframe_mass=airframe_mass,
        battery_mass=battery_mass,
        esc_hover_current=esc_current,
        hover_current=total_current,
        achieved_time=achieved_time,
        achieved_payload=req.payload,
    )
    return ScreenResult(True, draft=draft)


# ---------------------------------------------------------------------------
# evaluation

def evaluate(
    candidate: CandidateDraft,
    cfg: EvaluationConfig,
    req: DesignRequirements,
) -> tuple[tuple[float, ...], float]:
    """Seven quality indexes and their weighted sum (lower is better).

    Indexes: airframe diameter, vehicle mass, requirement mismatch
    (rms of the three relative errors), hover power per newton, battery
    voltage, battery capacity, full-throttle current margin usage.
    """
    combo = candidate.combo
    if candidate.battery is None or candidate.airframe is None:
        raise DomainError("candidate is missing battery/airframe sizing")
    err_time = (candidate.achieved_time - req.hover_time) / req.hover_time
    err_payload = (candidate.achieved_payload - req.payload) / req.payload
    err_ratio = (candidate.ratio - req.thrust_ratio) / req.thrust_ratio
    mismatch = math.sqrt(
        err_time * err_time + err_payload * err_payload + err_ratio * err_ratio
    )
    xs = (
        candidate.airframe.diameter,
        candidate.copter_mass,
        mismatch,
        combo.battery_voltage * candidate.esc_hover_current / candidate.hover_thrust,
        combo.battery_voltage,
        candidate.battery.capacity,
        combo.full_throttle_current / combo.motor_max_current,
    )
    norms = cfg.resolve_normalizers(candidate.copter_mass)
    objective = math.fsum(
        w * x / n for w, x, n in zip(cfg.weights, xs, norms)
    )
    return xs, objective


def _finalize(draft: CandidateDraft) -> DesignCandidate:
    assert draft.battery is not None and draft.airframe is not None
    assert draft.indexes is not None and draft.objective is not None
    return DesignCandidate(
        combo_ref=ComboRef(
            draft.combo.motor_id, draft.combo.esc_id, draft.combo.prop_id
        ),
        achieved_time=draft.achieved_time,
        achieved_payload=draft.achieved_payload,
        achieved_ratio=draft.ratio,
        copter_mass=draft.copter_mass,
        battery=draft.battery,
        airframe=draft.airframe,
        hover_current=draft.hover_current,
        indexes=draft.indexes,
        objective=draft.objective,
        density_converted=draft.converted,
    )


def design(
    db: ComboDatabase,
    req: DesignRequirements,
    defaults: DesignDefaults = DesignDefaults(),
    cfg: EvaluationConfig = EvaluationConfig(),
    top_n: int = 8,
) -> list[DesignCandidate]:
    """Full design pass over a combination database.

    Screens every combo, sizes battery and airframe for survivors,
    scores them on one shared normalizer scale, and returns the best
    top_n candidates ordered by ascending objective (ties: lighter
    vehicle, then combo key).

    Raises:
        UnsupportedLayoutError: req asks for a rotor layout the sizing
            model does not cover.
        NoFeasibleDesignError: nothing survived screening; carries a
            rejection tally and the nearest miss.
    """
    if req.layout != "common":
        raise UnsupportedLayoutError(
            f"layout {req.layout!r} is not supported; only flat single-rotor "
            "arms are modeled"
        )
    if top_n < 1:
        raise DomainError("top_n must be >= 1")
    if len(db) == 0:
        raise NoFeasibleDesignError({"empty_database": "0 combinations"})

    drafts: list[CandidateDraft] = []
    reasons: dict[str, int] = {}
    nearest_key: str | None = None
    nearest_gap = math.inf
    for combo in db:
        result = screen(combo, req, defaults)
        if result.accepted:
            drafts.append(result.draft)
            continue
        reasons[result.reason] = reasons.get(result.reason, 0) + 1
        if result.mismatch is not None and result.mismatch < nearest_gap:
            nearest_gap = result.mismatch
            nearest_key = combo.key()

    if not drafts:
        summary = {
            reason: f"{count} combination{'s' if count != 1 else ''}"
            for reason, count in sorted(reasons.items())
        }
        nearest = None
        if nearest_key is not None:
            nearest = (
                f"{nearest_key} missed the screening window by "
                f"{nearest_gap:.1%} (tolerance {defaults.screening_tolerance:.0%})"
            )
        raise NoFeasibleDesignError(summary, nearest)

    for draft in drafts:
        voltage, capacity, max_discharge = design_battery(
            draft.combo, draft.hover_current, draft.achieved_time, req, defaults
        )
        draft.battery = BatteryDesign(
            voltage=voltage,
            capacity=capacity,
            max_discharge=max_discharge,
            mass=draft.battery_mass,
        )
        _, diameter = design_airframe(draft.combo, req, defaults)
        draft.airframe = AirframeDesign(
            diameter=diameter, mass=draft.airframe_mass
        )

    shared_cfg = cfg
    if cfg.normalizers is None:
        median_mass = statistics.median(d.copter_mass for d in drafts)
        shared_cfg = replace(cfg, normalizers=cfg.resolve_normalizers(median_mass))

    scored: list[tuple[float, float, str, CandidateDraft]] = []
    for draft in drafts:
        xs, objective = evaluate(draft, shared_cfg, req)
        draft.indexes = xs
        draft.objective = objective
        scored.append((objective, draft.copter_mass, draft.combo.key(), draft))
    scored.sort(key=lambda item: item[:3])
    return [_finalize(draft) for _, _, _, draft in scored[:top_n]]
