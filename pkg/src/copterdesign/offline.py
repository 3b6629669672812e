"""Offline propulsion-combination optimizer.

For every motor in the catalog this module searches the ESC x propeller
space, keeps only pairings that are listed compatible and electrically
safe, scores each survivor with a weighted three-index objective
(full-throttle thrust, full-throttle thrust efficiency, drive mass), and
emits the best pairing per motor into a ComboDatabase.

Measurement data enters through an injected `measure` callable so the
search works identically over bench-test tables and over purely
model-estimated numbers.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable

from .catalog import (
    CompatibilityTable,
    ComboDatabase,
    EscSpec,
    MotorSpec,
    PropSpec,
    PropulsionCombo,
    check_compatibility,
    validate_combo,
)
from .errors import (
    CatalogParseError,
    CatalogValidationError,
    DomainError,
    UnresolvedNormalizerError,
)
from . import physics

MEASUREMENT_SOURCES = ("experimental", "estimated")


@dataclass(frozen=True, slots=True)
class MepObjectiveConfig:
    """Weights and normalizers for the combination objective.

    normalizers is (thrust, efficiency, mass) or None for auto mode,
    where each normalizer becomes the maximum of that index over the
    feasible candidate set of the motor being optimized.
    """

    weights: tuple[float, float, float] = (1.0, 1.0, 1.0)
    normalizers: tuple[float, float, float] | None = None

    def __post_init__(self):
        if len(self.weights) != 3 or any(w <= 0 for w in self.weights):
            raise DomainError("weights must be 3 positive numbers")
        if self.normalizers is not None:
            if len(self.normalizers) != 3 or any(x <= 0 for x in self.normalizers):
                raise DomainError("normalizers must be 3 positive numbers")


@dataclass(frozen=True, slots=True)
class CandidateMeasurement:
    """Full-throttle bench figures for one motor+ESC+prop candidate.

    samples are (thrust N, ESC current A) pairs used to fit the
    thrust-current polynomial; they must cover the thrust range up to
    full throttle.
    """

    battery_voltage: float        # V (U_b)
    full_throttle_current: float  # A (I_e*)
    full_throttle_thrust: float   # N (T*)
    full_throttle_speed: float    # RPM (N*)
    mass: float                   # kg, motor+ESC+prop (m_mep)
    air_density: float            # kg/m^3 at the bench
    samples: tuple[tuple[float, float], ...]
    source: str = "experimental"

    def __post_init__(self):
        if self.full_throttle_current <= 0:
            raise DomainError("full_throttle_current must be > 0")
        if self.full_throttle_thrust <= 0:
            raise DomainError("full_throttle_thrust must be > 0")
        if self.full_throttle_speed <= 0:
            raise DomainError("full_throttle_speed must be > 0")
        if self.battery_voltage <= 0:
            raise DomainError("battery_voltage must be > 0")
        if self.mass <= 0:
            raise DomainError("mass must be > 0")
        if self.air_density <= 0:
            raise DomainError("air_density must be > 0")
        if self.source not in MEASUREMENT_SOURCES:
            raise DomainError(f"source must be one of {MEASUREMENT_SOURCES}")
        if len(self.samples) < 3:
            raise DomainError("at least 3 thrust/current samples required")
        t_star = self.full_throttle_thrust
        t_values = [t for t, _ in self.samples]
        if min(t_values) < 0 or max(t_values) > t_star * (1 + 1e-6):
            raise DomainError("samples must lie within [0, full_throttle_thrust]")
        # span requirement: the fit must cover the usable thrust range,
        # from well below hover loading up to full throttle
        if max(t_values) < 0.9 * t_star or min(t_values) > 0.35 * t_star:
            raise DomainError(
                "samples must span the thrust range (lowest <= 35%, "
                "highest >= 90% of full throttle)"
            )


MeasureFn = Callable[
    [MotorSpec, EscSpec, PropSpec], "CandidateMeasurement | None"
]


def thrust_efficiency(thrust: float, battery_voltage: float, esc_current: float) -> float:
    """Thrust per electrical watt at the ESC input, N/W."""
    if battery_voltage <= 0 or esc_current <= 0:
        raise DomainError("battery_voltage and esc_current must be > 0")
    if thrust < 0:
        raise DomainError("thrust must be >= 0")
    return thrust / (battery_voltage * esc_current)


def mep_objective(
    thrust: float,
    efficiency: float,
    mass: float,
    normalizers: tuple[float, float, float],
    weights: tuple[float, float, float] = (1.0, 1.0, 1.0),
) -> float:
    """Raw combination score: more thrust and efficiency, less mass.

    J = k1*T/T_norm + k2*eta/eta_norm - k3*m/m_norm; higher is better.
    """
    t_norm, eta_norm, m_norm = normalizers
    k1, k2, k3 = weights
    return k1 * thrust / t_norm + k2 * efficiency / eta_norm - k3 * mass / m_norm


def score_combination(meas: CandidateMeasurement, cfg: MepObjectiveConfig) -> float:
    """Objective value of one measured candidate under explicit normalizers."""
    if cfg.normalizers is None:
        raise UnresolvedNormalizerError(
            "auto normalizers are resolved per motor by optimize_motor; "
            "score_combination needs them explicit"
        )
    eta = thrust_efficiency(
        meas.full_throttle_thrust, meas.battery_voltage, meas.full_throttle_current
    )
    return mep_objective(
        meas.full_throttle_thrust, eta, meas.mass, cfg.normalizers, cfg.weights
    )


def check_safety(
    m: MotorSpec, e: EscSpec, battery_voltage: float, esc_current: float
) -> tuple[bool, tuple[str, ...]]:
    """Closed-bound current/voltage limit check for a candidate pairing.

    Returns (ok, violations); each violation names the exceeded bound.
    """
    violations = []
    if esc_current > m.max_current:
        violations.append(
            f"current {esc_current:g} A exceeds motor {m.id} limit {m.max_current:g} A"
        )
    if esc_current > e.max_current:
        violations.append(
            f"current {esc_current:g} A exceeds ESC {e.id} limit {e.max_current:g} A"
        )
    if battery_voltage > m.max_voltage:
        violations.append(
            f"voltage {battery_voltage:g} V exceeds motor {m.id} limit {m.max_voltage:g} V"
        )
    if battery_voltage > e.max_voltage:
        violations.append(
            f"voltage {battery_voltage:g} V exceeds ESC {e.id} limit {e.max_voltage:g} V"
        )
    return not violations, tuple(violations)


@dataclass(frozen=True, slots=True)
class _Candidate:
    esc: EscSpec
    prop: PropSpec
    meas: CandidateMeasurement
    eta: float


def optimize_motor(
    m: MotorSpec,
    escs: Iterable[EscSpec],
    props: Iterable[PropSpec],
    table: CompatibilityTable,
    measure: MeasureFn,
    cfg: MepObjectiveConfig = MepObjectiveConfig(),
) -> PropulsionCombo | None:
    """Best safe, compatible ESC+prop pairing for one motor.

    Candidates without measurement data are skipped. In auto mode the
    normalizers are the per-index maxima over this motor's feasible
    candidates. Exact score ties fall back to higher thrust efficiency,
    then lower drive mass, then lexicographic (esc_id, prop_id).

    Returns None when the motor has no feasible pairing at all.
    """
    feasible: list[_Candidate] = []
    for e in escs:
        for p in props:
            if not check_compatibility(table, m, e, p):
                continue
            meas = measure(m, e, p)
            if meas is None:
                continue
            ok, _ = check_safety(
                m, e, meas.battery_voltage, meas.full_throttle_current
            )
            if not ok:
                continue
            eta = thrust_efficiency(
                meas.full_throttle_thrust,
                meas.battery_voltage,
                meas.full_throttle_current,
            )
            feasible.append(_Candidate(esc=e, prop=p, meas=meas, eta=eta))
    if not feasible:
        return None

    normalizers = cfg.normalizers
    if normalizers is None:
        normalizers = (
            max(c.meas.full_throttle_thrust for c in feasible),
            max(c.eta for c in feasible),
            max(c.meas.mass for c in feasible),
        )

    best: _Candidate | None = None
    best_score = -math.inf
    for cand in feasible:
        score = mep_objective(
            cand.meas.full_throttle_thrust,
            cand.eta,
            cand.meas.mass,
            normalizers,
            cfg.weights,
        )
        if best is None or _beats(score, cand, best_score, best):
            best, best_score = cand, score

    assert best is not None
    fit = physics.fit_thrust_current(best.meas.samples)
    combo = PropulsionCombo(
        motor_id=m.id,
        esc_id=best.esc.id,
        prop_id=best.prop.id,
        battery_voltage=best.meas.battery_voltage,
        prop_diameter=best.prop.diameter,
        kv=m.kv,
        mass=best.meas.mass,
        full_throttle_thrust=best.meas.full_throttle_thrust,
        full_throttle_speed=best.meas.full_throttle_speed,
        full_throttle_current=best.meas.full_throttle_current,
        motor_max_current=m.max_current,
        ref_air_density=best.meas.air_density,
        fit_coeffs=(fit.k_t0, fit.k_t1, fit.k_t2),
    )
    validate_combo(combo)
    # re-verify the emitted record against both gates
    ok, violations = check_safety(
        m, best.esc, combo.battery_voltage, combo.full_throttle_current
    )
    if not ok or not check_compatibility(table, m, best.esc, best.prop):
        raise CatalogValidationError(
            combo.key(), "safety", "; ".join(violations) or "incompatible pairing"
        )
    return combo


def _beats(score: float, cand: _Candidate, best_score: float, best: _Candidate) -> bool:
    if score != best_score:
        return score > best_score
    if cand.eta != best.eta:
        return cand.eta > best.eta
    if cand.meas.mass != best.meas.mass:
        return cand.meas.mass < best.meas.mass
    return (cand.esc.id, cand.prop.id) < (best.esc.id, best.prop.id)


@dataclass(frozen=True)
class BuildResult:
    """Outcome of a database build: the database plus per-motor failures."""

    database: ComboDatabase
    skipped: dict[str, str]   # motor_id -> reason


def build_database(
    motors: Iterable[MotorSpec],
    escs: Iterable[EscSpec],
    props: Iterable[PropSpec],
    table: CompatibilityTable,
    measure: MeasureFn,
    cfg: MepObjectiveConfig = MepObjectiveConfig(),
) -> BuildResult:
    """Run optimize_motor over every motor and collect the database.

    Output ordering is by motor id regardless of input order; motors with
    no feasible pairing are reported in BuildResult.skipped.
    """
    escs = list(escs)
    props = list(props)
    esc_by_id = {e.id: e for e in escs}
    prop_by_id = {p.id: p for p in props}
    combos: list[PropulsionCombo] = []
    provenance: list[str] = []
    skipped: dict[str, str] = {}
    for m in sorted(motors, key=lambda m: m.id):
        combo = optimize_motor(m, escs, props, table, measure, cfg)
        if combo is None:
            skipped[m.id] = _skip_reason(m, escs, props, table, measure)
            continue
        meas = measure(m, esc_by_id[combo.esc_id], prop_by_id[combo.prop_id])
        combos.append(combo)
        provenance.append(meas.source if meas is not None else "experimental")
    return BuildResult(
        database=ComboDatabase(combos, provenance), skipped=skipped
    )


def _skip_reason(
    m: MotorSpec,
    escs: list[EscSpec],
    props: list[PropSpec],
    table: CompatibilityTable,
    measure: MeasureFn,
) -> str:
    compatible = measured = 0
    violations: list[str] = []
    for e in escs:
        for p in props:
            if not check_compatibility(table, m, e, p):
                continue
            compatible += 1
            meas = measure(m, e, p)
            if meas is None:
                continue
            measured += 1
            ok, why = check_safety(
                m, e, meas.battery_voltage, meas.full_throttle_current
            )
            if not ok:
                violations.extend(why)
    if compatible == 0:
        return "no compatible ESC/prop pairing"
    if measured == 0:
        return f"no measurement data for any of {compatible} compatible pairings"
    return "all measured pairings unsafe: " + "; ".join(violations[:3])


# ---------------------------------------------------------------------------
# measurement providers

class TableMeasurementProvider:
    """Measurement lookup backed by a measurements.json file.

    The file is an array of objects, one per (motor, esc, prop) triple,
    carrying the CandidateMeasurement fields plus the triple ids. Missing
    triples yield None (the pairing is skipped, not an error).
    """

    def __init__(
        self,
        entries: dict[tuple[str, str, str], CandidateMeasurement],
    ):
        self._entries = dict(entries)

    def __call__(
        self, m: MotorSpec, e: EscSpec, p: PropSpec
    ) -> CandidateMeasurement | None:
        return self._entries.get((m.id, e.id, p.id))

    def __len__(self) -> int:
        return len(self._entries)

    @classmethod
    def from_file(
        cls, path: str | Path, *, legacy_mass_units: bool = False
    ) -> "TableMeasurementProvider":
        return cls(load_measurements(path, legacy_mass_units=legacy_mass_units))


def load_measurements(
    path: str | Path, *, legacy_mass_units: bool = False
) -> dict[tuple[str, str, str], CandidateMeasurement]:
    """Parse measurements.json into a triple-keyed lookup."""
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise CatalogParseError(f"{path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CatalogParseError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(data, list):
        raise CatalogParseError(f"{path}: expected a top-level array")
    entries: dict[tuple[str, str, str], CandidateMeasurement] = {}
    for idx, obj in enumerate(data):
        if not isinstance(obj, dict):
            raise CatalogParseError(f"{path}: entry #{idx} is not an object")
        rid = f"entry#{idx}"
        try:
            motor = obj["motor"]
            esc = obj["esc"]
            prop = obj["prop"]
            raw_samples = obj["samples"]
            mass = float(obj["mass"])
            if legacy_mass_units and mass > 10.0:
                mass = mass / 1000.0
            meas = CandidateMeasurement(
                battery_voltage=float(obj["battery_voltage"]),
                full_throttle_current=float(obj["full_throttle_current"]),
                full_throttle_thrust=float(obj["full_throttle_thrust"]),
                full_throttle_speed=float(obj["full_throttle_speed"]),
                mass=mass,
                air_density=float(obj["air_density"]),
                samples=tuple((float(t), float(i)) for t, i in raw_samples),
                source=obj.get("source", "experimental"),
            )
        except KeyError as exc:
            raise CatalogValidationError(rid, str(exc), "missing field") from exc
        except (TypeError, ValueError, DomainError) as exc:
            raise CatalogValidationError(rid, "measurement", str(exc)) from exc
        key = (str(motor), str(esc), str(prop))
        if key in entries:
            raise CatalogValidationError(rid, "motor/esc/prop", "duplicate triple")
        entries[key] = meas
    return entries


class PhysicsMeasurementProvider:
    """Estimate candidate measurements from component coefficients.

    Solves the steady-state torque balance at a sweep of throttle
    settings: ESC output voltage drives the winding equation while the
    propeller loads the shaft with its square-law torque. Propellers
    without thrust/torque coefficients, and motors whose data cannot
    sustain the model (zero resistance), yield None.
    """

    def __init__(
        self,
        battery_voltage: float,
        air_density: float = 1.18,
        throttle_grid: tuple[float, ...] = (0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0),
    ):
        if battery_voltage <= 0:
            raise DomainError("battery_voltage must be > 0")
        if air_density <= 0:
            raise DomainError("air_density must be > 0")
        if len(throttle_grid) < 3 or throttle_grid[-1] != 1.0:
            raise DomainError("throttle grid needs >= 3 points ending at 1.0")
        self.battery_voltage = battery_voltage
        self.air_density = air_density
        self.throttle_grid = throttle_grid

    def __call__(
        self, m: MotorSpec, e: EscSpec, p: PropSpec
    ) -> CandidateMeasurement | None:
        if p.thrust_coeff is None or p.torque_coeff is None:
            return None
        if m.resistance == 0:
            return None
        try:
            k_t, k_e = physics.motor_constants(m)
        except DomainError:
            return None
        rho = self.air_density
        u_b = self.battery_voltage
        samples: list[tuple[float, float]] = []
        full: tuple[float, float, float] | None = None
        for sigma in self.throttle_grid:
            u_m = sigma * u_b
            # torque balance: a*N^2 + b*N + c = 0 with the propeller load
            # on the left and the winding equation behind I_m
            a = p.torque_coeff * rho * p.diameter**5 / 3600.0
            b = k_t * k_e / m.resistance
            c = -k_t * (u_m / m.resistance - m.no_load_current)
            if c >= 0:
                return None   # cannot spin past no-load at this throttle
            speed = 2.0 * -c / (b + math.sqrt(b * b - 4.0 * a * c))
            thrust = physics.propeller_thrust(p.thrust_coeff, rho, speed, p.diameter)
            motor_current = (u_m - k_e * speed) / m.resistance
            esc_current = motor_current * u_m / (u_b * e.efficiency)
            samples.append((thrust, esc_current))
            if sigma == 1.0:
                full = (thrust, speed, esc_current)
        assert full is not None
        thrust_star, speed_star, current_star = full
        # fitting the estimated sweep also weeds out degenerate geometry
        try:
            physics.fit_thrust_current(samples)
        except DomainError:
            return None
        return CandidateMeasurement(
            battery_voltage=u_b,
            full_throttle_current=current_star,
            full_throttle_thrust=thrust_star,
            full_throttle_speed=speed_star,
            mass=m.mass + e.mass + p.mass,
            air_density=rho,
            samples=tuple(samples),
            source="estimated",
        )
