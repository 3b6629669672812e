"""Propulsion physics: every formula the optimizer and designer rely on.

Symbols used throughout (units in brackets):

    rho     air density [kg/m^3]        sigma  throttle, 0..1
    N       propeller speed [RPM]       T      thrust [N]
    M       torque [N*m]                D_p    propeller diameter [m]
    U_b     battery voltage [V]         I_e    ESC input current [A]
    U_m     motor voltage [V]           I_m    motor current [A]
    K_V     motor speed constant [RPM/V]
    K_E     back-EMF constant [V/RPM]   K_T    torque constant [N*m/A]
    K_N     combo speed-load constant, from solve_kn [V/(kg/m^3 * RPM^2)]

Full-throttle figures carry a star in the docstrings (T*, N*, I_e*); an
overbar in the comments marks values converted to a non-reference air
density. All functions are pure; none mutate their arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .catalog import EscSpec, MotorSpec, PropSpec, PropulsionCombo
from .errors import DomainError, FitError

KELVIN_OFFSET = 273.0       # K at 0 degrees C
TEMP_LAPSE = 6.0            # temperature drop, degC per km of altitude
PRESSURE_LAPSE = 0.0065     # pressure-model lapse rate, 1/m scaled by temp
DENSITY_EXPONENT = 5.2561   # standard-atmosphere exponent
STD_DENSITY = 1.293         # kg/m^3 at 0 degC, sea-level pressure

# Relative slack for "not above full throttle" comparisons, so values that
# are equal up to rounding do not trip the domain checks.
_REL_EPS = 1e-12


@dataclass(frozen=True, slots=True)
class AtmosphereModel:
    """Ground conditions anchoring the altitude-to-density model."""

    ground_temp: float = 25.0      # degC at altitude 0
    std_density: float = STD_DENSITY

    def __post_init__(self):
        if not -60.0 < self.ground_temp < 60.0:
            raise DomainError("ground_temp must be within (-60, 60) degC")
        if self.std_density <= 0:
            raise DomainError("std_density must be > 0")


DEFAULT_ATMOSPHERE = AtmosphereModel()


@dataclass(frozen=True, slots=True)
class ThrustCurrentFit:
    """Quadratic map from propeller thrust to ESC input current.

    I_e(T) = k_t2*T^2 + k_t1*T + k_t0, least-squares fitted to bench
    samples. Guaranteed monotone nondecreasing across the sample range.
    """

    k_t0: float      # A
    k_t1: float      # A/N
    k_t2: float      # A/N^2
    r_squared: float
    n_samples: int


@dataclass(frozen=True, slots=True)
class OperatingPoint:
    """Steady-state electrical/mechanical state of one propulsion unit.

    thrust is None when no propeller model is attached to the query
    (esc_motor_balance alone cannot know it).
    """

    throttle: float
    speed: float           # RPM
    torque: float          # N*m
    motor_voltage: float   # V
    motor_current: float   # A
    esc_current: float     # A
    thrust: float | None = None


def air_density(altitude: float, atmosphere: AtmosphereModel = DEFAULT_ATMOSPHERE) -> float:
    """Air density at `altitude` meters under a standard-atmosphere lapse.

    Local temperature falls by TEMP_LAPSE degC per km from the ground
    value; density follows the pressure-over-temperature power law
    anchored at std_density. Strictly decreasing in altitude.
    """
    if not 0 <= altitude < 20000:
        raise DomainError(f"altitude {altitude} m outside [0, 20000)")
    local_temp = atmosphere.ground_temp - TEMP_LAPSE * altitude / 1000.0
    abs_temp = KELVIN_OFFSET + local_temp
    if abs_temp <= 0:
        raise DomainError("temperature model reached absolute zero")
    lapse = 1.0 - PRESSURE_LAPSE * altitude / abs_temp
    if lapse <= 0:
        raise DomainError(f"altitude {altitude} m outside the lapse model domain")
    return (KELVIN_OFFSET / abs_temp) * lapse**DENSITY_EXPONENT * atmosphere.std_density


def motor_constants(m: MotorSpec) -> tuple[float, float]:
    """Torque and back-EMF constants (K_T, K_E) from no-load data.

    K_E = (U_m0 - I_m0*R_m) / (K_V * U_m0), K_T = (30/pi) * K_E.
    """
    if m.kv <= 0:
        raise DomainError(f"motor {m.id}: kv must be > 0")
    if m.no_load_voltage <= m.no_load_current * m.resistance:
        raise DomainError(
            f"motor {m.id}: no-load voltage does not exceed the resistive drop"
        )
    k_e = (m.no_load_voltage - m.no_load_current * m.resistance) / (
        m.kv * m.no_load_voltage
    )
    k_t = (30.0 / math.pi) * k_e
    return k_t, k_e


def propeller_thrust(
    thrust_coeff: float, rho: float, speed: float, diameter: float
) -> float:
    """T = C_T * rho * (N/60)^2 * D_p^4, in Newtons."""
    rev_per_sec = speed / 60.0
    return thrust_coeff * rho * rev_per_sec * rev_per_sec * diameter**4


def propeller_torque(
    torque_coeff: float, rho: float, speed: float, diameter: float
) -> float:
    """M = C_M * rho * (N/60)^2 * D_p^5, in Newton-meters."""
    rev_per_sec = speed / 60.0
    return torque_coeff * rho * rev_per_sec * rev_per_sec * diameter**5


def esc_motor_balance(
    m: MotorSpec, e: EscSpec, battery_voltage: float, throttle: float, speed: float
) -> OperatingPoint:
    """Steady-state electrical solution at a given throttle and speed.

    The ESC scales the supply (U_m = sigma * U_b); the winding equation
    U_m = I_m*R_m + K_E*N gives the motor current; ESC input current
    follows from power balance at efficiency eta_e. Below the no-load
    current the shaft torque is clamped to zero (freewheeling).
    """
    if not 0.0 <= throttle <= 1.0:
        raise DomainError(f"throttle {throttle} outside [0, 1]")
    if battery_voltage <= 0:
        raise DomainError("battery_voltage must be > 0")
    if speed < 0:
        raise DomainError("speed must be >= 0")
    k_t, k_e = motor_constants(m)
    motor_voltage = throttle * battery_voltage
    back_emf = k_e * speed
    if motor_voltage < back_emf:
        raise DomainError(
            f"motor {m.id}: back-EMF {back_emf:.3f} V exceeds motor voltage "
            f"{motor_voltage:.3f} V; no steady state at {speed:.0f} RPM"
        )
    if m.resistance == 0:
        raise DomainError(
            f"motor {m.id}: zero winding resistance, current undetermined"
        )
    motor_current = (motor_voltage - back_emf) / m.resistance
    torque = k_t * (motor_current - m.no_load_current)
    if torque < 0.0:
        torque = 0.0
    esc_current = motor_current * motor_voltage / (battery_voltage * e.efficiency)
    return OperatingPoint(
        throttle=throttle,
        speed=speed,
        torque=torque,
        motor_voltage=motor_voltage,
        motor_current=motor_current,
        esc_current=esc_current,
    )


# ---------------------------------------------------------------------------
# thrust-to-current fitting

def fit_thrust_current(samples) -> ThrustCurrentFit:
    """Least-squares quadratic through (thrust, current) bench samples.

    Solves the 3x3 normal equations directly; falls back to an orthogonal
    least-squares solve if they are ill-conditioned. The result must be
    monotone nondecreasing across the sample abscissae, which rejects
    fits that would predict current dropping as thrust rises.

    Raises:
        FitError: fewer than 3 samples, fewer than 3 distinct thrust
            values, or a non-monotone fit.
    """
    pts = [(float(t), float(i)) for t, i in samples]
    if len(pts) < 3:
        raise FitError(f"need at least 3 samples, got {len(pts)}")
    thrusts = [t for t, _ in pts]
    currents = [i for _, i in pts]
    for t in thrusts:
        if not math.isfinite(t) or t < 0:
            raise FitError(f"thrust sample {t} not a finite nonnegative number")
    for i in currents:
        if not math.isfinite(i):
            raise FitError(f"current sample {i} not finite")
    if len(set(thrusts)) < 3:
        raise FitError("need at least 3 distinct thrust abscissae")

    n = float(len(pts))
    s1 = math.fsum(thrusts)
    s2 = math.fsum(t * t for t in thrusts)
    s3 = math.fsum(t * t * t for t in thrusts)
    s4 = math.fsum(t * t * t * t for t in thrusts)
    b0 = math.fsum(currents)
    b1 = math.fsum(t * i for t, i in pts)
    b2 = math.fsum(t * t * i for t, i in pts)
    normal = np.array([[n, s1, s2], [s1, s2, s3], [s2, s3, s4]])
    rhs = np.array([b0, b1, b2])
    if np.linalg.cond(normal) < 1e12:
        k_t0, k_t1, k_t2 = np.linalg.solve(normal, rhs)
    else:
        vandermonde = np.array([[1.0, t, t * t] for t in thrusts])
        (k_t0, k_t1, k_t2), *_ = np.linalg.lstsq(
            vandermonde, np.array(currents), rcond=None
        )

    def poly(t: float) -> float:
        return k_t2 * t * t + k_t1 * t + k_t0

    abscissae = sorted(set(thrusts))
    slack = 1e-9 * max(1.0, max(abs(i) for i in currents))
    for lo, hi in zip(abscissae, abscissae[1:]):
        if poly(hi) < poly(lo) - slack:
            raise FitError(
                f"fitted curve not monotone between T={lo:g} and T={hi:g} N"
            )

    mean = b0 / n
    ss_res = math.fsum((i - poly(t)) ** 2 for t, i in pts)
    ss_tot = math.fsum((i - mean) ** 2 for i in currents)
    if ss_tot == 0.0:
        r_squared = 1.0
    else:
        r_squared = 1.0 - ss_res / ss_tot
    r_squared = min(1.0, max(0.0, r_squared))
    return ThrustCurrentFit(
        k_t0=float(k_t0),
        k_t1=float(k_t1),
        k_t2=float(k_t2),
        r_squared=r_squared,
        n_samples=len(pts),
    )


def eval_thrust_current(fit: ThrustCurrentFit, thrust: float) -> float:
    """ESC input current predicted at `thrust` N, clamped below at 0 A."""
    if thrust < 0:
        raise DomainError(f"thrust {thrust} N must be >= 0")
    value = fit.k_t2 * thrust * thrust + fit.k_t1 * thrust + fit.k_t0
    return value if value > 0.0 else 0.0


# ---------------------------------------------------------------------------
# air-density conversions

def solve_kn(combo: PropulsionCombo) -> float:
    """Speed-load constant K_N of a combo from its full-throttle record.

    Defined by the full-throttle balance K_N*rho*N*^2 + N*/K_V = U_b,
    solved for K_N at the reference density.
    """
    surplus = combo.kv * combo.battery_voltage - combo.full_throttle_speed
    if surplus <= 0:
        raise DomainError(
            f"combo {combo.key()}: full-throttle speed reaches or exceeds "
            f"the no-load ceiling kv*U_b; record is inconsistent"
        )
    return surplus / (
        combo.ref_air_density
        * combo.full_throttle_speed
        * combo.full_throttle_speed
        * combo.kv
    )


def convert_full_throttle(
    combo: PropulsionCombo, target_density: float
) -> tuple[float, float]:
    """Full-throttle speed and thrust of `combo` at another air density.

    Solves K_N*rho_hat*N^2 + N/K_V = U_b for the positive root, then
    scales thrust by the square-law ratio. Identity when target equals
    the reference density; thrust strictly increasing in density.

    Returns:
        (speed RPM, thrust N) at target_density.
    """
    if target_density <= 0:
        raise DomainError("target_density must be > 0")
    k_n = solve_kn(combo)
    quad = k_n * target_density            # N^2 coefficient
    lin = 1.0 / combo.kv                   # N coefficient
    # Conjugate form of the quadratic root: no cancellation for tiny K_N.
    speed = (
        2.0
        * combo.battery_voltage
        / (lin + math.sqrt(lin * lin + 4.0 * quad * combo.battery_voltage))
    )
    ref = combo.ref_air_density * combo.full_throttle_speed**2
    thrust = target_density * speed * speed / ref * combo.full_throttle_thrust
    return speed, thrust


def hover_speed(combo: PropulsionCombo, hover_thrust: float) -> float:
    """Speed producing `hover_thrust` at the combo's reference density."""
    t_star = combo.full_throttle_thrust
    if hover_thrust <= 0:
        raise DomainError("hover_thrust must be > 0")
    if hover_thrust > t_star * (1.0 + _REL_EPS):
        raise DomainError(
            f"hover thrust {hover_thrust:.3f} N exceeds full-throttle thrust "
            f"{t_star:.3f} N at reference density"
        )
    return combo.full_throttle_speed * math.sqrt(hover_thrust / t_star)


def hover_speed_at_density(
    combo: PropulsionCombo, hover_thrust: float, target_density: float
) -> float:
    """Speed producing `hover_thrust` when flying at target_density."""
    if hover_thrust <= 0:
        raise DomainError("hover_thrust must be > 0")
    if target_density <= 0:
        raise DomainError("target_density must be > 0")
    _, thrust_ceiling = convert_full_throttle(combo, target_density)
    if hover_thrust > thrust_ceiling * (1.0 + _REL_EPS):
        raise DomainError(
            f"hover thrust {hover_thrust:.3f} N exceeds full-throttle thrust "
            f"{thrust_ceiling:.3f} N at density {target_density:g}"
        )
    return combo.full_throttle_speed * math.sqrt(
        combo.ref_air_density
        * hover_thrust
        / (target_density * combo.full_throttle_thrust)
    )


def convert_hover_current(
    combo: PropulsionCombo,
    hover_thrust: float,
    esc_current: float,
    target_density: float,
) -> float:
    """ESC hover current converted from reference to target density.

    Scales by the ratio of motor electrical power at the two hover
    speeds. The torque contributions cancel algebraically (equal thrust
    means equal rho*N^2), so the change comes from the back-EMF term:
    thinner air needs a faster, hungrier propeller for the same thrust.
    """
    if esc_current < 0:
        raise DomainError("esc_current must be >= 0")
    k_n = solve_kn(combo)
    speed_ref = hover_speed(combo, hover_thrust)
    speed_tgt = hover_speed_at_density(combo, hover_thrust, target_density)
    inv_kv = 1.0 / combo.kv
    numer = k_n * target_density * speed_tgt * speed_tgt + speed_tgt * inv_kv
    denom = k_n * combo.ref_air_density * speed_ref * speed_ref + speed_ref * inv_kv
    return esc_current * numer / denom


def hover_current_physics(
    m: MotorSpec,
    e: EscSpec,
    p: PropSpec,
    combo: PropulsionCombo,
    hover_thrust: float,
) -> float:
    """ESC hover current from component coefficients instead of the fit.

    Torque balance gives the motor current (C_M/C_T relates torque to
    thrust), the speed-load model gives the motor voltage at the hover
    speed, and the ESC power balance converts both to input current.
    Needs thrust_coeff and torque_coeff on the propeller.
    """
    if p.thrust_coeff is None or p.torque_coeff is None:
        raise DomainError(
            f"prop {p.id}: thrust_coeff/torque_coeff required for the "
            f"physics-path hover current"
        )
    k_t, _ = motor_constants(m)
    motor_current = (
        p.torque_coeff * p.diameter * hover_thrust / (p.thrust_coeff * k_t)
        + m.no_load_current
    )
    speed = hover_speed(combo, hover_thrust)
    k_n = solve_kn(combo)
    motor_voltage = (
        k_n * combo.ref_air_density * speed * speed + speed / combo.kv
    )
    return motor_current * motor_voltage / (combo.battery_voltage * e.efficiency)
