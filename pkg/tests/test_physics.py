"""Atmosphere, motor electrics, propeller aerodynamics, density conversion.

Frozen expectations were produced by the independent oracles in
tests/oracles.py (high-precision Decimal atmosphere, scipy root finding,
numpy polynomial fits) before being checked against the implementation.
"""

import dataclasses
import math
import random

import pytest

from copterdesign import EscSpec, MotorSpec, physics
from copterdesign.errors import DomainError, FitError

from .oracles import (
    density_oracle,
    full_throttle_root_oracle,
    hover_current_scale_oracle,
    polyfit_oracle,
)

# altitude m -> density kg/m^3, frozen from density_oracle
DENSITY_FROZEN = {
    0.0: 1.184526845637584,
    50.0: 1.1789325283840228,
    500.0: 1.1288890586084581,
    1000.0: 1.073966669624476,
    5000.0: 0.6676187368666567,
    19999.0: 0.002023873926148477,
}


class TestAirDensity:
    @pytest.mark.parametrize("alt,expected", sorted(DENSITY_FROZEN.items()))
    def test_frozen_values(self, alt, expected):
        assert physics.air_density(alt) == pytest.approx(expected, rel=1e-12)

    def test_matches_decimal_oracle_on_grid(self):
        for alt in [0, 10, 123.4, 777, 2500, 8848, 15000]:
            assert physics.air_density(alt) == pytest.approx(
                density_oracle(alt), rel=1e-9
            )

    def test_monotone_decreasing(self):
        alts = [i * 250.0 for i in range(80)]
        rhos = [physics.air_density(a) for a in alts]
        assert all(a > b for a, b in zip(rhos, rhos[1:]))

    def test_sea_level_below_cold_reference(self):
        # the 25 C ground temperature keeps sea level under the 0 C figure
        assert 1.0 < physics.air_density(0.0) < 1.293

    def test_colder_ground_is_denser(self):
        cold = physics.AtmosphereModel(ground_temp=0.0)
        assert physics.air_density(0.0, cold) == pytest.approx(1.293, rel=1e-12)
        assert physics.air_density(100.0, cold) > physics.air_density(100.0)

    def test_rejects_out_of_range(self):
        with pytest.raises(DomainError):
            physics.air_density(-1.0)
        with pytest.raises(DomainError):
            physics.air_density(20000.0)


def reference_motor(**overrides):
    base = dict(
        id="x-m380",
        name="X 380KV",
        kv=380.0,
        no_load_voltage=10.0,
        no_load_current=0.3,
        resistance=0.1,
        max_current=70.0,
        max_voltage=26.0,
        mass=0.1,
    )
    base.update(overrides)
    return MotorSpec(**base)


def reference_esc(**overrides):
    base = dict(
        id="x-e80",
        name="X 80A",
        max_current=80.0,
        max_voltage=26.0,
        efficiency=0.95,
        mass=0.03,
    )
    base.update(overrides)
    return EscSpec(**base)


class TestMotorConstants:
    def test_frozen_example(self):
        k_t, k_e = physics.motor_constants(reference_motor())
        assert k_e == pytest.approx(0.002623684210526316, rel=1e-12)
        assert k_t == pytest.approx(0.025054338673045212, rel=1e-12)

    def test_torque_constant_ratio(self):
        k_t, k_e = physics.motor_constants(reference_motor(kv=900.0))
        assert k_t / k_e == pytest.approx(30.0 / math.pi, rel=1e-12)

    def test_invalid_inputs(self):
        with pytest.raises(DomainError):
            physics.motor_constants(reference_motor(kv=0.0))
        with pytest.raises(DomainError):
            # resistive drop swallows the whole test voltage
            physics.motor_constants(
                reference_motor(no_load_voltage=0.1, no_load_current=2.0,
                                resistance=1.0)
            )


class TestPropellerAero:
    def test_frozen_thrust_torque(self):
        t = physics.propeller_thrust(0.1, 1.2, 5900.0, 0.3937)
        m = physics.propeller_torque(0.006, 1.2, 5900.0, 0.3937)
        assert t == pytest.approx(27.876896825411503, rel=1e-12)
        assert m == pytest.approx(0.6585080568098706, rel=1e-12)

    def test_quadratic_speed_scaling(self):
        t1 = physics.propeller_thrust(0.1, 1.2, 3000.0, 0.25)
        t2 = physics.propeller_thrust(0.1, 1.2, 6000.0, 0.25)
        assert t2 == pytest.approx(4.0 * t1, rel=1e-12)

    def test_diameter_powers(self):
        t1 = physics.propeller_thrust(0.1, 1.2, 5000.0, 0.2)
        t2 = physics.propeller_thrust(0.1, 1.2, 5000.0, 0.4)
        assert t2 == pytest.approx(16.0 * t1, rel=1e-12)
        m1 = physics.propeller_torque(0.006, 1.2, 5000.0, 0.2)
        m2 = physics.propeller_torque(0.006, 1.2, 5000.0, 0.4)
        assert m2 == pytest.approx(32.0 * m1, rel=1e-12)

    def test_linear_in_density(self):
        t1 = physics.propeller_thrust(0.1, 1.0, 5000.0, 0.25)
        t2 = physics.propeller_thrust(0.1, 1.2, 5000.0, 0.25)
        assert t2 == pytest.approx(1.2 * t1, rel=1e-12)


class TestEscMotorBalance:
    def test_frozen_example(self):
        op = physics.esc_motor_balance(
            reference_motor(), reference_esc(),
            battery_voltage=22.2, throttle=1.0, speed=5900.0,
        )
        assert op.motor_voltage == pytest.approx(22.2, rel=1e-12)
        assert op.motor_current == pytest.approx(67.20263157894736, rel=1e-12)
        assert op.torque == pytest.approx(1.676201189696917, rel=1e-12)
        assert op.esc_current == pytest.approx(70.73961218836564, rel=1e-12)

    def test_power_balance_identity(self):
        m, e = reference_motor(), reference_esc()
        op = physics.esc_motor_balance(m, e, 22.2, 0.5, 2000.0)
        assert op.motor_current == pytest.approx(58.52631578947368, rel=1e-12)
        assert op.esc_current == pytest.approx(30.803324099722985, rel=1e-12)
        # battery-side power times esc efficiency equals motor-side power
        assert 22.2 * op.esc_current * e.efficiency == pytest.approx(
            op.motor_voltage * op.motor_current, rel=1e-12
        )

    def test_back_emf_over_supply_rejected(self):
        with pytest.raises(DomainError):
            physics.esc_motor_balance(
                reference_motor(), reference_esc(), 22.2, 0.5, 5900.0
            )

    def test_freewheel_torque_clamped(self):
        # just above back-EMF equilibrium the current is below no-load
        m, e = reference_motor(), reference_esc()
        _, k_e = physics.motor_constants(m)
        speed = (22.2 - 0.001) / k_e
        op = physics.esc_motor_balance(m, e, 22.2, 1.0, speed)
        assert op.motor_current < m.no_load_current
        assert op.torque == 0.0

    def test_throttle_bounds(self):
        with pytest.raises(DomainError):
            physics.esc_motor_balance(
                reference_motor(), reference_esc(), 22.2, 1.2, 1000.0
            )


class TestThrustCurrentFit:
    EXACT = (-0.2349, 0.2559, 0.0262)  # k_t0, k_t1, k_t2

    def exact_points(self):
        k0, k1, k2 = self.EXACT
        return [(t, k2 * t * t + k1 * t + k0)
                for t in (1.0, 3.0, 6.0, 9.0, 12.0, 15.0, 18.4)]

    def test_recovers_exact_quadratic(self):
        fit = physics.fit_thrust_current(self.exact_points())
        assert fit.k_t0 == pytest.approx(self.EXACT[0], abs=1e-9)
        assert fit.k_t1 == pytest.approx(self.EXACT[1], abs=1e-10)
        assert fit.k_t2 == pytest.approx(self.EXACT[2], abs=1e-11)
        assert fit.r_squared > 0.999999
        assert fit.n_samples == 7

    def test_matches_numpy_oracle_noisy(self):
        rng = random.Random(20240917)
        for _ in range(25):
            k0 = rng.uniform(0.1, 0.6)
            k1 = rng.uniform(0.2, 0.8)
            k2 = rng.uniform(0.002, 0.02)
            pts = []
            for t in (1, 2.5, 4, 6, 8, 10, 12, 14):
                noise = rng.gauss(0.0, 0.01)
                pts.append((t, k2 * t * t + k1 * t + k0 + noise))
            fit = physics.fit_thrust_current(pts)
            expected = polyfit_oracle(pts)
            got = (fit.k_t0, fit.k_t1, fit.k_t2)
            for g, exp in zip(got, expected):
                assert g == pytest.approx(exp, rel=1e-6, abs=1e-9)

    def test_frozen_eval(self):
        fit = physics.ThrustCurrentFit(
            k_t0=-0.2349, k_t1=0.2559, k_t2=0.0262,
            r_squared=1.0, n_samples=8,
        )
        assert physics.eval_thrust_current(fit, 9.2) == pytest.approx(
            4.3369480000000005, rel=1e-12
        )
        # predictions below zero clamp to zero (the intercept is negative)
        assert physics.eval_thrust_current(fit, 0.0) == 0.0
        with pytest.raises(DomainError):
            physics.eval_thrust_current(fit, -1.0)

    def test_rejects_underdetermined(self):
        with pytest.raises(FitError):
            physics.fit_thrust_current([(1.0, 0.5), (2.0, 0.9)])
        with pytest.raises(FitError):
            # three samples but only two distinct abscissae
            physics.fit_thrust_current([(1.0, 0.5), (1.0, 0.6), (2.0, 0.9)])

    def test_rejects_decreasing_current(self):
        pts = [(1.0, 5.0), (2.0, 4.0), (3.0, 3.0), (4.0, 2.0)]
        with pytest.raises(FitError):
            physics.fit_thrust_current(pts)

    def test_rejects_non_finite(self):
        with pytest.raises(FitError):
            physics.fit_thrust_current([(1.0, 0.5), (2.0, float("nan")), (3.0, 1.5)])


class TestDensityConversion:
    def test_frozen_kn(self, mn3508):
        assert physics.solve_kn(mn3508) == pytest.approx(
            1.5976453630485291e-07, rel=1e-12
        )

    def test_identity_at_reference_density(self, mn3508):
        n, t = physics.convert_full_throttle(mn3508, 1.2)
        assert n == pytest.approx(5900.0, rel=1e-12)
        assert t == pytest.approx(18.4, rel=1e-12)

    @pytest.mark.parametrize(
        "rho,exp_n,exp_t",
        [
            (1.0, 6144.145739936144, 16.628595577750374),
            (1.1, 6017.676675650666, 17.546194466887908),
            (0.8, 6428.734138323012, 14.563758617845654),
        ],
    )
    def test_frozen_conversions(self, mn3508, rho, exp_n, exp_t):
        n, t = physics.convert_full_throttle(mn3508, rho)
        assert n == pytest.approx(exp_n, rel=1e-12)
        assert t == pytest.approx(exp_t, rel=1e-12)

    def test_matches_scipy_root(self, mn3508):
        for rho in [0.7, 0.95, 1.05, 1.15, 1.25]:
            n, t = physics.convert_full_throttle(mn3508, rho)
            n_exp, t_exp = full_throttle_root_oracle(
                380.0, 22.2, 1.2, 5900.0, 18.4, rho
            )
            assert n == pytest.approx(n_exp, rel=1e-9)
            assert t == pytest.approx(t_exp, rel=1e-9)

    def test_thrust_follows_square_law(self, mn3508):
        n, t = physics.convert_full_throttle(mn3508, 1.0)
        assert t == pytest.approx(
            18.4 * (1.0 * n * n) / (1.2 * 5900.0**2), rel=1e-12
        )

    def test_thinner_air_spins_faster_lifts_less(self, mn3508):
        n, t = physics.convert_full_throttle(mn3508, 0.9)
        assert n > 5900.0
        assert t < 18.4

    def test_roundtrip(self, mn3508):
        n1, t1 = physics.convert_full_throttle(mn3508, 1.0)
        moved = dataclasses.replace(
            mn3508, full_throttle_speed=n1, full_throttle_thrust=t1,
            ref_air_density=1.0,
        )
        n2, t2 = physics.convert_full_throttle(moved, 1.2)
        assert n2 == pytest.approx(5900.0, rel=1e-12)
        assert t2 == pytest.approx(18.4, rel=1e-12)

    def test_inconsistent_record_rejected(self, mn3508):
        # full-throttle speed at the ideal no-load ceiling: no margin left
        broken = dataclasses.replace(mn3508, full_throttle_speed=380.0 * 22.2)
        with pytest.raises(DomainError):
            physics.solve_kn(broken)


class TestHoverSpeedAndCurrent:
    def test_frozen_hover_speeds(self, mn3508):
        assert physics.hover_speed(mn3508, 9.2) == pytest.approx(
            4171.930009000631, rel=1e-12
        )
        assert physics.hover_speed_at_density(mn3508, 9.2, 1.0) == pytest.approx(
            4570.120348524752, rel=1e-12
        )

    def test_hover_speed_at_full_thrust_is_full_speed(self, mn3508):
        assert physics.hover_speed(mn3508, 18.4) == pytest.approx(5900.0)

    def test_hover_thrust_over_ceiling_rejected(self, mn3508):
        with pytest.raises(DomainError):
            physics.hover_speed(mn3508, 18.5)
        with pytest.raises(DomainError):
            # at rho=1.0 the ceiling drops to ~16.6 N
            physics.hover_speed_at_density(mn3508, 17.0, 1.0)

    def test_frozen_current_scale(self, mn3508):
        scale = physics.convert_hover_current(mn3508, 9.2, 1.0, 1.0)
        assert scale == pytest.approx(1.0731976953499947, rel=1e-12)
        assert scale == pytest.approx(
            hover_current_scale_oracle(380.0, 22.2, 1.2, 5900.0, 18.4, 9.2, 1.0),
            rel=1e-12,
        )

    def test_frozen_hover_current_pipeline(self, mn3508):
        i_ref = mn3508.fit_current(9.2)
        assert i_ref == pytest.approx(4.3369480000000005, rel=1e-12)
        converted = physics.convert_hover_current(mn3508, 9.2, i_ref, 1.0)
        assert converted == pytest.approx(4.654402598452769, rel=1e-12)

    def test_fit_reproduces_full_throttle_current(self, mn3508):
        # the stored polynomial must land near the measured full-throttle row
        predicted = mn3508.fit_current(18.4)
        assert predicted == pytest.approx(13.343932, rel=1e-12)
        assert abs(predicted - 13.3) / 13.3 < 0.005

    def test_same_density_scale_is_unity(self, mn3508):
        assert physics.convert_hover_current(mn3508, 7.0, 1.0, 1.2) == pytest.approx(
            1.0, rel=1e-12
        )

    def test_thinner_air_draws_more(self, mn3508):
        i_ref = mn3508.fit_current(9.2)
        assert physics.convert_hover_current(mn3508, 9.2, i_ref, 1.0) > i_ref
        assert physics.convert_hover_current(mn3508, 9.2, i_ref, 1.25) < i_ref
