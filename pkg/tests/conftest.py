import json
from pathlib import Path

import pytest

from copterdesign import (
    CandidateMeasurement,
    ComboDatabase,
    CompatibilityTable,
    DesignDefaults,
    DesignRequirements,
    EscSpec,
    MotorSpec,
    PropSpec,
    PropulsionCombo,
    load_database,
)
from copterdesign.physics import air_density

PKG_DATA = Path(__file__).resolve().parent.parent / "src" / "copterdesign" / "data"
SAMPLE = PKG_DATA / "sample"


@pytest.fixture(scope="session")
def sample_dir() -> Path:
    return SAMPLE


@pytest.fixture(scope="session")
def shipped_db() -> ComboDatabase:
    return load_database(PKG_DATA / "mepdb.json")


@pytest.fixture(scope="session")
def mn3508() -> PropulsionCombo:
    """The published 15.5-inch reference combination, coefficients verbatim."""
    return PropulsionCombo(
        motor_id="tm-mn3508-380",
        esc_id="tm-esc40a",
        prop_id="tm-1555",
        battery_voltage=22.2,
        prop_diameter=0.3937,
        kv=380.0,
        mass=0.1345,
        full_throttle_thrust=18.4,
        full_throttle_speed=5900.0,
        full_throttle_current=13.3,
        motor_max_current=14.0,
        ref_air_density=1.2,
        fit_coeffs=(-0.2349, 0.2559, 0.0262),
    )


def quad_samples(k0, k1, k2, t_values):
    return tuple((t, k2 * t * t + k1 * t + k0) for t in t_values)


def anchored_quad(p0, p1, p2):
    (x0, y0), (x1, y1), (x2, y2) = p0, p1, p2
    d01 = (y1 - y0) / (x1 - x0)
    d12 = (y2 - y1) / (x2 - x1)
    k2 = (d12 - d01) / (x2 - x0)
    k1 = d01 - k2 * (x0 + x1)
    k0 = y0 - k1 * x0 - k2 * x0 * x0
    return k0, k1, k2


def bench_measurement(t_star, i_star, n_star, mass, u_b=22.2, rho=1.18, i0=0.3):
    """Synthetic bench table: exact quadratic through idle/mid/full anchors."""
    k0, k1, k2 = anchored_quad((0.0, i0), (0.5 * t_star, 0.45 * i_star), (t_star, i_star))
    grid = [t_star * i / 7.0 for i in range(8)]
    return CandidateMeasurement(
        battery_voltage=u_b,
        full_throttle_current=i_star,
        full_throttle_thrust=t_star,
        full_throttle_speed=n_star,
        mass=mass,
        air_density=rho,
        samples=quad_samples(k0, k1, k2, grid),
    )


@pytest.fixture(scope="session")
def bench_motor() -> MotorSpec:
    """The 550KV motor whose four-propeller bench sweep is tabulated."""
    return MotorSpec(
        id="jfrc-u3508-550",
        name="JFRC U3508 550KV",
        kv=550.0,
        no_load_voltage=10.0,
        no_load_current=0.4,
        resistance=0.08,
        max_current=20.0,
        max_voltage=25.2,
        mass=0.104,
    )


@pytest.fixture(scope="session")
def bench_esc() -> EscSpec:
    return EscSpec(
        id="jfrc-esc40a",
        name="JFRC 40A",
        max_current=40.0,
        max_voltage=26.0,
        efficiency=0.95,
        mass=0.030,
    )


# Bench sweep rows: prop size -> (T* N, I_e* A, N* RPM, m_mep kg).
# The 13x5.5 row draws over the motor's 20 A limit and must be excluded
# by the safety check; of the rest the 12x4.5 wins the weighted score.
BENCH_ROWS = {
    "apc-1045": ("APC 10x4.5", 0.254, 0.1143, 14.0, 13.0, 7200, 0.139),
    "apc-1155": ("APC 11x5.5", 0.2794, 0.1397, 17.84, 15.5, 6900, 0.141),
    "apc-1245": ("APC 12x4.5", 0.3048, 0.1143, 20.87, 19.0, 6700, 0.145),
    "apc-1355": ("APC 13x5.5", 0.3302, 0.1397, 22.5, 21.5, 6400, 0.149),
}


@pytest.fixture(scope="session")
def bench_props() -> list[PropSpec]:
    props = []
    for pid, (name, diameter, pitch, _, _, _, m_mep) in BENCH_ROWS.items():
        props.append(
            PropSpec(
                id=pid,
                name=name,
                diameter=diameter,
                pitch=pitch,
                mass=round(m_mep - 0.104 - 0.030, 6),
            )
        )
    return props


@pytest.fixture(scope="session")
def bench_table() -> CompatibilityTable:
    return CompatibilityTable(
        default_policy="deny-unlisted",
        entries=(("jfrc-u3508-550", "*", "*"),),
    )


@pytest.fixture(scope="session")
def bench_measure():
    """Measurement provider for the bench sweep."""
    rows = {
        pid: bench_measurement(t_star, i_star, n_star, m_mep)
        for pid, (_, _, _, t_star, i_star, n_star, m_mep) in BENCH_ROWS.items()
    }

    def measure(m, e, p):
        if m.id == "jfrc-u3508-550" and e.id == "jfrc-esc40a":
            return rows.get(p.id)
        return None

    return measure


@pytest.fixture(scope="session")
def showcase_requirements() -> DesignRequirements:
    """The reference design query the shipped database is tuned for."""
    return DesignRequirements(
        hover_time=17.0,
        payload=0.5,
        thrust_ratio=0.55,
        rotor_count=4,
        air_density=air_density(50.0),
        battery_density=240.0,
    )


@pytest.fixture(scope="session")
def defaults() -> DesignDefaults:
    return DesignDefaults()


@pytest.fixture()
def catalog_files(tmp_path):
    """Minimal valid catalog trio plus compat table on disk."""
    motors = [
        {
            "id": "zz-m1",
            "name": "Test M1",
            "kv": 900,
            "no_load_voltage": 10.0,
            "no_load_current": 0.5,
            "resistance": 0.12,
            "max_current": 20,
            "max_voltage": 13,
            "mass": 0.06,
        }
    ]
    escs = [
        {
            "id": "zz-e1",
            "name": "Test E1",
            "max_current": 30,
            "max_voltage": 13,
            "efficiency": 0.95,
            "mass": 0.04,
        }
    ]
    props = [
        {
            "id": "zz-p1",
            "name": "Test P1",
            "diameter": 0.254,
            "pitch": 0.11,
            "mass": 0.014,
        }
    ]
    compat = {
        "default_policy": "deny-unlisted",
        "entries": [{"motor": "zz-m1", "esc": "zz-e1", "prop": "zz-p1"}],
    }
    paths = {}
    for name, payload in (
        ("motors", motors),
        ("escs", escs),
        ("props", props),
        ("compat", compat),
    ):
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(payload))
        paths[name] = p
    return paths
