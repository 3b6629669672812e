"""Record service responses as fixtures for the browser client's tests.

The client promises two things its tests must hold it to: rendered
ordering equal to the service response, and request validation that
accepts exactly what the service accepts. Both promises are anchored to
recorded wire data, regenerated here against the shipped database.

Usage: python3 scripts/record_ui_fixtures.py
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi.testclient import TestClient

from copterdesign.service import create_app

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "frontend" / "tests" / "fixtures"

SHOWCASE = {
    "hover_time": 17.0,
    "payload": 0.5,
    "thrust_ratio": 0.55,
    "rotor_count": 4,
    "altitude": 50.0,
    "battery_density": 240.0,
}

# name -> request body; the recorded verdict is whatever the service says
VALIDATION_CASES: dict[str, dict] = {
    "showcase": SHOWCASE,
    "density_instead_of_altitude": {
        **{k: v for k, v in SHOWCASE.items() if k != "altitude"},
        "air_density": 1.18,
    },
    "payload_mode": {**SHOWCASE, "screening_mode": "payload"},
    "ratio_mode": {**SHOWCASE, "screening_mode": "ratio"},
    "bogus_mode": {**SHOWCASE, "screening_mode": "vibes"},
    "hover_time_zero": {**SHOWCASE, "hover_time": 0},
    "hover_time_max": {**SHOWCASE, "hover_time": 600},
    "hover_time_over": {**SHOWCASE, "hover_time": 600.1},
    "hover_time_infeasible": {**SHOWCASE, "hover_time": 300},
    "payload_zero": {**SHOWCASE, "payload": 0},
    "payload_negative": {**SHOWCASE, "payload": -1},
    "payload_max": {**SHOWCASE, "payload": 1000},
    "payload_over": {**SHOWCASE, "payload": 1001},
    "thrust_ratio_one": {**SHOWCASE, "thrust_ratio": 1.0},
    "thrust_ratio_over": {**SHOWCASE, "thrust_ratio": 1.2},
    "thrust_ratio_zero": {**SHOWCASE, "thrust_ratio": 0},
    "rotor_count_two": {**SHOWCASE, "rotor_count": 2},
    "rotor_count_three": {**SHOWCASE, "rotor_count": 3},
    "rotor_count_five": {**SHOWCASE, "rotor_count": 5},
    "rotor_count_six": {**SHOWCASE, "rotor_count": 6},
    "rotor_count_seven": {**SHOWCASE, "rotor_count": 7},
    "rotor_count_sixteen": {**SHOWCASE, "rotor_count": 16},
    "rotor_count_eighteen": {**SHOWCASE, "rotor_count": 18},
    "missing_payload": {k: v for k, v in SHOWCASE.items() if k != "payload"},
    "missing_battery_density": {
        k: v for k, v in SHOWCASE.items() if k != "battery_density"
    },
    "both_altitude_and_density": {**SHOWCASE, "air_density": 1.18},
    "neither_altitude_nor_density": {
        k: v for k, v in SHOWCASE.items() if k != "altitude"
    },
    "altitude_max": {**SHOWCASE, "altitude": 19999.9},
    "altitude_over": {**SHOWCASE, "altitude": 20000},
    "altitude_negative": {**SHOWCASE, "altitude": -1},
    "density_max": {
        **{k: v for k, v in SHOWCASE.items() if k != "altitude"},
        "air_density": 1.5,
    },
    "density_over": {
        **{k: v for k, v in SHOWCASE.items() if k != "altitude"},
        "air_density": 1.6,
    },
    "battery_density_max": {**SHOWCASE, "battery_density": 2000},
    "battery_density_over": {**SHOWCASE, "battery_density": 2001},
    "weights_consumer": {**SHOWCASE, "weights": [1, 1, 0.5, 0.3, 1, 1, 0.3]},
    "weights_short": {**SHOWCASE, "weights": [1, 2, 3]},
    "weights_long": {**SHOWCASE, "weights": [1] * 8},
    "weights_zero_entry": {**SHOWCASE, "weights": [0, 1, 1, 1, 1, 1, 1]},
    "weights_at_cap": {**SHOWCASE, "weights": [1000] * 7},
    "weights_over_cap": {**SHOWCASE, "weights": [1000.1] + [1] * 6},
    "top_n_one": {**SHOWCASE, "top_n": 1},
    "top_n_zero": {**SHOWCASE, "top_n": 0},
    "top_n_max": {**SHOWCASE, "top_n": 100},
    "top_n_over": {**SHOWCASE, "top_n": 101},
    "unknown_field": {**SHOWCASE, "bogus": 1},
    "layout_coaxial": {**SHOWCASE, "layout": "coaxial"},
    "layout_common": {**SHOWCASE, "layout": "common"},
    "layout_ring": {**SHOWCASE, "layout": "ring"},
    "tolerance_tight": {**SHOWCASE, "defaults": {"screening_tolerance": 0.001}},
    "tolerance_zero": {**SHOWCASE, "defaults": {"screening_tolerance": 0}},
    "tolerance_one": {**SHOWCASE, "defaults": {"screening_tolerance": 1.0}},
    "tolerance_over": {**SHOWCASE, "defaults": {"screening_tolerance": 1.5}},
    "margin_low": {**SHOWCASE, "defaults": {"battery_margin": 1.4}},
    "unknown_default_knob": {**SHOWCASE, "defaults": {"no_such_knob": 1}},
    "string_where_number": {**SHOWCASE, "hover_time": "seventeen"},
}


def main() -> int:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    app = create_app(ROOT / "src" / "copterdesign" / "data" / "mepdb.json")
    with TestClient(app) as client:
        def post(body):
            return client.post("/api/v1/design", json=body)

        def record(name, payload):
            path = FIXTURES / name
            path.write_text(json.dumps(payload, indent=1) + "\n")
            print(f"wrote {path.relative_to(ROOT)}")

        record("showcase_response.json", post(SHOWCASE).json())
        record(
            "showcase_consumer_response.json",
            post(VALIDATION_CASES["weights_consumer"]).json(),
        )
        record(
            "showcase_doubled_weights_response.json",
            post({**SHOWCASE, "weights": [2] * 7}).json(),
        )
        record(
            "infeasible_response.json",
            post(VALIDATION_CASES["hover_time_infeasible"]).json(),
        )
        record(
            "bad_request_response.json",
            post(VALIDATION_CASES["missing_payload"]).json(),
        )

        cases = []
        for name, body in VALIDATION_CASES.items():
            status = post(body).status_code
            assert status in (200, 400, 422), (name, status)
            cases.append(
                {
                    "name": name,
                    "body": body,
                    "service_status": status,
                    # 422 means the request itself was well-formed
                    "request_valid": status != 400,
                }
            )
        record("validation_cases.json", cases)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
