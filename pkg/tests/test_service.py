"""HTTP service endpoints, error mapping, and payload shapes."""

import json

import pytest
from fastapi.testclient import TestClient

from copterdesign.service import create_app, render_json

SHOWCASE_REQUEST = {
    "hover_time": 17.0,
    "payload": 0.5,
    "thrust_ratio": 0.55,
    "rotor_count": 4,
    "altitude": 50.0,
    "battery_density": 240.0,
}


@pytest.fixture(scope="module")
def client():
    from .conftest import PKG_DATA

    app = create_app(PKG_DATA / "mepdb.json")
    with TestClient(app) as c:
        yield c


class TestHealth:
    def test_healthz(self, client, shipped_db):
        r = client.get("/healthz")
        assert r.status_code == 200
        body = r.json()
        assert body["status"] == "ok"
        assert body["combinations"] == len(shipped_db)
        assert body["db_fingerprint"] == shipped_db.fingerprint
        assert isinstance(body["timing_ms"], float)


class TestDesignEndpoint:
    def test_showcase_request(self, client, shipped_db):
        r = client.post("/api/v1/design", json=SHOWCASE_REQUEST)
        assert r.status_code == 200
        body = r.json()
        assert body["considered"] == len(shipped_db)
        assert body["returned"] == 4
        assert body["db_fingerprint"] == shipped_db.fingerprint
        # altitude resolved through the atmosphere model
        assert body["air_density"] == pytest.approx(
            1.1789325283840228, rel=1e-12
        )
        best = body["candidates"][0]
        assert best["combo"] == {
            "motor_id": "ax-2212-920",
            "esc_id": "ax-esc30a",
            "prop_id": "ax-1147",
        }
        assert best["copter_mass"] == pytest.approx(
            1.4808708309463725, rel=1e-12
        )
        assert best["achieved_time"] == pytest.approx(
            17.03907775653408, rel=1e-12
        )
        assert best["battery"]["voltage"] == 11.1
        assert best["battery"]["capacity"] == pytest.approx(
            4616.332390628365, rel=1e-12
        )
        assert best["airframe"]["diameter"] == pytest.approx(
            0.4346443962597471, rel=1e-12
        )
        assert best["objective"] == pytest.approx(5.851157418952547, rel=1e-12)
        assert best["density_converted"] is True
        assert best["achieved_ratio"] == 0.55
        assert len(best["indexes"]) == 7
        assert isinstance(body["timing_ms"], float)

    def test_candidates_sorted_by_objective(self, client):
        r = client.post("/api/v1/design", json=SHOWCASE_REQUEST)
        objectives = [c["objective"] for c in r.json()["candidates"]]
        assert objectives == sorted(objectives)

    def test_density_instead_of_altitude(self, client):
        from copterdesign import physics

        req = dict(SHOWCASE_REQUEST)
        del req["altitude"]
        req["air_density"] = physics.air_density(50.0)
        r = client.post("/api/v1/design", json=req)
        assert r.status_code == 200
        assert r.json()["candidates"] == client.post(
            "/api/v1/design", json=SHOWCASE_REQUEST
        ).json()["candidates"]

    def test_top_n(self, client):
        r = client.post("/api/v1/design", json={**SHOWCASE_REQUEST, "top_n": 2})
        assert r.json()["returned"] == 2

    def test_both_density_and_altitude_rejected(self, client):
        req = {**SHOWCASE_REQUEST, "air_density": 1.1}
        r = client.post("/api/v1/design", json=req)
        assert r.status_code == 400
        err = r.json()["error"]
        assert err["code"] == "validation_error"
        assert any(
            "air_density" in d["message"] or "air_density" in d["field"]
            for d in err["details"]
        )

    def test_missing_field_rejected(self, client):
        req = dict(SHOWCASE_REQUEST)
        del req["payload"]
        r = client.post("/api/v1/design", json=req)
        assert r.status_code == 400
        err = r.json()["error"]
        assert err["code"] == "validation_error"
        assert any(d["field"] == "payload" for d in err["details"])

    def test_out_of_range_field_rejected(self, client):
        r = client.post(
            "/api/v1/design", json={**SHOWCASE_REQUEST, "thrust_ratio": 1.0}
        )
        assert r.status_code == 400
        assert r.json()["error"]["code"] == "validation_error"

    def test_unknown_field_rejected(self, client):
        r = client.post("/api/v1/design", json={**SHOWCASE_REQUEST, "bogus": 1})
        assert r.status_code == 400

    def test_bad_weights_rejected(self, client):
        r = client.post(
            "/api/v1/design", json={**SHOWCASE_REQUEST, "weights": [1, 2, 3]}
        )
        assert r.status_code == 400
        r = client.post(
            "/api/v1/design", json={**SHOWCASE_REQUEST, "weights": [0.0] + [1] * 6}
        )
        assert r.status_code == 400

    def test_weights_change_ranking_inputs(self, client):
        heavy_mass = {**SHOWCASE_REQUEST, "weights": [1, 1000, 1, 1, 1, 1, 1]}
        r = client.post("/api/v1/design", json=heavy_mass)
        assert r.status_code == 200
        masses = [c["copter_mass"] for c in r.json()["candidates"]]
        assert masses == sorted(masses)

    def test_defaults_override(self, client):
        req = {**SHOWCASE_REQUEST, "defaults": {"screening_tolerance": 0.001}}
        r = client.post("/api/v1/design", json=req)
        # the tight window rejects everything
        assert r.status_code == 422
        req = {**SHOWCASE_REQUEST, "defaults": {"no_such_knob": 1.0}}
        assert client.post("/api/v1/design", json=req).status_code == 400

    def test_infeasible_returns_diagnostics(self, client, shipped_db):
        r = client.post(
            "/api/v1/design", json={**SHOWCASE_REQUEST, "hover_time": 300.0}
        )
        assert r.status_code == 422
        err = r.json()["error"]
        assert err["code"] == "no_feasible_design"
        reasons = err["details"]["reasons"]
        assert sum(int(v.split()[0]) for v in reasons.values()) == len(
            shipped_db
        )
        assert "nearest_miss" in err["details"]
        assert "tolerance" in err["details"]["nearest_miss"]

    def test_coaxial_rejected(self, client):
        r = client.post(
            "/api/v1/design", json={**SHOWCASE_REQUEST, "layout": "coaxial"}
        )
        assert r.status_code == 400
        assert r.json()["error"]["code"] == "unsupported_layout"


class TestCombinationsEndpoint:
    def test_full_listing(self, client, shipped_db):
        r = client.get("/api/v1/combinations")
        assert r.status_code == 200
        body = r.json()
        assert body["total"] == len(shipped_db)
        assert len(body["combinations"]) == len(shipped_db)
        assert body["offset"] == 0 and body["limit"] == 50
        first = body["combinations"][0]
        assert first["key"] == shipped_db.combos[0].key()
        assert set(first["fit_coeffs"]) == {"k_t0", "k_t1", "k_t2"}
        assert first["source"] in ("experimental", "estimated")

    def test_pagination(self, client, shipped_db):
        r = client.get("/api/v1/combinations", params={"offset": 2, "limit": 3})
        body = r.json()
        assert len(body["combinations"]) == 3
        keys = [c["key"] for c in body["combinations"]]
        assert keys == [c.key() for c in shipped_db.combos[2:5]]
        beyond = client.get(
            "/api/v1/combinations", params={"offset": 100}
        ).json()
        assert beyond["combinations"] == []

    def test_bad_pagination_rejected(self, client):
        assert (
            client.get(
                "/api/v1/combinations", params={"offset": -1}
            ).status_code
            == 400
        )
        assert (
            client.get(
                "/api/v1/combinations", params={"limit": 0}
            ).status_code
            == 400
        )


class TestConvertEndpoint:
    def test_reference_density_identity(self, client):
        r = client.get(
            "/api/v1/convert",
            params={"combo": "tm-mn3508-380", "density": 1.2},
        )
        assert r.status_code == 200
        body = r.json()
        assert body["combo"] == "tm-mn3508-380+tm-esc40a+tm-1555"
        assert body["density_converted"] is False
        assert body["full_throttle_speed"] == pytest.approx(5900.0, rel=1e-12)
        assert body["full_throttle_thrust"] == pytest.approx(18.4, rel=1e-12)
        assert body["hover"] is None

    def test_thinner_air_frozen(self, client):
        r = client.get(
            "/api/v1/convert",
            params={
                "combo": "tm-mn3508-380",
                "density": 1.0,
                "hover_thrust": 9.2,
            },
        )
        body = r.json()
        assert body["density_converted"] is True
        assert body["full_throttle_speed"] == pytest.approx(
            6144.145739936144, rel=1e-12
        )
        assert body["full_throttle_thrust"] == pytest.approx(
            16.628595577750374, rel=1e-12
        )
        hover = body["hover"]
        assert hover["thrust"] == 9.2
        assert hover["speed"] == pytest.approx(4570.120348524752, rel=1e-12)
        assert hover["esc_current"] == pytest.approx(
            4.654381066487364, rel=1e-12
        )

    def test_full_key_lookup(self, client):
        r = client.get(
            "/api/v1/convert",
            params={
                "combo": "tm-mn3508-380+tm-esc40a+tm-1555",
                "density": 1.1,
            },
        )
        assert r.status_code == 200

    def test_unknown_combo_404(self, client):
        r = client.get(
            "/api/v1/convert", params={"combo": "nope", "density": 1.0}
        )
        assert r.status_code == 404
        assert r.json()["error"]["code"] == "unknown_combination"

    def test_bad_density_rejected(self, client):
        r = client.get(
            "/api/v1/convert",
            params={"combo": "tm-mn3508-380", "density": 2.0},
        )
        assert r.status_code == 400


class TestRenderJson:
    def test_compact_and_utf8(self):
        raw = render_json({"a": [1.5, 2], "s": "ok"})
        assert raw == b'{"a":[1.5,2],"s":"ok"}'
        assert json.loads(raw) == {"a": [1.5, 2], "s": "ok"}

    def test_nan_rejected(self):
        with pytest.raises(ValueError):
            render_json({"x": float("nan")})

    def test_response_body_is_rendered_payload(self, client):
        r = client.post("/api/v1/design", json=SHOWCASE_REQUEST)
        # the wire bytes are exactly render_json of the parsed payload
        assert render_json(r.json()) == r.content


class TestUiMount:
    def test_serves_page_and_assets_alongside_api(self, tmp_path):
        from .conftest import PKG_DATA

        (tmp_path / "index.html").write_text(
            "<!DOCTYPE html><title>explorer</title>ui-root"
        )
        (tmp_path / "app.js").write_text("export {};")
        app = create_app(PKG_DATA / "mepdb.json", ui_dir=tmp_path)
        with TestClient(app) as c:
            page = c.get("/")
            assert page.status_code == 200
            assert "ui-root" in page.text
            assert c.get("/app.js").status_code == 200
            # API routes are registered first and keep priority.
            health = c.get("/healthz")
            assert health.status_code == 200
            assert health.json()["status"] == "ok"
            design = c.post("/api/v1/design", json=SHOWCASE_REQUEST)
            assert design.status_code == 200

    def test_no_ui_dir_means_no_root_route(self, client):
        assert client.get("/").status_code == 404
