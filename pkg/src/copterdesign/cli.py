"""Command line front end.

Three subcommands: `build-db` runs the offline optimizer over component
catalogs, `design` queries a built database, `serve` starts the HTTP
service. `design --format json` emits exactly the service response body
(minus the timing field) so scripts can switch between the two surfaces
without reparsing.

Exit codes: 0 success; 1 usage or input-file problems; 2 build produced
an empty database; 3 no feasible design.
"""

from __future__ import annotations

import argparse
import os
import sys

from pydantic import ValidationError

from . import offline
from .catalog import (
    load_catalog,
    load_compatibility,
    load_database,
    save_database,
)
from .errors import CopterDesignError, NoFeasibleDesignError
from .schemas import DesignRequest
from .service import build_design_payload, create_app, render_json

DB_ENV_VAR = "COPTERDESIGN_DB"


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags; this tool reserves 2 for empty builds
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="copterdesign",
        description="Multicopter propulsion-system design optimizer.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser(
        "build-db",
        help="optimize component catalogs into a combination database",
    )
    b.add_argument("--motors", required=True, help="motors catalog JSON")
    b.add_argument("--escs", required=True, help="ESC catalog JSON")
    b.add_argument("--props", required=True, help="propeller catalog JSON")
    b.add_argument("--compat", required=True, help="compatibility table JSON")
    b.add_argument(
        "--measurements", required=True, help="bench measurement table JSON"
    )
    b.add_argument("-o", "--output", required=True, help="database file to write")
    b.add_argument(
        "--legacy-mass-units",
        action="store_true",
        help="treat catalog masses above 10 as grams",
    )

    d = sub.add_parser("design", help="query a combination database")
    d.add_argument(
        "--db",
        default=os.environ.get(DB_ENV_VAR),
        help=f"database file (default: ${DB_ENV_VAR})",
    )
    d.add_argument("--time", required=True, type=float, help="hover time, minutes")
    d.add_argument("--payload", required=True, type=float, help="payload, kg")
    d.add_argument(
        "--thrust-ratio", required=True, type=float, help="hover thrust ratio"
    )
    d.add_argument("--rotors", required=True, type=int, help="rotor count")
    alt = d.add_mutually_exclusive_group(required=True)
    alt.add_argument("--altitude", type=float, help="site altitude, m")
    alt.add_argument("--density", type=float, help="site air density, kg/m^3")
    d.add_argument(
        "--battery-density",
        required=True,
        type=float,
        help="battery energy density, Wh/kg",
    )
    d.add_argument("--top", type=int, default=8, help="candidates to return")
    d.add_argument(
        "--mode",
        choices=("time", "payload", "ratio"),
        default="time",
        help="which requirement may float within tolerance",
    )
    d.add_argument(
        "--weights",
        help="seven comma-separated objective weights",
    )
    d.add_argument("--format", choices=("table", "json"), default="table")

    s = sub.add_parser("serve", help="run the HTTP service")
    s.add_argument(
        "--db",
        default=os.environ.get(DB_ENV_VAR),
        help=f"database file (default: ${DB_ENV_VAR})",
    )
    s.add_argument("--port", type=int, default=8000)
    s.add_argument("--host", default="127.0.0.1")
    s.add_argument(
        "--ui",
        metavar="DIR",
        help="also serve the browser explorer from this directory",
    )

    return parser


def _cmd_build_db(args) -> int:
    try:
        motors = load_catalog(
            args.motors, "motor", legacy_mass_units=args.legacy_mass_units
        )
        escs = load_catalog(
            args.escs, "esc", legacy_mass_units=args.legacy_mass_units
        )
        props = load_catalog(
            args.props, "prop", legacy_mass_units=args.legacy_mass_units
        )
        table = load_compatibility(args.compat)
        measure = offline.TableMeasurementProvider.from_file(
            args.measurements, legacy_mass_units=args.legacy_mass_units
        )
    except (CopterDesignError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    result = offline.build_database(motors, escs, props, table, measure)
    for combo, source in zip(
        result.database.combos, result.database.provenance
    ):
        print(
            f"{combo.motor_id}: {combo.esc_id} + {combo.prop_id} "
            f"({combo.full_throttle_thrust:.2f} N, "
            f"{combo.full_throttle_current:.2f} A, "
            f"{combo.mass * 1000:.0f} g, {source})"
        )
    for motor_id, reason in result.skipped.items():
        print(f"{motor_id}: skipped: {reason}")

    if len(result.database) == 0:
        print("no feasible combinations; database not written", file=sys.stderr)
        return 2
    try:
        save_database(result.database, args.output)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {len(result.database)} combinations to {args.output}")
    return 0


def _parse_weights(raw: str):
    parts = [p.strip() for p in raw.split(",")]
    if len(parts) != 7:
        raise ValueError("expected 7 comma-separated weights")
    return tuple(float(p) for p in parts)


def _cmd_design(args) -> int:
    if not args.db:
        print(
            f"error: --db is required (or set ${DB_ENV_VAR})", file=sys.stderr
        )
        return 1
    try:
        db = load_database(args.db)
    except (CopterDesignError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    try:
        weights = _parse_weights(args.weights) if args.weights else None
        request = DesignRequest(
            hover_time=args.time,
            payload=args.payload,
            thrust_ratio=args.thrust_ratio,
            rotor_count=args.rotors,
            air_density=args.density,
            altitude=args.altitude,
            battery_density=args.battery_density,
            screening_mode=args.mode,
            top_n=args.top,
            weights=weights,
        )
    except (ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    try:
        payload = build_design_payload(db, request)
    except NoFeasibleDesignError as exc:
        print(f"error: {exc}", file=sys.stderr)
        for reason, count in sorted(exc.reasons.items()):
            print(f"  {reason}: {count}", file=sys.stderr)
        if exc.nearest_miss:
            print(f"  nearest miss: {exc.nearest_miss}", file=sys.stderr)
        return 3
    except CopterDesignError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    if args.format == "json":
        sys.stdout.buffer.write(render_json(payload))
        sys.stdout.buffer.write(b"\n")
        return 0

    print(
        f"{'#':>2}  {'combination':40} {'mass kg':>8} {'diam m':>7} "
        f"{'battery':>16} {'time min':>9} {'J':>8}"
    )
    for rank, c in enumerate(payload["candidates"], start=1):
        combo = c["combo"]
        name = f"{combo['motor_id']}+{combo['esc_id']}+{combo['prop_id']}"
        battery = f"{c['battery']['voltage']:.1f}V {c['battery']['capacity']:.0f}mAh"
        print(
            f"{rank:>2}  {name:40} {c['copter_mass']:>8.3f} "
            f"{c['airframe']['diameter']:>7.3f} {battery:>16} "
            f"{c['achieved_time']:>9.2f} {c['objective']:>8.4f}"
        )
    return 0


def _cmd_serve(args) -> int:
    if not args.db:
        print(
            f"error: --db is required (or set ${DB_ENV_VAR})", file=sys.stderr
        )
        return 1
    try:
        db = load_database(args.db)
    except (CopterDesignError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.ui is not None and not os.path.isfile(
        os.path.join(args.ui, "index.html")
    ):
        print(f"error: no index.html under {args.ui}", file=sys.stderr)
        return 1
    import uvicorn

    uvicorn.run(create_app(db, ui_dir=args.ui), host=args.host, port=args.port)
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "build-db":
        return _cmd_build_db(args)
    if args.command == "design":
        return _cmd_design(args)
    return _cmd_serve(args)


if __name__ == "__main__":
    sys.exit(main())
