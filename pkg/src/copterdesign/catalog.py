"""Component catalogs and the propulsion-combination database.

Three catalog kinds (motors, ESCs, propellers) are ingested from JSON
arrays, validated record by record, and kept immutable afterwards. The
combination database produced by the offline optimizer is persisted to a
versioned JSON file and round-trips losslessly.

File formats are documented in docs/schemas.md; all field names are
snake_case and match the dataclass fields below one for one.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any

from .errors import (
    CatalogParseError,
    CatalogValidationError,
    DuplicateIdError,
    SchemaVersionError,
)

SCHEMA_VERSION = "1"

# Mass fields larger than this are assumed to be grams when a loader is
# invoked with legacy_mass_units=True. Never applied silently.
LEGACY_MASS_THRESHOLD_KG = 10.0

COMPAT_POLICIES = ("deny-unlisted", "allow-same-manufacturer")
COMBO_SOURCES = ("experimental", "estimated")


@dataclass(frozen=True, slots=True)
class MotorSpec:
    """Brushless motor data sheet entry."""

    id: str
    name: str
    kv: float                # speed constant, RPM/V
    no_load_voltage: float   # V, test voltage for the no-load figures
    no_load_current: float   # A at no_load_voltage
    resistance: float        # ohm, winding resistance
    max_current: float       # A, continuous limit
    max_voltage: float       # V
    mass: float              # kg


@dataclass(frozen=True, slots=True)
class EscSpec:
    """Electronic speed controller data sheet entry."""

    id: str
    name: str
    max_current: float   # A, continuous limit
    max_voltage: float   # V
    efficiency: float    # energy conversion efficiency, (0, 1]
    mass: float          # kg


@dataclass(frozen=True, slots=True)
class PropSpec:
    """Propeller data sheet entry.

    thrust_coeff / torque_coeff are the dimensionless coefficients of the
    square-law thrust and torque models; they are optional because most
    manufacturer listings omit them (the offline optimizer only needs them
    for the physics-estimation measurement provider).
    """

    id: str
    name: str
    diameter: float              # m
    pitch: float                 # m
    mass: float                  # kg
    thrust_coeff: float | None = None
    torque_coeff: float | None = None


@dataclass(frozen=True, slots=True)
class CompatibilityTable:
    """Allowed motor/ESC/propeller pairings.

    entries hold (motor, esc, prop) id patterns where "*" matches any id.
    When no entry matches, default_policy decides: "deny-unlisted" refuses
    the triple, "allow-same-manufacturer" accepts it when all three ids
    share the manufacturer prefix (the id text before the first hyphen).
    """

    default_policy: str
    entries: tuple[tuple[str, str, str], ...]


@dataclass(frozen=True, slots=True)
class PropulsionCombo:
    """One optimized motor+ESC+propeller record with its measured data.

    All full-throttle figures are at ref_air_density. fit_coeffs are the
    (k_t0, k_t1, k_t2) coefficients of the thrust-to-current polynomial
    I_e = k_t2*T^2 + k_t1*T + k_t0 fitted at the same density.
    """

    motor_id: str
    esc_id: str
    prop_id: str
    battery_voltage: float       # V
    prop_diameter: float         # m
    kv: float                    # RPM/V
    mass: float                  # kg, motor + ESC + propeller together
    full_throttle_thrust: float  # N
    full_throttle_speed: float   # RPM
    full_throttle_current: float # A, ESC input
    motor_max_current: float     # A
    ref_air_density: float       # kg/m^3
    fit_coeffs: tuple[float, float, float]  # (k_t0, k_t1, k_t2)

    def key(self) -> str:
        return f"{self.motor_id}+{self.esc_id}+{self.prop_id}"

    def fit_current(self, thrust: float) -> float:
        """Polynomial ESC current at `thrust`, clamped below at 0 A."""
        k_t0, k_t1, k_t2 = self.fit_coeffs
        value = k_t2 * thrust * thrust + k_t1 * thrust + k_t0
        return value if value > 0.0 else 0.0


class ComboDatabase:
    """Immutable, ordered collection of PropulsionCombo records.

    provenance runs parallel to combos and tags each record as
    "experimental" or "estimated". Equality covers every field so the
    persistence round-trip test can compare whole databases directly.
    """

    __slots__ = ("combos", "provenance", "schema_version", "_fingerprint")

    def __init__(
        self,
        combos: tuple[PropulsionCombo, ...] | list[PropulsionCombo],
        provenance: tuple[str, ...] | list[str],
        schema_version: str = SCHEMA_VERSION,
    ):
        combos = tuple(combos)
        provenance = tuple(provenance)
        if len(provenance) != len(combos):
            raise CatalogValidationError(
                "database", "provenance", "one source tag per combo required"
            )
        for tag in provenance:
            if tag not in COMBO_SOURCES:
                raise CatalogValidationError(
                    "database", "provenance", f"unknown source tag {tag!r}"
                )
        seen: set[tuple[str, str, str]] = set()
        for combo in combos:
            triple = (combo.motor_id, combo.esc_id, combo.prop_id)
            if triple in seen:
                raise DuplicateIdError(f"duplicate combo {'+'.join(triple)}")
            seen.add(triple)
        self.combos = combos
        self.provenance = provenance
        self.schema_version = schema_version
        self._fingerprint: str | None = None

    def __len__(self) -> int:
        return len(self.combos)

    def __iter__(self):
        return iter(self.combos)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ComboDatabase):
            return NotImplemented
        return (
            self.schema_version == other.schema_version
            and self.combos == other.combos
            and self.provenance == other.provenance
        )

    def __hash__(self):
        return hash((self.schema_version, self.combos, self.provenance))

    def find(self, key: str) -> PropulsionCombo | None:
        """Look up a combo by its full key or by a unique motor_id."""
        matches = [c for c in self.combos if c.key() == key]
        if not matches:
            matches = [c for c in self.combos if c.motor_id == key]
        if len(matches) == 1:
            return matches[0]
        return None

    @property
    def fingerprint(self) -> str:
        """Stable content hash of the database, for health checks."""
        if self._fingerprint is None:
            canonical = json.dumps(
                _database_payload(self), sort_keys=True, separators=(",", ":")
            )
            digest = hashlib.sha256(canonical.encode()).hexdigest()
            self._fingerprint = f"sha256:{digest[:16]}"
        return self._fingerprint


# ---------------------------------------------------------------------------
# record validation

def _require_str(record: str, field: str, value: Any) -> str:
    if not isinstance(value, str) or not value:
        raise CatalogValidationError(record, field, "nonempty string required")
    return value


def _require_number(record: str, field: str, value: Any) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise CatalogValidationError(record, field, "number required")
    value = float(value)
    if value != value or value in (float("inf"), float("-inf")):
        raise CatalogValidationError(record, field, "finite number required")
    return value


def _require_positive(record: str, field: str, value: Any) -> float:
    value = _require_number(record, field, value)
    if value <= 0:
        raise CatalogValidationError(record, field, "must be > 0")
    return value


def _require_nonnegative(record: str, field: str, value: Any) -> float:
    value = _require_number(record, field, value)
    if value < 0:
        raise CatalogValidationError(record, field, "must be >= 0")
    return value


def _maybe_legacy_mass(value: float, legacy_mass_units: bool) -> float:
    # Grams heuristic: catalog masses above 10 "kg" are really grams in
    # legacy files. Only applied when explicitly requested.
    if legacy_mass_units and value > LEGACY_MASS_THRESHOLD_KG:
        return value / 1000.0
    return value


def _get(record: str, obj: dict, field: str) -> Any:
    if field not in obj:
        raise CatalogValidationError(record, field, "missing field")
    return obj[field]


def _motor_from_json(obj: dict, idx: int, legacy: bool) -> MotorSpec:
    rid = obj.get("id") if isinstance(obj.get("id"), str) else f"#{idx}"
    return MotorSpec(
        id=_require_str(rid, "id", _get(rid, obj, "id")),
        name=_require_str(rid, "name", _get(rid, obj, "name")),
        kv=_require_positive(rid, "kv", _get(rid, obj, "kv")),
        no_load_voltage=_require_positive(
            rid, "no_load_voltage", _get(rid, obj, "no_load_voltage")
        ),
        no_load_current=_require_nonnegative(
            rid, "no_load_current", _get(rid, obj, "no_load_current")
        ),
        resistance=_require_nonnegative(
            rid, "resistance", _get(rid, obj, "resistance")
        ),
        max_current=_require_positive(
            rid, "max_current", _get(rid, obj, "max_current")
        ),
        max_voltage=_require_positive(
            rid, "max_voltage", _get(rid, obj, "max_voltage")
        ),
        mass=_maybe_legacy_mass(
            _require_positive(rid, "mass", _get(rid, obj, "mass")), legacy
        ),
    )


def _esc_from_json(obj: dict, idx: int, legacy: bool) -> EscSpec:
    rid = obj.get("id") if isinstance(obj.get("id"), str) else f"#{idx}"
    efficiency = _require_positive(rid, "efficiency", _get(rid, obj, "efficiency"))
    if efficiency > 1:
        raise CatalogValidationError(rid, "efficiency", "must be in (0, 1]")
    return EscSpec(
        id=_require_str(rid, "id", _get(rid, obj, "id")),
        name=_require_str(rid, "name", _get(rid, obj, "name")),
        max_current=_require_positive(
            rid, "max_current", _get(rid, obj, "max_current")
        ),
        max_voltage=_require_positive(
            rid, "max_voltage", _get(rid, obj, "max_voltage")
        ),
        efficiency=efficiency,
        mass=_maybe_legacy_mass(
            _require_nonnegative(rid, "mass", _get(rid, obj, "mass")), legacy
        ),
    )


def _prop_from_json(obj: dict, idx: int, legacy: bool) -> PropSpec:
    rid = obj.get("id") if isinstance(obj.get("id"), str) else f"#{idx}"
    coeffs: dict[str, float | None] = {}
    for field in ("thrust_coeff", "torque_coeff"):
        if obj.get(field) is None:
            coeffs[field] = None
        else:
            coeffs[field] = _require_positive(rid, field, obj[field])
    return PropSpec(
        id=_require_str(rid, "id", _get(rid, obj, "id")),
        name=_require_str(rid, "name", _get(rid, obj, "name")),
        diameter=_require_positive(rid, "diameter", _get(rid, obj, "diameter")),
        pitch=_require_positive(rid, "pitch", _get(rid, obj, "pitch")),
        mass=_maybe_legacy_mass(
            _require_nonnegative(rid, "mass", _get(rid, obj, "mass")), legacy
        ),
        thrust_coeff=coeffs["thrust_coeff"],
        torque_coeff=coeffs["torque_coeff"],
    )


_LOADERS = {"motor": _motor_from_json, "esc": _esc_from_json, "prop": _prop_from_json}


def _read_json(path: str | Path) -> Any:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise CatalogParseError(f"{path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CatalogParseError(f"{path}: invalid JSON: {exc}") from exc


def load_catalog(path: str | Path, kind: str, *, legacy_mass_units: bool = False):
    """Load and validate one catalog file.

    Args:
        path: JSON file holding a top-level array of records.
        kind: "motor", "esc" or "prop".
        legacy_mass_units: treat mass values > 10 as grams and convert.

    Returns:
        List of validated spec dataclasses, file order preserved.

    Raises:
        CatalogParseError, CatalogValidationError, DuplicateIdError.
    """
    if kind not in _LOADERS:
        raise ValueError(f"unknown catalog kind {kind!r}")
    data = _read_json(path)
    if not isinstance(data, list):
        raise CatalogParseError(f"{path}: expected a top-level array")
    loader = _LOADERS[kind]
    specs = []
    seen: set[str] = set()
    for idx, obj in enumerate(data):
        if not isinstance(obj, dict):
            raise CatalogParseError(f"{path}: record #{idx} is not an object")
        spec = loader(obj, idx, legacy_mass_units)
        if spec.id in seen:
            raise DuplicateIdError(f"{path}: duplicate id {spec.id!r}")
        seen.add(spec.id)
        specs.append(spec)
    return specs


def load_compatibility(path: str | Path) -> CompatibilityTable:
    """Load the pairing table: {"default_policy": ..., "entries": [...]}."""
    data = _read_json(path)
    if not isinstance(data, dict):
        raise CatalogParseError(f"{path}: expected a top-level object")
    policy = data.get("default_policy")
    if policy not in COMPAT_POLICIES:
        raise CatalogValidationError(
            "compat", "default_policy", f"must be one of {COMPAT_POLICIES}"
        )
    raw_entries = data.get("entries", [])
    if not isinstance(raw_entries, list):
        raise CatalogValidationError("compat", "entries", "array required")
    entries = []
    for idx, obj in enumerate(raw_entries):
        if not isinstance(obj, dict):
            raise CatalogParseError(f"{path}: entry #{idx} is not an object")
        rid = f"entry#{idx}"
        entries.append(
            (
                _require_str(rid, "motor", _get(rid, obj, "motor")),
                _require_str(rid, "esc", _get(rid, obj, "esc")),
                _require_str(rid, "prop", _get(rid, obj, "prop")),
            )
        )
    return CompatibilityTable(default_policy=policy, entries=tuple(entries))


def manufacturer(component_id: str) -> str:
    """Manufacturer convention: id text before the first hyphen."""
    return component_id.split("-", 1)[0]


def check_compatibility(
    table: CompatibilityTable, m: MotorSpec, e: EscSpec, p: PropSpec
) -> bool:
    """True when the motor/ESC/prop triple may be paired.

    Pure function: listed entries (with "*" wildcards) win; otherwise the
    table's default policy decides.
    """
    for motor_pat, esc_pat, prop_pat in table.entries:
        if (
            motor_pat in ("*", m.id)
            and esc_pat in ("*", e.id)
            and prop_pat in ("*", p.id)
        ):
            return True
    if table.default_policy == "allow-same-manufacturer":
        return manufacturer(m.id) == manufacturer(e.id) == manufacturer(p.id)
    return False


# ---------------------------------------------------------------------------
# combination database persistence

def validate_combo(combo: PropulsionCombo) -> None:
    """Reject combo records with impossible or self-contradictory values."""
    rid = combo.key()
    for field in (
        "battery_voltage",
        "prop_diameter",
        "kv",
        "mass",
        "full_throttle_thrust",
        "full_throttle_speed",
        "full_throttle_current",
        "motor_max_current",
    ):
        _require_positive(rid, field, getattr(combo, field))
    rho = _require_number(rid, "ref_air_density", combo.ref_air_density)
    if not 0.3 < rho < 1.5:
        raise CatalogValidationError(
            rid, "ref_air_density", "must be within (0.3, 1.5) kg/m^3"
        )
    if combo.full_throttle_current > combo.motor_max_current:
        raise CatalogValidationError(
            rid, "full_throttle_current", "exceeds motor_max_current"
        )
    # The stored polynomial must reproduce the measured full-throttle
    # current; a larger gap means the fit and the record disagree.
    predicted = combo.fit_current(combo.full_throttle_thrust)
    if abs(predicted - combo.full_throttle_current) > 0.1 * combo.full_throttle_current:
        raise CatalogValidationError(
            rid,
            "fit_coeffs",
            f"polynomial gives {predicted:.3f} A at full throttle, "
            f"more than 10% away from {combo.full_throttle_current:.3f} A",
        )


def _combo_from_json(obj: dict, idx: int, legacy: bool) -> tuple[PropulsionCombo, str]:
    rid = obj.get("motor_id") if isinstance(obj.get("motor_id"), str) else f"#{idx}"
    coeffs = _get(rid, obj, "fit_coeffs")
    if not isinstance(coeffs, dict):
        raise CatalogValidationError(rid, "fit_coeffs", "object required")
    fit = tuple(
        _require_number(rid, f"fit_coeffs.{k}", _get(rid, coeffs, k))
        for k in ("k_t0", "k_t1", "k_t2")
    )
    source = _get(rid, obj, "source")
    if source not in COMBO_SOURCES:
        raise CatalogValidationError(
            rid, "source", f"must be one of {COMBO_SOURCES}"
        )
    combo = PropulsionCombo(
        motor_id=_require_str(rid, "motor_id", _get(rid, obj, "motor_id")),
        esc_id=_require_str(rid, "esc_id", _get(rid, obj, "esc_id")),
        prop_id=_require_str(rid, "prop_id", _get(rid, obj, "prop_id")),
        battery_voltage=_require_number(
            rid, "battery_voltage", _get(rid, obj, "battery_voltage")
        ),
        prop_diameter=_require_number(
            rid, "prop_diameter", _get(rid, obj, "prop_diameter")
        ),
        kv=_require_number(rid, "kv", _get(rid, obj, "kv")),
        mass=_maybe_legacy_mass(
            _require_number(rid, "mass", _get(rid, obj, "mass")), legacy
        ),
        full_throttle_thrust=_require_number(
            rid, "full_throttle_thrust", _get(rid, obj, "full_throttle_thrust")
        ),
        full_throttle_speed=_require_number(
            rid, "full_throttle_speed", _get(rid, obj, "full_throttle_speed")
        ),
        full_throttle_current=_require_number(
            rid, "full_throttle_current", _get(rid, obj, "full_throttle_current")
        ),
        motor_max_current=_require_number(
            rid, "motor_max_current", _get(rid, obj, "motor_max_current")
        ),
        ref_air_density=_require_number(
            rid, "ref_air_density", _get(rid, obj, "ref_air_density")
        ),
        fit_coeffs=fit,  # type: ignore[arg-type]
    )
    validate_combo(combo)
    return combo, source


def _combo_payload(combo: PropulsionCombo, source: str) -> dict:
    payload: dict[str, Any] = {}
    for f in fields(PropulsionCombo):
        payload[f.name] = getattr(combo, f.name)
    k_t0, k_t1, k_t2 = combo.fit_coeffs
    payload["fit_coeffs"] = {"k_t0": k_t0, "k_t1": k_t1, "k_t2": k_t2}
    payload["source"] = source
    return payload


def _database_payload(db: ComboDatabase) -> dict:
    return {
        "schema_version": db.schema_version,
        "combos": [
            _combo_payload(combo, source)
            for combo, source in zip(db.combos, db.provenance)
        ],
    }


def save_database(db: ComboDatabase, path: str | Path) -> None:
    """Write the database as versioned JSON (round-trip lossless)."""
    Path(path).write_text(json.dumps(_database_payload(db), indent=2) + "\n")


def load_database(path: str | Path, *, legacy_mass_units: bool = False) -> ComboDatabase:
    """Load a combination database written by save_database.

    Rejects unknown schema versions and any combo violating its
    invariants; ordering is preserved from the file.
    """
    data = _read_json(path)
    if not isinstance(data, dict):
        raise CatalogParseError(f"{path}: expected a top-level object")
    version = data.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaVersionError(
            f"{path}: schema_version {version!r}, expected {SCHEMA_VERSION!r}"
        )
    raw = data.get("combos")
    if not isinstance(raw, list):
        raise CatalogParseError(f"{path}: combos must be an array")
    combos = []
    provenance = []
    for idx, obj in enumerate(raw):
        if not isinstance(obj, dict):
            raise CatalogParseError(f"{path}: combo #{idx} is not an object")
        combo, source = _combo_from_json(obj, idx, legacy_mass_units)
        combos.append(combo)
        provenance.append(source)
    return ComboDatabase(combos, provenance, schema_version=version)
