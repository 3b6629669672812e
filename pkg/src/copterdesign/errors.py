"""Exception types shared across the package.

Catalog errors cover file ingestion problems; domain errors cover physics
preconditions; the designer errors carry enough context for the CLI and
service layers to build useful diagnostics without re-deriving anything.
"""

from __future__ import annotations


class CopterDesignError(Exception):
    """Base class for everything raised on purpose by this package."""

    code = "error"


class CatalogError(CopterDesignError):
    """Problem ingesting or persisting a catalog or database file."""

    code = "catalog_error"


class CatalogParseError(CatalogError):
    code = "parse_error"


class CatalogValidationError(CatalogError):
    """A record violates a type invariant.

    Carries the offending record id (or index when the id itself is bad)
    and the field name so callers can point at the exact spot in the file.
    """

    code = "validation_error"

    def __init__(self, record: str, field: str, message: str):
        self.record = record
        self.field = field
        super().__init__(f"record {record!r}, field {field!r}: {message}")


class DuplicateIdError(CatalogError):
    code = "duplicate_id"


class SchemaVersionError(CatalogError):
    code = "schema_version_mismatch"


class DomainError(CopterDesignError, ValueError):
    """Input outside the validity region of a physical model."""

    code = "domain_error"


class FitError(DomainError):
    """Thrust-current fitting failed (too few or degenerate samples)."""

    code = "fit_error"


class BatteryInfeasibleError(DomainError):
    """Mass budget leaves no room for a battery (combo too small)."""

    code = "battery_infeasible"


class UnsupportedLayoutError(DomainError):
    code = "unsupported_layout"


class UnresolvedNormalizerError(DomainError):
    """No normalizer set resolves for the candidate's mass class."""

    code = "unresolved_normalizer"


class NoFeasibleDesignError(CopterDesignError):
    """Screening rejected every combination in the database.

    ``reasons`` maps combo key -> rejection reason; ``nearest_miss``
    describes the best rejected candidate for diagnostics.
    """

    code = "no_feasible_design"

    def __init__(self, reasons: dict[str, str], nearest_miss: str | None = None):
        self.reasons = reasons
        self.nearest_miss = nearest_miss
        detail = f" ({nearest_miss})" if nearest_miss else ""
        super().__init__(
            f"no combination satisfies the requirements; "
            f"{len(reasons)} rejected{detail}"
        )
