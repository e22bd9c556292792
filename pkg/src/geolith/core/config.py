"""Configuration ingestion and serialization.

Municipality and technology-catalog documents are UTF-8 JSON with a
``schema_version`` field; time series live in sibling CSV files with a
``hour,value`` header and one row per hour. ``load``/``save`` round-trip all
numeric fields bit-exactly.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Mapping

import numpy as np

from geolith.core.types import (
    COMMODITIES,
    DleParams,
    GeoBasinProfile,
    GeothermalSiteParams,
    Municipality,
    TechnologySpec,
    TimeSeries,
)
from geolith.errors import ConfigError

SCHEMA_VERSION = 1

_DATA_DIR = Path(__file__).resolve().parent.parent / "data"

_TECH_FIELDS = {
    "kind": str,
    "output": str,
    "input_shares": dict,
    "efficiency": (int, float),
    "capex_per_unit": (int, float),
    "fixed_opex_share": (int, float),
    "variable_opex": (int, float),
    "economic_lifetime": (int, float),
    "capacity_min": (int, float),
    "capacity_existing": (int, float),
    "capacity_max": (int, float),
    "availability_profile": str,
    "charge_efficiency": (int, float),
    "discharge_efficiency": (int, float),
    "self_discharge_per_hour": (int, float),
    "hours_to_power": (int, float),
}

_SITE_FIELDS = {
    "flow_rate": (int, float),
    "brine_density": (int, float),
    "brine_heat_capacity": (int, float),
    "min_injection_temperature": (int, float),
    "max_depth": (int, float),
    "depth_step": (int, float),
    "well_distance": (int, float),
    "second_well_cost_factor": (int, float),
    "li_concentration": (int, float),
    "wellhead_temperature_cap": (int, float),
    "basin": dict,
}

_DLE_FIELDS = {
    "capex": (int, float),
    "opex_per_tonne": (int, float),
    "extraction_efficiency": (int, float),
    "carbonate_price": (int, float),
    "li_to_carbonate_factor": (int, float),
}


def bundled_catalog_path() -> Path:
    """Path of the technology catalog shipped with the package."""
    return _DATA_DIR / "catalog.json"


def bundled_municipality_path() -> Path:
    """Path of the bundled Bruchsal-like example municipality."""
    return _DATA_DIR / "bruchsal_like" / "bruchsal_like.json"


def _read_json(path: Path) -> dict:
    if not path.exists():
        raise ConfigError("file not found", location=str(path))
    try:
        with open(path, "r", encoding="utf-8") as handle:
            doc = json.load(handle)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}", location=str(path)) from exc
    if not isinstance(doc, dict):
        raise ConfigError("top-level document must be an object", location=str(path))
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ConfigError(
            f"unsupported schema_version {version!r} (expected {SCHEMA_VERSION})",
            field="schema_version",
            location=str(path),
        )
    return doc


def _require(doc: Mapping, field: str, types, location: str):
    if field not in doc:
        raise ConfigError("missing required field", field=field, location=location)
    value = doc[field]
    if types is not None and not isinstance(value, types):
        raise ConfigError(
            f"wrong type: expected {types}, got {type(value).__name__}",
            field=field,
            location=location,
        )
    return value


def _check_fields(doc: Mapping, allowed: Mapping[str, object], location: str):
    for key, value in doc.items():
        if key in ("schema_version", "name", "comment", "note"):
            continue
        if key not in allowed:
            raise ConfigError("unknown field", field=key, location=location)
        expected = allowed[key]
        if value is not None and not isinstance(value, expected):  # type: ignore[arg-type]
            raise ConfigError(
                f"wrong type: expected {expected}, got {type(value).__name__}",
                field=key,
                location=location,
            )


def read_series_csv(path: Path, unit: str = "kW", kind: str = "other") -> TimeSeries:
    """Read one ``hour,value`` CSV into a :class:`TimeSeries`."""
    if not path.exists():
        raise ConfigError("missing time series file", location=str(path))
    values = []
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None or [c.strip() for c in header[:2]] != ["hour", "value"]:
            raise ConfigError(
                "time series CSV must start with a 'hour,value' header",
                location=str(path),
            )
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                hour = int(row[0])
                value = float(row[1])
            except (ValueError, IndexError) as exc:
                raise ConfigError(
                    f"unparseable row: {row}",
                    field=f"row {line_no}",
                    location=str(path),
                ) from exc
            if hour != len(values):
                raise ConfigError(
                    f"hours must be contiguous from 0; got {hour} at position {len(values)}",
                    field=f"row {line_no}",
                    location=str(path),
                )
            values.append(value)
    return TimeSeries(np.asarray(values, dtype=float), unit=unit, kind=kind)


def write_series_csv(path: Path, series: TimeSeries) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["hour", "value"])
        for hour, value in enumerate(series.values):
            writer.writerow([hour, repr(float(value))])


def load_catalog(path: str | Path | None = None) -> dict[str, TechnologySpec]:
    """Load a technology catalog document; defaults to the bundled one."""
    path = Path(path) if path is not None else bundled_catalog_path()
    doc = _read_json(path)
    technologies = _require(doc, "technologies", dict, str(path))
    catalog: dict[str, TechnologySpec] = {}
    for name, entry in technologies.items():
        if not isinstance(entry, dict):
            raise ConfigError("technology entry must be an object", field=name, location=str(path))
        _check_fields(entry, _TECH_FIELDS, f"{path}#technologies.{name}")
        kwargs = dict(entry)
        kwargs.pop("comment", None)
        if "capacity_max" in kwargs and kwargs["capacity_max"] is None:
            kwargs["capacity_max"] = math.inf
        catalog[name] = TechnologySpec(name=name, **kwargs)
    return catalog


def _basin_from_doc(doc: Mapping, location: str) -> GeoBasinProfile:
    surface = _require(doc, "surface_temperature", (int, float), location)
    layers = _require(doc, "layers", list, location)
    parsed = []
    for i, layer in enumerate(layers):
        if (
            not isinstance(layer, (list, tuple))
            or len(layer) != 2
            or not all(isinstance(x, (int, float)) for x in layer)
        ):
            raise ConfigError(
                "basin layer must be [depth_upper_bound_m, gradient_degC_per_km]",
                field=f"layers[{i}]",
                location=location,
            )
        parsed.append((float(layer[0]), float(layer[1])))
    return GeoBasinProfile(surface_temperature=float(surface), layers=tuple(parsed))


def load_municipality(
    path: str | Path, catalog: dict[str, TechnologySpec] | None = None
) -> Municipality:
    """Load and fully validate one municipality configuration.

    Time series CSV paths and a ``catalog`` path inside the document are
    resolved relative to the document's directory. An explicitly passed
    ``catalog`` wins over both.
    """
    path = Path(path)
    doc = _read_json(path)
    base = path.parent
    location = str(path)

    name = _require(doc, "name", str, location)

    if catalog is None:
        catalog_ref = doc.get("catalog")
        if catalog_ref in (None, "bundled"):
            catalog = load_catalog()
        else:
            catalog = load_catalog(base / catalog_ref)

    demand_doc = _require(doc, "demand", dict, location)
    demand: dict[str, TimeSeries] = {}
    for commodity, csv_ref in demand_doc.items():
        if commodity not in COMMODITIES:
            raise ConfigError(
                f"unknown commodity (known: {', '.join(COMMODITIES)})",
                field=f"demand.{commodity}",
                location=location,
            )
        demand[commodity] = read_series_csv(base / csv_ref, unit="kW", kind="demand")
    lengths = {len(ts) for ts in demand.values()}
    if len(lengths) > 1:
        raise ConfigError(
            f"demand series lengths differ: {sorted(lengths)}",
            field="demand",
            location=location,
        )

    profiles: dict[str, TimeSeries] = {}
    for prof_name, csv_ref in doc.get("profiles", {}).items():
        profiles[prof_name] = read_series_csv(
            base / csv_ref, unit="-", kind="capacity_factor"
        )
        if lengths and len(profiles[prof_name]) not in lengths:
            raise ConfigError(
                f"profile length {len(profiles[prof_name])} does not match demand "
                f"length {sorted(lengths)[0]}",
                field=f"profiles.{prof_name}",
                location=location,
            )

    site_doc = _require(doc, "site", dict, location)
    _check_fields(site_doc, _SITE_FIELDS, f"{location}#site")
    site_kwargs = dict(site_doc)
    basin_doc = _require(site_doc, "basin", dict, f"{location}#site")
    site_kwargs["basin"] = _basin_from_doc(basin_doc, f"{location}#site.basin")
    site = GeothermalSiteParams(**site_kwargs)

    dle_doc = _require(doc, "dle", dict, location)
    _check_fields(dle_doc, _DLE_FIELDS, f"{location}#dle")
    dle = DleParams(**dle_doc)

    potentials = doc.get("potentials", {})
    existing = doc.get("existing", {})
    for field_name, mapping in (("potentials", potentials), ("existing", existing)):
        if not isinstance(mapping, dict):
            raise ConfigError("must be an object", field=field_name, location=location)
        for tech, value in mapping.items():
            if not isinstance(value, (int, float)):
                raise ConfigError(
                    "capacity must be a number",
                    field=f"{field_name}.{tech}",
                    location=location,
                )

    return Municipality(
        name=name,
        demand=demand,
        potentials={k: float(v) for k, v in potentials.items()},
        existing={k: float(v) for k, v in existing.items()},
        site=site,
        dle=dle,
        catalog=catalog,
        profiles=profiles,
        sectors=doc.get("sectors", ("households", "TCS", "industry")),
    )


def save_municipality(muni: Municipality, path: str | Path) -> None:
    """Serialize a municipality back to JSON + CSV, bit-exact on reload."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    base = path.parent

    demand_refs = {}
    for commodity, series in muni.demand.items():
        ref = f"{path.stem}_demand_{commodity}.csv"
        write_series_csv(base / ref, series)
        demand_refs[commodity] = ref
    profile_refs = {}
    for prof_name, series in muni.profiles.items():
        ref = f"{path.stem}_profile_{prof_name}.csv"
        write_series_csv(base / ref, series)
        profile_refs[prof_name] = ref

    site = muni.site
    doc = {
        "schema_version": SCHEMA_VERSION,
        "name": muni.name,
        "demand": demand_refs,
        "profiles": profile_refs,
        "potentials": dict(muni.potentials),
        "existing": dict(muni.existing),
        "sectors": list(muni.sectors),
        "site": {
            "flow_rate": site.flow_rate,
            "brine_density": site.brine_density,
            "brine_heat_capacity": site.brine_heat_capacity,
            "min_injection_temperature": site.min_injection_temperature,
            "max_depth": site.max_depth,
            "depth_step": site.depth_step,
            "well_distance": site.well_distance,
            "second_well_cost_factor": site.second_well_cost_factor,
            "li_concentration": site.li_concentration,
            "wellhead_temperature_cap": site.wellhead_temperature_cap,
            "basin": {
                "surface_temperature": site.basin.surface_temperature,
                "layers": [list(layer) for layer in site.basin.layers],
            },
        },
        "dle": {
            "capex": muni.dle.capex,
            "opex_per_tonne": muni.dle.opex_per_tonne,
            "extraction_efficiency": muni.dle.extraction_efficiency,
            "carbonate_price": muni.dle.carbonate_price,
            "li_to_carbonate_factor": muni.dle.li_to_carbonate_factor,
        },
    }
    if doc["site"]["wellhead_temperature_cap"] is None:
        del doc["site"]["wellhead_temperature_cap"]
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(doc, handle, indent=2, sort_keys=True)
        handle.write("\n")
