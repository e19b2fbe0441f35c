"""Config-driven scenario runs and their exportable records.

A scenario names an initial state, the physical parameters, an evaluation
grid (either directly on the torus angles or along a time interval), and
which outputs to compute.  Configs are JSON with a strict schema -- unknown
fields are rejected, because a silently ignored typo in a physics config is
the most expensive kind of user error.  All angles are radians; there is no
degree mode.

Running a scenario yields a :class:`RunRecord` whose results block is a
pure function of (config, seed); the only nondeterministic field is the
creation timestamp, which is excluded from the canonical byte form used
for reproducibility comparisons.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from typing import Any, Mapping

import jsonschema
import numpy as np

from . import __version__
from .entanglement import concurrence, concurrence_profile
from .hamiltonian import SystemParams
from .manifold import (
    DegenerateShear,
    MetricTensor2,
    TorusPoint,
    classify,
    evolve_family,
    metric_analytic,
)
from .qstate import (
    PureState2Q,
    minus_minus_state,
    plus_minus_state,
    plus_plus_state,
    up_down,
)

SCHEMA_VERSION = "1"

OUTPUT_KINDS = ("metric", "classify", "concurrence_profile", "evolved_states")

#: Largest tolerated deviation of |amplitudes|^2 from one before rejection.
AMPLITUDE_NORM_TOL = 1e-9

SCENARIO_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "spin-torus scenario config",
    "type": "object",
    "additionalProperties": False,
    "required": ["initial", "params", "grid", "outputs"],
    "properties": {
        "initial": {
            "oneOf": [
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["amplitudes"],
                    "properties": {
                        "amplitudes": {
                            "type": "array",
                            "minItems": 4,
                            "maxItems": 4,
                            "items": {
                                "type": "array",
                                "minItems": 2,
                                "maxItems": 2,
                                "items": {"type": "number"},
                            },
                        }
                    },
                },
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["product_state"],
                    "properties": {
                        "product_state": {
                            "type": "object",
                            "additionalProperties": False,
                            "required": ["kind"],
                            "properties": {
                                "kind": {"enum": ["pm", "pp", "mm", "updown"]},
                                "chi": {"type": "number"},
                                "gamma_az": {"type": "number"},
                            },
                        }
                    },
                },
            ]
        },
        "params": {
            "type": "object",
            "additionalProperties": False,
            "required": ["coupling", "field"],
            "properties": {
                "coupling": {"type": "number"},
                "field": {"type": "number"},
                "gamma": {"type": "number", "exclusiveMinimum": 0},
            },
        },
        "grid": {
            "oneOf": [
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["theta_steps", "phi_steps"],
                    "properties": {
                        "theta_steps": {"type": "integer", "minimum": 2},
                        "phi_steps": {"type": "integer", "minimum": 2},
                    },
                },
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["time"],
                    "properties": {
                        "time": {
                            "type": "object",
                            "additionalProperties": False,
                            "required": ["t0", "t1", "steps"],
                            "properties": {
                                "t0": {"type": "number"},
                                "t1": {"type": "number"},
                                "steps": {"type": "integer", "minimum": 2},
                            },
                        },
                        "field_override": {"type": "number"},
                    },
                },
            ]
        },
        "outputs": {
            "type": "array",
            "minItems": 1,
            "uniqueItems": True,
            "items": {"enum": list(OUTPUT_KINDS)},
        },
    },
}


class ConfigInvalid(ValueError):
    """A scenario config failed schema or semantic validation."""


@dataclass(frozen=True)
class AmplitudesInitial:
    """Initial state given directly as four complex amplitudes."""

    amplitudes: tuple[complex, complex, complex, complex]

    def build(self) -> PureState2Q:
        return PureState2Q.from_amplitudes(*self.amplitudes)

    def to_jsonable(self) -> dict[str, Any]:
        return {
            "amplitudes": [[z.real, z.imag] for z in self.amplitudes]
        }


_PRODUCT_BUILDERS = {
    "pm": plus_minus_state,
    "pp": plus_plus_state,
    "mm": minus_minus_state,
}


@dataclass(frozen=True)
class ProductInitial:
    """Initial product state named by Bloch angles, or the bare |up down>."""

    kind: str
    chi: float | None = None
    gamma_az: float | None = None

    def build(self) -> PureState2Q:
        if self.kind == "updown":
            return up_down()
        assert self.chi is not None and self.gamma_az is not None
        return _PRODUCT_BUILDERS[self.kind](self.chi, self.gamma_az)

    def to_jsonable(self) -> dict[str, Any]:
        body: dict[str, Any] = {"kind": self.kind}
        if self.kind != "updown":
            body["chi"] = self.chi
            body["gamma_az"] = self.gamma_az
        return {"product_state": body}


@dataclass(frozen=True)
class TorusGrid:
    """Inclusive uniform grid over one theta period and one phi period."""

    theta_steps: int
    phi_steps: int

    def to_jsonable(self) -> dict[str, Any]:
        return {"theta_steps": self.theta_steps, "phi_steps": self.phi_steps}


@dataclass(frozen=True)
class TimeGrid:
    """Inclusive uniform grid of evolution times, with an optional field
    strength override for sweeping phi at fixed coupling."""

    t0: float
    t1: float
    steps: int
    field_override: float | None = None

    def to_jsonable(self) -> dict[str, Any]:
        body: dict[str, Any] = {
            "time": {"t0": self.t0, "t1": self.t1, "steps": self.steps}
        }
        if self.field_override is not None:
            body["field_override"] = self.field_override
        return body


@dataclass(frozen=True)
class ScenarioConfig:
    """Validated, canonical form of one scenario config."""

    initial: AmplitudesInitial | ProductInitial
    params: SystemParams
    grid: TorusGrid | TimeGrid
    outputs: tuple[str, ...]

    def to_jsonable(self) -> dict[str, Any]:
        return {
            "initial": self.initial.to_jsonable(),
            "params": {
                "coupling": self.params.coupling,
                "field": self.params.field,
                "gamma": self.params.gamma,
            },
            "grid": self.grid.to_jsonable(),
            "outputs": list(self.outputs),
        }

    def with_gamma(self, gamma: float) -> ScenarioConfig:
        return replace(self, params=replace(self.params, gamma=gamma))


def _schema_error_path(error: jsonschema.ValidationError) -> str:
    path = ".".join(str(part) for part in error.absolute_path)
    return path or "<root>"


def _parse_initial(body: Mapping[str, Any]) -> AmplitudesInitial | ProductInitial:
    if "amplitudes" in body:
        pairs = body["amplitudes"]
        raw = np.array([complex(re, im) for re, im in pairs])
        norm_sq = float(np.sum(np.abs(raw) ** 2))
        if abs(norm_sq - 1.0) > AMPLITUDE_NORM_TOL:
            raise ConfigInvalid(
                f"initial.amplitudes: |amplitudes|^2 sums to {norm_sq!r}, "
                f"more than {AMPLITUDE_NORM_TOL} away from 1"
            )
        if abs(norm_sq - 1.0) > 1e-12:
            raw = raw / np.sqrt(norm_sq)
        return AmplitudesInitial(amplitudes=tuple(complex(z) for z in raw))
    block = body["product_state"]
    kind = block["kind"]
    if kind == "updown":
        if "chi" in block or "gamma_az" in block:
            raise ConfigInvalid(
                "initial.product_state: kind 'updown' takes no Bloch angles; "
                "remove chi/gamma_az"
            )
        return ProductInitial(kind="updown")
    if "chi" not in block:
        raise ConfigInvalid(
            f"initial.product_state: kind {kind!r} requires chi"
        )
    return ProductInitial(
        kind=kind,
        chi=float(block["chi"]),
        gamma_az=float(block.get("gamma_az", 0.0)),
    )


def config_from_dict(data: Mapping[str, Any]) -> ScenarioConfig:
    """Validate a parsed JSON document and build the canonical config.

    Raises :class:`ConfigInvalid` with the offending field path for schema
    violations and for the semantic checks the schema cannot express
    (amplitude normalization, Bloch-angle applicability, finiteness).
    """
    try:
        jsonschema.validate(instance=data, schema=SCENARIO_SCHEMA)
    except jsonschema.ValidationError as error:
        raise ConfigInvalid(
            f"{_schema_error_path(error)}: {error.message}"
        ) from error

    initial = _parse_initial(data["initial"])
    params_body = data["params"]
    try:
        params = SystemParams(
            coupling=float(params_body["coupling"]),
            field=float(params_body["field"]),
            gamma=float(params_body.get("gamma", 1.0)),
        )
    except ValueError as error:
        raise ConfigInvalid(f"params: {error}") from error

    grid_body = data["grid"]
    grid: TorusGrid | TimeGrid
    if "time" in grid_body:
        time_body = grid_body["time"]
        values = [time_body["t0"], time_body["t1"]]
        override = grid_body.get("field_override")
        if override is not None:
            values.append(override)
        if not all(np.isfinite(v) for v in values):
            raise ConfigInvalid("grid.time: all values must be finite")
        grid = TimeGrid(
            t0=float(time_body["t0"]),
            t1=float(time_body["t1"]),
            steps=int(time_body["steps"]),
            field_override=None if override is None else float(override),
        )
    else:
        grid = TorusGrid(
            theta_steps=int(grid_body["theta_steps"]),
            phi_steps=int(grid_body["phi_steps"]),
        )

    return ScenarioConfig(
        initial=initial,
        params=params,
        grid=grid,
        outputs=tuple(data["outputs"]),
    )


def config_from_json(text: str) -> ScenarioConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as error:
        raise ConfigInvalid(f"not valid JSON: {error}") from error
    if not isinstance(data, dict):
        raise ConfigInvalid("<root>: config must be a JSON object")
    return config_from_dict(data)


# --- running -----------------------------------------------------------------

@dataclass(frozen=True)
class RunRecord:
    """Results of one scenario run plus enough context to reproduce it."""

    schema_version: str
    config: ScenarioConfig
    results: dict[str, Any]
    provenance: dict[str, Any]


def _grid_points(config: ScenarioConfig) -> list[tuple[float, float]]:
    """The (theta, phi) evaluation points, theta varying slowest."""
    if isinstance(config.grid, TorusGrid):
        thetas = np.linspace(0.0, np.pi, config.grid.theta_steps)
        phis = np.linspace(0.0, 2.0 * np.pi, config.grid.phi_steps)
        return [(float(th), float(ph)) for th in thetas for ph in phis]
    times = np.linspace(config.grid.t0, config.grid.t1, config.grid.steps)
    field = (
        config.grid.field_override
        if config.grid.field_override is not None
        else config.params.field
    )
    j = config.params.coupling
    return [(float(2.0 * j * t), float(2.0 * field * t)) for t in times]


def _profile_thetas(config: ScenarioConfig) -> np.ndarray:
    if isinstance(config.grid, TorusGrid):
        return np.linspace(0.0, np.pi, config.grid.theta_steps)
    times = np.linspace(config.grid.t0, config.grid.t1, config.grid.steps)
    return 2.0 * config.params.coupling * times


def _metric_jsonable(metric: MetricTensor2) -> dict[str, Any]:
    return {
        "g_theta_theta": metric.g_theta_theta,
        "g_theta_phi": metric.g_theta_phi,
        "g_phi_phi": metric.g_phi_phi,
        "shear": metric.shear,
        "g_theta_theta_diag": metric.g_theta_theta_diag,
        "g_phi_phi_diag": metric.g_phi_phi_diag,
    }


def _run_metric(initial: PureState2Q, config: ScenarioConfig, seed: int) -> dict:
    return _metric_jsonable(metric_analytic(initial, config.params.gamma))


def _run_classify(initial: PureState2Q, config: ScenarioConfig, seed: int) -> dict:
    report = classify(initial, gamma=config.params.gamma, seed=seed)
    return {
        "kind": report.kind.value,
        "dimension": report.dimension,
        "invariants": {
            "aligned": report.invariants.aligned,
            "mismatch": report.invariants.mismatch,
            "imbalance": report.invariants.imbalance,
        },
        "metric": _metric_jsonable(report.metric),
        "circle_radius": report.circle_radius,
        "radius_phi_circle": report.radius_phi_circle,
        "radius_theta_circle": report.radius_theta_circle,
        "radius_extrapolated": report.radius_extrapolated,
        "flatness_residual": report.flatness_residual,
    }


def _run_profile(initial: PureState2Q, config: ScenarioConfig, seed: int) -> dict:
    profile = concurrence_profile(initial, _profile_thetas(config))
    return {
        "samples": [[theta, value] for theta, value in profile.samples],
        "theta_max": profile.theta_max,
        "c_max": profile.c_max,
        "is_constant": profile.is_constant,
    }


def _run_evolved(initial: PureState2Q, config: ScenarioConfig, seed: int) -> list:
    rows = []
    for theta, phi in _grid_points(config):
        state = evolve_family(initial, TorusPoint(theta, phi))
        rows.append(
            {
                "theta": theta,
                "phi": phi,
                "amplitudes": [[float(z.real), float(z.imag)] for z in state.vector],
                "concurrence": concurrence(state),
            }
        )
    return rows


_RUNNERS = {
    "metric": _run_metric,
    "classify": _run_classify,
    "concurrence_profile": _run_profile,
    "evolved_states": _run_evolved,
}


def run_scenario(config: ScenarioConfig, seed: int = 0) -> RunRecord:
    """Execute the requested outputs in their declared order.

    A :class:`DegenerateShear` raised by the geometry (possible for initial
    states numerically indistinguishable from a fully polarized one) turns
    that output block into a warning annotation instead of failing the run.
    """
    initial = config.initial.build()
    results: dict[str, Any] = {}
    for kind in config.outputs:
        try:
            results[kind] = _RUNNERS[kind](initial, config, seed)
        except DegenerateShear as error:
            results[kind] = {"warning": str(error)}
    return RunRecord(
        schema_version=SCHEMA_VERSION,
        config=config,
        results=results,
        provenance={
            "library_version": __version__,
            "seed": seed,
            "created_utc": datetime.now(timezone.utc).isoformat(),
        },
    )


# --- serialization -----------------------------------------------------------

def record_to_dict(record: RunRecord) -> dict[str, Any]:
    return {
        "schema_version": record.schema_version,
        "config": record.config.to_jsonable(),
        "results": record.results,
        "provenance": record.provenance,
    }


def record_from_dict(data: Mapping[str, Any]) -> RunRecord:
    if not isinstance(data, Mapping):
        raise ConfigInvalid("record must be a JSON object")
    try:
        return RunRecord(
            schema_version=str(data["schema_version"]),
            config=config_from_dict(data["config"]),
            results=dict(data["results"]),
            provenance=dict(data["provenance"]),
        )
    except KeyError as error:
        raise ConfigInvalid(f"record is missing field {error}") from error


def record_to_json(record: RunRecord) -> str:
    """Serialize with sorted keys and shortest round-trip float format, so
    equal records produce identical bytes."""
    return json.dumps(record_to_dict(record), sort_keys=True, indent=2) + "\n"


def canonical_result_bytes(record: RunRecord) -> bytes:
    """Byte form used for determinism comparisons: everything except the
    creation timestamp, which is honest provenance but not a result."""
    body = record_to_dict(record)
    body["provenance"] = {
        k: v for k, v in body["provenance"].items() if k != "created_utc"
    }
    return json.dumps(body, sort_keys=True, separators=(",", ":")).encode()


# --- export ------------------------------------------------------------------

CSV_COLUMNS = (
    "theta",
    "phi",
    "a_re",
    "a_im",
    "b_re",
    "b_im",
    "c_re",
    "c_im",
    "d_re",
    "d_im",
    "C",
)


def _csv_rows(record: RunRecord) -> list[list[float]]:
    """One row per grid point: angles, amplitudes, concurrence.

    Prefers the evolved-states block; a record holding only a concurrence
    profile still exports, with the states recomputed at phi = 0 from the
    config echo so the file is self-contained either way.
    """
    if "evolved_states" in record.results:
        block = record.results["evolved_states"]
        if isinstance(block, dict):  # warning annotation
            return []
        return [
            [row["theta"], row["phi"]]
            + [part for pair in row["amplitudes"] for part in pair]
            + [row["concurrence"]]
            for row in block
        ]
    if "concurrence_profile" in record.results:
        block = record.results["concurrence_profile"]
        if isinstance(block, dict) and "samples" in block:
            initial = record.config.initial.build()
            rows = []
            for theta, value in block["samples"]:
                state = evolve_family(initial, TorusPoint(theta, 0.0))
                rows.append(
                    [theta, 0.0]
                    + [float(part) for z in state.vector for part in (z.real, z.imag)]
                    + [value]
                )
            return rows
    return []


def _flatten_for_meta(prefix: str, value: Any, into: list[tuple[str, Any]]) -> None:
    if isinstance(value, dict):
        for key in sorted(value):
            _flatten_for_meta(f"{prefix}.{key}" if prefix else key, value[key], into)
    elif isinstance(value, list):
        for i, item in enumerate(value):
            _flatten_for_meta(f"{prefix}[{i}]", item, into)
    else:
        into.append((prefix, value))


def _format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        # Cast guards against numpy scalars, whose repr is not a bare number.
        return repr(float(value))
    return str(value)


def export_record(record: RunRecord, format: str, path: str) -> None:
    """Write a record to disk as JSON (the whole record) or CSV (grid data).

    CSV uses a dot decimal separator, comma delimiter, and LF line endings.
    Scalar blocks (metric, classification) do not fit a per-point table;
    they go to a key,value sidecar at ``<path>.meta.csv`` when present.
    """
    if format == "json":
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(record_to_json(record))
        return
    if format != "csv":
        raise ValueError(f"unknown export format {format!r}")

    lines = [",".join(CSV_COLUMNS)]
    for row in _csv_rows(record):
        lines.append(",".join(_format_cell(cell) for cell in row))
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("\n".join(lines) + "\n")

    scalar_blocks = {
        kind: record.results[kind]
        for kind in ("metric", "classify")
        if kind in record.results
    }
    if scalar_blocks:
        flat: list[tuple[str, Any]] = []
        _flatten_for_meta("", scalar_blocks, flat)
        meta_lines = ["key,value"]
        meta_lines += [f"{key},{_format_cell(value)}" for key, value in flat]
        with open(f"{path}.meta.csv", "w", encoding="utf-8", newline="\n") as handle:
            handle.write("\n".join(meta_lines) + "\n")
