"""Scenario configuration: parsing, validation and object construction.

Configs are JSON documents (conventionally ``*.cfg``).  Validation errors
carry a JSON-pointer-style path to the offending entry::

    {
      "ambient": {
        "dim": 4,
        "metric": [["1", "0", ...], ...],          # optional, default identity
        "phi": {"pattern": ["psi", "psi", "one_minus_psi", "one_minus_psi"]}
               | {"matrix": [["1/2+1/2*sqrt5", ...], ...]}
               | {"from_involution": [["1", "0", ...], ...]}
      },
      "immersion": {                               # needed by identities/extrinsic/slant
        "params": ["u1", "u2"],
        "components": ["psi*u1", "(1-psi)*u1", ...],
        "samples": {"grid": [[-1, 1, 3], [-1, 1, 3]], "extra_points": [[0, 0]]}
      },
      "spaceform": {"c_p": 1, "c_q": -1, "p": 2, "trials": 100, "seed": 7},
      "slant": {"angle_formula": "projection" | "unnormalized"},
      "suites": ["structure", "identities", "slant"],
      "tolerances": {"tol_angle": 1e-6},
      "seed": 0
    }

Matrix entries are exact Q(sqrt5) strings (``"r"`` or ``"r+s*sqrt5"``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

from .errors import ConfigError
from .quadrat import parse_quadrat
from .structures import (
    AlmostProductStructure,
    GoldenStructure,
    Metric,
    diagonal_golden,
    golden_from_product,
)
from .submanifold import ImmersionSpec, SampleSpec

SUITE_ORDER = ("structure", "identities", "extrinsic", "slant", "curvature")
_IMMERSION_SUITES = {"identities", "extrinsic", "slant"}

ANGLE_FORMULA_PROJECTION = "projection"
ANGLE_FORMULA_UNNORMALIZED = "unnormalized"


@dataclass(frozen=True)
class Tolerances:
    tol_struct: float = 1e-9
    tol_frame: float = 1e-9
    tol_class: float = 1e-7
    tol_angle: float = 1e-6

    def as_dict(self) -> dict[str, float]:
        return {
            "tol_struct": self.tol_struct,
            "tol_frame": self.tol_frame,
            "tol_class": self.tol_class,
            "tol_angle": self.tol_angle,
        }


@dataclass(frozen=True)
class SpaceformSection:
    c_p: float
    c_q: float
    p: int
    trials: int = 100
    seed: int = 0


@dataclass(frozen=True)
class ScenarioConfig:
    dim: int
    metric_rows: tuple[tuple[str, ...], ...] | None
    phi_kind: str  # matrix | pattern | from_involution
    phi_payload: tuple
    suites: tuple[str, ...]
    immersion_params: tuple[str, ...] | None = None
    immersion_components: tuple[str, ...] | None = None
    immersion_samples: SampleSpec | None = None
    spaceform: SpaceformSection | None = None
    angle_formula: str = ANGLE_FORMULA_PROJECTION
    tolerances: Tolerances = Tolerances()
    seed: int = 0

    def build_metric(self) -> Metric:
        if self.metric_rows is None:
            return Metric.euclidean(self.dim)
        entries = [[parse_quadrat(cell) for cell in row] for row in self.metric_rows]
        return Metric(entries)

    def build_structure(self) -> GoldenStructure:
        metric = self.build_metric()
        if self.phi_kind == "pattern":
            return diagonal_golden(self.phi_payload, metric)
        rows = [[parse_quadrat(cell) for cell in row] for row in self.phi_payload]
        if self.phi_kind == "matrix":
            return GoldenStructure(rows, metric)
        return golden_from_product(AlmostProductStructure(rows, metric))

    def build_immersion(self) -> ImmersionSpec:
        return ImmersionSpec.from_strings(
            self.immersion_params, self.immersion_components, self.immersion_samples
        )

    def with_overrides(self, seed: int | None = None,
                       tol_angle: float | None = None) -> ScenarioConfig:
        cfg = self
        if seed is not None:
            cfg = replace(cfg, seed=seed)
        if tol_angle is not None:
            cfg = replace(cfg, tolerances=replace(cfg.tolerances, tol_angle=tol_angle))
        return cfg


def _require(mapping: dict, key: str, path: str):
    if key not in mapping:
        raise ConfigError(f"{path}/{key}", "missing required entry")
    return mapping[key]


def _check_keys(mapping: dict, allowed: set[str], path: str) -> None:
    for key in mapping:
        if key not in allowed:
            raise ConfigError(f"{path}/{key}", "unknown entry")


def _as_int(value, path: str, minimum: int | None = None) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise ConfigError(path, "expected an integer")
    if minimum is not None and value < minimum:
        raise ConfigError(path, f"must be >= {minimum}")
    return value


def _as_number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(path, "expected a number")
    return float(value)


def _as_matrix(value, dim: int, path: str) -> tuple[tuple[str, ...], ...]:
    if not isinstance(value, list) or len(value) != dim:
        raise ConfigError(path, f"expected {dim} rows")
    rows = []
    for i, row in enumerate(value):
        if not isinstance(row, list) or len(row) != dim:
            raise ConfigError(f"{path}/{i}", f"expected {dim} entries")
        for j, cell in enumerate(row):
            if not isinstance(cell, str):
                raise ConfigError(f"{path}/{i}/{j}", "matrix entries are Q(sqrt5) strings")
            try:
                parse_quadrat(cell)
            except ValueError as exc:
                raise ConfigError(f"{path}/{i}/{j}", str(exc)) from None
        rows.append(tuple(row))
    return tuple(rows)


def parse_config(data: dict) -> ScenarioConfig:
    if not isinstance(data, dict):
        raise ConfigError("", "top level must be an object")
    _check_keys(data, {"ambient", "immersion", "spaceform", "slant", "suites",
                       "tolerances", "seed"}, "")

    ambient = _require(data, "ambient", "")
    if not isinstance(ambient, dict):
        raise ConfigError("/ambient", "expected an object")
    _check_keys(ambient, {"dim", "metric", "phi"}, "/ambient")
    dim = _as_int(_require(ambient, "dim", "/ambient"), "/ambient/dim", minimum=1)

    metric_rows = None
    if "metric" in ambient:
        metric_rows = _as_matrix(ambient["metric"], dim, "/ambient/metric")

    phi = _require(ambient, "phi", "/ambient")
    if not isinstance(phi, dict):
        raise ConfigError("/ambient/phi", "expected an object")
    _check_keys(phi, {"matrix", "pattern", "from_involution"}, "/ambient/phi")
    if len(phi) != 1:
        raise ConfigError("/ambient/phi",
                          "exactly one of matrix / pattern / from_involution")
    phi_kind = next(iter(phi))
    if phi_kind == "pattern":
        pattern = phi["pattern"]
        if not isinstance(pattern, list) or len(pattern) != dim:
            raise ConfigError("/ambient/phi/pattern", f"expected {dim} entries")
        for i, name in enumerate(pattern):
            if name not in ("psi", "one_minus_psi"):
                raise ConfigError(f"/ambient/phi/pattern/{i}",
                                  "entries are 'psi' or 'one_minus_psi'")
        phi_payload = tuple(pattern)
    else:
        phi_payload = _as_matrix(phi[phi_kind], dim, f"/ambient/phi/{phi_kind}")

    suites_raw = _require(data, "suites", "")
    if not isinstance(suites_raw, list) or not suites_raw:
        raise ConfigError("/suites", "expected a nonempty list")
    for i, name in enumerate(suites_raw):
        if name not in SUITE_ORDER:
            raise ConfigError(f"/suites/{i}", f"unknown suite {name!r}")
    suites = tuple(s for s in SUITE_ORDER if s in suites_raw)

    imm_params = imm_components = imm_samples = None
    if "immersion" in data:
        imm = data["immersion"]
        if not isinstance(imm, dict):
            raise ConfigError("/immersion", "expected an object")
        _check_keys(imm, {"params", "components", "samples"}, "/immersion")
        params = _require(imm, "params", "/immersion")
        if (not isinstance(params, list) or not params
                or any(not isinstance(p, str) for p in params)):
            raise ConfigError("/immersion/params", "expected a nonempty list of names")
        if len(set(params)) != len(params):
            raise ConfigError("/immersion/params", "parameter names must be distinct")
        components = _require(imm, "components", "/immersion")
        if not isinstance(components, list) or len(components) != dim:
            raise ConfigError("/immersion/components", f"expected {dim} expressions")
        if any(not isinstance(c, str) for c in components):
            raise ConfigError("/immersion/components", "expressions are strings")
        if len(params) >= dim:
            raise ConfigError("/immersion/params",
                              f"need fewer parameters than ambient dimension {dim}")
        imm_params = tuple(params)
        imm_components = tuple(components)
        if "samples" in imm:
            imm_samples = _parse_samples(imm["samples"], len(params))

    spaceform = None
    if "spaceform" in data:
        sf = data["spaceform"]
        if not isinstance(sf, dict):
            raise ConfigError("/spaceform", "expected an object")
        _check_keys(sf, {"c_p", "c_q", "p", "trials", "seed"}, "/spaceform")
        p = _as_int(_require(sf, "p", "/spaceform"), "/spaceform/p", minimum=0)
        if p > dim:
            raise ConfigError("/spaceform/p", f"must be <= ambient dimension {dim}")
        spaceform = SpaceformSection(
            c_p=_as_number(_require(sf, "c_p", "/spaceform"), "/spaceform/c_p"),
            c_q=_as_number(_require(sf, "c_q", "/spaceform"), "/spaceform/c_q"),
            p=p,
            trials=_as_int(sf.get("trials", 100), "/spaceform/trials", minimum=1),
            seed=_as_int(sf.get("seed", 0), "/spaceform/seed"),
        )

    angle_formula = ANGLE_FORMULA_PROJECTION
    if "slant" in data:
        sl = data["slant"]
        if not isinstance(sl, dict):
            raise ConfigError("/slant", "expected an object")
        _check_keys(sl, {"angle_formula"}, "/slant")
        angle_formula = sl.get("angle_formula", ANGLE_FORMULA_PROJECTION)
        if angle_formula not in (ANGLE_FORMULA_PROJECTION, ANGLE_FORMULA_UNNORMALIZED):
            raise ConfigError("/slant/angle_formula",
                              "expected 'projection' or 'unnormalized'")

    tolerances = Tolerances()
    if "tolerances" in data:
        tols = data["tolerances"]
        if not isinstance(tols, dict):
            raise ConfigError("/tolerances", "expected an object")
        _check_keys(tols, set(tolerances.as_dict()), "/tolerances")
        updates = {k: _as_number(v, f"/tolerances/{k}") for k, v in tols.items()}
        tolerances = replace(tolerances, **updates)

    seed = _as_int(data.get("seed", 0), "/seed")

    for suite in suites:
        if suite in _IMMERSION_SUITES and imm_params is None:
            raise ConfigError("/immersion", f"suite {suite!r} requires the immersion section")
        if suite == "curvature" and spaceform is None:
            raise ConfigError("/spaceform", "suite 'curvature' requires the spaceform section")

    return ScenarioConfig(
        dim=dim,
        metric_rows=metric_rows,
        phi_kind=phi_kind,
        phi_payload=phi_payload,
        suites=suites,
        immersion_params=imm_params,
        immersion_components=imm_components,
        immersion_samples=imm_samples,
        spaceform=spaceform,
        angle_formula=angle_formula,
        tolerances=tolerances,
        seed=seed,
    )


def _parse_samples(value, m: int) -> SampleSpec:
    if not isinstance(value, dict):
        raise ConfigError("/immersion/samples", "expected an object")
    _check_keys(value, {"grid", "extra_points"}, "/immersion/samples")
    grid = []
    if "grid" in value:
        raw = value["grid"]
        if not isinstance(raw, list) or len(raw) != m:
            raise ConfigError("/immersion/samples/grid",
                              f"expected one [lo, hi, count] triple per parameter ({m})")
        for i, triple in enumerate(raw):
            path = f"/immersion/samples/grid/{i}"
            if not isinstance(triple, list) or len(triple) != 3:
                raise ConfigError(path, "expected [lo, hi, count]")
            lo = _as_number(triple[0], f"{path}/0")
            hi = _as_number(triple[1], f"{path}/1")
            count = _as_int(triple[2], f"{path}/2", minimum=1)
            grid.append((lo, hi, count))
    else:
        grid = [(-1.0, 1.0, 3)] * m
    extra = []
    for i, pt in enumerate(value.get("extra_points", [])):
        path = f"/immersion/samples/extra_points/{i}"
        if not isinstance(pt, list) or len(pt) != m:
            raise ConfigError(path, f"expected {m} coordinates")
        extra.append(tuple(_as_number(x, f"{path}/{j}") for j, x in enumerate(pt)))
    return SampleSpec(grid=tuple(grid), extra_points=tuple(extra))


def load_config(path: str | Path) -> ScenarioConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError("", f"config file not found: {path}")
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError("", f"invalid JSON: {exc}") from None
    return parse_config(data)
