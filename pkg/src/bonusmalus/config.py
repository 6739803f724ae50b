"""Tariff configuration parsing and validation."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

import jsonschema

from .errors import ConfigError
from .relativity import (
    DEFAULT_ORDER,
    DiracMixing,
    ExponentialUnitMixing,
    GammaUnitMixing,
    MixingDistribution,
)
from .scale import ScaleRules
from .severity import ClaimSeverity, ClaimTypePartition, ExponentialSeverity, type_probabilities
from .simulate import SimulationConfig


@dataclass(frozen=True)
class DeductibleSpec:
    principle: str
    alphas: list[float] | float | None = None
    fixed: list[dict] | None = None
    free_type: int | None = None
    manual_d: list[float] | None = None


@dataclass(frozen=True)
class TariffConfig:
    lam: float
    model: ClaimSeverity
    partition: ClaimTypePartition
    mixing: MixingDistribution
    rules: ScaleRules
    deductible_spec: DeductibleSpec | None = None
    quadrature_order: int = DEFAULT_ORDER
    bisection_tol: float = 1e-12
    simulation: SimulationConfig | None = None


def _schema():
    with resources.files("bonusmalus").joinpath("config_schema.json").open() as fh:
        return json.load(fh)


def load_config(path: str) -> TariffConfig:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return parse_config(raw)


def parse_config(raw: dict) -> TariffConfig:
    try:
        jsonschema.validate(raw, _schema())
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"config schema violation: {exc.message}") from exc

    thresholds = raw["thresholds"]
    penalties = raw["scale"]["penalties"]
    if len(penalties) != len(thresholds) + 1:
        raise ConfigError(
            f"expected {len(thresholds) + 1} penalties for {len(thresholds)} thresholds, got {len(penalties)}"
        )

    model = ExponentialSeverity(mu=raw["severity"]["mean"])
    partition = type_probabilities(model, thresholds)
    rules = ScaleRules(levels=raw["scale"]["levels"], penalties=tuple(penalties))

    mix_raw = raw["mixing"]
    if mix_raw["kind"] == "exponential_unit":
        mixing = ExponentialUnitMixing()
    elif mix_raw["kind"] == "gamma_unit":
        if "shape" not in mix_raw:
            raise ConfigError("gamma_unit mixing requires a shape")
        mixing = GammaUnitMixing(shape=mix_raw["shape"])
    else:
        mixing = DiracMixing()

    spec = None
    if "deductible_spec" in raw:
        spec = DeductibleSpec(**raw["deductible_spec"])
        if spec.principle in ("single_type", "proportional_top", "greedy_top", "manual") and spec.alphas is None:
            raise ConfigError(f"principle {spec.principle} requires alphas")
        if spec.principle == "manual" and (spec.fixed is None or spec.free_type is None):
            raise ConfigError("manual principle requires fixed deductibles and a free_type")

    numerics = raw.get("numerics", {})
    sim = None
    if "simulation" in raw:
        sim = SimulationConfig(**raw["simulation"])

    return TariffConfig(
        lam=raw["lambda"],
        model=model,
        partition=partition,
        mixing=mixing,
        rules=rules,
        deductible_spec=spec,
        quadrature_order=numerics.get("quadrature_order", DEFAULT_ORDER),
        bisection_tol=numerics.get("bisection_tol", 1e-12),
        simulation=sim,
    )
