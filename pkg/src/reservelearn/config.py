"""Flat key-value experiment configuration.

The config format is a plain text file of ``key = value`` lines with ``#``
comments. Keys are dotted and flat (no nesting), values are numbers,
quoted or bare strings, or ``[lo, hi]`` pairs. Unknown keys are a hard
error so typos cannot silently fall back to defaults.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .distributions import (
    BidDistribution,
    Kumaraswamy,
    ProblemConstants,
    TruncatedExponential,
    Uniform,
)
from .kernels import KernelSchedule
from .learners import ERM, ConvOGA, DiscreteERM, StepSchedule, VConvOGA
from .simulator import ExperimentConfig, Phase, StreamSpec


class ConfigError(ValueError):
    """Malformed config file or invalid key/value."""


_SCALAR_KEYS = {
    "family", "a", "b", "rate", "b_max", "horizon",
    "phases",
    "learner",
    "step.nu", "step.alpha",
    "kernel.sigma0", "kernel.alpha_sigma",
    "projection", "r0",
    "seeds", "seed_base", "record_stride",
    "constants.mu", "constants.c",
    "fit.t_lo", "fit.t_hi",
}
_PHASE_KEY = re.compile(r"^phase\.(\d+)\.(family|a|b|rate|b_max|length)$")

_DEFAULTS = {
    "learner": "v_conv_oga",
    "step.nu": 1.0,
    "step.alpha": 1.0,
    "kernel.sigma0": 1.0,
    "kernel.alpha_sigma": 0.5,
    "projection": [0.0, 1.0],
    "seeds": 10,
    "seed_base": 0,
    "record_stride": 0,
}


def _parse_value(raw: str):
    raw = raw.strip()
    if raw.startswith("[") and raw.endswith("]"):
        return [_parse_value(part) for part in raw[1:-1].split(",")]
    if (raw.startswith('"') and raw.endswith('"')) or (raw.startswith("'") and raw.endswith("'")):
        return raw[1:-1]
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        return float(raw)
    except ValueError:
        pass
    return raw


def parse_config_text(text: str) -> dict:
    cfg = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, raw = stripped.split("=", 1)
        key = key.strip()
        if key not in _SCALAR_KEYS and not _PHASE_KEY.match(key):
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        cfg[key] = _parse_value(raw)
    return cfg


def load_config(path: str, overrides=()) -> dict:
    with open(path) as fh:
        cfg = parse_config_text(fh.read())
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not of the form key=value")
        key, raw = item.split("=", 1)
        key = key.strip()
        if key not in _SCALAR_KEYS and not _PHASE_KEY.match(key):
            raise ConfigError(f"override refers to unknown key {key!r}")
        cfg[key] = _parse_value(raw)
    return cfg


def render_config(cfg: dict) -> str:
    """Serialise the effective config so a run can be reproduced from it."""
    lines = []
    for key in sorted(cfg):
        val = cfg[key]
        if isinstance(val, str):
            rendered = f'"{val}"'
        elif isinstance(val, list):
            rendered = "[" + ", ".join(repr(v) for v in val) + "]"
        else:
            rendered = repr(val)
        lines.append(f"{key} = {rendered}")
    return "\n".join(lines) + "\n"


def _build_dist(params: dict, where: str) -> BidDistribution:
    family = params.get("family")
    if family is None:
        raise ConfigError(f"{where}: missing 'family'")
    family = str(family).lower()
    if family == "kumaraswamy":
        if "a" not in params or "b" not in params:
            raise ConfigError(f"{where}: kumaraswamy needs 'a' and 'b'")
        return Kumaraswamy(float(params["a"]), float(params["b"]))
    if family == "uniform":
        return Uniform(float(params.get("b_max", 1.0)))
    if family == "truncated_exponential":
        if "rate" not in params:
            raise ConfigError(f"{where}: truncated_exponential needs 'rate'")
        return TruncatedExponential(float(params["rate"]), float(params.get("b_max", 1.0)))
    raise ConfigError(f"{where}: unknown family {family!r}")


def build_stream(cfg: dict) -> StreamSpec:
    n_phases = int(cfg.get("phases", 0))
    if n_phases:
        phases = []
        for i in range(1, n_phases + 1):
            prefix = f"phase.{i}."
            params = {k[len(prefix):]: v for k, v in cfg.items() if k.startswith(prefix)}
            if "length" not in params:
                raise ConfigError(f"phase.{i}: missing 'length'")
            phases.append(Phase(_build_dist(params, f"phase.{i}"), int(params["length"])))
        return StreamSpec(tuple(phases))
    if "horizon" not in cfg:
        raise ConfigError("single-phase config needs 'horizon'")
    dist = _build_dist(cfg, "stream")
    return StreamSpec((Phase(dist, int(cfg["horizon"])),))


@dataclass(frozen=True)
class LearnerFactory:
    """Picklable factory so seed workers can build fresh learners."""

    variant: str
    nu: float
    alpha: float
    sigma0: float
    alpha_sigma: float
    lo: float
    hi: float
    r0: float | None
    support_max: float

    def __call__(self):
        step = StepSchedule(self.nu, self.alpha)
        if self.variant == "conv_oga":
            return ConvOGA(self.sigma0, step, self.lo, self.hi, self.r0)
        if self.variant == "v_conv_oga":
            sched = KernelSchedule(self.sigma0, self.alpha_sigma)
            return VConvOGA(sched, step, self.lo, self.hi, self.r0)
        if self.variant == "erm":
            return ERM(self.lo, self.hi, self.r0)
        if self.variant == "discrete_erm":
            return DiscreteERM(self.support_max, self.lo, self.hi, self.r0)
        raise ConfigError(f"unknown learner {self.variant!r}")


def build_learner_factory(cfg: dict, stream: StreamSpec) -> LearnerFactory:
    variant = str(cfg.get("learner", _DEFAULTS["learner"])).lower()
    if variant not in ("conv_oga", "v_conv_oga", "erm", "discrete_erm"):
        raise ConfigError(f"unknown learner {variant!r}")
    projection = cfg.get("projection", _DEFAULTS["projection"])
    if not (isinstance(projection, list) and len(projection) == 2):
        raise ConfigError("projection must be a [lo, hi] pair")
    lo, hi = float(projection[0]), float(projection[1])
    return LearnerFactory(
        variant=variant,
        nu=float(cfg.get("step.nu", _DEFAULTS["step.nu"])),
        alpha=float(cfg.get("step.alpha", _DEFAULTS["step.alpha"])),
        sigma0=float(cfg.get("kernel.sigma0", _DEFAULTS["kernel.sigma0"])),
        alpha_sigma=float(cfg.get("kernel.alpha_sigma", _DEFAULTS["kernel.alpha_sigma"])),
        lo=lo,
        hi=hi,
        r0=float(cfg["r0"]) if "r0" in cfg else None,
        support_max=max(p.dist.support_max for p in stream.phases),
    )


def build_experiment(cfg: dict) -> ExperimentConfig:
    stream = build_stream(cfg)
    factory = build_learner_factory(cfg, stream)
    n_seeds = int(cfg.get("seeds", _DEFAULTS["seeds"]))
    base = int(cfg.get("seed_base", _DEFAULTS["seed_base"]))
    return ExperimentConfig(
        stream=stream,
        make_learner=factory,
        seeds=tuple(range(base, base + n_seeds)),
        record_stride=int(cfg.get("record_stride", _DEFAULTS["record_stride"])),
    )


def build_constants(cfg: dict) -> ProblemConstants | None:
    if "constants.mu" not in cfg and "constants.c" not in cfg:
        return None
    projection = cfg.get("projection", _DEFAULTS["projection"])
    return ProblemConstants(
        mu=float(cfg.get("constants.mu", 0.0)),
        c=float(cfg.get("constants.c", 0.0)),
        lo=float(projection[0]),
        hi=float(projection[1]),
    )
