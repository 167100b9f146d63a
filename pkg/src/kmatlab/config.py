"""Run configuration: TOML files naming a preset, a check list, and
optional output settings."""

import os
from dataclasses import dataclass, field

try:
    import tomllib as _toml
except ImportError:  # python < 3.11
    import tomli as _toml

from .presets import PRESETS

DEFAULT_ZORDER = 8

VERIFY_CHECKS = ("ybe", "k-suite", "tensor-k-suite", "spectral-re",
                 "groupoid", "qsp-relations", "classical-limit")
COMPUTE_TARGETS = ("quasi-k", "tensor-k", "r", "trig-r", "trig-k",
                   "trig-tensor-k")


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    preset: str = "split-sl2"
    checks: list = field(default_factory=list)
    order: int = None
    export: str = None
    report: str = None

    def __post_init__(self):
        if self.preset not in PRESETS:
            raise ConfigError(f"unknown preset {self.preset!r}")
        for c in self.checks:
            if c not in VERIFY_CHECKS:
                raise ConfigError(f"unknown check {c!r}")
        if self.order is None:
            self.order = default_order()
        if not isinstance(self.order, int) or self.order < 1:
            raise ConfigError("order must be a positive integer")


def default_order():
    v = os.environ.get("KMATLAB_ZORDER")
    if v is None:
        return DEFAULT_ZORDER
    try:
        n = int(v)
    except ValueError:
        raise ConfigError(f"KMATLAB_ZORDER={v!r} is not an integer")
    if n < 1:
        raise ConfigError("KMATLAB_ZORDER must be positive")
    return n


def load_config(path):
    try:
        with open(path, "rb") as fh:
            data = _toml.load(fh)
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e}")
    except _toml.TOMLDecodeError as e:
        raise ConfigError(f"{path}: {e}")
    run = data.get("run", data)
    known = {"preset", "checks", "order", "export", "report"}
    bad = set(run) - known
    if bad:
        raise ConfigError(f"{path}: unknown keys {sorted(bad)}")
    return RunConfig(**run)
