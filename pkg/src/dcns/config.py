"""Flat INI run configuration with a strict key schema.

Parsing and re-serializing a config is an identity; unknown sections or keys
are hard errors so typos cannot silently fall back to defaults.
"""
from __future__ import annotations

import configparser
import io as _io
from dataclasses import dataclass, field, fields as dc_fields

from .errors import ConfigError


@dataclass(frozen=True)
class ModelSection:
    gamma: float = 1.4
    nu: float = 1.0
    alpha: float = 1.0
    beta: float = 0.0
    A: float = 1.0
    R: float = 1.0
    S_bar: float = 0.0


@dataclass(frozen=True)
class DomainSection:
    L: float = 5.0
    N: int = 512


@dataclass(frozen=True)
class InitSection:
    kappa: float = 0.7
    q: float = 24.0
    u0_amp: float = 0.5
    u0_radius: float = 2.0
    s0_amp: float = 0.1
    eta: float = 1e-2


@dataclass(frozen=True)
class RegularizationSection:
    eps: float = 1e-3


@dataclass(frozen=True)
class TimeSection:
    t_end: float = 0.01
    cfl: float = 0.4
    dt_max: float = 2.5e-4
    snapshot_every: int = 0


@dataclass(frozen=True)
class PicardSection:
    max_iters: int = 30
    tol: float = 1e-12
    upsilon1: float = 1.0
    max_halvings: int = 6


@dataclass(frozen=True)
class ContinuationSection:
    param: str = "eps"
    start: float = 1e-2
    factor: float = 0.5
    count: int = 5
    R0: float = 2.5


@dataclass(frozen=True)
class OutputSection:
    dir: str = "out"


@dataclass(frozen=True)
class RunConfig:
    model: ModelSection = field(default_factory=ModelSection)
    domain: DomainSection = field(default_factory=DomainSection)
    init: InitSection = field(default_factory=InitSection)
    regularization: RegularizationSection = field(default_factory=RegularizationSection)
    time: TimeSection = field(default_factory=TimeSection)
    picard: PicardSection = field(default_factory=PicardSection)
    continuation: ContinuationSection = field(default_factory=ContinuationSection)
    output: OutputSection = field(default_factory=OutputSection)


_SECTION_TYPES = {
    "model": ModelSection,
    "domain": DomainSection,
    "init": InitSection,
    "regularization": RegularizationSection,
    "time": TimeSection,
    "picard": PicardSection,
    "continuation": ContinuationSection,
    "output": OutputSection,
}


def _convert(raw: str, typ, section: str, key: str):
    raw = raw.strip()
    try:
        if typ is int:
            return int(raw)
        if typ is float:
            return float(raw)
        return raw
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key} = {raw!r} is not a valid {typ.__name__}") from exc


def parse_config(text: str) -> RunConfig:
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from exc

    sections: dict[str, object] = {}
    for section in parser.sections():
        if section not in _SECTION_TYPES:
            raise ConfigError(f"unknown section [{section}]")
        typ = _SECTION_TYPES[section]
        known = {f.name: f.type for f in dc_fields(typ)}
        values = {}
        for key, raw in parser[section].items():
            if key not in known:
                raise ConfigError(f"unknown key {key!r} in section [{section}]")
            pytyp = {"float": float, "int": int, "str": str}[known[key]] \
                if isinstance(known[key], str) else known[key]
            values[key] = _convert(raw, pytyp, section, key)
        sections[section] = typ(**values)

    cfg = RunConfig(**sections)
    if cfg.continuation.param not in ("eps", "eta"):
        raise ConfigError(
            f"[continuation] param = {cfg.continuation.param!r} must be eps or eta")
    return cfg


def load_config(path: str) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_config(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def dump_config(cfg: RunConfig) -> str:
    out = _io.StringIO()
    for section, typ in _SECTION_TYPES.items():
        sub = getattr(cfg, section)
        out.write(f"[{section}]\n")
        for f in dc_fields(typ):
            out.write(f"{f.name} = {_fmt(getattr(sub, f.name))}\n")
        out.write("\n")
    return out.getvalue()
