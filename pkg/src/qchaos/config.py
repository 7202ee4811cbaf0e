"""Scenario configuration: sectioned key = value documents with validation.

Sections: [model], [run], [controller], [analysis], [output]. The controller
section is optional (absent = simulation-only scenario). Unknown keys,
missing required keys and out-of-range values raise ConfigError naming the
offending key and section.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from .control import ControllerConfig, routh_hurwitz
from .errors import ConfigError

Vec4 = Tuple[float, float, float, float]

_KNOWN_KEYS = {
    "model": {"beta", "gamma", "branch", "n1", "n2"},
    "run": {"initial", "initial_b", "t_final", "dt", "stride"},
    "controller": {"c", "k", "q", "r", "epsilon", "master"},
    "analysis": {"embed_dim", "delay_min", "delay_max", "k_max", "spectrum",
                 "grid_min", "grid_max", "grid_n", "x_imag", "y_imag"},
    "output": {"directory", "formats"},
}

_TRUE = {"1", "on", "true", "yes"}
_FALSE = {"0", "off", "false", "no"}


@dataclass
class ModelSection:
    beta: float
    gamma: float
    branch: str = "plus"
    n1: int = 1
    n2: int = 0


@dataclass
class RunSection:
    initial: Optional[Vec4] = None
    initial_b: Optional[Vec4] = None
    t_final: float = 100.0
    dt: float = 1e-3
    stride: int = 10


@dataclass
class ControllerSection:
    master: Vec4
    controller: ControllerConfig


@dataclass
class AnalysisSection:
    embed_dim: int = 6
    delay_min: int = 5
    delay_max: int = 15
    k_max: int = 600
    spectrum: bool = True
    grid_min: float = -5.0
    grid_max: float = 5.0
    grid_n: int = 41
    x_imag: float = 0.0
    y_imag: float = 0.0


@dataclass
class OutputSection:
    directory: str = "out"
    formats: Tuple[str, ...] = ("csv",)


@dataclass
class ScenarioConfig:
    model: ModelSection
    run: RunSection = field(default_factory=RunSection)
    controller: Optional[ControllerSection] = None
    analysis: AnalysisSection = field(default_factory=AnalysisSection)
    output: OutputSection = field(default_factory=OutputSection)


def _err(section: str, key: str, msg: str) -> ConfigError:
    return ConfigError(f"[{section}] {key}: {msg}")


class _Section:
    def __init__(self, name: str, data: Dict[str, str]):
        self.name = name
        self.data = data

    def get(self, key: str, default=None):
        return self.data.get(key, default)

    def number(self, key: str, default=None, kind=float):
        raw = self.data.get(key)
        if raw is None:
            if default is None:
                raise _err(self.name, key, "required key is missing")
            return default
        try:
            return kind(raw) if kind is not int else int(float(raw))
        except ValueError:
            raise _err(self.name, key, f"expected a number, got {raw!r}") from None

    def vec4(self, key: str, default=None):
        raw = self.data.get(key)
        if raw is None:
            if default is None:
                raise _err(self.name, key, "required key is missing")
            return default
        parts = raw.replace(",", " ").split()
        if len(parts) != 4:
            raise _err(self.name, key, f"expected 4 numbers, got {len(parts)}")
        try:
            return tuple(float(p) for p in parts)
        except ValueError:
            raise _err(self.name, key, f"expected numbers, got {raw!r}") from None

    def flag(self, key: str, default: bool) -> bool:
        raw = self.data.get(key)
        if raw is None:
            return default
        low = raw.strip().lower()
        if low in _TRUE:
            return True
        if low in _FALSE:
            return False
        raise _err(self.name, key, f"expected on/off, got {raw!r}")


def parse_config(text: str, overrides: Optional[Dict[Tuple[str, str], str]] = None
                 ) -> ScenarioConfig:
    """Parse and validate a scenario document; overrides are (section, key) -> value."""
    parser = configparser.ConfigParser(interpolation=None,
                                       inline_comment_prefixes=("#",))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    for section, key in (overrides or {}):
        if not parser.has_section(section):
            parser.add_section(section)
        parser[section][key] = overrides[(section, key)]

    for section in parser.sections():
        if section not in _KNOWN_KEYS:
            raise ConfigError(f"unknown section [{section}]")
        for key in parser[section]:
            if key not in _KNOWN_KEYS[section]:
                raise _err(section, key, "unknown key")

    def sec(name: str) -> _Section:
        return _Section(name, dict(parser[name]) if parser.has_section(name) else {})

    model_raw = sec("model")
    if not model_raw.data:
        raise ConfigError("missing required section [model]")
    branch = model_raw.get("branch", "plus")
    if branch not in ("plus", "minus"):
        raise _err("model", "branch", f"expected plus or minus, got {branch!r}")
    model = ModelSection(
        beta=model_raw.number("beta"),
        gamma=model_raw.number("gamma"),
        branch=branch,
        n1=model_raw.number("n1", 1, int),
        n2=model_raw.number("n2", 0, int),
    )
    if model.beta < 0:
        raise _err("model", "beta", f"must be >= 0, got {model.beta}")
    if model.gamma <= 0:
        raise _err("model", "gamma", f"must be > 0, got {model.gamma}")
    if model.gamma == 1.0:
        raise _err("model", "gamma", "gamma = 1 is degenerate (no anisotropy)")
    if model.n1 < 0 or model.n2 < 0:
        raise _err("model", "n1", "quantum numbers must be non-negative")
    if (model.n1, model.n2) not in ((0, 0), (1, 0)):
        raise _err("model", "n1",
                   f"simulated states are (0,0) and (1,0), got ({model.n1},{model.n2})")

    run_raw = sec("run")
    run = RunSection(
        initial=run_raw.vec4("initial", default=()) or None,
        initial_b=run_raw.vec4("initial_b", default=()) or None,
        t_final=run_raw.number("t_final", 100.0),
        dt=run_raw.number("dt", 1e-3),
        stride=run_raw.number("stride", 10, int),
    )
    if run.t_final <= 0:
        raise _err("run", "t_final", f"must be > 0, got {run.t_final}")
    if run.dt <= 0:
        raise _err("run", "dt", f"must be > 0, got {run.dt}")
    if run.stride < 1:
        raise _err("run", "stride", f"must be >= 1, got {run.stride}")

    controller = None
    ctrl_raw = sec("controller")
    if ctrl_raw.data:
        c = ctrl_raw.vec4("c", (1.0, 2.0, 2.0, 1.0))
        k = ctrl_raw.vec4("k", (1.0, 0.0, 1.0, 0.0))
        q = ctrl_raw.number("q", 1.0)
        r = ctrl_raw.number("r", 1.0)
        epsilon = ctrl_raw.number("epsilon", 0.05)
        master = ctrl_raw.vec4("master")
        if c[3] != 1.0:
            raise _err("controller", "c", f"last entry must be 1, got {c[3]}")
        if k[1] != 0.0 or k[3] != 0.0:
            raise _err("controller", "k", "entries 2 and 4 must be 0")
        if q <= 0:
            raise _err("controller", "q", f"must be > 0, got {q}")
        if r <= 0:
            raise _err("controller", "r", f"must be > 0, got {r}")
        if epsilon <= 0:
            raise _err("controller", "epsilon", f"must be > 0, got {epsilon}")
        if not routh_hurwitz(c[0], c[1], c[2]):
            raise _err("controller", "c", f"(c1,c2,c3)={c[:3]} fails Routh-Hurwitz")
        if model.n1 != 1 or model.n2 != 0:
            raise _err("controller", "master",
                       "synchronization runs on the first excited state (n1=1, n2=0)")
        try:
            cfg = ControllerConfig(c=c, k=k, q=q, r=r, epsilon=epsilon)
        except Exception as exc:
            raise _err("controller", "c", str(exc)) from None
        controller = ControllerSection(master=master, controller=cfg)

    ana_raw = sec("analysis")
    analysis = AnalysisSection(
        embed_dim=ana_raw.number("embed_dim", 6, int),
        delay_min=ana_raw.number("delay_min", 5, int),
        delay_max=ana_raw.number("delay_max", 15, int),
        k_max=ana_raw.number("k_max", 600, int),
        spectrum=ana_raw.flag("spectrum", True),
        grid_min=ana_raw.number("grid_min", -5.0),
        grid_max=ana_raw.number("grid_max", 5.0),
        grid_n=ana_raw.number("grid_n", 41, int),
        x_imag=ana_raw.number("x_imag", 0.0),
        y_imag=ana_raw.number("y_imag", 0.0),
    )
    if analysis.embed_dim < 1:
        raise _err("analysis", "embed_dim", "must be >= 1")
    if not (1 <= analysis.delay_min <= analysis.delay_max):
        raise _err("analysis", "delay_min", "need 1 <= delay_min <= delay_max")
    if analysis.grid_n < 2:
        raise _err("analysis", "grid_n", "must be >= 2")
    if analysis.grid_max <= analysis.grid_min:
        raise _err("analysis", "grid_max", "must exceed grid_min")

    out_raw = sec("output")
    formats_raw = out_raw.get("formats", "csv")
    formats = tuple(formats_raw.split())
    for fmt in formats:
        if fmt not in ("csv", "svg"):
            raise _err("output", "formats", f"unknown format {fmt!r}")
    output = OutputSection(directory=out_raw.get("directory", "out"), formats=formats)

    return ScenarioConfig(model=model, run=run, controller=controller,
                          analysis=analysis, output=output)
