"""Run configuration: flat INI files of ``key = value`` sections.

Numeric fields accept plain arithmetic with ``pi`` (``alpha_B = 2*pi/3``).
A switching schedule is written as ``alpha:duration`` pairs separated by
commas.

Example::

    [model]
    p = 2
    Lambda = 0.7
    h = 0.1
    alpha_B = pi

    [system]
    N = 256

    [dynamics]
    T_max = 4096
    theta = pi/5
    phi = 0
"""
from __future__ import annotations

import ast
import configparser
from dataclasses import dataclass, field, fields, asdict
import math
import operator
from pathlib import Path

__all__ = [
    "ConfigError",
    "ModelSection",
    "DynamicsSection",
    "AnalysisSection",
    "SweepSection",
    "RunConfig",
    "parse_number",
    "load_config",
    "loads_config",
    "dumps_config",
    "write_config",
]

DIAGNOSTICS = ("rtilde", "otoc", "gmeasure")


class ConfigError(ValueError):
    """Invalid or incomplete configuration."""


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}


def parse_number(text: str) -> float:
    """Evaluate a float literal or simple arithmetic involving ``pi``."""
    try:
        node = ast.parse(text.strip(), mode="eval").body
    except SyntaxError as exc:
        raise ConfigError(f"cannot parse number {text!r}") from exc

    def ev(n):
        if isinstance(n, ast.Constant) and isinstance(n.value, (int, float)) and not isinstance(n.value, bool):
            return float(n.value)
        if isinstance(n, ast.Name) and n.id == "pi":
            return math.pi
        if isinstance(n, ast.UnaryOp) and isinstance(n.op, (ast.USub, ast.UAdd)):
            v = ev(n.operand)
            return -v if isinstance(n.op, ast.USub) else v
        if isinstance(n, ast.BinOp) and type(n.op) in _BINOPS:
            return _BINOPS[type(n.op)](ev(n.left), ev(n.right))
        raise ConfigError(f"unsupported expression {text!r}")

    value = ev(node)
    if not math.isfinite(value):
        raise ConfigError(f"{text!r} is not finite")
    return value


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, (list, tuple)):
        return ", ".join(_fmt(v) for v in x)
    return str(x)


@dataclass
class ModelSection:
    p: int
    Lambda: float
    h: float = 0.0
    alpha_B: float = math.pi
    mode: str = "kicked"


@dataclass
class DynamicsSection:
    T_max: int = 1024
    theta: float = 0.0
    phi: float = 0.0
    dicke: float | None = None


@dataclass
class AnalysisSection:
    q: int = 2
    threshold: float = 0.01
    drop_transient: int = 0
    normalize: bool = False
    burn_in: int = 0
    bins: int = 64
    grid_points: int = 14000


@dataclass
class SweepSection:
    diagnostic: str = "rtilde"
    lambda_min: float = 0.1
    lambda_max: float = 1.0
    lambda_count: int = 8
    alpha_min: float = math.pi - 0.5
    alpha_max: float = math.pi + 0.5
    alpha_count: int = 8

    @property
    def shape(self) -> tuple[int, int]:
        return self.lambda_count, self.alpha_count


@dataclass
class RunConfig:
    """Everything a CLI run needs; see the module docstring for the file format."""

    model: ModelSection
    N: int
    dynamics: DynamicsSection = field(default_factory=DynamicsSection)
    analysis: AnalysisSection = field(default_factory=AnalysisSection)
    sweep: SweepSection | None = None
    schedule: list[tuple[float, int]] | None = None
    out_dir: str = "results"
    seed: int = 0

    def validate(self) -> "RunConfig":
        m = self.model
        if int(m.p) != m.p or m.p < 2:
            raise ConfigError("model.p must be an integer >= 2")
        if m.Lambda < 0:
            raise ConfigError("model.Lambda must be >= 0")
        if m.mode not in ("kicked", "exact-drive"):
            raise ConfigError("model.mode must be 'kicked' or 'exact-drive'")
        if self.N < 1:
            raise ConfigError("system.N must be >= 1")
        d = self.dynamics.dicke
        if d is not None and not (float(self.N / 2 - d).is_integer() and abs(d) <= self.N / 2):
            raise ConfigError(f"dynamics.dicke = {d} is not a valid M for N = {self.N}")
        if self.dynamics.T_max < 1:
            raise ConfigError("dynamics.T_max must be >= 1")
        if self.analysis.q < 1:
            raise ConfigError("analysis.q must be >= 1")
        if self.sweep is not None:
            s = self.sweep
            if s.diagnostic not in DIAGNOSTICS:
                raise ConfigError(f"sweep.diagnostic must be one of {DIAGNOSTICS}")
            if s.lambda_count < 1 or s.alpha_count < 1:
                raise ConfigError("sweep ranges must be non-empty")
            if s.lambda_max < s.lambda_min or s.alpha_max < s.alpha_min:
                raise ConfigError("sweep ranges must have max >= min")
        if self.schedule is not None:
            if not self.schedule:
                raise ConfigError("switching.schedule is empty")
            for a, d in self.schedule:
                if not math.isfinite(a):
                    raise ConfigError("switching angles must be finite")
                if d < 1:
                    raise ConfigError("switching durations must be >= 1")
        return self


def _convert(raw: str, kind, key: str):
    try:
        if kind in ("int", int):
            v = parse_number(raw)
            if v != int(v):
                raise ConfigError(f"must be an integer, got {raw!r}")
            return int(v)
        if kind in ("float", float, "float | None"):
            return parse_number(raw)
        if kind in ("bool", bool):
            low = raw.strip().lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ConfigError(f"must be a boolean, got {raw!r}")
        return raw.strip()
    except ConfigError as exc:
        raise ConfigError(f"{key}: {exc}") from None


def _section(parser, name, cls, required=()):
    values = {}
    known = {f.name: f for f in fields(cls)}
    if parser.has_section(name):
        for key, raw in parser.items(name):
            if key not in known:
                raise ConfigError(f"unknown key {name}.{key}")
            values[key] = _convert(raw, known[key].type, f"{name}.{key}")
    for key in required:
        if key not in values:
            raise ConfigError(f"missing required key {name}.{key}")
    return cls(**values)


def _parse_schedule(text: str) -> list[tuple[float, int]]:
    out = []
    for item in text.split(","):
        if not item.strip():
            continue
        try:
            a, d = item.split(":")
        except ValueError:
            raise ConfigError(f"switching.schedule entry {item.strip()!r} is not alpha:duration") from None
        dur = parse_number(d)
        if dur != int(dur):
            raise ConfigError(f"switching.schedule duration {d.strip()!r} is not an integer")
        out.append((parse_number(a), int(dur)))
    return out


def loads_config(text: str, source: str = "<string>") -> RunConfig:
    """Parse configuration text.

    Raises
    ------
    ConfigError
        On syntax errors (with line number), missing required keys
        (named as ``section.key``), unknown keys or invalid values.
    """
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read_string(text, source=source)
    except configparser.ParsingError as exc:
        lines = ", ".join(f"line {ln}: {line.strip()}" for ln, line in exc.errors)
        raise ConfigError(f"{source}: syntax error at {lines}") from None
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from None

    known_sections = {"model", "system", "dynamics", "analysis", "sweep", "switching", "output", "run"}
    for sec in parser.sections():
        if sec not in known_sections:
            raise ConfigError(f"unknown section [{sec}]")
    if not parser.has_section("model"):
        raise ConfigError("missing required key model.p")
    model = _section(parser, "model", ModelSection, required=("p", "Lambda"))
    if not parser.has_option("system", "N"):
        raise ConfigError("missing required key system.N")
    N = _convert(parser.get("system", "N"), int, "system.N")
    dynamics = _section(parser, "dynamics", DynamicsSection)
    analysis = _section(parser, "analysis", AnalysisSection)
    sweep = _section(parser, "sweep", SweepSection) if parser.has_section("sweep") else None
    schedule = None
    if parser.has_section("switching"):
        if not parser.has_option("switching", "schedule"):
            raise ConfigError("missing required key switching.schedule")
        schedule = _parse_schedule(parser.get("switching", "schedule"))
    out_dir = parser.get("output", "dir", fallback="results")
    seed = _convert(parser.get("run", "seed", fallback="0"), int, "run.seed")
    return RunConfig(model=model, N=N, dynamics=dynamics, analysis=analysis, sweep=sweep,
                     schedule=schedule, out_dir=out_dir, seed=seed).validate()


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return loads_config(text, source=str(path))


def dumps_config(cfg: RunConfig) -> str:
    """Serialize so that ``loads_config(dumps_config(c)) == c``."""
    parts = []

    def block(name, obj):
        lines = [f"[{name}]"]
        for k, v in asdict(obj).items():
            if v is not None:
                lines.append(f"{k} = {_fmt(v)}")
        parts.append("\n".join(lines))

    block("model", cfg.model)
    parts.append(f"[system]\nN = {cfg.N}")
    block("dynamics", cfg.dynamics)
    block("analysis", cfg.analysis)
    if cfg.sweep is not None:
        block("sweep", cfg.sweep)
    if cfg.schedule is not None:
        sched = ", ".join(f"{a!r}:{d}" for a, d in cfg.schedule)
        parts.append(f"[switching]\nschedule = {sched}")
    parts.append(f"[output]\ndir = {cfg.out_dir}")
    parts.append(f"[run]\nseed = {cfg.seed}")
    return "\n\n".join(parts) + "\n"


def write_config(cfg: RunConfig, path) -> None:
    Path(path).write_text(dumps_config(cfg))
