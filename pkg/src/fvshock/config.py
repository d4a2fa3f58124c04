"""Plain-text run configuration: one ``key = value`` per line, ``#`` comments.

Unknown keys are rejected so typos fail loudly.  A limiting setting is
``everywhere``, ``first_order`` or ``restricted`` (threshold taken from the
``k`` key, or inline as ``restricted:0.05``); the ``limiting`` key may list
several comma-separated settings for the compare command.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError
from .solver import LIMITING_MODES, RunConfig

KNOWN_KEYS = {
    "case": str,
    "mode": str,
    "limiting": str,
    "k": float,
    "k_list": str,
    "nx": int,
    "ny": int,
    "cfl": float,
    "max_iterations": int,
    "tol": float,
    "final_time": float,
    "write_vtk": str,
    "out_dir": str,
}

_BOOL = {"true": True, "false": False, "yes": True, "no": False, "1": True, "0": False}


@dataclass(frozen=True)
class LimitingSetting:
    mode: str
    k: float | None = None

    @property
    def label(self) -> str:
        if self.mode == "restricted":
            return f"restricted-k{self.k:g}"
        return self.mode


@dataclass
class FileConfig:
    case_name: str
    mode: str = "steady"
    settings: list[LimitingSetting] = field(default_factory=list)
    k_list: list[float] = field(default_factory=list)
    nx: int | None = None
    ny: int | None = None
    cfl: float = 0.2
    max_iterations: int = 15000
    tol: float = 1e-14
    final_time: float | None = None
    write_vtk: bool = False
    out_dir: str | None = None
    config_hash: str = ""

    def run_config(self, setting: LimitingSetting) -> RunConfig:
        return RunConfig(
            mode=self.mode,
            limiting=setting.mode,
            k_threshold=setting.k,
            cfl=self.cfl,
            max_iterations=self.max_iterations,
            convergence_tol=self.tol,
            final_time=self.final_time,
            nx=self.nx,
            ny=self.ny,
        )


def _parse_lines(text: str) -> dict[str, str]:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        if not value:
            raise ConfigError(f"line {lineno}: key {key!r} has no value")
        values[key] = value
    return values


def _typed(values: dict[str, str]) -> dict:
    out: dict = {}
    for key, raw in values.items():
        caster = KNOWN_KEYS[key]
        if caster is str:
            out[key] = raw
            continue
        try:
            out[key] = caster(raw)
        except ValueError as exc:
            raise ConfigError(f"key {key!r}: cannot parse {raw!r} as {caster.__name__}") from exc
    return out


def _parse_limiting(raw: str, default_k: float | None) -> list[LimitingSetting]:
    settings = []
    for item in (part.strip() for part in raw.split(",")):
        if not item:
            raise ConfigError("empty entry in 'limiting' list")
        mode, _, inline_k = item.partition(":")
        if mode not in LIMITING_MODES:
            raise ConfigError(f"unknown limiting setting {mode!r}; expected one of {LIMITING_MODES}")
        k = None
        if mode == "restricted":
            if inline_k:
                try:
                    k = float(inline_k)
                except ValueError as exc:
                    raise ConfigError(f"cannot parse threshold in {item!r}") from exc
            elif default_k is not None:
                k = default_k
            else:
                raise ConfigError("limiting = restricted requires the key 'k'")
        elif inline_k:
            raise ConfigError(f"limiting setting {mode!r} takes no threshold")
        settings.append(LimitingSetting(mode=mode, k=k))
    return settings


def config_hash(values: dict[str, str]) -> str:
    canon = "\n".join(f"{k} = {values[k]}" for k in sorted(values))
    return hashlib.sha256(canon.encode()).hexdigest()[:12]


def parse_config_text(text: str) -> FileConfig:
    values = _parse_lines(text)
    typed = _typed(values)
    if "case" not in typed:
        raise ConfigError("missing required key 'case'")

    cfg = FileConfig(case_name=typed["case"], config_hash=config_hash(values))
    cfg.mode = typed.get("mode", cfg.mode)
    if cfg.mode not in ("steady", "unsteady"):
        raise ConfigError(f"mode must be steady or unsteady, got {cfg.mode!r}")
    cfg.settings = _parse_limiting(typed.get("limiting", "everywhere"), typed.get("k"))
    if "k_list" in typed:
        try:
            cfg.k_list = [float(part) for part in typed["k_list"].split(",") if part.strip()]
        except ValueError as exc:
            raise ConfigError(f"cannot parse k_list {typed['k_list']!r}") from exc
    for key in ("nx", "ny", "cfl", "max_iterations", "tol", "final_time", "out_dir"):
        if key in typed:
            setattr(cfg, key, typed[key])
    if "write_vtk" in typed:
        flag = _BOOL.get(typed["write_vtk"].lower())
        if flag is None:
            raise ConfigError(f"write_vtk must be true or false, got {typed['write_vtk']!r}")
        cfg.write_vtk = flag
    return cfg


def load_config(path: str | Path) -> FileConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return parse_config_text(text)
