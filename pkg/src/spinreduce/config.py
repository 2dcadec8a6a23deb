"""Flat key = value run configuration: parsing, defaults, echo.

One format for every command, no environment variables. Lines are
``key = value``; ``#`` starts a comment. The echoed resolved configuration
is itself a valid config file, so a run can always be reproduced from its
output directory.
"""

from dataclasses import dataclass, fields

from .errors import ConfigError
from .hamiltonian import BOUNDARIES


def _parse_optional_int(s):
    return None if s == "" or s.lower() == "none" else int(s)


def _parse_m_tot(s):
    v = float(s)
    return int(v) if v == int(v) else v


# file key -> (attribute, converter)
_KEYS = {
    "L": ("L", int),
    "J_t": ("j_t", float),
    "J_l": ("j_l", float),
    "J_c": ("j_c", float),
    "M_tot": ("m_tot", _parse_m_tot),
    "boundary": ("boundary", str),
    "k": ("k", int),
    "tol": ("tol", float),
    "max_iter": ("max_iter", _parse_optional_int),
    "seed": ("seed", int),
    "n_min": ("n_min", int),
    "p_max": ("p_max", float),
    "batch": ("batch", int),
    "batch_frac": ("batch_frac", float),
    "batch_floor": ("batch_floor", int),
    "scan.from": ("scan_from", float),
    "scan.to": ("scan_to", float),
    "scan.points": ("scan_points", int),
}
_ATTR_TO_KEY = {attr: key for key, (attr, _) in _KEYS.items()}


@dataclass
class RunConfig:
    L: int = 0
    j_t: float = 0.0
    j_l: float = 0.0
    j_c: float = 0.0
    m_tot: float = 0
    boundary: str = "open"
    k: int = 3
    tol: float = 1e-10
    max_iter: int | None = None
    seed: int = 1234
    n_min: int = 8
    p_max: float = 5.0
    batch: int = 1
    batch_frac: float = 0.0
    batch_floor: int = 0
    scan_from: float | None = None
    scan_to: float | None = None
    scan_points: int = 41


_REQUIRED = {
    "spectrum": ("L", "J_t", "J_l", "J_c"),
    "reduce": ("L", "J_t", "J_l", "J_c"),
    "scan": ("L", "J_t", "scan.from", "scan.to"),
    "oracle-check": ("J_t", "J_l", "J_c"),
}


def parse_config_text(text: str) -> dict:
    """Raw key -> string value map, validating key names and syntax."""
    raw = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, value = (part.strip() for part in stripped.split("=", 1))
        if key not in _KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in raw:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        raw[key] = value
    return raw


def resolve_config(raw: dict, command: str) -> RunConfig:
    """Typed configuration with defaults applied and requirements checked."""
    if command not in _REQUIRED:
        raise ConfigError(f"unknown command {command!r}")
    missing = [k for k in _REQUIRED[command] if k not in raw]
    if missing:
        raise ConfigError(f"missing required keys for {command}: {', '.join(missing)}")
    cfg = RunConfig()
    for key, value in raw.items():
        attr, conv = _KEYS[key]
        try:
            setattr(cfg, attr, conv(value))
        except ValueError as exc:
            raise ConfigError(f"key {key!r}: cannot parse {value!r}") from exc
    if cfg.boundary not in BOUNDARIES:
        raise ConfigError(f"boundary must be one of {BOUNDARIES}")
    if command == "scan":
        if cfg.scan_to <= cfg.scan_from:
            raise ConfigError("scan.to must exceed scan.from")
        if cfg.scan_points < 3:
            raise ConfigError("scan.points must be >= 3")
        if "J_l" not in raw:
            cfg.j_l = cfg.scan_from
        if "J_c" not in raw:
            cfg.j_c = cfg.scan_from
    return cfg


def echo_text(cfg: RunConfig) -> str:
    """Render the resolved configuration as a reparseable config file."""
    lines = []
    for f in fields(RunConfig):
        key = _ATTR_TO_KEY[f.name]
        value = getattr(cfg, f.name)
        if value is None:
            if f.name in ("scan_from", "scan_to"):
                continue  # meaningful only for scan runs
            value = ""
        lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"


def load_config(path, command: str) -> RunConfig:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return resolve_config(parse_config_text(text), command)
