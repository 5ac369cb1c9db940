"""Run configuration: tolerances, cache location and output format.

A configuration file is plain ``key = value`` lines; ``#`` starts a comment.
Command-line flags override values read from the file.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields, replace

from .algebraic import DEFAULT_POLE_TOL
from .spectral import NEWTON_TOL, QUAD_TOL

__all__ = ["Config", "load_config", "parse_config_text", "FORMATS"]

FORMATS = ("json", "csv", "pretty")


@dataclass(frozen=True)
class Config:
    quadrature_tol: float = QUAD_TOL
    newton_tol: float = NEWTON_TOL
    trace_tol: float = 1e-6
    pole_tol: float = DEFAULT_POLE_TOL
    cache_path: str = ""
    output_format: str = "json"
    parallelism: int = 1

    def __post_init__(self):
        for name in ("quadrature_tol", "newton_tol", "trace_tol", "pole_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.output_format not in FORMATS:
            raise ValueError(f"output_format must be one of {', '.join(FORMATS)}")
        if self.parallelism < 1:
            raise ValueError("parallelism must be at least 1")

    def updated(self, **overrides):
        """Copy with the non-``None`` overrides applied."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def as_dict(self):
        return asdict(self)


_TYPES = {f.name: f.type for f in fields(Config)}
_CASTS = {"float": float, "int": int, "str": str}


def parse_config_text(text: str) -> dict:
    """Parse ``key = value`` lines into typed values.

    Raises
    ------
    ValueError
        On unknown keys, malformed lines or values of the wrong type.
    """
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _TYPES:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        out[key] = _CASTS[_TYPES[key]](value)
    return out


def load_config(path: str | None = None, **overrides) -> Config:
    """Defaults, then the file at ``path`` (if any), then ``overrides``."""
    values = {}
    if path:
        with open(path) as fh:
            values = parse_config_text(fh.read())
    return Config(**values).updated(**overrides)
