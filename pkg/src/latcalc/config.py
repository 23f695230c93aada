"""Experiment configuration: a frozen dataclass, a flat key=value file
format, and one validation path shared by the CLI and the service.

File format: one `key = value` pair per line, `#` starts a comment, blank
lines are ignored.  List-valued keys take comma-separated entries.  The full
schema is documented in the README and in DEFAULTS below.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "parse_config_text",
    "config_from_mapping",
    "EXPERIMENTS",
    "APPROX_TARGETS",
]

EXPERIMENTS = ("verify", "kalton", "counterexample", "approx")
APPROX_TARGETS = ("euclidean", "linear", "constant", "pnorm")
_RULES = ("trapezoid", "midpoint")


class ConfigError(ValueError):
    """A configuration the runner refuses to start with."""


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    kernel: str = "kalton"
    dim: int = 64
    seed: int = 0
    arity: int = 2
    kmax: int = 20
    deltas: tuple[float, ...] = (1.0, 0.5)
    quad_n: tuple[int, ...] = (512, 4096)
    target: str = "euclidean"
    p: float = 3.0
    rule: str = "trapezoid"
    tol: float = 1e-12
    out: str | None = None

    def validated(self) -> "ExperimentConfig":
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(
                f"unknown experiment {self.experiment!r}; expected one of {EXPERIMENTS}"
            )
        if self.dim < 1:
            raise ConfigError(f"dim must be >= 1, got {self.dim}")
        if self.arity < 2:
            raise ConfigError(f"arity must be >= 2, got {self.arity}")
        if self.kmax < 1:
            raise ConfigError(f"kmax must be >= 1, got {self.kmax}")
        if not self.deltas:
            raise ConfigError("deltas must be a nonempty schedule")
        for d in self.deltas:
            if not 0.0 < d <= 2.0:
                raise ConfigError(f"every delta must lie in (0, 2], got {d!r}")
        if any(b >= a for a, b in zip(self.deltas, self.deltas[1:])):
            raise ConfigError(f"deltas must strictly decrease, got {self.deltas}")
        if not self.quad_n:
            raise ConfigError("quad_n must be a nonempty schedule")
        if any(n < 1 for n in self.quad_n):
            raise ConfigError(f"every quadrature node count must be >= 1, got {self.quad_n}")
        if any(b <= a for a, b in zip(self.quad_n, self.quad_n[1:])):
            raise ConfigError(f"quad_n must strictly increase, got {self.quad_n}")
        if self.target not in APPROX_TARGETS:
            raise ConfigError(
                f"unknown target {self.target!r}; expected one of {APPROX_TARGETS}"
            )
        if not self.p > 0:
            raise ConfigError(f"p must be positive, got {self.p!r}")
        if self.rule not in _RULES:
            raise ConfigError(f"unknown quadrature rule {self.rule!r}; expected one of {_RULES}")
        if not self.tol > 0:
            raise ConfigError(f"tol must be positive, got {self.tol!r}")
        from .kernels import KERNEL_NAMES  # deferred: keeps config import light

        if self.kernel not in KERNEL_NAMES:
            raise ConfigError(
                f"unknown kernel {self.kernel!r}; expected one of {tuple(KERNEL_NAMES)}"
            )
        return self

    def override(self, **kwargs) -> "ExperimentConfig":
        """Replace the given fields, dropping entries whose value is None."""
        kept = {k: v for k, v in kwargs.items() if v is not None}
        return replace(self, **kept) if kept else self


def parse_config_text(text: str) -> dict[str, str]:
    """Flat key = value lines into a string mapping; errors carry line numbers."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        key = key.strip()
        value = value.strip()
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def _as_int(key: str, value) -> int:
    try:
        return int(str(value).strip())
    except ValueError:
        raise ConfigError(f"{key} must be an integer, got {value!r}") from None


def _as_float(key: str, value) -> float:
    try:
        return float(str(value).strip())
    except ValueError:
        raise ConfigError(f"{key} must be a number, got {value!r}") from None


def _as_float_list(key: str, value) -> tuple[float, ...]:
    if isinstance(value, (list, tuple)):
        parts = list(value)
    else:
        parts = [p for p in str(value).split(",") if p.strip()]
    if not parts:
        raise ConfigError(f"{key} must be a nonempty comma-separated list")
    return tuple(_as_float(key, p) for p in parts)


def _as_int_list(key: str, value) -> tuple[int, ...]:
    if isinstance(value, (list, tuple)):
        parts = list(value)
    else:
        parts = [p for p in str(value).split(",") if p.strip()]
    if not parts:
        raise ConfigError(f"{key} must be a nonempty comma-separated list")
    return tuple(_as_int(key, p) for p in parts)


_COERCERS = {
    "experiment": lambda k, v: str(v).strip(),
    "kernel": lambda k, v: str(v).strip(),
    "dim": _as_int,
    "seed": _as_int,
    "arity": _as_int,
    "kmax": _as_int,
    "deltas": _as_float_list,
    "quad_n": _as_int_list,
    "target": lambda k, v: str(v).strip(),
    "p": _as_float,
    "rule": lambda k, v: str(v).strip(),
    "tol": _as_float,
    "out": lambda k, v: str(v).strip() or None,
}


def config_from_mapping(mapping: dict) -> ExperimentConfig:
    """Build and validate a config from string-ish keys and values."""
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = set(mapping) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}; known keys: {sorted(known)}")
    if "experiment" not in mapping:
        raise ConfigError("config needs an 'experiment' key")
    coerced = {key: _COERCERS[key](key, value) for key, value in mapping.items()}
    return ExperimentConfig(**coerced).validated()
