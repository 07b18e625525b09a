"""
Runtime configuration for numeric precision, tolerances and sweep seeds
"""

import json
import logging
import os
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import load_dotenv

from .errors import ParseError

logger = logging.getLogger(__name__)

load_dotenv()

DEFAULT_CONFIG_PATH = "hypeval.json"

_ENV_OVERRIDES = {
    "HYPEVAL_PRECISION": ("precision_bits", int),
    "HYPEVAL_SEED": ("seed", int),
    "HYPEVAL_TOL": ("tol", float),
    "HYPEVAL_WORKERS": ("workers", int),
}


@dataclass(frozen=True)
class Settings:
    """Numeric and sweep configuration"""
    precision_bits: int = 53    # mpmath mantissa bits
    guard_bits: int = 20        # extra working bits inside kernels
    tol: float = 1e-9           # default residual tolerance for sweeps
    max_terms: int = 10000      # series term budget
    seed: int = 7               # default sweep seed
    workers: int = 4            # concurrent sweep workers

    def __post_init__(self):
        if self.precision_bits < 53:
            raise ParseError(f"precision_bits must be at least 53, got {self.precision_bits}")
        if self.max_terms <= 0 or self.workers <= 0:
            raise ParseError("max_terms and workers must be positive")

    @property
    def working_bits(self) -> int:
        return self.precision_bits + self.guard_bits


def _load_settings(config_path: Optional[str] = None) -> Settings:
    """Defaults, then JSON file, then environment"""
    path = config_path or os.environ.get("HYPEVAL_CONFIG", DEFAULT_CONFIG_PATH)
    values: Dict[str, Any] = {}
    known = {f.name for f in fields(Settings)}

    if os.path.exists(path):
        try:
            with open(path, "r") as f:
                data = json.load(f)
            values.update({k: v for k, v in data.items() if k in known})
            ignored = sorted(set(data) - known)
            if ignored:
                logger.warning("Ignoring unknown settings keys in %s: %s", path, ignored)
        except (json.JSONDecodeError, TypeError, AttributeError) as e:
            logger.warning("Failed to load settings from %s: %s", path, e)

    for env_name, (key, cast) in _ENV_OVERRIDES.items():
        raw = os.environ.get(env_name)
        if raw is None or raw == "":
            continue
        try:
            values[key] = cast(raw)
        except ValueError:
            logger.warning("Ignoring malformed %s=%r", env_name, raw)

    return Settings(**values)


def save_settings(settings: Settings, path: str = DEFAULT_CONFIG_PATH) -> Path:
    """Write settings as JSON"""
    target = Path(path)
    if target.parent != Path("."):
        target.parent.mkdir(parents=True, exist_ok=True)
    with open(target, "w") as f:
        json.dump(asdict(settings), f, indent=2)
    return target


# Process-wide settings instance
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Get the active settings, loading them on first use"""
    global _settings
    if _settings is None:
        _settings = _load_settings()
    return _settings


def configure(config_path: Optional[str] = None, **overrides: Any) -> Settings:
    """Reload settings and apply explicit overrides (CLI flags, tests)"""
    global _settings
    base = _load_settings(config_path)
    overrides = {k: v for k, v in overrides.items() if v is not None}
    _settings = replace(base, **overrides)
    logger.debug("Settings configured: %s", _settings)
    return _settings


def reset_settings() -> None:
    """Drop the cached instance so the next access reloads"""
    global _settings
    _settings = None
