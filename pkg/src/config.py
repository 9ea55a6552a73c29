"""
Runtime configuration: environment-driven settings and the validated run config.
"""

import json
import logging
import os
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field, field_validator

from .errors import ConfigError
from .schemas import ToleranceConfig

logger = logging.getLogger(__name__)

DEFAULT_SUITE_PATH = Path(__file__).parent.parent / "data" / "suite_config.json"
MIN_DIM = 2
MAX_DIM = 16


@dataclass(frozen=True)
class Settings:
    """Environment-level defaults."""
    atol: float
    rtol: float
    eig_solver: str
    workers: int
    seed: int
    suite_config: Path

    @property
    def tolerance(self) -> ToleranceConfig:
        return ToleranceConfig(atol=self.atol, rtol=self.rtol)


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"{name} must be a number, got {raw!r}")


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}")


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Read settings once from the environment."""
    solver = os.getenv("VERIFIER_EIG_SOLVER", "jacobi").strip().lower()
    if solver not in ("jacobi", "lapack"):
        raise ConfigError(f"VERIFIER_EIG_SOLVER must be 'jacobi' or 'lapack', got {solver!r}")
    return Settings(
        atol=_env_float("VERIFIER_ATOL", 1e-10),
        rtol=_env_float("VERIFIER_RTOL", 1e-9),
        eig_solver=solver,
        workers=max(1, _env_int("VERIFIER_WORKERS", 1)),
        seed=_env_int("VERIFIER_SEED", 7),
        suite_config=Path(os.getenv("VERIFIER_SUITE_CONFIG", str(DEFAULT_SUITE_PATH))),
    )


def log_environment_config() -> None:
    """Log active environment configuration."""
    settings = get_settings()
    logger.info("Active Environment Configuration:")
    logger.info(f"  VERIFIER_ATOL: {settings.atol}")
    logger.info(f"  VERIFIER_RTOL: {settings.rtol}")
    logger.info(f"  VERIFIER_EIG_SOLVER: {settings.eig_solver}")
    logger.info(f"  VERIFIER_WORKERS: {settings.workers}")
    logger.info(f"  VERIFIER_SEED: {settings.seed}")


class Command(str, Enum):
    VERIFY = "verify"
    COUNTEREXAMPLE = "counterexample"
    CONSTANTS = "constants"
    SEARCH = "search"
    CERTIFY = "certify"


class OutputFormat(str, Enum):
    JSON = "json"
    TEXT = "text"


class RunConfig(BaseModel):
    """Validated configuration of one CLI run."""

    command: Command = Command.VERIFY
    families: List[str] = Field(default_factory=list)
    dims: List[int] = Field(default_factory=lambda: [2, 3, 4])
    trials: int = Field(default=50, ge=1)
    seed: int = 7
    atol: Optional[float] = Field(default=None, gt=0)
    rtol: Optional[float] = Field(default=None, ge=0)
    output: Optional[Path] = None
    format: OutputFormat = OutputFormat.JSON
    workers: int = Field(default=1, ge=1)
    input: Optional[Path] = None
    emit_certificate: Optional[Path] = None
    explore_failures: bool = True
    profile: Optional[str] = None
    eig_solver: Optional[Literal["jacobi", "lapack"]] = None

    @field_validator("families")
    @classmethod
    def _known_families(cls, value: List[str]) -> List[str]:
        from .engine.registry import normalize_family

        return [normalize_family(name) for name in value]

    @field_validator("dims")
    @classmethod
    def _dims_in_range(cls, value: List[int]) -> List[int]:
        bad = [d for d in value if not MIN_DIM <= d <= MAX_DIM]
        if bad:
            raise ValueError(f"dims must lie in [{MIN_DIM}, {MAX_DIM}], got {bad}")
        if not value:
            raise ValueError("at least one dimension is required")
        return value

    def tolerance(self) -> ToleranceConfig:
        base = get_settings().tolerance
        return ToleranceConfig(
            atol=self.atol if self.atol is not None else base.atol,
            rtol=self.rtol if self.rtol is not None else base.rtol,
        )

    def echo(self) -> Dict[str, Any]:
        data = self.model_dump(mode="json")
        data["seed_mixing"] = "numpy SeedSequence(seed, spawn_key=(crc32(family), trial))"
        return data


def load_suite_defaults(path: Optional[Path] = None) -> Dict[str, Any]:
    """
    Load the default suite definition from JSON.

    Returns:
        dict with keys families, dims, trials; a minimal default if the file is missing

    Raises:
        ConfigError: if the file exists but is not valid JSON
    """
    config_path = path or get_settings().suite_config
    try:
        with open(config_path, "r", encoding="utf-8") as f:
            config = json.load(f)
        logger.info(f"Loaded suite configuration from {config_path}")
        return config
    except FileNotFoundError:
        logger.error(f"Suite configuration not found: {config_path}")
        return {"families": ["KADISON", "CHDA"], "dims": [2, 3], "trials": 20}
    except json.JSONDecodeError as e:
        raise ConfigError(f"Invalid JSON in suite configuration {config_path}: {e}")


def suite_profile(defaults: Dict[str, Any], name: Optional[str]) -> Dict[str, Any]:
    """
    Overlay a named profile from the suite definition onto its top-level defaults.

    Raises:
        ConfigError: if the profile is not defined
    """
    base = {k: v for k, v in defaults.items() if k != "profiles"}
    if name is None:
        return base
    profiles = defaults.get("profiles", {})
    if name not in profiles:
        raise ConfigError(f"Unknown suite profile {name!r}; defined: {sorted(profiles)}")
    logger.info(f"Using suite profile '{name}'")
    return {**base, **profiles[name]}
