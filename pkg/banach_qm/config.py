"""
Runtime configuration for banach-qm
Numerical tolerances and knobs, read from environment variables (.env supported)
"""

import os
from typing import Any, Dict, Optional

import numpy as np
from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .errors import ConfigError

# Load environment variables
load_dotenv()

# field name -> environment variable
ENV_VARS: Dict[str, str] = {
    "tol": "BQM_TOL",
    "group_tol": "BQM_GROUP_TOL",
    "cond_limit": "BQM_COND_LIMIT",
    "max_exact_atoms": "BQM_MAX_EXACT_ATOMS",
    "rng_algorithm": "BQM_RNG",
    "auto_normalize": "BQM_AUTO_NORMALIZE",
    "scan_workers": "BQM_SCAN_WORKERS",
}

RNG_ALGORITHMS = ("PCG64", "PCG64DXSM", "Philox", "SFC64", "MT19937")


class Settings(BaseModel):
    """Numerical settings shared by every module"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    tol: float = Field(1e-9, gt=0, allow_inf_nan=False)
    group_tol: float = Field(1e-8, gt=0, allow_inf_nan=False)
    cond_limit: float = Field(1e12, gt=1, allow_inf_nan=False)
    max_exact_atoms: int = Field(12, ge=1, le=20)
    rng_algorithm: str = "PCG64"
    auto_normalize: bool = True
    scan_workers: int = Field(4, ge=1)

    @field_validator("rng_algorithm")
    @classmethod
    def _known_generator(cls, value: str) -> str:
        if value not in RNG_ALGORITHMS:
            raise ValueError(f"unknown bit generator '{value}', expected one of {', '.join(RNG_ALGORITHMS)}")
        return value

    def bit_generator(self, seed: int) -> np.random.BitGenerator:
        """Instantiate the configured numpy bit generator"""
        return getattr(np.random, self.rng_algorithm)(seed)


def load_settings(**overrides: Any) -> Settings:
    """
    Build Settings from the environment plus explicit overrides.

    Precedence is overrides > environment (.env included) > defaults.
    Overrides set to None are ignored so CLI flags can be passed straight in.

    Raises:
        ConfigError: if any value fails validation
    """
    values: Dict[str, Any] = {}
    for field_name, env_var in ENV_VARS.items():
        raw = os.getenv(env_var)
        if raw is not None and raw.strip() != "":
            values[field_name] = raw.strip()

    values.update({k: v for k, v in overrides.items() if v is not None})

    try:
        return Settings(**values)
    except ValidationError as e:
        raise ConfigError(f"invalid settings: {e}") from e


settings = load_settings()


def configure(**overrides: Any) -> Settings:
    """Replace the module-level settings (CLI entry point and tests)"""
    global settings
    settings = load_settings(**overrides)
    return settings


def resolve_tol(tol: Optional[float]) -> float:
    return settings.tol if tol is None else tol
