import os
from functools import lru_cache
from typing import Dict, Optional

from dotenv import dotenv_values, load_dotenv
from pydantic import BaseModel

# Load environment variables from a .env file if present
load_dotenv()


def _env_bool(name: str, default: str) -> bool:
    return os.getenv(name, default).strip().lower() in ("1", "true", "yes", "on")


class VosConfig(BaseModel):
    # Workers
    VOS_THREADS: int = int(os.getenv("VOS_THREADS", "1"))

    # Enumeration and search bounds
    VOS_ENUMERATION_CAP: int = int(os.getenv("VOS_ENUMERATION_CAP", str(2**20)))
    VOS_SEARCH_BOUND: int = int(os.getenv("VOS_SEARCH_BOUND", str(10**7)))
    VOS_REALIZE_BOUND: int = int(os.getenv("VOS_REALIZE_BOUND", str(10**6)))
    VOS_FORBIDDEN_CAP: int = int(os.getenv("VOS_FORBIDDEN_CAP", "1000"))
    VOS_ULMER_SEARCH_BOUND: int = int(os.getenv("VOS_ULMER_SEARCH_BOUND", str(10**6)))

    # Empirical comparisons
    VOS_TOLERANCE: float = float(os.getenv("VOS_TOLERANCE", "0.10"))

    # Reproducibility
    VOS_SEED: int = int(os.getenv("VOS_SEED", "20240601"))

    # Codes
    VOS_CODE_EXHAUSTIVE_LIMIT: int = int(os.getenv("VOS_CODE_EXHAUSTIVE_LIMIT", "24"))
    VOS_CODE_SAMPLES: int = int(os.getenv("VOS_CODE_SAMPLES", "100000"))

    # Sieves
    VOS_SPF_LIMIT: int = int(os.getenv("VOS_SPF_LIMIT", str(2 * 10**7)))
    VOS_SIEVE_SEGMENT: int = int(os.getenv("VOS_SIEVE_SEGMENT", str(2**20)))

    # Densities
    VOS_ARTIN_PRIME_LIMIT: int = int(os.getenv("VOS_ARTIN_PRIME_LIMIT", "100"))
    VOS_MP_DPS: int = int(os.getenv("VOS_MP_DPS", "30"))

    # Logging
    VOS_LOG_LEVEL: str = os.getenv("VOS_LOG_LEVEL", "WARNING")
    VOS_SHOW_PROGRESS: bool = _env_bool("VOS_SHOW_PROGRESS", "false")

    @classmethod
    def from_file(cls, config_file: Optional[str] = None, **overrides) -> "VosConfig":
        """Build settings from the environment, a key=value file and explicit overrides."""
        values: Dict[str, object] = {}
        if config_file:
            for key, value in dotenv_values(config_file).items():
                if key in cls.model_fields and value is not None:
                    values[key] = value
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


_settings: Optional[VosConfig] = None


@lru_cache(maxsize=1)
def _default_settings() -> VosConfig:
    return VosConfig()


def get_settings() -> VosConfig:
    """Return the process-wide settings instance"""
    if _settings is not None:
        return _settings
    return _default_settings()


def configure(config_file: Optional[str] = None, **overrides) -> VosConfig:
    """Rebuild the process-wide settings (CLI --config / --threads)."""
    global _settings
    _settings = VosConfig.from_file(config_file, **overrides)
    return _settings
