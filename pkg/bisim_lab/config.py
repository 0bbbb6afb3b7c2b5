"""
Bisim Lab Configuration
Pydantic Settings for environment variable management.
"""

from functools import lru_cache
from typing import Optional
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from BISIMLAB_* environment variables."""
    
    model_config = SettingsConfigDict(
        env_prefix="BISIMLAB_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore"
    )
    
    # Exhaustive search bounds (state counts)
    max_brute: int = Field(default=10, ge=1)
    max_enumerate: int = Field(default=12, ge=1)
    
    # Oracle dispatch: pairwise relation refinement up to this many states
    oracle_pairwise_max_states: int = Field(default=600, ge=1)
    
    # Engine runs
    check_invariants: bool = False
    
    # Reports
    report_partition_limit: int = Field(default=64, ge=0)
    
    # Monitoring
    log_level: str = "WARNING"
    log_json: bool = True
    enable_metrics: bool = True
    metrics_textfile: Optional[str] = None
    
    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v):
        v = v.upper()
        if v not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"unknown log level {v!r}")
        return v


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
