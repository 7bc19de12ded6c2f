"""
Configuration management for assurekit
"""

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    # Application Settings
    log_level: str = "INFO"
    tool_version: str = "assurekit 0.1.0"

    # Chain construction
    state_cap: int = 1_000_000  # ASSUREKIT_STATE_CAP

    # Reachability solving
    vi_residual: float = 1e-12
    vi_max_sweeps: int = 1_000_000
    path_cap: int = 100_000  # brute-force oracle path budget

    # Simulation campaigns
    max_workers: int = 4

    # Assurance reconciliation
    default_tolerance: float = 0.03
    ledger_path: str = "assurance_ledger.jsonl"
    ledger_lock_attempts: int = 20

    class Config:
        env_file = ".env"
        env_prefix = "ASSUREKIT_"
        case_sensitive = False
        extra = "ignore"


# Global settings instance
settings = Settings()
