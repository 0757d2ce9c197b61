"""Configuration management"""

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="TRACKFIND_",
        case_sensitive=False,
    )

    log_level: str = "INFO"

    # Model weights (objective alpha, penalty gamma)
    alpha: float = 100.0
    gamma: float = 1.0
    seed: int = 0
    time_limit: float = 360.0

    exact_max_hits_per_layer: int = 8

    sa_sweeps: int = 100
    sa_restarts: int = 10
    sa_initial_temperature: float | None = None
    sa_final_ratio: float = 1e-3

    # Candidate filtering
    max_layer_skip: int = 2
    max_turning_angle: float = 0.35
    max_segment_angle: float | None = 0.5
    require_forward: bool = True

    metrics_enabled: bool = True


settings = Settings()
