import math
import os
from typing import Any, List
from pydantic_settings import BaseSettings, SettingsConfigDict
from pydantic import Field, BaseModel, model_validator

class SahsSettings(BaseModel):
    """Defaults for the depth-d look-ahead search router."""
    DEPTH: int = Field(default=2, ge=1)
    LOOKAHEAD_LAYERS: int = Field(default=2, ge=0)
    DECAY: float = Field(default=0.5, gt=0.0, le=1.0)
    WEIGHT: float = 1.0

class MctsSettings(BaseModel):
    """Defaults for the Monte-Carlo tree search router."""
    N_BP: int = Field(default=20, ge=1)
    LABEL_N_BP: int = Field(default=200, ge=1)
    EXPLORATION_C: float = math.sqrt(2.0)
    LABEL_EXPLORATION_C: float = Field(default=3.5, gt=0.0)
    SIM_DEPTH: int = Field(default=8, ge=0)
    EPSILON: float = Field(default=0.1, ge=0.0, le=1.0)
    SWAP_PENALTY: float = 0.3
    DISCOUNT: float = Field(default=0.9, gt=0.0, le=1.0)
    SCORE: str = "visits"

class TrainingSettings(BaseModel):
    """Defaults for policy network training."""
    HIDDEN: List[int] = Field(default_factory=lambda: [512, 256])
    LEARNING_RATE: float = 1e-3
    BATCH_SIZE: int = Field(default=64, ge=1)
    EPOCHS: int = Field(default=50, ge=1)
    VALIDATION_FRACTION: float = Field(default=0.1, ge=0.0, lt=1.0)

class TelemetrySettings(BaseModel):
    """Configuration for observability."""
    ENABLED: bool = False
    SERVICE_NAME: str = "qctlearn"
    PROMETHEUS_PORT: int = 8000

class Settings(BaseSettings):
    """
    Application configuration loaded from environment variables and .env files.

    Nested values use the ``__`` delimiter, e.g. ``MCTS__N_BP=40``.
    """
    ENV: str = Field(default="dev", validation_alias="QCT_ENV")
    LOG_LEVEL: str = "INFO"
    LOG_FORMAT: str = "text"
    WORKERS: int = Field(default=1, ge=1)
    DATA_DIR: str = "data"

    sahs: SahsSettings = Field(default_factory=SahsSettings)
    mcts: MctsSettings = Field(default_factory=MctsSettings)
    training: TrainingSettings = Field(default_factory=TrainingSettings)
    telemetry: TelemetrySettings = Field(default_factory=TelemetrySettings)

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
        env_nested_delimiter="__"
    )

    @model_validator(mode='before')
    @classmethod
    def map_short_environment(cls, values: Any) -> Any:
        """
        Maps the short single-word variables used in experiment scripts into
        the nested structure before validation. Explicit nested values win.
        """
        if not isinstance(values, dict):
            return values

        short_map = {
            'QCT_DEPTH': ('sahs', 'DEPTH', int),
            'QCT_N_BP': ('mcts', 'N_BP', int),
            'QCT_SIM_DEPTH': ('mcts', 'SIM_DEPTH', int),
            'QCT_EPOCHS': ('training', 'EPOCHS', int),
            'QCT_METRICS': ('telemetry', 'ENABLED', lambda v: v.lower() in ('true', '1', 'yes')),
        }

        for model_key in ('sahs', 'mcts', 'training', 'telemetry'):
            if model_key not in values or values[model_key] is None:
                values[model_key] = {}

        for env_key, (model_key, field_key, convert) in short_map.items():
            val = os.environ.get(env_key)
            if val is None:
                continue
            target = values[model_key]
            if isinstance(target, dict) and field_key.lower() not in {str(k).lower() for k in target}:
                try:
                    target[field_key] = convert(val)
                except ValueError:
                    pass

        return values

    @model_validator(mode='after')
    def validate_choices(self) -> 'Settings':
        if self.mcts.SCORE not in ("visits", "value"):
            raise ValueError(f"MCTS__SCORE must be 'visits' or 'value', got {self.mcts.SCORE!r}")
        if self.LOG_FORMAT.lower() not in ("text", "json"):
            raise ValueError(f"LOG_FORMAT must be 'text' or 'json', got {self.LOG_FORMAT!r}")
        return self

# Singleton instance
settings = Settings()
