"""
Configuration management using Pydantic settings
"""

from pydantic_settings import BaseSettings
from pydantic import Field


class Settings(BaseSettings):
    """Process-level settings for the benchmark harness"""

    # Logging Configuration
    LOG_LEVEL: str = Field(default="INFO", description="Logging level")
    LOG_FORMAT: str = Field(default="json", description="Log format (json or plain)")

    # Execution
    MAX_WORKERS: int = Field(default=1, description="Seeds evaluated in parallel by run_suite")
    SHOW_PROGRESS: bool = Field(default=False, description="Show tqdm progress bars over cycles")

    # Protocol defaults
    DEFAULT_OUTPUT_DIR: str = Field(default="results", description="Output directory when none is configured")
    DEFAULT_SEED_COUNT: int = Field(default=5, description="Number of seeds when none are configured")
    DEFAULT_MC_ITERATIONS: int = Field(default=40, description="MC dropout forward passes for BatchBALD")

    class Config:
        env_file = ".env"
        env_file_encoding = "utf-8"
        case_sensitive = True


# Create settings instance
settings = Settings()


def validate_settings():
    """Validate settings that pydantic types alone cannot check"""
    errors = []

    if settings.LOG_FORMAT.lower() not in ("json", "plain"):
        errors.append("LOG_FORMAT must be 'json' or 'plain'")

    if settings.MAX_WORKERS < 1:
        errors.append("MAX_WORKERS must be at least 1")

    if settings.DEFAULT_SEED_COUNT < 1:
        errors.append("DEFAULT_SEED_COUNT must be at least 1")

    if settings.DEFAULT_MC_ITERATIONS < 1:
        errors.append("DEFAULT_MC_ITERATIONS must be at least 1")

    if errors:
        raise ValueError(f"Configuration errors: {', '.join(errors)}")


# Validate on import
try:
    validate_settings()
except ValueError as e:
    print(f"⚠️  Configuration warning: {e}")
    print("An unknown LOG_FORMAT falls back to plain and MAX_WORKERS is clamped to 1; other invalid values are rejected where they are used.")
