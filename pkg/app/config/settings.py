from typing import Optional
from pydantic_settings import BaseSettings
from pathlib import Path

class Settings(BaseSettings):
    # Ground set
    MAX_RECEIVERS: int = 16

    # Numeric tolerances
    NUMERIC_TOLERANCE: float = 1e-9
    MASS_TOLERANCE: float = 1e-12
    MAX_DENOMINATOR: int = 10**12
    ZERO_SNAP_TOLERANCE: float = 1e-12

    # Resource caps
    MAX_TABLE_CELLS: int = 2**24
    FM_PRUNE_THRESHOLD: int = 48

    # Covering simulation
    COVERING_EPSILON: float = 0.1
    COVERING_TUPLE_CAP: int = 2**20
    COVERING_CODEBOOK_CAP: int = 2**48
    COVERING_CONFIDENCE: float = 0.95
    DEFAULT_SEED: int = 20240611

    # Runtime
    SHOW_PROGRESS: bool = False
    LOG_LEVEL: str = "INFO"
    LOG_DIR: Path = Path("logs")
    PERSIST_ERRORS: bool = False

    # Packaged fixtures
    FIXTURES_PATH: Path = Path("fixtures")
    DEMO_OUTPUT_DIR: Optional[Path] = None

    class Config:
        env_file = ".env"
        env_file_encoding = "utf-8"
        env_prefix = "GROUPCAST_"

def get_settings() -> Settings:
    """Get application settings."""
    return Settings()
