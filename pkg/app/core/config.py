from pydantic_settings import BaseSettings, SettingsConfigDict
from pathlib import Path

# Get the project root directory (parent of app/)
PROJECT_ROOT = Path(__file__).parent.parent.parent

class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_file=str(PROJECT_ROOT / ".env"),
        env_file_encoding="utf-8",
        extra="ignore",
    )
    
    # Environment
    ENV: str = "dev"
    LOG_LEVEL: str = "INFO"
    
    # Solver budget (defaults for every LP run)
    CRC_NODE_LIMIT: int = 2_000_000
    CRC_TIME_LIMIT: float = 600.0  # seconds
    
    # Ball subgraphs
    CRC_BALL_RADIUS: int = 6
    CRC_MIN_RADIUS: int = 4  # first rung of the exclusion radius ladder
    
    # Verification tori
    VERIFY_MAX_VERTICES: int = 2_000_000
    
    # Classification
    N_JOBS: int = 1
    REPORT_DIR: Path = PROJECT_ROOT / "reports"

settings = Settings()
