"""
Configuration management for the dynamical height engine
"""
from pydantic_settings import BaseSettings
from typing import Optional
import os


class Settings(BaseSettings):
    """Application settings"""

    DEBUG: bool = False

    # Archimedean evaluation
    PRECISION_BITS: int = 256
    TOLERANCE: float = 1e-9

    # Iteration budgets
    KMAX: int = 20
    HEIGHT_KMAX: int = 64  # step budget for local and global heights
    EXACT_DEGREE_CAP: int = 4096  # bound on d^k for exact constructions
    EXACT_ITERATION_CAP: int = 24  # bound on k for unreduced coordinate pairs
    ORBIT_BOUND: int = 16
    EXACT_BIT_CAP: int = 1 << 22  # bound on coordinate size in exact orbits

    # Logging
    LOG_LEVEL: str = "WARNING"
    LOG_FILE: Optional[str] = None

    class Config:
        env_file = ".env"
        case_sensitive = True


# Global settings instance
settings = Settings()


# Ensure the log directory exists when file logging is requested
if settings.LOG_FILE and os.path.dirname(settings.LOG_FILE):
    os.makedirs(os.path.dirname(settings.LOG_FILE), exist_ok=True)
