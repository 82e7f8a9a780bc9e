import os
from dotenv import load_dotenv

from models.errors import ConfigError

load_dotenv()


def _int_setting(name: str, default: int, minimum: int = 0) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}")
    if value < minimum:
        raise ConfigError(f"{name} must be >= {minimum}, got {value}")
    return value


class Config:
    """Application configuration"""

    # Solver defaults
    DEFAULT_NODE_BUDGET = 10_000_000  # 0 means unbounded
    DEFAULT_WORKERS = 1

    # Primes used by the v_i - v_j generator in scans
    THEOREM2_PRIMES = (2, 3, 5, 7)

    # Exhaustive Latin-square enumeration is feasible up to this order
    MAX_ENUMERATION_ORDER = 5

    # Scan store
    DATABASE_URL = os.getenv("MLT_DATABASE_URL", "sqlite:///mlt_scans.db")
    CANDIDATE_DIR = os.getenv("MLT_CANDIDATE_DIR", "candidates")

    # Logging
    LOG_LEVEL = os.getenv("MLT_LOG_LEVEL", "INFO").upper()
    LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'

    # Application Settings
    FLASK_ENV = os.getenv("FLASK_ENV", "development")
    DEBUG = os.getenv("DEBUG", "True").lower() == "true"

    # CORS Settings
    ALLOWED_ORIGINS = [
        "http://localhost:8080",
        "http://127.0.0.1:8080",
        "http://localhost:8888",  # notebooks
        "http://127.0.0.1:8888",
    ]

    # Settings below are read lazily so a malformed value fails the command
    # that uses it instead of every import

    @staticmethod
    def seed() -> int:
        return _int_setting("MLT_SEED", 0)

    @classmethod
    def node_budget(cls) -> int:
        return _int_setting("MLT_NODE_BUDGET", cls.DEFAULT_NODE_BUDGET)

    @classmethod
    def workers(cls) -> int:
        return _int_setting("MLT_WORKERS", cls.DEFAULT_WORKERS, minimum=1)


class DevelopmentConfig(Config):
    """Development configuration"""
    DEBUG = True


class ProductionConfig(Config):
    """Production configuration"""
    DEBUG = False


class TestingConfig(Config):
    """In-memory scan store for tests"""
    DEBUG = False
    TESTING = True
    DATABASE_URL = "sqlite:///:memory:"


# Configuration dictionary
config = {
    'development': DevelopmentConfig,
    'production': ProductionConfig,
    'testing': TestingConfig,
    'default': DevelopmentConfig
}
