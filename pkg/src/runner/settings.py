"""
Process-level settings read from the environment.
"""
import logging
import os


def _env_workers(lenient: bool = False) -> int:
    raw = os.getenv("FASTCONV_WORKERS", "1")
    try:
        return int(raw)
    except ValueError:
        if lenient:
            return 1
        raise ValueError(f"FASTCONV_WORKERS must be an integer, got {raw!r}")


class RunnerConfig:
    """Environment-backed settings of the experiment runner."""

    # Directory that receives one report directory per executed config
    OUTPUT_ROOT: str = os.getenv("FASTCONV_OUTPUT_ROOT", "results")

    # Concurrent run groups; a malformed value is reported by reload()
    WORKERS: int = _env_workers(lenient=True)

    LOG_LEVEL: str = os.getenv("FASTCONV_LOG_LEVEL", "INFO")

    @classmethod
    def reload(cls) -> None:
        """Re-read the environment (after a .env file was loaded)."""
        cls.OUTPUT_ROOT = os.getenv("FASTCONV_OUTPUT_ROOT", "results")
        cls.WORKERS = _env_workers()
        cls.LOG_LEVEL = os.getenv("FASTCONV_LOG_LEVEL", "INFO")

    @classmethod
    def validate(cls) -> None:
        """Validate the settings."""
        if not cls.OUTPUT_ROOT:
            raise ValueError("FASTCONV_OUTPUT_ROOT must not be empty")
        if cls.WORKERS < 1:
            raise ValueError(f"FASTCONV_WORKERS must be >= 1, got {cls.WORKERS}")
        if not isinstance(logging.getLevelName(cls.LOG_LEVEL.upper()), int):
            raise ValueError(f"FASTCONV_LOG_LEVEL is not a logging level: {cls.LOG_LEVEL}")

    @classmethod
    def log_level(cls) -> int:
        return logging.getLevelName(cls.LOG_LEVEL.upper())
