import logging
import os

LEVEL_MAP = {
    "DEBUG": logging.DEBUG,
    "INFO": logging.INFO,
    "WARNING": logging.WARNING,
    "ERROR": logging.ERROR,
    "CRITICAL": logging.CRITICAL,
}

DEFAULT_OVERLAP_FLOOR = 1e-14
DEFAULT_CLASSIFY_TOL = 1e-9


class WVNNSettings:
    """Centralized settings for the weak value toolkit"""

    def __init__(self):
        self._log_level = None
        self._threads = None
        self._overlap_floor = None
        self._classify_tol = None

    def get_log_level(self) -> int:
        """Get the logging level from environment or default"""
        if self._log_level is None:
            level_str = os.getenv("WVNN_LOG_LEVEL", "INFO").upper()
            self._log_level = LEVEL_MAP.get(level_str, logging.INFO)
        return self._log_level

    def set_log_level(self, level: str):
        """Set the logging level programmatically"""
        self._log_level = LEVEL_MAP.get(level.upper(), logging.INFO)
        for name in list(logging.root.manager.loggerDict):
            if name == "wvnn" or name.startswith("wvnn."):
                logging.getLogger(name).setLevel(self._log_level)

    @property
    def threads(self) -> int:
        """Worker cap for sweeps, WVNN_THREADS=0 or unset means one per CPU"""
        if self._threads is None:
            raw = os.environ.get("WVNN_THREADS", "0")
            try:
                requested = int(raw)
            except ValueError:
                logging.getLogger(__name__).warning(
                    f"Ignoring WVNN_THREADS={raw!r}, expected an integer"
                )
                requested = 0
            if requested <= 0:
                requested = os.cpu_count() or 1
            self._threads = requested
        return self._threads

    def set_threads(self, threads: int):
        self._threads = None if threads <= 0 else int(threads)

    @property
    def overlap_floor(self) -> float:
        if self._overlap_floor is None:
            self._overlap_floor = _env_float("WVNN_OVERLAP_FLOOR", DEFAULT_OVERLAP_FLOOR)
        return self._overlap_floor

    def set_overlap_floor(self, floor: float):
        if floor < 0:
            raise ValueError(f"Overlap floor must be non-negative, got {floor}")
        self._overlap_floor = float(floor)

    @property
    def classify_tol(self) -> float:
        if self._classify_tol is None:
            self._classify_tol = _env_float("WVNN_CLASSIFY_TOL", DEFAULT_CLASSIFY_TOL)
        return self._classify_tol

    def set_classify_tol(self, tol: float):
        if tol < 0:
            raise ValueError(f"Classification tolerance must be non-negative, got {tol}")
        self._classify_tol = float(tol)

    def data_dir(self) -> str:
        return os.environ.get("WVNN_DATA_DIR", "data")

    def colored_logs(self) -> bool:
        """Check if colored log output is enabled based on environment variable"""
        return str_to_bool(os.environ.get("WVNN_COLOR_LOGS", "true"))

    def reset(self):
        """Forget cached values so the environment is read again"""
        self.__init__()


def _env_float(key: str, default: float) -> float:
    raw = os.environ.get(key)
    if raw is None or raw == "":
        return default
    try:
        return float(raw)
    except ValueError:
        logging.getLogger(__name__).warning(
            f"Ignoring {key}={raw!r}, expected a number, using {default}"
        )
        return default


# Global settings instance
settings = WVNNSettings()


# Convenience function, every module calls this when creating its logger
def get_log_level():
    return settings.get_log_level()


def str_to_bool(value):
    """Convert string to boolean (case-insensitive)"""
    return str(value).lower() in ("true", "1", "yes", "on")
