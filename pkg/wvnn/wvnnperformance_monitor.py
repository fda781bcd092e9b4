import time
from functools import wraps
import logging
from wvnn.wvnnsettings import get_log_level, settings


class ColoredFormatter(logging.Formatter):
    """Wraps each record in the ANSI color of its level"""

    COLORS = {
        logging.DEBUG: "\033[36m",  # Cyan
        logging.INFO: "\033[32m",  # Green
        logging.WARNING: "\033[33m",  # Yellow
        logging.ERROR: "\033[31m",  # Red
        logging.CRITICAL: "\033[35m",  # Magenta
    }
    RESET = "\033[0m"

    def format(self, record):
        text = super().format(record)
        color = self.COLORS.get(record.levelno)
        return f"{color}{text}{self.RESET}" if color else text


LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

# All wvnn.* loggers hand their records to this one
package_logger = logging.getLogger("wvnn")
package_logger.setLevel(get_log_level())
package_logger.propagate = False  # Prevent propagation to root logger

# Create colored handler if one doesn't exist, logs go to stderr
if not package_logger.handlers:
    handler = logging.StreamHandler()
    if settings.colored_logs():
        handler.setFormatter(ColoredFormatter(LOG_FORMAT, datefmt="%H:%M:%S"))
    else:
        handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt="%H:%M:%S"))
    package_logger.addHandler(handler)

logger = logging.getLogger(__name__)
logger.setLevel(get_log_level())

SLOW_CALL_SECONDS = 0.1


def performance_monitor(func=None, *, threshold: float = SLOW_CALL_SECONDS):
    """Decorator to log the runtime of sweeps, meter ladders and checks.

    Works on plain functions and methods. Calls slower than ``threshold``
    seconds are logged as warnings, every call is logged at debug level.
    """

    def decorate(inner):
        @wraps(inner)
        def wrapper(*args, **kwargs):
            start_time = time.perf_counter()
            result = inner(*args, **kwargs)
            execution_time = time.perf_counter() - start_time

            logger.debug(f"{inner.__name__} took {execution_time:.4f}s")
            if execution_time > threshold:  # Log slow operations
                logger.warning(f"{inner.__name__} took {execution_time:.3f}s")
            return result

        return wrapper

    if func is not None:
        return decorate(func)
    return decorate
