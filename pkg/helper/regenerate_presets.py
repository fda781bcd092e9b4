import logging
import sys

from wvnn.wvnncli import EXIT_OK, main
from wvnn.wvnnpresets import list_presets
from wvnn.wvnnsettings import get_log_level

logger = logging.getLogger("wvnn.helper")
logger.setLevel(get_log_level())

if __name__ == "__main__":
    failed = []
    for name in list_presets():
        logger.info(f"Regenerating {name}")
        if main(["sweep", "--preset", name] + sys.argv[1:]) != EXIT_OK:
            failed.append(name)

    if failed:
        logger.error(f"Presets failed: {', '.join(failed)}")
        sys.exit(1)
