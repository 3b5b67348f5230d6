from loguru import logger
import os
import sys

from .config import settings

# Configure Loguru: console + optional rotating file handler
logger.remove()
logger.add(sys.stderr, level=settings.log_level, backtrace=True, diagnose=False)

if settings.log_dir:
    os.makedirs(settings.log_dir, exist_ok=True)
    logger.add(
        os.path.join(settings.log_dir, "probgkat.log"),
        rotation="20 MB",
        retention="14 days",
        compression="zip",
        level=settings.log_level,
        enqueue=True,
    )

__all__ = ["logger"]
