# psa/utils/logging_config.py
import logging.config

from ..config import Config


def setup_logging(level: str = None):
    """Setup structured logging configuration.

    Args:
        level: Optional override of Config.LOG_LEVEL (e.g. from `--verbose`)
    """
    Config.create_directories()

    log_config = Config.get_log_config()
    if level:
        log_config["root"]["level"] = level
        for handler in log_config["handlers"].values():
            handler["level"] = level
    logging.config.dictConfig(log_config)
