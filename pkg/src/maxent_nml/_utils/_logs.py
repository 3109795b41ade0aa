import os
import logging

logger: logging.Logger = logging.getLogger("maxent_nml")


def _basic_config() -> None:
    # e.g. [2024-03-01 14:12:26 - maxent_nml._solver:211 - DEBUG] pruned 3 groups at |eta|=40.2
    logging.basicConfig(
        format="[%(asctime)s - %(name)s:%(lineno)d - %(levelname)s] %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )


def set_verbosity(verbosity: int) -> None:
    if verbosity <= 0:
        return
    _basic_config()
    logger.setLevel(logging.DEBUG if verbosity > 1 else logging.INFO)


def setup_logging() -> None:
    env = os.environ.get("MAXENT_NML_LOG")
    if env == "debug":
        _basic_config()
        logger.setLevel(logging.DEBUG)
    elif env == "info":
        _basic_config()
        logger.setLevel(logging.INFO)
