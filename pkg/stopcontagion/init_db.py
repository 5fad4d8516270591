import logging

from . import database
from . import models  # noqa: F401  registers the tables

logger = logging.getLogger(__name__)


def init_models(drop: bool = False, bind=None) -> None:
    bind = bind or database.engine
    if drop:
        database.Base.metadata.drop_all(bind)
    database.Base.metadata.create_all(bind)


if __name__ == "__main__":
    logging.basicConfig(level=logging.INFO)
    logger.info("Initializing result store...")
    init_models(drop=True)
    logger.info("Result store initialized successfully!")
