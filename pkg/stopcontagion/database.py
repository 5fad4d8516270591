from contextlib import contextmanager
from typing import Iterator, Optional

from sqlalchemy import create_engine
from sqlalchemy.engine import Engine
from sqlalchemy.orm import Session, declarative_base, sessionmaker

from .config import database_url

Base = declarative_base()


def make_engine(url: Optional[str] = None, echo: bool = False) -> Engine:
    url = url or database_url()
    if url.startswith("sqlite"):
        return create_engine(url, echo=echo)
    return create_engine(
        url,
        echo=echo,
        pool_size=5,
        max_overflow=10,
        pool_timeout=30,
        pool_recycle=1800,
    )


engine = make_engine()

SessionLocal = sessionmaker(bind=engine, expire_on_commit=False, autoflush=False)


def bind(url: str) -> None:
    """Point the module-level engine and session factory at another database."""
    global engine
    engine = make_engine(url)
    SessionLocal.configure(bind=engine)


@contextmanager
def get_db() -> Iterator[Session]:
    """Session that commits on success and rolls back on error."""
    session = SessionLocal()
    try:
        yield session
        session.commit()
    except Exception:
        session.rollback()
        raise
    finally:
        session.close()
