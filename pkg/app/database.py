from sqlalchemy.exc import OperationalError
from sqlalchemy.pool import NullPool
from sqlmodel import Session, SQLModel, create_engine

from .config import settings

if settings.database_url.startswith("sqlite"):
    engine = create_engine(
        settings.database_url,
        echo=settings.environment == "development" and settings.log_level.upper() == "DEBUG",
        connect_args={"check_same_thread": False, "timeout": 60},
        poolclass=NullPool,  # avoid multiple pooled connections holding write locks
    )
    try:
        with engine.connect() as conn:
            conn.exec_driver_sql("PRAGMA journal_mode=WAL;")
            conn.exec_driver_sql("PRAGMA busy_timeout=60000;")
    except OperationalError:
        # the database may be momentarily locked during reloader startup
        pass
else:
    engine = create_engine(settings.database_url)


def get_session():
    with Session(engine) as session:
        yield session


def init_db():
    from .models import run  # noqa: F401

    SQLModel.metadata.create_all(engine)
