"""
SQLAlchemy ORM models for the scan store

Scan runs, their per-instance results and covered-subset gap artifacts are kept
in a small relational store (SQLite by default) so counterexample hunts
can be compared across runs.
"""

from contextlib import contextmanager
from sqlalchemy import create_engine, Column, Integer, String, Text, Boolean, DateTime, JSON, ForeignKey
from sqlalchemy.orm import declarative_base, sessionmaker, relationship, Session
from sqlalchemy.pool import StaticPool
from sqlalchemy.sql import func

Base = declarative_base()

# =============================================================================
# SCAN TABLES
# =============================================================================

class ScanRun(Base):
    """One invocation of the conjecture scan"""
    __tablename__ = 'scan_runs'

    id = Column(Integer, primary_key=True, autoincrement=True)
    generator = Column(String(50), nullable=False, index=True)
    n = Column(Integer, nullable=False, index=True)
    seed = Column(Integer)
    exhaustive = Column(Boolean, default=False)
    instance_count = Column(Integer, nullable=False)
    minimum = Column(Integer)
    candidate_count = Column(Integer, default=0)
    violation_count = Column(Integer, default=0)
    report_json = Column(JSON, nullable=False)
    created_at = Column(DateTime, default=func.now())

    instances = relationship("ScanInstance", back_populates="run", cascade="all, delete-orphan",
                             order_by="ScanInstance.index")

    def __repr__(self):
        return f"<ScanRun(id={self.id}, generator='{self.generator}', n={self.n}, minimum={self.minimum})>"


class ScanInstance(Base):
    """Per-instance result of a scan"""
    __tablename__ = 'scan_instances'

    id = Column(Integer, primary_key=True, autoincrement=True)
    run_id = Column(Integer, ForeignKey('scan_runs.id'), nullable=False, index=True)
    index = Column(Integer, nullable=False)
    exact_size = Column(Integer, nullable=False)
    heuristic_size = Column(Integer, nullable=False)
    optimal = Column(Boolean, default=True)
    candidate = Column(Boolean, default=False, index=True)
    instance_json = Column(JSON)
    dump_path = Column(String(500))

    run = relationship("ScanRun", back_populates="instances")


class LemmaArtifact(Base):
    """Set family meeting the covered-subset hypotheses without a witness"""
    __tablename__ = 'lemma_artifacts'

    id = Column(Integer, primary_key=True, autoincrement=True)
    x_size = Column(Integer, nullable=False, index=True)
    s = Column(Integer, nullable=False)
    family_json = Column(JSON, nullable=False)
    reason = Column(Text)
    created_at = Column(DateTime, default=func.now())


# =============================================================================
# DATABASE ENGINE
# =============================================================================

class DatabaseEngine:
    """SQLAlchemy engine and session factory"""

    def __init__(self, database_url: str):
        options = {"future": True, "echo": False}
        if database_url.startswith("sqlite"):
            options["connect_args"] = {"check_same_thread": False}
            if ":memory:" in database_url or database_url in ("sqlite://", "sqlite:///"):
                options["poolclass"] = StaticPool
        else:
            options.update(pool_pre_ping=True, pool_recycle=3600)
        self.database_url = database_url
        self.engine = create_engine(database_url, **options)
        self.SessionLocal = sessionmaker(autocommit=False, autoflush=False, bind=self.engine)

    def create_tables(self):
        """Create all tables (only if they don't exist)"""
        Base.metadata.create_all(bind=self.engine)

    def get_session(self) -> Session:
        return self.SessionLocal()

    @contextmanager
    def get_db_session(self):
        """Context manager for database sessions"""
        session = self.get_session()
        try:
            yield session
            session.commit()
        except Exception:
            session.rollback()
            raise
        finally:
            session.close()
