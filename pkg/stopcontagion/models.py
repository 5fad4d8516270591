from sqlalchemy import JSON, BigInteger, Column, DateTime, ForeignKey, Integer, String
from sqlalchemy.orm import relationship
from sqlalchemy.sql import func

from .database import Base


class ExperimentRun(Base):
    __tablename__ = "experiment_runs"

    id = Column(Integer, primary_key=True, index=True)
    experiment = Column(String, nullable=False, index=True)
    root_seed = Column(String(20), nullable=False)
    config = Column(JSON, nullable=False)
    created_at = Column(DateTime(timezone=True), server_default=func.now())

    rows = relationship("ResultRecord", back_populates="run", cascade="all, delete-orphan", order_by="ResultRecord.id")


class ResultRecord(Base):
    __tablename__ = "result_records"

    id = Column(Integer, primary_key=True, index=True)
    run_id = Column(Integer, ForeignKey("experiment_runs.id", ondelete="CASCADE"), nullable=False, index=True)
    cell = Column(JSON, nullable=False)
    trial = Column(Integer, nullable=False)
    seed = Column(BigInteger, nullable=False)
    metrics = Column(JSON, nullable=False)

    run = relationship("ExperimentRun", back_populates="rows")
