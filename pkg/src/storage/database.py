"""Persistent store of CLI runs and the documents they produced."""

import json
import os
from datetime import datetime
from typing import Any, Dict, List, Optional

from sqlalchemy import Column, DateTime, ForeignKey, Index, Integer, String, Text, create_engine
from sqlalchemy.orm import declarative_base, sessionmaker

from ..export.codec import encode

Base = declarative_base()


class RunRecord(Base):
    """One CLI invocation."""

    __tablename__ = "runs"

    run_id = Column(String, primary_key=True)
    command = Column(String, nullable=False, index=True)
    seed = Column(Integer, nullable=True)
    exit_code = Column(Integer, nullable=True)
    summary = Column(Text, nullable=True)
    started_at = Column(DateTime, nullable=False, default=datetime.now)
    finished_at = Column(DateTime, nullable=True)


class DocumentRecord(Base):
    """A JSON document emitted by a run, stored in its exact rational encoding."""

    __tablename__ = "documents"

    id = Column(Integer, primary_key=True, autoincrement=True)
    run_id = Column(String, ForeignKey('runs.run_id'), nullable=False)
    schema = Column(String, nullable=False)
    payload = Column(Text, nullable=False)
    created_at = Column(DateTime, nullable=False, default=datetime.now)

    __table_args__ = (
        Index('idx_run_schema', 'run_id', 'schema'),
    )


class CertificateStore:
    """SQLite store for runs and their certificates."""

    def __init__(self, database_path: Optional[str] = None):
        """
        Open (and create) the store.

        Args:
            database_path: Path to the SQLite file; defaults to ETALG_DATABASE_PATH
                or data/etalg.db. ':memory:' keeps everything in memory.
        """
        if database_path is None:
            database_path = os.getenv('ETALG_DATABASE_PATH', 'data/etalg.db')

        if database_path != ':memory:':
            directory = os.path.dirname(database_path)
            if directory:
                os.makedirs(directory, exist_ok=True)

        self.engine = create_engine(f'sqlite:///{database_path}')
        Base.metadata.create_all(self.engine)
        self.Session = sessionmaker(bind=self.engine)

    def start_run(self, run_id: str, command: str, seed: Optional[int] = None) -> None:
        session = self.Session()
        try:
            session.add(RunRecord(run_id=run_id, command=command, seed=seed))
            session.commit()
        except Exception as e:
            session.rollback()
            raise e
        finally:
            session.close()

    def finish_run(self, run_id: str, exit_code: int, summary: Optional[Dict[str, Any]] = None) -> None:
        session = self.Session()
        try:
            run = session.query(RunRecord).filter_by(run_id=run_id).first()
            if run is None:
                raise KeyError(f"unknown run {run_id}")
            run.exit_code = exit_code
            run.summary = json.dumps(encode(summary)) if summary is not None else None
            run.finished_at = datetime.now()
            session.commit()
        except Exception as e:
            session.rollback()
            raise e
        finally:
            session.close()

    def save_document(self, run_id: str, document: Dict[str, Any]) -> int:
        """
        Store a document under a run.

        Returns:
            The new document id
        """
        session = self.Session()
        try:
            payload = encode(document)
            record = DocumentRecord(run_id=run_id, schema=payload.get('schema', 'report'),
                                    payload=json.dumps(payload))
            session.add(record)
            session.commit()
            return record.id
        except Exception as e:
            session.rollback()
            raise e
        finally:
            session.close()

    def get_documents(self, run_id: str, schema: Optional[str] = None) -> List[Dict[str, Any]]:
        session = self.Session()
        try:
            query = session.query(DocumentRecord).filter_by(run_id=run_id)
            if schema:
                query = query.filter_by(schema=schema)
            return [json.loads(r.payload) for r in query.order_by(DocumentRecord.id).all()]
        finally:
            session.close()

    def get_run(self, run_id: str) -> Optional[Dict[str, Any]]:
        session = self.Session()
        try:
            run = session.query(RunRecord).filter_by(run_id=run_id).first()
            if run is None:
                return None
            return {
                'run_id': run.run_id,
                'command': run.command,
                'seed': run.seed,
                'exit_code': run.exit_code,
                'summary': json.loads(run.summary) if run.summary else None,
                'started_at': run.started_at.isoformat(),
                'finished_at': run.finished_at.isoformat() if run.finished_at else None,
            }
        finally:
            session.close()

    def get_statistics(self) -> Dict[str, Any]:
        """Run counts per command and per exit code, plus the document count."""
        session = self.Session()
        try:
            runs = session.query(RunRecord).all()
            by_command: Dict[str, int] = {}
            by_exit: Dict[str, int] = {}
            for run in runs:
                by_command[run.command] = by_command.get(run.command, 0) + 1
                by_exit[str(run.exit_code)] = by_exit.get(str(run.exit_code), 0) + 1
            return {
                'total_runs': len(runs),
                'documents': session.query(DocumentRecord).count(),
                'by_command': by_command,
                'by_exit_code': by_exit,
            }
        finally:
            session.close()
