"""
Repositories for the scan store
"""

from typing import Any, Dict, List, Optional
import logging

from sqlalchemy import func
from sqlalchemy.exc import SQLAlchemyError

from .set_family import SetFamily
from .sqlalchemy_models import DatabaseEngine, LemmaArtifact, ScanInstance, ScanRun

logger = logging.getLogger(__name__)


class BaseRepository:
    """Base repository holding the engine"""

    def __init__(self, db_engine: DatabaseEngine):
        self.db_engine = db_engine


class ScanRepository(BaseRepository):
    """Persist and query scan runs"""

    def record_run(self, report: Dict[str, Any], instances: Optional[List[Dict[str, Any]]] = None) -> int:
        """
        Store a scan report with its per-instance rows

        Args:
            report: ScanReport.to_dict() output
            instances: optional mls-v1 documents, aligned with report["results"]

        Returns:
            id of the new run
        """
        instances = instances or []
        candidate_indices = {c["index"]: c for c in report.get("candidates", [])}
        with self.db_engine.get_db_session() as session:
            try:
                run = ScanRun(
                    generator=report["generator"],
                    n=report["n"],
                    seed=report.get("seed"),
                    exhaustive=report.get("exhaustive", False),
                    instance_count=report["count"],
                    minimum=report.get("minimum"),
                    candidate_count=len(candidate_indices),
                    violation_count=len(report.get("theorem_violations", [])),
                    report_json=report,
                )
                for k, result in enumerate(report.get("results", [])):
                    candidate = candidate_indices.get(result["index"])
                    run.instances.append(ScanInstance(
                        index=result["index"],
                        exact_size=result["exact"],
                        heuristic_size=result["heuristic"],
                        optimal=result["optimal"],
                        candidate=candidate is not None,
                        instance_json=instances[k] if k < len(instances) else None,
                        dump_path=candidate.get("file") if candidate else None,
                    ))
                session.add(run)
                session.flush()
                run_id = run.id
                logger.info(f"✅ Recorded scan run {run_id} ({report['generator']}, n={report['n']})")
                return run_id
            except SQLAlchemyError as e:
                logger.error(f"❌ Error recording scan run: {e}")
                raise

    def list_runs(self, n: Optional[int] = None, generator: Optional[str] = None) -> List[Dict[str, Any]]:
        with self.db_engine.get_db_session() as session:
            query = session.query(ScanRun)
            if n is not None:
                query = query.filter(ScanRun.n == n)
            if generator is not None:
                query = query.filter(ScanRun.generator == generator)
            return [
                {
                    "id": run.id,
                    "generator": run.generator,
                    "n": run.n,
                    "seed": run.seed,
                    "count": run.instance_count,
                    "minimum": run.minimum,
                    "candidates": run.candidate_count,
                    "violations": run.violation_count,
                    "created_at": run.created_at.isoformat() if run.created_at else None,
                }
                for run in query.order_by(ScanRun.id).all()
            ]

    def get_report(self, run_id: int) -> Optional[Dict[str, Any]]:
        with self.db_engine.get_db_session() as session:
            run = session.get(ScanRun, run_id)
            return dict(run.report_json) if run else None

    def candidates(self, n: Optional[int] = None) -> List[Dict[str, Any]]:
        """Stored instances flagged as falling below n - 1"""
        with self.db_engine.get_db_session() as session:
            query = session.query(ScanInstance, ScanRun).join(ScanRun).filter(ScanInstance.candidate.is_(True))
            if n is not None:
                query = query.filter(ScanRun.n == n)
            return [
                {"run_id": run.id, "index": inst.index, "n": run.n, "exact": inst.exact_size,
                 "file": inst.dump_path, "instance": inst.instance_json}
                for inst, run in query.order_by(ScanRun.id, ScanInstance.index).all()
            ]

    def minimum_by_order(self, generator: Optional[str] = None) -> Dict[int, int]:
        """Smallest observed maximum per degree over all stored runs"""
        with self.db_engine.get_db_session() as session:
            query = session.query(ScanRun.n, func.min(ScanRun.minimum))
            if generator is not None:
                query = query.filter(ScanRun.generator == generator)
            return {n: m for n, m in query.group_by(ScanRun.n).all() if m is not None}


class LemmaArtifactRepository(BaseRepository):
    """Persist set families that defeat the covered-subset search"""

    def record(self, family: SetFamily, reason: str) -> int:
        with self.db_engine.get_db_session() as session:
            artifact = LemmaArtifact(x_size=len(family.X), s=family.s,
                                     family_json=family.to_dict(), reason=reason)
            session.add(artifact)
            session.flush()
            logger.info(f"Recorded covered-subset gap for |X|={len(family.X)}, s={family.s}")
            return artifact.id

    def list_artifacts(self, x_size: Optional[int] = None) -> List[Dict[str, Any]]:
        with self.db_engine.get_db_session() as session:
            query = session.query(LemmaArtifact)
            if x_size is not None:
                query = query.filter(LemmaArtifact.x_size == x_size)
            return [
                {"id": a.id, "x_size": a.x_size, "s": a.s, "family": a.family_json, "reason": a.reason}
                for a in query.order_by(LemmaArtifact.id).all()
            ]
