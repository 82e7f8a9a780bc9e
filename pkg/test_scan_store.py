"""
Tests for the scan store repositories
"""

import pytest

from models.scan_repository import LemmaArtifactRepository, ScanRepository
from models.set_family import SetFamily
from models.sqlalchemy_models import DatabaseEngine
from setup_scan_store import setup_scan_store


@pytest.fixture
def engine():
    db = DatabaseEngine("sqlite:///:memory:")
    db.create_tables()
    return db


def _report(n, minimum, generator="embed", candidates=()):
    results = [{"index": k, "exact": minimum if k == 0 else n, "heuristic": n, "optimal": True,
                "nodes": 10, "provenance": {}} for k in range(3)]
    return {
        "generator": generator, "n": n, "seed": 7, "exhaustive": False, "count": 3,
        "minimum": minimum, "results": results, "candidates": list(candidates),
        "theorem_violations": [],
    }


def test_record_and_list_runs(engine):
    repo = ScanRepository(engine)
    first = repo.record_run(_report(4, 3))
    second = repo.record_run(_report(5, 4, generator="latin"))
    runs = repo.list_runs()
    assert [r["id"] for r in runs] == [first, second]
    assert runs[0]["count"] == 3 and runs[0]["minimum"] == 3
    assert [r["id"] for r in repo.list_runs(n=5)] == [second]
    assert [r["id"] for r in repo.list_runs(generator="embed")] == [first]


def test_get_report_round_trips(engine):
    repo = ScanRepository(engine)
    report = _report(4, 3)
    run_id = repo.record_run(report)
    assert repo.get_report(run_id) == report
    assert repo.get_report(run_id + 100) is None


def test_candidates_keep_dump_path_and_instance(engine):
    repo = ScanRepository(engine)
    candidate = {"index": 0, "exact": 2, "cells": [], "provenance": {}, "file": "candidates/x.json"}
    instances = [{"format": "mls-v1", "n": 4}, None, None]
    run_id = repo.record_run(_report(4, 2, candidates=[candidate]), instances)
    stored = repo.candidates()
    assert stored == [{"run_id": run_id, "index": 0, "n": 4, "exact": 2,
                       "file": "candidates/x.json", "instance": {"format": "mls-v1", "n": 4}}]
    assert repo.candidates(n=5) == []


def test_minimum_by_order(engine):
    repo = ScanRepository(engine)
    repo.record_run(_report(4, 3))
    repo.record_run(_report(4, 4, generator="latin"))
    repo.record_run(_report(5, 4))
    assert repo.minimum_by_order() == {4: 3, 5: 4}
    assert repo.minimum_by_order("latin") == {4: 4}


def test_lemma_artifacts(engine):
    repo = LemmaArtifactRepository(engine)
    gap = SetFamily.of({1, 2, 3}, [{1, 2}, {2, 3}])
    artifact_id = repo.record(gap, "odd |X|")
    assert repo.list_artifacts() == [{"id": artifact_id, "x_size": 3, "s": 2,
                                      "family": {"X": [1, 2, 3], "subsets": [[1, 2], [2, 3]]},
                                      "reason": "odd |X|"}]
    assert repo.list_artifacts(x_size=4) == []


def test_setup_scan_store_is_idempotent(tmp_path, capsys):
    url = f"sqlite:///{tmp_path / 'store.db'}"
    assert setup_scan_store(url)
    assert setup_scan_store(url)
    assert "scan_runs" in capsys.readouterr().out
