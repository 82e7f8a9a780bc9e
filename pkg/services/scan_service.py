"""
Conjecture scan: solve every instance of a family exactly and report the
smallest maximum independent transversal (the family analogue of T(n)).

Instances whose maximum falls below n - 1 are re-verified with an unbounded
exact search and dumped as mls-v1 files; any that also fall below
ceil(2n/3) are reported as theorem violations.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Tuple
import logging

import numpy as np

from config import Config
from models.errors import AnomalyError, TheoremViolation, UsageError
from models.instance_file import InstanceFile
from models.mls import MLS, embed_latin, from_latin_square, theorem2
from services.generator_service import (
    EMBED_PRIMES, enumerate_latin_squares, random_invertible_basis, random_latin_square,
)
from services.transversal_service import exact_max, two_thirds_floor, two_thirds_solve

logger = logging.getLogger(__name__)

GENERATORS = ("latin", "embed", "theorem2")
ARTIFACT_VERSION = "mls-scan-1"


@dataclass
class InstanceResult:
    index: int
    exact: int
    heuristic: int
    optimal: bool
    nodes: int
    provenance: Dict[str, Any] = field(default_factory=dict)
    violation: Optional[str] = None
    anomaly: Optional[str] = None
    relaxed_exchanges: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "index": self.index,
            "exact": self.exact,
            "heuristic": self.heuristic,
            "optimal": self.optimal,
            "nodes": self.nodes,
            "relaxed_exchanges": self.relaxed_exchanges,
            "provenance": self.provenance,
        }


@dataclass
class ScanReport:
    """Aggregate of one scan; results are ordered by instance index"""
    generator: str
    n: int
    seed: int
    exhaustive: bool
    results: List[InstanceResult] = field(default_factory=list)
    candidates: List[Dict[str, Any]] = field(default_factory=list)
    theorem_violations: List[Dict[str, Any]] = field(default_factory=list)
    anomalies: List[Dict[str, Any]] = field(default_factory=list)
    instances: List[Tuple[MLS, Dict[str, Any]]] = field(default_factory=list, repr=False)

    @property
    def count(self) -> int:
        return len(self.results)

    @property
    def minimum(self) -> Optional[int]:
        return min((r.exact for r in self.results), default=None)

    @property
    def relaxed_exchanges(self) -> int:
        return sum(r.relaxed_exchanges for r in self.results)

    @property
    def consistent(self) -> bool:
        """Every scanned instance reaches n - 1"""
        return self.minimum is None or self.minimum >= self.n - 1

    def to_dict(self) -> Dict[str, Any]:
        return {
            "generator": self.generator,
            "n": self.n,
            "seed": self.seed,
            "exhaustive": self.exhaustive,
            "count": self.count,
            "minimum": self.minimum,
            "conjecture_target": self.n - 1,
            "two_thirds_floor": two_thirds_floor(self.n),
            "consistent": self.consistent,
            "relaxed_exchanges": self.relaxed_exchanges,
            "results": [r.to_dict() for r in self.results],
            "candidates": self.candidates,
            "theorem_violations": self.theorem_violations,
            "anomalies": self.anomalies,
            "provenance": {"artifact_version": ARTIFACT_VERSION, "prng": "numpy.default_rng(PCG64)"},
        }

    def instance_documents(self) -> List[Dict[str, Any]]:
        """mls-v1 documents aligned with results"""
        return [InstanceFile(mls, provenance).to_dict() for mls, provenance in self.instances]


# =============================================================================
# INSTANCE FAMILIES
# =============================================================================

def iter_instances(generator: str, n: int, count: Optional[int], exhaustive: bool,
                   seed: int) -> Iterator[Tuple[MLS, Dict[str, Any]]]:
    """Yield (mls, provenance) for a scan family"""
    if generator not in GENERATORS:
        raise UsageError(f"Unknown generator {generator!r}; expected one of {', '.join(GENERATORS)}")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise UsageError(f"Order n must be a positive integer, got {n!r}")
    if exhaustive:
        if generator != "latin" or n > Config.MAX_ENUMERATION_ORDER:
            raise UsageError(f"--all is only feasible for the latin generator with "
                             f"n <= {Config.MAX_ENUMERATION_ORDER}")
        for k, square in enumerate(enumerate_latin_squares(n)):
            yield from_latin_square(square), {"generator": "latin-all", "n": n, "index": k}
        return

    if generator == "theorem2":
        primes = Config.THEOREM2_PRIMES if count is None else Config.THEOREM2_PRIMES[:count]
        for p in primes:
            yield theorem2(n, p), {"generator": "theorem2", "n": n, "p": p}
        return

    if count is None or count < 1:
        raise UsageError("A positive --count is required for random generators")
    rng = np.random.default_rng(seed)
    for _ in range(count):
        sub_seed = int(rng.integers(2**31))
        square = random_latin_square(n, sub_seed)
        if generator == "latin":
            yield from_latin_square(square), {"generator": "latin", "n": n, "seed": sub_seed}
        else:
            p = EMBED_PRIMES[int(rng.integers(len(EMBED_PRIMES)))]
            basis = random_invertible_basis(n, p, np.random.default_rng(sub_seed))
            yield embed_latin(square, p, basis), {"generator": "embed", "n": n, "p": p, "seed": sub_seed}


def _evaluate(job: Tuple[int, MLS, Dict[str, Any], int]) -> InstanceResult:
    index, mls, provenance, node_budget = job
    exact = exact_max(mls, node_budget, workers=1)
    result = InstanceResult(index, exact.size, exact.size, exact.optimal, exact.nodes, provenance)
    try:
        report = two_thirds_solve(mls, node_budget)
        result.heuristic = report.size
        result.relaxed_exchanges = report.notes["relaxed_exchanges"]
    except TheoremViolation as e:
        result.violation = e.message
    except AnomalyError as e:
        logger.warning(f"Instance {index}: {e.message}")
        result.anomaly = e.message
    return result


# =============================================================================
# SCAN
# =============================================================================

def scan(n: int, generator: str = "latin", count: Optional[int] = None, exhaustive: bool = False,
         seed: Optional[int] = None, node_budget: Optional[int] = None,
         workers: Optional[int] = None, candidate_dir: Optional[str] = None,
         dump: bool = True) -> ScanReport:
    """
    Solve every instance of a family exactly and aggregate

    Args:
        n: degree
        generator: "latin", "embed" or "theorem2"
        count: number of random instances (primes to use for theorem2)
        exhaustive: enumerate every Latin square of order n instead of sampling
        seed: master seed (defaults to MLT_SEED)
        node_budget: exact search budget per instance
        workers: evaluate instances in this many processes
        candidate_dir: where candidates are dumped (defaults to MLT_CANDIDATE_DIR)
        dump: write candidate instance files
    """
    seed = Config.seed() if seed is None else seed
    node_budget = Config.node_budget() if node_budget is None else node_budget
    workers = Config.workers() if workers is None else workers
    candidate_dir = Config.CANDIDATE_DIR if candidate_dir is None else candidate_dir

    instances = list(iter_instances(generator, n, count, exhaustive, seed))
    jobs = [(k, mls, prov, node_budget) for k, (mls, prov) in enumerate(instances)]
    logger.info(f"Scanning {len(jobs)} {generator} instances of degree {n} (seed {seed})")

    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_evaluate, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        results = [_evaluate(job) for job in jobs]

    report = ScanReport(generator, n, seed, exhaustive, results, instances=instances)
    floor = two_thirds_floor(n)
    for result in results:
        mls = instances[result.index][0]
        if result.violation:
            report.theorem_violations.append({"index": result.index, "reason": result.violation})
        if result.anomaly:
            report.anomalies.append({"index": result.index, "reason": result.anomaly})
        if result.exact >= n - 1:
            continue
        confirmed = exact_max(mls, 0, workers=1)
        entry = {"index": result.index, "exact": confirmed.size,
                 "cells": [list(c) for c in confirmed.transversal.cells],
                 "provenance": result.provenance, "file": None}
        if confirmed.size >= n - 1:
            logger.info(f"Instance {result.index} reaches {confirmed.size} on re-verification")
            result.exact, result.optimal = confirmed.size, True
            continue
        if dump:
            path = Path(candidate_dir) / f"scan-n{n}-{generator}-seed{seed}-{result.index}.json"
            InstanceFile(mls, dict(result.provenance, scan_seed=seed, index=result.index)).write(path)
            entry["file"] = str(path)
        logger.warning(f"Instance {result.index} has maximum {confirmed.size} < n - 1 = {n - 1}")
        report.candidates.append(entry)
        if confirmed.size < floor:
            logger.error(f"Instance {result.index} has maximum {confirmed.size} < ceil(2n/3) = {floor}")
            report.theorem_violations.append({"index": result.index, "exact": confirmed.size,
                                              "reason": f"maximum below ceil(2n/3) = {floor}"})

    logger.info(f"Scan finished: minimum {report.minimum} over {report.count} instances, "
                f"{len(report.candidates)} candidates")
    return report
