"""
Instance generators: seeded random Latin squares, exhaustive enumeration,
random invertible bases and the acceptance corpus.

All randomness comes from ``numpy.random.default_rng(seed)`` (PCG64) so a
(generator, n, seed) triple always reproduces the same instance.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional, Sequence
import logging

import numpy as np

from config import Config
from models.errors import UsageError
from models.instance_file import InstanceFile
from models.matroid import FieldSpec, rank_mod_p
from models.mls import MLS, embed_latin, from_latin_square, theorem2

logger = logging.getLogger(__name__)

KINDS = ("theorem2", "latin", "embed")
EMBED_PRIMES = (2, 3, 5, 7)


def _check_order(n: Any) -> int:
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise UsageError(f"Order n must be a positive integer, got {n!r}")
    return n


def random_latin_square(n: int, seed: int = 0) -> List[List[int]]:
    """
    Seeded Latin square built row by row

    Each row is filled by backtracking over a seeded permutation of the
    symbols per cell. A Latin rectangle always completes by one more row,
    so the per-row search never fails.
    """
    n = _check_order(n)
    rng = np.random.default_rng(seed)
    square: List[List[int]] = []
    col_used = [set() for _ in range(n)]

    def fill(row: List[int], j: int) -> bool:
        if j == n:
            return True
        for s in rng.permutation(n) + 1:
            s = int(s)
            if s in row or s in col_used[j]:
                continue
            row.append(s)
            if fill(row, j + 1):
                return True
            row.pop()
        return False

    for _ in range(n):
        row: List[int] = []
        fill(row, 0)
        for j, s in enumerate(row):
            col_used[j].add(s)
        square.append(row)
    return square


def enumerate_latin_squares(n: int) -> Iterator[List[List[int]]]:
    """All Latin squares of order n in lexicographic order (cell by cell backtracking)"""
    n = _check_order(n)
    if n > Config.MAX_ENUMERATION_ORDER:
        raise UsageError(f"Enumerating Latin squares of order {n} is infeasible "
                         f"(limit {Config.MAX_ENUMERATION_ORDER})")
    square = [[0] * n for _ in range(n)]
    row_used = [set() for _ in range(n)]
    col_used = [set() for _ in range(n)]

    def walk(k: int):
        if k == n * n:
            yield [row[:] for row in square]
            return
        i, j = divmod(k, n)
        for s in range(1, n + 1):
            if s in row_used[i] or s in col_used[j]:
                continue
            square[i][j] = s
            row_used[i].add(s)
            col_used[j].add(s)
            yield from walk(k + 1)
            row_used[i].discard(s)
            col_used[j].discard(s)
        square[i][j] = 0

    yield from walk(0)


def random_invertible_basis(n: int, p: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform invertible n x n matrix over GF(p) by rejection sampling"""
    FieldSpec(p)
    while True:
        matrix = rng.integers(0, p, size=(n, n), dtype=np.int64)
        if rank_mod_p(matrix, p) == n:
            return matrix


def generate(kind: str, n: int, p: Optional[int] = None, seed: Optional[int] = None) -> InstanceFile:
    """
    Build one instance

    Args:
        kind: "theorem2", "latin" (partition encoding) or "embed" (random basis over GF(p))
        n: degree
        p: prime modulus for theorem2/embed (default 5)
        seed: PRNG seed for latin/embed (default MLT_SEED)
    """
    n = _check_order(n)
    seed = Config.seed() if seed is None else seed
    if kind == "theorem2":
        p = 5 if p is None else p
        mls = theorem2(n, p)
        provenance = {"generator": kind, "n": n, "p": p}
    elif kind == "latin":
        mls = from_latin_square(random_latin_square(n, seed))
        provenance = {"generator": kind, "n": n, "seed": seed}
    elif kind == "embed":
        p = 5 if p is None else p
        rng = np.random.default_rng(seed)
        square = random_latin_square(n, seed)
        mls = embed_latin(square, p, random_invertible_basis(n, p, rng))
        provenance = {"generator": kind, "n": n, "p": p, "seed": seed}
    else:
        raise UsageError(f"Unknown generator {kind!r}; expected one of {', '.join(KINDS)}")
    logger.debug(f"Generated {kind} instance of degree {n}")
    return InstanceFile(mls, provenance)


# =============================================================================
# CORPUS
# =============================================================================

@dataclass
class CorpusEntry:
    label: str
    mls: MLS
    provenance: Dict[str, Any] = field(default_factory=dict)


def build_corpus(seed: int = 0, embedded_count: int = 200,
                 latin_orders: Sequence[int] = (2, 3, 4),
                 embedded_orders: Sequence[int] = (5, 6, 7),
                 theorem2_max: int = 7,
                 theorem2_primes: Sequence[int] = (2, 5)) -> List[CorpusEntry]:
    """
    Acceptance corpus

    * every Latin square of the given orders in partition encoding
    * seeded random embedded instances cycling through the given orders
    * v_i - v_j instances for n = 1..theorem2_max over each prime
    """
    corpus: List[CorpusEntry] = []
    for n in latin_orders:
        for k, square in enumerate(enumerate_latin_squares(n)):
            corpus.append(CorpusEntry(f"latin-{n}-{k}", from_latin_square(square),
                                      {"generator": "latin-all", "n": n, "index": k}))
    rng = np.random.default_rng(seed)
    for k in range(embedded_count):
        n = embedded_orders[k % len(embedded_orders)]
        p = EMBED_PRIMES[int(rng.integers(len(EMBED_PRIMES)))]
        sub_seed = int(rng.integers(2**31))
        square = random_latin_square(n, sub_seed)
        basis = random_invertible_basis(n, p, np.random.default_rng(sub_seed))
        corpus.append(CorpusEntry(f"embed-{n}-{k}", embed_latin(square, p, basis),
                                  {"generator": "embed", "n": n, "p": p, "seed": sub_seed}))
    for p in theorem2_primes:
        for n in range(1, theorem2_max + 1):
            corpus.append(CorpusEntry(f"theorem2-{n}-{p}", theorem2(n, p),
                                      {"generator": "theorem2", "n": n, "p": p}))
    logger.info(f"Built corpus of {len(corpus)} instances")
    return corpus
