"""
Covered-subset witness for set families

Given X_1..X_s over X with s > |X|/2 and every |X_i| >= s, look for a
subset all of whose elements also appear in some other subset of the
family. The counting argument guaranteeing such a subset only goes through
for even |X|: X = {1,2,3} with X_1 = {1,2}, X_2 = {2,3} meets the hypotheses
and has no witness. The search therefore returns an optional index.
"""

from collections import Counter
from itertools import combinations, combinations_with_replacement
from pathlib import Path
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple, Union
import logging

import numpy as np

from models.errors import InputError, PreconditionError
from models.instance_file import dumps_document
from models.set_family import SetFamily

logger = logging.getLogger(__name__)


def decompose(family: SetFamily) -> Tuple[FrozenSet[int], FrozenSet[int], int, int]:
    """
    Split the union of the family by multiplicity

    Returns:
        (Y1, Y2, k1, k2): elements in exactly one subset, elements in at
        least two subsets, and their sizes
    """
    counts = Counter(x for subset in family.subsets for x in subset)
    y1 = frozenset(x for x, c in counts.items() if c == 1)
    y2 = frozenset(x for x, c in counts.items() if c >= 2)
    return y1, y2, len(y1), len(y2)


def find_covered_subset(family: SetFamily) -> Optional[int]:
    """
    Least 1-based index i with X_i disjoint from Y1, or None

    Raises:
        PreconditionError: s <= |X|/2 or some |X_i| < s
    """
    if 2 * family.s <= len(family.X):
        raise PreconditionError(f"Need s > |X|/2, got s={family.s} and |X|={len(family.X)}",
                                s=family.s, x_size=len(family.X))
    for i, subset in enumerate(family.subsets, start=1):
        if len(subset) < family.s:
            raise PreconditionError(f"Subset X_{i} has {len(subset)} elements, need at least s={family.s}",
                                    index=i, s=family.s)
    y1, _, _, _ = decompose(family)
    for i, subset in enumerate(family.subsets, start=1):
        if not subset & y1:
            return i
    return None


def enumerate_families(x_size: int) -> Iterator[SetFamily]:
    """
    Every family over X = {1..x_size} meeting the hypotheses

    Families are multisets of subsets; the witness does not depend on order.
    """
    if x_size < 0:
        raise InputError(f"|X| must be non-negative, got {x_size}")
    ground = tuple(range(1, x_size + 1))
    for s in range(x_size // 2 + 1, x_size + 1):
        allowed = [frozenset(c) for k in range(s, x_size + 1) for c in combinations(ground, k)]
        for subsets in combinations_with_replacement(allowed, s):
            yield SetFamily(frozenset(ground), tuple(subsets))


def exhaustive_check(max_x: int) -> Dict[int, Dict[str, object]]:
    """
    Run find_covered_subset on every family with 1 <= |X| <= max_x

    Returns:
        Per |X|: number of families checked and the families without a witness
    """
    summary: Dict[int, Dict[str, object]] = {}
    for x_size in range(1, max_x + 1):
        checked = 0
        gaps: List[SetFamily] = []
        for family in enumerate_families(x_size):
            checked += 1
            if find_covered_subset(family) is None:
                gaps.append(family)
        summary[x_size] = {"checked": checked, "gaps": gaps}
        if gaps:
            level = logging.ERROR if x_size % 2 == 0 else logging.INFO
            logger.log(level, f"|X|={x_size}: {len(gaps)} of {checked} families have no covered subset")
    return summary


def random_family(x_size: int, rng: np.random.Generator) -> SetFamily:
    """Random family meeting the hypotheses over X = {1..x_size}"""
    if x_size < 1:
        raise InputError(f"|X| must be positive, got {x_size}")
    ground = np.arange(1, x_size + 1)
    s = int(rng.integers(x_size // 2 + 1, x_size + 1))
    subsets = []
    for _ in range(s):
        k = int(rng.integers(s, x_size + 1))
        subsets.append(frozenset(int(x) for x in rng.choice(ground, size=k, replace=False)))
    return SetFamily(frozenset(int(x) for x in ground), tuple(subsets))


def random_check(count: int, max_x: int, seed: int) -> List[SetFamily]:
    """
    Sample random families; return every one without a witness

    Odd |X| gaps are expected and only logged. An even |X| gap contradicts
    the counting argument and is logged as an error.
    """
    rng = np.random.default_rng(seed)
    gaps = []
    for _ in range(count):
        family = random_family(int(rng.integers(1, max_x + 1)), rng)
        if find_covered_subset(family) is None:
            gaps.append(family)
            if len(family.X) % 2 == 0:
                logger.error(f"Even |X| family without covered subset: {family.to_dict()}")
            else:
                logger.warning(f"Odd |X| family without covered subset: {family.to_dict()}")
    return gaps


GAP_ARTIFACT = "lemma1-gaps.json"


def write_gap_artifact(gaps: Sequence[SetFamily], directory: Union[str, Path]) -> Path:
    """Persist families without a covered subset, tagged by the parity of |X|"""
    path = Path(directory) / GAP_ARTIFACT
    path.parent.mkdir(parents=True, exist_ok=True)
    doc = {"gaps": [dict(g.to_dict(), parity="odd" if len(g.X) % 2 else "even") for g in gaps]}
    path.write_text(dumps_document(doc), encoding="utf-8")
    logger.info(f"Wrote {len(gaps)} covered-subset gaps to {path}")
    return path
