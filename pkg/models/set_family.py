"""
Finite set families X_1..X_s over a ground set X
"""

from dataclasses import dataclass
from typing import Any, Dict, FrozenSet, Iterable, Tuple

from .errors import InputError


@dataclass(frozen=True)
class SetFamily:
    X: FrozenSet[int]
    subsets: Tuple[FrozenSet[int], ...]

    @classmethod
    def of(cls, X: Iterable[int], subsets: Iterable[Iterable[int]]) -> "SetFamily":
        ground = frozenset(X)
        members = tuple(frozenset(s) for s in subsets)
        for i, s in enumerate(members, start=1):
            if not s <= ground:
                raise InputError(f"Subset X_{i} is not contained in X",
                                 extra=sorted(s - ground))
        return cls(ground, members)

    @property
    def s(self) -> int:
        return len(self.subsets)

    def meets_preconditions(self) -> bool:
        """s > |X|/2 and every |X_i| >= s"""
        return 2 * self.s > len(self.X) and all(len(sub) >= self.s for sub in self.subsets)

    def to_dict(self) -> Dict[str, Any]:
        return {"X": sorted(self.X), "subsets": [sorted(sub) for sub in self.subsets]}
