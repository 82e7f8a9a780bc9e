"""
Value types for partial transversals and solver reports
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, Optional, Tuple

from .mls import MLS, Cell


@dataclass(frozen=True)
class Transversal:
    """Cells with pairwise distinct rows and columns, kept sorted"""
    cells: Tuple[Cell, ...]
    ids: Tuple[int, ...]

    @classmethod
    def of(cls, mls: MLS, cells: Iterable[Cell]) -> "Transversal":
        ordered = tuple(sorted((int(i), int(j)) for i, j in cells))
        return cls(ordered, mls.ids_of(ordered))

    @classmethod
    def empty(cls) -> "Transversal":
        return cls((), ())

    @property
    def size(self) -> int:
        return len(self.cells)

    @property
    def rows(self):
        return {c[0] for c in self.cells}

    @property
    def cols(self):
        return {c[1] for c in self.cells}

    def to_dict(self) -> Dict[str, Any]:
        return {
            "size": self.size,
            "cells": [list(c) for c in self.cells],
            "ids": list(self.ids),
        }


@dataclass
class SolveReport:
    """Outcome of one solver run"""
    method: str
    transversal: Transversal
    optimal: bool = False
    nodes: int = 0
    anomaly: bool = False
    n: Optional[int] = None
    target: Optional[int] = None
    notes: Dict[str, Any] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return self.transversal.size

    def to_dict(self) -> Dict[str, Any]:
        # stable field order for diffable output
        return {
            "method": self.method,
            "n": self.n,
            "size": self.size,
            "cells": [list(c) for c in self.transversal.cells],
            "ids": list(self.transversal.ids),
            "optimal": self.optimal,
            "nodes": self.nodes,
            "anomaly": self.anomaly,
            "target": self.target,
            "notes": self.notes,
        }
