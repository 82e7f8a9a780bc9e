"""
Matroid rank oracles over an indexed ground set.

Two concrete matroids are supported:

* ``LinearMatroid``: columns of a matrix over GF(p), one vector per element id.
* ``PartitionMatroid``: every element belongs to a symbol class, a set is
  independent iff its members have pairwise distinct classes.

All arithmetic is exact (residues mod p held in numpy int64 arrays). Both
matroids are immutable after construction and safe to share between threads.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple
import logging

import numpy as np

from .errors import ContractError, DomainError, InputError

logger = logging.getLogger(__name__)

# residues are multiplied in int64, so p * p must stay below 2**63
MAX_MODULUS = 2**31


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


# =============================================================================
# FINITE FIELD LINEAR ALGEBRA
# =============================================================================

@dataclass(frozen=True)
class FieldSpec:
    """Prime field GF(p)"""
    p: int

    def __post_init__(self):
        if isinstance(self.p, (int, np.integer)) and self.p >= MAX_MODULUS:
            raise InputError(f"Field modulus must be below 2**31, got {self.p}", p=self.p)
        if not isinstance(self.p, (int, np.integer)) or not _is_prime(int(self.p)):
            raise InputError(f"Field modulus must be prime, got {self.p!r}", p=self.p)

    def inverse(self, a: int) -> int:
        return pow(int(a) % self.p, -1, self.p)


def row_reduce(matrix, p: int) -> Tuple[np.ndarray, List[int]]:
    """
    Reduced row echelon form of ``matrix`` over GF(p)

    Pivots are chosen column by column from left to right, taking the lowest
    remaining row with a nonzero entry, so the result is reproducible.

    Returns:
        (reduced matrix, list of pivot columns)
    """
    m = np.array(matrix, dtype=np.int64) % p
    if m.ndim != 2:
        raise InputError("Expected a two-dimensional matrix")
    n_rows, n_cols = m.shape
    pivots: List[int] = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        nonzero = np.nonzero(m[r:, c])[0]
        if nonzero.size == 0:
            continue
        k = r + int(nonzero[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
        m[r] = (m[r] * pow(int(m[r, c]), -1, p)) % p
        col = m[:, c].copy()
        col[r] = 0
        m = (m - np.outer(col, m[r])) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank_mod_p(matrix, p: int) -> int:
    """Rank of a matrix over GF(p)"""
    m = np.asarray(matrix)
    if m.size == 0:
        return 0
    return len(row_reduce(m, p)[1])


# =============================================================================
# SPAN STATES (incremental closure used by the solvers)
# =============================================================================

class SpanState(ABC):
    """Closure of an independent set, extendable one element at a time"""

    @property
    @abstractmethod
    def rank(self) -> int:
        ...

    @abstractmethod
    def contains(self, x: int) -> bool:
        """True iff element ``x`` is spanned"""

    @abstractmethod
    def extend(self, x: int) -> "SpanState":
        """New state spanning one more element; ``x`` must not be spanned"""


class EchelonState(SpanState):
    """Echelon basis over GF(p); each stored row is zero at every other row's pivot"""

    def __init__(self, matroid: "LinearMatroid", rows: Optional[np.ndarray] = None,
                 pivots: Tuple[int, ...] = ()):
        self._matroid = matroid
        self._rows = rows if rows is not None else np.zeros((0, matroid.dim), dtype=np.int64)
        self._pivots = pivots

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def residual(self, vector: np.ndarray) -> np.ndarray:
        p = self._matroid.field.p
        v = np.array(vector, dtype=np.int64) % p
        for row, pc in zip(self._rows, self._pivots):
            if v[pc]:
                v = (v - v[pc] * row) % p
        return v

    def contains(self, x: int) -> bool:
        return not self.residual(self._matroid.vector(x)).any()

    def extend(self, x: int) -> "EchelonState":
        p = self._matroid.field.p
        v = self.residual(self._matroid.vector(x))
        nonzero = np.nonzero(v)[0]
        if nonzero.size == 0:
            raise ContractError(f"Element {x} is already spanned", element=x)
        pc = int(nonzero[0])
        v = (v * pow(int(v[pc]), -1, p)) % p
        return EchelonState(self._matroid, np.vstack([self._rows, v]), self._pivots + (pc,))


class ClassState(SpanState):
    """Set of occupied symbol classes of a partition matroid"""

    def __init__(self, matroid: "PartitionMatroid", classes: FrozenSet[int] = frozenset()):
        self._matroid = matroid
        self._classes = classes

    @property
    def rank(self) -> int:
        return len(self._classes)

    def contains(self, x: int) -> bool:
        return self._matroid.class_of[x] in self._classes

    def extend(self, x: int) -> "ClassState":
        cls = self._matroid.class_of[x]
        if cls in self._classes:
            raise ContractError(f"Element {x} is already spanned", element=x)
        return ClassState(self._matroid, self._classes | {cls})


# =============================================================================
# MATROIDS
# =============================================================================

class Matroid(ABC):
    """Rank oracle over the element ids ``0 .. size-1``"""

    kind = "abstract"

    @property
    @abstractmethod
    def size(self) -> int:
        ...

    @property
    @abstractmethod
    def full_rank(self) -> int:
        ...

    @abstractmethod
    def empty_state(self) -> SpanState:
        ...

    @abstractmethod
    def rank(self, ids: Iterable[int]) -> int:
        ...

    @abstractmethod
    def _support(self, independent: List[int], x: int) -> FrozenSet[int]:
        """Support of a spanned ``x`` in an already checked independent list"""

    @abstractmethod
    def descriptor(self) -> Dict[str, Any]:
        """Serializable description used by the instance file format"""

    def check_ids(self, ids: Iterable[int]) -> List[int]:
        checked = []
        for x in ids:
            if isinstance(x, bool) or not isinstance(x, (int, np.integer)) or not 0 <= x < self.size:
                raise InputError(f"Unknown element id {x!r} (ground set has {self.size} elements)",
                                 element=x if isinstance(x, int) else None)
            checked.append(int(x))
        return checked

    def span_state(self, ids: Iterable[int]) -> SpanState:
        """Closure state of ``ids``; dependent members are skipped"""
        state = self.empty_state()
        for x in self.check_ids(ids):
            if not state.contains(x):
                state = state.extend(x)
        return state

    def is_independent(self, ids: Iterable[int]) -> bool:
        """True iff rank equals size; repeated ids make a multiset dependent"""
        members = self.check_ids(ids)
        if len(set(members)) != len(members):
            return False
        return self.rank(members) == len(members)

    def spans(self, spanning_ids: Iterable[int], x: int) -> bool:
        base = self.check_ids(spanning_ids)
        (x,) = self.check_ids([x])
        return self.rank(base + [x]) == self.rank(base)

    def support(self, independent_ids: Iterable[int], x: int) -> FrozenSet[int]:
        """
        Unique minimal subset of an independent set spanning ``x``

        Raises:
            ContractError: the given set is dependent
            DomainError: ``x`` is not spanned
        """
        members = sorted(set(self.check_ids(independent_ids)))
        (x,) = self.check_ids([x])
        if not self.is_independent(members):
            raise ContractError("Support requires an independent set", ids=members)
        if not self.spans(members, x):
            raise DomainError(f"Element {x} is not spanned by the given set", element=x)
        return self._support(members, x)

    def min_spanning_subset(self, independent_ids: Iterable[int],
                            targets: Iterable[int]) -> FrozenSet[int]:
        """Minimal subset of an independent set spanning every target (union of supports)"""
        members = sorted(set(self.check_ids(independent_ids)))
        if not self.is_independent(members):
            raise ContractError("Minimal spanning subset requires an independent set", ids=members)
        state = self.span_state(members)
        result: FrozenSet[int] = frozenset()
        for x in sorted(set(self.check_ids(targets))):
            if not state.contains(x):
                raise DomainError(f"Element {x} is not spanned by the given set", element=x)
            result = result | self._support(members, x)
        return result


class LinearMatroid(Matroid):
    """Vectors over GF(p); element id is the position in ``vectors``"""

    kind = "linear"

    def __init__(self, field: FieldSpec, dim: int, vectors: Sequence[Sequence[int]]):
        if isinstance(dim, bool) or not isinstance(dim, (int, np.integer)) or dim < 1:
            raise InputError(f"Ambient dimension must be a positive integer, got {dim!r}")
        rows = []
        for idx, vec in enumerate(vectors):
            coords = list(vec)
            if len(coords) != dim:
                raise InputError(f"Element {idx} has {len(coords)} coordinates, expected {dim}",
                                 element=idx)
            for c in coords:
                if isinstance(c, bool) or not isinstance(c, (int, np.integer)) or not 0 <= c < field.p:
                    raise InputError(f"Element {idx} has coordinate {c!r} outside [0, {field.p})",
                                     element=idx)
            rows.append([int(c) for c in coords])
        self.field = field
        self.dim = int(dim)
        self._vectors = np.array(rows, dtype=np.int64).reshape(len(rows), self.dim)
        self._vectors.setflags(write=False)
        self._full_rank = rank_mod_p(self._vectors, field.p) if rows else 0

    def __repr__(self):
        return f"<LinearMatroid(p={self.field.p}, dim={self.dim}, size={self.size})>"

    def __eq__(self, other):
        return (isinstance(other, LinearMatroid) and self.field == other.field
                and self.dim == other.dim and np.array_equal(self._vectors, other._vectors))

    def __hash__(self):
        return hash((self.field.p, self.dim, self._vectors.tobytes()))

    @property
    def size(self) -> int:
        return self._vectors.shape[0]

    @property
    def full_rank(self) -> int:
        return self._full_rank

    @property
    def vectors(self) -> np.ndarray:
        return self._vectors

    def vector(self, x: int) -> np.ndarray:
        return self._vectors[x]

    def empty_state(self) -> EchelonState:
        return EchelonState(self)

    def rank(self, ids: Iterable[int]) -> int:
        members = sorted(set(self.check_ids(ids)))
        if not members:
            return 0
        return rank_mod_p(self._vectors[members], self.field.p)

    def coefficients(self, independent: List[int], x: int) -> Dict[int, int]:
        """Coefficients of ``x`` in its unique expansion over an independent list"""
        p = self.field.p
        augmented = np.column_stack([self._vectors[independent].T, self._vectors[x]])
        reduced, pivots = row_reduce(augmented, p)
        t = len(independent)
        if t in pivots:
            raise DomainError(f"Element {x} is not spanned by the given set", element=x)
        return {independent[pc]: int(reduced[i, t]) for i, pc in enumerate(pivots)}

    def _support(self, independent: List[int], x: int) -> FrozenSet[int]:
        return frozenset(e for e, c in self.coefficients(independent, x).items() if c)

    def descriptor(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "p": self.field.p,
            "dim": self.dim,
            "elements": self._vectors.tolist(),
        }


class PartitionMatroid(Matroid):
    """Capacity-one partition matroid; ``class_of[id]`` is the symbol class"""

    kind = "partition"

    def __init__(self, class_of: Sequence[int]):
        classes = []
        for idx, cls in enumerate(class_of):
            if isinstance(cls, bool) or not isinstance(cls, (int, np.integer)) or cls < 1:
                raise InputError(f"Element {idx} has invalid class {cls!r}", element=idx)
            classes.append(int(cls))
        self.class_of: Tuple[int, ...] = tuple(classes)

    def __repr__(self):
        return f"<PartitionMatroid(size={self.size}, classes={self.full_rank})>"

    def __eq__(self, other):
        return isinstance(other, PartitionMatroid) and self.class_of == other.class_of

    def __hash__(self):
        return hash(self.class_of)

    @property
    def size(self) -> int:
        return len(self.class_of)

    @property
    def full_rank(self) -> int:
        return len(set(self.class_of))

    def empty_state(self) -> ClassState:
        return ClassState(self)

    def rank(self, ids: Iterable[int]) -> int:
        return len({self.class_of[x] for x in self.check_ids(ids)})

    def _support(self, independent: List[int], x: int) -> FrozenSet[int]:
        cls = self.class_of[x]
        return frozenset(e for e in independent if self.class_of[e] == cls)

    def descriptor(self) -> Dict[str, Any]:
        return {"kind": self.kind, "classes": list(self.class_of)}

    def as_linear(self, p: int = 2) -> LinearMatroid:
        """Linear encoding sending class k to the k-th standard basis vector"""
        dim = max(self.class_of, default=1)
        vectors = [[1 if k == cls - 1 else 0 for k in range(dim)] for cls in self.class_of]
        return LinearMatroid(FieldSpec(p), dim, vectors)


# =============================================================================
# ORACLE OPERATIONS
# =============================================================================

def rank(matroid: Matroid, ids: Iterable[int]) -> int:
    return matroid.rank(ids)


def is_independent(matroid: Matroid, ids: Iterable[int]) -> bool:
    return matroid.is_independent(ids)


def spans(matroid: Matroid, spanning_ids: Iterable[int], x: int) -> bool:
    return matroid.spans(spanning_ids, x)


def support(matroid: Matroid, independent_ids: Iterable[int], x: int) -> FrozenSet[int]:
    return matroid.support(independent_ids, x)


def min_spanning_subset(matroid: Matroid, independent_ids: Iterable[int],
                        targets: Iterable[int]) -> FrozenSet[int]:
    return matroid.min_spanning_subset(independent_ids, targets)


def matroid_from_descriptor(desc: Dict[str, Any]) -> Matroid:
    """Inverse of ``Matroid.descriptor``"""
    kind = desc.get("kind")
    if kind == LinearMatroid.kind:
        return LinearMatroid(FieldSpec(desc["p"]), desc["dim"], desc["elements"])
    if kind == PartitionMatroid.kind:
        return PartitionMatroid(desc["classes"])
    raise InputError(f"Unknown matroid kind {kind!r}")
