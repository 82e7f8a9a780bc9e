"""
Matroidal Latin squares: an n x n grid of ground-set element ids in which
every row and every column is a base of the underlying matroid.

Cells are addressed 0-based as (row, col) throughout the code base.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple
import logging

import numpy as np

from .errors import ContractError, InputError
from .matroid import FieldSpec, LinearMatroid, Matroid, PartitionMatroid, rank_mod_p

logger = logging.getLogger(__name__)

Cell = Tuple[int, int]


@dataclass(frozen=True)
class MLS:
    """Grid of element ids bound to a matroid; ``grid[i][j]`` holds a_ij"""
    n: int
    matroid: Matroid
    grid: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 1:
            raise InputError(f"Degree must be a positive integer, got {self.n!r}")
        grid = tuple(tuple(row) for row in self.grid)
        if len(grid) != self.n or any(len(row) != self.n for row in grid):
            raise InputError(f"Grid must be {self.n}x{self.n}")
        for i, row in enumerate(grid):
            for j, x in enumerate(row):
                if isinstance(x, bool) or not isinstance(x, (int, np.integer)) or not 0 <= x < self.matroid.size:
                    raise InputError(f"Cell ({i}, {j}) references unknown element id {x!r}",
                                     cell=[i, j])
        object.__setattr__(self, "grid", tuple(tuple(int(x) for x in row) for row in grid))

    def cell_id(self, cell: Cell) -> int:
        i, j = cell
        return self.grid[i][j]

    def row_ids(self, i: int) -> Tuple[int, ...]:
        return self.grid[i]

    def col_ids(self, j: int) -> Tuple[int, ...]:
        return tuple(row[j] for row in self.grid)

    def ids_of(self, cells: Iterable[Cell]) -> Tuple[int, ...]:
        return tuple(self.grid[i][j] for i, j in cells)

    def to_square(self) -> List[List[int]]:
        """Symbol square of a partition MLS"""
        if not isinstance(self.matroid, PartitionMatroid):
            raise ContractError("Only partition MLS instances have a symbol square")
        return [[self.matroid.class_of[x] for x in row] for row in self.grid]


@dataclass(frozen=True)
class Violation:
    """A row or column that fails to be a base"""
    kind: str
    index: int
    rank: int
    size: int
    deficit: int

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "index": self.index, "rank": self.rank,
                "size": self.size, "deficit": self.deficit}


def validate(mls: MLS) -> List[Violation]:
    """
    Check that every row and column of the grid is a base

    Returns:
        Empty list for a valid MLS, otherwise one violation per offending
        row/column naming its rank deficit
    """
    n = mls.n
    # a base of a rank-r matroid has r elements, so r must equal n as well
    target = max(mls.matroid.full_rank, n)
    violations = []
    lines = [("row", i, mls.row_ids(i)) for i in range(n)] + \
            [("col", j, mls.col_ids(j)) for j in range(n)]
    for kind, index, ids in lines:
        r = mls.matroid.rank(ids)
        distinct = len(set(ids))
        if r != target or distinct != n:
            violations.append(Violation(kind, index, r, distinct, target - r))
    if violations:
        logger.info(f"MLS of degree {n} has {len(violations)} violations")
    return violations


# =============================================================================
# GENERATORS
# =============================================================================

def check_latin(square: Sequence[Sequence[int]]) -> int:
    """
    Validate a Latin square with symbols 1..n

    Returns:
        The order n

    Raises:
        InputError naming the first offending row or column
    """
    n = len(square)
    if n < 1:
        raise InputError("Latin square must have at least one row")
    for i, row in enumerate(square):
        if len(row) != n:
            raise InputError(f"Row {i} has {len(row)} entries, expected {n}", row=i)
        for s in row:
            if isinstance(s, bool) or not isinstance(s, (int, np.integer)) or not 1 <= s <= n:
                raise InputError(f"Row {i} contains symbol {s!r} outside 1..{n}", row=i)
    for i, row in enumerate(square):
        if len(set(row)) != n:
            raise InputError(f"Row {i} repeats a symbol", row=i)
    for j in range(n):
        if len({square[i][j] for i in range(n)}) != n:
            raise InputError(f"Column {j} repeats a symbol", col=j)
    return n


def from_latin_square(square: Sequence[Sequence[int]]) -> MLS:
    """Partition MLS with one element per cell occurrence; class = symbol"""
    n = check_latin(square)
    classes = [int(square[i][j]) for i in range(n) for j in range(n)]
    grid = tuple(tuple(i * n + j for j in range(n)) for i in range(n))
    return MLS(n, PartitionMatroid(classes), grid)


def embed_latin(square: Sequence[Sequence[int]], p: int, basis) -> MLS:
    """
    Linear MLS sending symbol k to column k of an invertible basis matrix

    Args:
        square: Latin square with symbols 1..n
        p: prime modulus
        basis: n x n matrix over GF(p); its columns are the symbol images

    Raises:
        InputError: non-Latin square or singular basis
    """
    n = check_latin(square)
    field_spec = FieldSpec(p)
    matrix = np.array(basis, dtype=np.int64)
    if matrix.shape != (n, n):
        raise InputError(f"Basis must be {n}x{n}, got shape {matrix.shape}")
    matrix = matrix % p
    if rank_mod_p(matrix, p) != n:
        raise InputError(f"Basis matrix is singular mod {p}")
    vectors = [matrix[:, square[i][j] - 1].tolist() for i in range(n) for j in range(n)]
    grid = tuple(tuple(i * n + j for j in range(n)) for i in range(n))
    return MLS(n, LinearMatroid(field_spec, n, vectors), grid)


def theorem2(n: int, p: int) -> MLS:
    """
    Degree-n MLS with a_ii = v1 and a_ij = v_i - v_j over GF(p)

    The diagonal shares element id 0 (the single element v1); every
    off-diagonal cell gets its own id in row-major order. This grid has no
    independent transversal of size n.
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InputError(f"Degree must be a positive integer, got {n!r}")
    field_spec = FieldSpec(p)
    vectors = [[1] + [0] * (n - 1)]
    grid = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            v = [0] * n
            v[i] = 1
            v[j] = p - 1
            grid[i][j] = len(vectors)
            vectors.append(v)
    return MLS(n, LinearMatroid(field_spec, n, vectors), tuple(tuple(r) for r in grid))


def cyclic_latin_square(n: int) -> List[List[int]]:
    """Cyclic group table: entry ((i + j) mod n) + 1"""
    if n < 1:
        raise InputError(f"Order must be positive, got {n}")
    return [[(i + j) % n + 1 for j in range(n)] for i in range(n)]


# =============================================================================
# BLOCK DECOMPOSITION
# =============================================================================

@dataclass(frozen=True)
class BlockView:
    """
    Row/column permutations moving a transversal onto the leading diagonal

    ``row_perm[k]`` is the original row shown at permuted position k (same
    for columns). With t = |T| the regions are B = [0,t)x[0,t),
    C = [0,t)x[t,n), D = [t,n)x[0,t) and E = [t,n)x[t,n) in the permuted frame.
    """
    n: int
    t: int
    row_perm: Tuple[int, ...]
    col_perm: Tuple[int, ...]
    regions: Dict[str, Tuple[Tuple[int, int], Tuple[int, int]]] = field(default_factory=dict)

    def original(self, cell: Cell) -> Cell:
        """Original coordinates of a permuted-frame cell"""
        return self.row_perm[cell[0]], self.col_perm[cell[1]]

    def permuted(self, cell: Cell) -> Cell:
        return self.row_perm.index(cell[0]), self.col_perm.index(cell[1])

    def region_cells(self, name: str) -> List[Cell]:
        """Original cells of a region in permuted row-major order"""
        (r0, r1), (c0, c1) = self.regions[name]
        return [self.original((i, j)) for i in range(r0, r1) for j in range(c0, c1)]

    def permuted_grid(self, mls: MLS) -> List[List[int]]:
        return [[mls.grid[self.row_perm[i]][self.col_perm[j]] for j in range(self.n)]
                for i in range(self.n)]


def block_decompose(mls: MLS, cells: Iterable[Cell]) -> BlockView:
    """
    Permute rows and columns so the transversal occupies (0,0)..(t-1,t-1)

    Transversal cells are placed in increasing row order, remaining rows and
    columns follow in increasing order. The MLS itself is not modified.

    Raises:
        ContractError: cells do not form an independent partial transversal
    """
    ordered = sorted(cells)
    n = mls.n
    rows = [c[0] for c in ordered]
    cols = [c[1] for c in ordered]
    if any(not (0 <= r < n and 0 <= c < n) for r, c in ordered):
        raise ContractError("Transversal cell out of range", cells=[list(c) for c in ordered])
    if len(set(rows)) != len(rows) or len(set(cols)) != len(cols):
        raise ContractError("Cells repeat a row or column", cells=[list(c) for c in ordered])
    if not mls.matroid.is_independent([mls.cell_id(c) for c in ordered]):
        raise ContractError("Transversal elements are dependent", cells=[list(c) for c in ordered])
    t = len(ordered)
    row_perm = tuple(rows + [r for r in range(n) if r not in rows])
    col_perm = tuple(cols + [c for c in range(n) if c not in cols])
    regions = {
        "B": ((0, t), (0, t)),
        "C": ((0, t), (t, n)),
        "D": ((t, n), (0, t)),
        "E": ((t, n), (t, n)),
    }
    return BlockView(n, t, row_perm, col_perm, regions)
