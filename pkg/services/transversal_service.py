"""
Independent partial transversal solvers

* greedy_maximal  - seeded row-major greedy construction of a maximal transversal
* augment_step    - the single-exchange augmentation T - a_jj + {x, y}
* two_thirds_solve - greedy + augmentation until the ceil(2n/3) floor is met
* exact_max       - depth-first branch and bound with a contracted-rank bound
* naive_max       - full enumeration, used as an oracle for exact_max
"""

from concurrent.futures import ProcessPoolExecutor
from itertools import permutations
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple
import logging

import numpy as np

from config import Config
from models.errors import AnomalyError, ContractError, InputError, TheoremViolation, UsageError
from models.matroid import LinearMatroid, SpanState
from models.mls import MLS, Cell, block_decompose, theorem2
from models.transversal import SolveReport, Transversal

logger = logging.getLogger(__name__)

METHODS = ("exact", "greedy", "augment")


def two_thirds_target(n: int) -> int:
    return -(-2 * n // 3)


# Degree 2 is the one order where ceil(2n/3) is unattainable: [[1,2],[2,1]]
# has no independent transversal of size 2 (the covering count breaks for |X| = 1)
BOUND_EXCEPTIONS = {2: 1}


def two_thirds_floor(n: int) -> int:
    """ceil(2n/3), except at the degrees listed in BOUND_EXCEPTIONS"""
    return BOUND_EXCEPTIONS.get(n, two_thirds_target(n))


def half_target(n: int) -> int:
    return -(-n // 2)


# =============================================================================
# TRANSVERSAL CHECKS
# =============================================================================

def _check_cells(mls: MLS, cells: Iterable[Cell]) -> List[Cell]:
    checked = []
    for cell in cells:
        i, j = cell
        if not (0 <= i < mls.n and 0 <= j < mls.n):
            raise InputError(f"Cell {tuple(cell)} is outside the {mls.n}x{mls.n} grid",
                             cell=[i, j])
        checked.append((int(i), int(j)))
    return checked


def is_valid_transversal(mls: MLS, cells: Iterable[Cell]) -> bool:
    """Rows distinct, columns distinct and the referenced elements independent"""
    checked = _check_cells(mls, cells)
    rows = [c[0] for c in checked]
    cols = [c[1] for c in checked]
    if len(set(rows)) != len(rows) or len(set(cols)) != len(cols):
        return False
    return mls.matroid.is_independent(mls.ids_of(checked))


def _require_independent(mls: MLS, T: Transversal) -> Transversal:
    T = Transversal.of(mls, T.cells)
    if not is_valid_transversal(mls, T.cells):
        raise ContractError("Cells are not an independent partial transversal",
                            cells=[list(c) for c in T.cells])
    return T


def unspanned_in_E(mls: MLS, T: Transversal, state: Optional[SpanState] = None) -> Optional[Cell]:
    """Lowest cell in a free row and free column not spanned by T, if any"""
    if state is None:
        state = mls.matroid.span_state(T.ids)
    used_rows, used_cols = T.rows, T.cols
    for i in range(mls.n):
        if i in used_rows:
            continue
        for j in range(mls.n):
            if j not in used_cols and not state.contains(mls.grid[i][j]):
                return i, j
    return None


def is_maximal(mls: MLS, T: Transversal) -> bool:
    T = _require_independent(mls, T)
    return unspanned_in_E(mls, T) is None


def maximality_floor_check(mls: MLS, T: Transversal) -> bool:
    """
    A maximal independent transversal has at least ceil(n/2) cells

    Otherwise E has dimension n - t > t and holds an element outside the span
    of T. Returns False only when that argument is contradicted.
    """
    T = _require_independent(mls, T)
    witness = unspanned_in_E(mls, T)
    if witness is not None:
        raise ContractError(f"Transversal is not maximal: cell {witness} extends it",
                            cell=list(witness))
    return T.size >= half_target(mls.n)


# =============================================================================
# GREEDY
# =============================================================================

def _scan_order(n: int, order_seed: int) -> Tuple[List[int], List[int]]:
    if not order_seed:
        return list(range(n)), list(range(n))
    rng = np.random.default_rng(order_seed)
    return [int(i) for i in rng.permutation(n)], [int(j) for j in rng.permutation(n)]


def greedy_extend(mls: MLS, T: Transversal, order_seed: int = 0) -> Transversal:
    """Extend T row by row with the first free column whose element is not spanned"""
    T = _require_independent(mls, T)
    rows, cols = _scan_order(mls.n, order_seed)
    state = mls.matroid.span_state(T.ids)
    cells = list(T.cells)
    used_rows, used_cols = set(T.rows), set(T.cols)
    for i in rows:
        if i in used_rows:
            continue
        for j in cols:
            if j in used_cols:
                continue
            x = mls.grid[i][j]
            if state.contains(x):
                continue
            state = state.extend(x)
            cells.append((i, j))
            used_rows.add(i)
            used_cols.add(j)
            break
    return Transversal.of(mls, cells)


def greedy_maximal(mls: MLS, order_seed: int = 0) -> Transversal:
    """Maximal independent transversal; seed 0 scans rows and columns in natural order"""
    return greedy_extend(mls, Transversal.empty(), order_seed)


# =============================================================================
# AUGMENTATION
# =============================================================================

def augment_step(mls: MLS, T: Transversal, relaxed: bool = True) -> Optional[Transversal]:
    """
    Grow a maximal transversal by one through a single exchange

    With T on the leading diagonal, look for a column j of D such that a_jj
    lies in the minimal subset T_E of T spanning E and column j of D holds
    two elements not spanned by T. For x in E whose support contains a_jj and
    y such an element outside x's row, T - a_jj + {x, y} is independent.

    If no column carries two unspanned elements and ``relaxed`` is set, a
    second pass accepts a single unspanned y as long as it sits outside x's
    row: T - a_jj + x spans the same space as T, so y stays outside it. Some
    embedded degree 5 squares only grow past t = 3 through this pass.

    A non-maximal T is extended directly by its lowest free unspanned cell.

    Returns:
        Transversal of size t + 1, or None when no exchange configuration exists

    Raises:
        ContractError: T is not an independent transversal or already has size n
        AnomalyError: a proposed exchange fails the independence re-check
    """
    n = mls.n
    T = _require_independent(mls, T)
    if T.size >= n:
        raise ContractError(f"Transversal already has size {n}; nothing to augment")

    matroid = mls.matroid
    state = matroid.span_state(T.ids)
    direct = unspanned_in_E(mls, T, state)
    if direct is not None:
        logger.debug(f"Transversal is not maximal, extending by {direct}")
        return Transversal.of(mls, T.cells + (direct,))

    view = block_decompose(mls, T.cells)
    t = view.t
    members = list(T.ids)
    e_cells = view.region_cells("E")
    t_e = matroid.min_spanning_subset(members, [mls.cell_id(c) for c in e_cells])
    supports = {c: matroid.support(members, mls.cell_id(c)) for c in e_cells}

    # column j of D, restricted to elements outside the span of T
    unspanned = {
        j: [c for c in (view.original((i, j)) for i in range(t, n))
            if not state.contains(mls.cell_id(c))]
        for j in range(t)
    }
    for min_unspanned in ((2, 1) if relaxed else (2,)):
        for j in range(t):
            diag_cell = view.original((j, j))
            a_jj = mls.cell_id(diag_cell)
            if a_jj not in t_e or len(unspanned[j]) < min_unspanned:
                continue
            for x_cell in e_cells:
                if a_jj not in supports[x_cell]:
                    continue
                y_cell = next((c for c in unspanned[j] if c[0] != x_cell[0]), None)
                if y_cell is None:
                    continue
                cells = [c for c in T.cells if c != diag_cell] + [x_cell, y_cell]
                candidate = Transversal.of(mls, cells)
                if not is_valid_transversal(mls, candidate.cells):
                    raise AnomalyError("Exchange produced a dependent transversal",
                                       removed=list(diag_cell), x=list(x_cell), y=list(y_cell),
                                       cells=[list(c) for c in candidate.cells])
                logger.debug(f"Exchanged {diag_cell} for {x_cell} and {y_cell} (t={t} -> {t + 1})")
                return candidate
    return None


def two_thirds_solve(mls: MLS, node_budget: Optional[int] = None,
                     order_seed: int = 0) -> SolveReport:
    """
    Independent transversal of size at least ceil(2n/3)

    Alternates greedy completion and augment_step, trying the two-element
    exchange before the single-element one; the latter are counted in
    notes["relaxed_exchanges"]. If the augmentation stalls
    below the floor, an exact search restricted to the floor takes over and
    the report is flagged as an anomaly. Degree 2 uses the floor 1 (see
    BOUND_EXCEPTIONS).

    Raises:
        TheoremViolation: a maximal transversal below ceil(n/2) was found or the
            exact search proved the optimum to be below the floor
        AnomalyError: the fallback search ran out of budget below the floor
    """
    n = mls.n
    target = two_thirds_floor(n)
    T = greedy_maximal(mls, order_seed)
    _assert_floor(mls, T)
    rounds = relaxed = 0
    while T.size < target:
        larger = augment_step(mls, T, relaxed=False)
        if larger is None:
            larger = augment_step(mls, T)
            if larger is None:
                break
            relaxed += 1
            logger.info(f"Single-element exchange needed at t={T.size} for degree {n}")
        rounds += 1
        T = greedy_extend(mls, larger, order_seed)
        _assert_floor(mls, T)

    notes = {"exchanges": rounds, "relaxed_exchanges": relaxed}
    if target != two_thirds_target(n):
        notes["bound_exception"] = two_thirds_target(n)
    report = SolveReport("augment", T, optimal=T.size == n, nodes=rounds, n=n, target=target,
                         notes=notes)
    if T.size >= target:
        return report

    logger.warning(f"Augmentation stalled at {T.size} < {target} for degree {n}; "
                   f"falling back to exact search")
    fallback = exact_max(mls, node_budget, target=target, workers=1)
    report.nodes += fallback.nodes
    report.anomaly = True
    report.notes["fallback"] = True
    if fallback.size >= target:
        report.transversal = fallback.transversal
        report.optimal = fallback.optimal
        return report
    if fallback.optimal:
        logger.error(f"Exact optimum {fallback.size} is below ceil(2n/3) = {target}")
        raise TheoremViolation(f"Optimum {fallback.size} is below ceil(2n/3) = {target}",
                               n=n, size=fallback.size, cells=[list(c) for c in fallback.transversal.cells])
    raise AnomalyError(f"Fallback search exhausted its budget below ceil(2n/3) = {target}",
                       n=n, size=fallback.size)


def _assert_floor(mls: MLS, T: Transversal):
    if not maximality_floor_check(mls, T):
        logger.error(f"Maximal transversal of size {T.size} below ceil(n/2) for degree {mls.n}")
        raise TheoremViolation(f"Maximal transversal of size {T.size} is below ceil(n/2)",
                               n=mls.n, cells=[list(c) for c in T.cells])


# =============================================================================
# EXACT SEARCH
# =============================================================================

class _SearchStopped(Exception):
    pass


class BranchAndBound:
    """
    Depth-first search over rows in increasing order

    Each row is either matched to a free column (increasing column order) or
    skipped. A node is pruned when t + min(free rows, free columns, rank of
    the free cells contracted by T) cannot beat the incumbent. Only strict
    improvements replace the incumbent, so the first optimum found is the
    lexicographically least one.
    """

    def __init__(self, mls: MLS, node_budget: int = 0, stop_at: Optional[int] = None):
        self.mls = mls
        self.node_budget = node_budget
        self.stop_at = mls.n if stop_at is None else min(stop_at, mls.n)
        self.nodes = 0
        self.best: Tuple[Cell, ...] = ()
        self.completed = False

    def run(self, prefix: Sequence[Cell] = (), start_row: int = 0) -> "BranchAndBound":
        state = self.mls.matroid.span_state(self.mls.ids_of(prefix))
        try:
            self._search(start_row, list(prefix), {c for _, c in prefix}, state)
            self.completed = True
        except _SearchStopped:
            self.completed = False
        return self

    def _contracted_rank(self, row: int, used_cols, state: SpanState, cap: int) -> int:
        grid = self.mls.grid
        extra = 0
        for i in range(row, self.mls.n):
            for j in range(self.mls.n):
                if j in used_cols or state.contains(grid[i][j]):
                    continue
                state = state.extend(grid[i][j])
                extra += 1
                if extra >= cap:
                    return extra
        return extra

    def _search(self, row: int, cells: List[Cell], used_cols, state: SpanState):
        self.nodes += 1
        if self.node_budget and self.nodes > self.node_budget:
            raise _SearchStopped()
        t = len(cells)
        if t > len(self.best):
            self.best = tuple(cells)
            if t >= self.stop_at:
                raise _SearchStopped()
        n = self.mls.n
        if row == n:
            return
        cap = min(n - row, n - len(used_cols))
        if t + cap <= len(self.best):
            return
        if t + self._contracted_rank(row, used_cols, state, cap) <= len(self.best):
            return
        for j in range(n):
            if j in used_cols:
                continue
            x = self.mls.grid[row][j]
            if state.contains(x):
                continue
            cells.append((row, j))
            used_cols.add(j)
            self._search(row + 1, cells, used_cols, state.extend(x))
            used_cols.discard(j)
            cells.pop()
        self._search(row + 1, cells, used_cols, state)


def _solve_branch(mls: MLS, prefix: Tuple[Cell, ...], node_budget: int,
                  stop_at: Optional[int]) -> Tuple[Tuple[Cell, ...], int, bool]:
    search = BranchAndBound(mls, node_budget, stop_at).run(prefix, start_row=1)
    return search.best, search.nodes, search.completed


def exact_max(mls: MLS, node_budget: Optional[int] = None, target: Optional[int] = None,
              workers: Optional[int] = None) -> SolveReport:
    """
    Maximum independent partial transversal by branch and bound

    Args:
        mls: the grid to search
        node_budget: node limit, 0 for unbounded (defaults to MLT_NODE_BUDGET)
        target: stop as soon as a transversal of this size is found
        workers: split the row-0 branching across this many processes

    Returns:
        SolveReport with optimal=True iff the search space was exhausted or
        size n was reached
    """
    budget = Config.node_budget() if node_budget is None else node_budget
    if budget < 0:
        raise UsageError(f"Node budget must be >= 0, got {budget}")
    workers = Config.workers() if workers is None else workers
    n = mls.n

    if workers > 1 and n > 1:
        best, nodes, completed = _parallel_search(mls, budget, target, workers)
    else:
        search = BranchAndBound(mls, budget, target).run()
        best, nodes, completed = search.best, search.nodes, search.completed

    T = Transversal.of(mls, best)
    optimal = completed or T.size == n
    if not optimal:
        if target is not None and T.size >= target:
            logger.debug(f"Exact search reached target {target} after {nodes} nodes")
        else:
            logger.warning(f"Node budget {budget} exhausted at size {T.size} (degree {n})")
    return SolveReport("exact", T, optimal=optimal, nodes=nodes, n=n, target=target,
                       notes={"budget": budget, "workers": max(workers, 1)})


def _parallel_search(mls: MLS, budget: int, target: Optional[int],
                     workers: int) -> Tuple[Tuple[Cell, ...], int, bool]:
    root = mls.matroid.empty_state()
    prefixes = [((0, j),) for j in range(mls.n) if not root.contains(mls.grid[0][j])]
    prefixes.append(())
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(_solve_branch, [mls] * len(prefixes), prefixes,
                                [budget] * len(prefixes), [target] * len(prefixes)))
    best_size = max(len(r[0]) for r in results)
    # re-canonicalize: lexicographically least among the optimal branches
    best = min(tuple(sorted(r[0])) for r in results if len(r[0]) == best_size)
    nodes = 1 + sum(r[1] for r in results)
    completed = all(r[2] for r in results)
    return best, nodes, completed


def naive_max(mls: MLS) -> Transversal:
    """Largest independent partial transversal by full enumeration (small n only)"""
    best: Tuple[Cell, ...] = ()
    for cells in iter_partial_transversals(mls.n):
        if len(cells) > len(best) or (len(cells) == len(best) and cells < best):
            if is_valid_transversal(mls, cells):
                best = cells
    return Transversal.of(mls, best)


def iter_partial_transversals(n: int) -> Iterator[Tuple[Cell, ...]]:
    """Every partial transversal of an n x n grid (independence not checked)"""
    def walk(row: int, cells: List[Cell], used: set):
        if row == n:
            yield tuple(cells)
            return
        for j in range(n):
            if j not in used:
                cells.append((row, j))
                used.add(j)
                yield from walk(row + 1, cells, used)
                used.discard(j)
                cells.pop()
        yield from walk(row + 1, cells, used)

    yield from walk(0, [], set())


def full_transversals(mls: MLS) -> Iterator[Tuple[Cell, ...]]:
    """All n! transversals of size n"""
    for perm in permutations(range(mls.n)):
        yield tuple((i, perm[i]) for i in range(mls.n))


# =============================================================================
# CONSTRUCTION CERTIFICATES
# =============================================================================

def theorem2_certificate(mls: MLS, cells: Sequence[Cell]) -> str:
    """
    Reason a full transversal of the v_i - v_j grid is dependent

    Returns one of:
        "repeated-v1"          - two diagonal cells reference the single element v1
        "off-diagonal-sum-zero" - no diagonal cell; each v_k enters once with + and once with -
        "sum-zero-without-a11" - diagonal cell (0,0); the remaining cells sum to zero
        "v_i-unspanned"        - diagonal cell (i,i) with i > 0; v_i is outside the span

    Raises:
        ContractError: the grid is not a v_i - v_j construction or cells are not a full transversal
        AnomalyError: the named relation does not hold numerically
    """
    n = mls.n
    if not isinstance(mls.matroid, LinearMatroid) or mls != theorem2(n, mls.matroid.field.p):
        raise ContractError("Certificate applies only to the v_i - v_j construction")
    if n < 2:
        raise ContractError("A single cell is an independent transversal; no certificate exists")
    cells = sorted(_check_cells(mls, cells))
    if len(cells) != n or len({c[1] for c in cells}) != n or len({c[0] for c in cells}) != n:
        raise ContractError(f"Certificate requires a full transversal of size {n}")

    p = mls.matroid.field.p
    vectors = mls.matroid.vectors
    diagonal = [c for c in cells if c[0] == c[1]]
    if len(diagonal) > 1:
        reason, holds = "repeated-v1", True
    elif not diagonal:
        total = vectors[list(mls.ids_of(cells))].sum(axis=0) % p
        reason, holds = "off-diagonal-sum-zero", not total.any()
    elif diagonal[0] == (0, 0):
        rest = [c for c in cells if c != (0, 0)]
        total = vectors[list(mls.ids_of(rest))].sum(axis=0) % p
        reason, holds = "sum-zero-without-a11", not total.any()
    else:
        i = diagonal[0][0]
        e_i = np.zeros(n, dtype=np.int64)
        e_i[i] = 1
        state = mls.matroid.span_state(mls.ids_of(cells))
        reason, holds = "v_i-unspanned", bool(state.residual(e_i).any())

    if not holds:
        raise AnomalyError(f"Dependence certificate '{reason}' failed its re-check",
                           cells=[list(c) for c in cells])
    return reason


# =============================================================================
# DISPATCH
# =============================================================================

def solve(mls: MLS, method: str = "exact", node_budget: Optional[int] = None,
          order_seed: int = 0, workers: Optional[int] = None) -> SolveReport:
    """Run one of the solvers by name"""
    if method == "exact":
        return exact_max(mls, node_budget, workers=workers)
    if method == "greedy":
        T = greedy_maximal(mls, order_seed)
        return SolveReport("greedy", T, optimal=T.size == mls.n, nodes=0, n=mls.n,
                           notes={"order_seed": order_seed})
    if method == "augment":
        return two_thirds_solve(mls, node_budget, order_seed)
    raise UsageError(f"Unknown method {method!r}; expected one of {', '.join(METHODS)}")
