"""Exhaustive search over diagonals and transversals with delta-interval pruning.

The search walks rows in ascending index order assigning one column per row
under used-column (and, for transversals, used-symbol) bitmasks, so solutions
are produced in lexicographic order of the column sequence and enumeration is
deterministic.  At every node the partial delta sum plus the remaining rows'
min/max delta suffix sums brackets every reachable total; if no integer in
that interval hits the target residue (n/2 mod n for even order, 0 for odd)
the subtree is pruned.  Pruning never removes a real solution, which the test
suite checks by comparing against pruning-disabled runs.

"Budget exceeded" is a first-class outcome distinct from "no solution": the
kernel reports how far it got and callers surface the result as unknown.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterator

import numpy as np

from . import _kernel
from .core import (
    Diagonal,
    DomainError,
    Entry,
    LatinSquare,
    LatinSquareError,
    Transversal,
    _as_rcs,
    as_transversal,
)
from .delta import OddOrder, delta_grid

FREE = "FREE"
COVERED = "COVERED"
PINNED = "PINNED"
UNKNOWN = "UNKNOWN"

# Node cap for the opportunistic full-enumeration pass inside classify().
AUTO_ENUM_BUDGET = 400_000_000


class BudgetExceeded(LatinSquareError):
    """The node budget ran out before the search finished."""

    def __init__(self, nodes: int, count: int = 0):
        self.nodes = nodes
        self.count = count
        super().__init__(f"node budget exceeded after {nodes} nodes")


class SearchMode(Enum):
    TRANSVERSAL = "transversal"
    SUITABLE_DIAGONAL = "suitable-diagonal"


@dataclass(frozen=True)
class SearchConstraints:
    """Required entries, forbidden cells, search mode, and an optional budget."""

    required: frozenset[Entry] = frozenset()
    forbidden_cells: frozenset[tuple[int, int]] = frozenset()
    mode: SearchMode = SearchMode.TRANSVERSAL
    node_budget: int | None = None

    @classmethod
    def make(cls, required=(), forbidden_cells=(), mode=SearchMode.TRANSVERSAL,
             node_budget=None) -> "SearchConstraints":
        req = frozenset(Entry(*_as_rcs(e)) for e in required)
        forb = frozenset((int(r), int(c)) for r, c in forbidden_cells)
        return cls(req, forb, mode, node_budget)

    def validate(self, square: LatinSquare) -> None:
        rows, cols, syms = set(), set(), set()
        for e in self.required:
            if not (0 <= e.row < square.order and 0 <= e.col < square.order):
                raise DomainError(f"required entry {e} outside the square")
            if square.grid[e.row][e.col] != e.sym:
                raise DomainError(f"required entry {e} is not an entry of the square")
            if e.row in rows or e.col in cols or e.sym in syms:
                raise DomainError("required entries must be pairwise row/col/sym disjoint")
            rows.add(e.row)
            cols.add(e.col)
            syms.add(e.sym)
            if (e.row, e.col) in self.forbidden_cells:
                raise DomainError(f"required entry {e} is also forbidden")
        if self.mode is SearchMode.SUITABLE_DIAGONAL and square.order % 2:
            raise OddOrder("suitable-diagonal mode needs even order")


class _Prepared:
    __slots__ = ("n", "target", "use_syms", "sd_final", "cand", "lo_suf", "hi_suf", "feasible")

    def __init__(self, square: LatinSquare, constraints: SearchConstraints):
        constraints.validate(square)
        n = square.order
        grid = square.grid
        dg = delta_grid(square)
        req_by_row = {e.row: e for e in constraints.required}
        req_cols = {e.col for e in constraints.required}
        req_syms = {e.sym for e in constraints.required}
        transversal = constraints.mode is SearchMode.TRANSVERSAL
        cand: list[list[tuple[int, int, int]]] = []
        for r in range(n):
            if r in req_by_row:
                e = req_by_row[r]
                cand.append([(e.col, e.sym, int(dg[r, e.col]))])
                continue
            row = []
            grow = grid[r]
            drow = dg[r]
            for c in range(n):
                if c in req_cols or (r, c) in constraints.forbidden_cells:
                    continue
                s = grow[c]
                if transversal and s in req_syms:
                    continue
                row.append((c, s, int(drow[c])))
            cand.append(row)
        self.n = n
        self.use_syms = transversal
        self.sd_final = constraints.mode is SearchMode.SUITABLE_DIAGONAL
        self.target = (n // 2) if n % 2 == 0 else 0
        self.cand = cand
        self.feasible = all(cand)
        lo = [0] * (n + 1)
        hi = [0] * (n + 1)
        if self.feasible:
            for r in range(n - 1, -1, -1):
                ds = [d for _, _, d in cand[r]]
                lo[r] = lo[r + 1] + min(ds)
                hi[r] = hi[r + 1] + max(ds)
        self.lo_suf = lo
        self.hi_suf = hi


class _NodeCounter:
    __slots__ = ("nodes",)

    def __init__(self):
        self.nodes = 0


def _iter_cols(prep: _Prepared, prune: bool, budget: int | None,
               counter: _NodeCounter) -> Iterator[tuple[int, ...]]:
    """Pure-python twin of the compiled kernel; yields column tuples lazily."""
    if not prep.feasible:
        return
    n = prep.n
    target = prep.target
    cand = prep.cand
    lo_suf = prep.lo_suf
    hi_suf = prep.hi_suf
    use_syms = prep.use_syms
    sd_final = prep.sd_final
    if prune and lo_suf[0] + ((target - lo_suf[0]) % n) > hi_suf[0]:
        return  # the target residue is unreachable from the root
    limit = -1 if budget is None else budget
    sol = [0] * n
    idx = [0] * (n + 1)
    ucols = [0] * (n + 1)
    usyms = [0] * (n + 1)
    dsum = [0] * (n + 1)
    depth = 0
    nodes = counter.nodes
    while depth >= 0:
        if depth == n:
            if not sd_final or dsum[n] % n == target:
                counter.nodes = nodes
                yield tuple(sol)
            depth -= 1
            continue
        row = cand[depth]
        i = idx[depth]
        uc = ucols[depth]
        us = usyms[depth]
        ds = dsum[depth]
        moved = False
        while i < len(row):
            nodes += 1
            if 0 <= limit < nodes:
                counter.nodes = nodes
                raise BudgetExceeded(nodes)
            c, s, d = row[i]
            i += 1
            if uc >> c & 1:
                continue
            if use_syms and us >> s & 1:
                continue
            nd = ds + d
            if prune:
                lo = nd + lo_suf[depth + 1]
                hi = nd + hi_suf[depth + 1]
                if lo + ((target - lo) % n) > hi:
                    continue
            idx[depth] = i
            sol[depth] = c
            ucols[depth + 1] = uc | 1 << c
            usyms[depth + 1] = us | 1 << s if use_syms else us
            dsum[depth + 1] = nd
            depth += 1
            idx[depth] = 0
            moved = True
            break
        if not moved:
            idx[depth] = i
            depth -= 1
    counter.nodes = nodes


def _use_kernel(prep: _Prepared, backend: str) -> bool:
    if backend == "pure":
        return False
    if backend == "numba":
        if not _kernel.HAVE_NUMBA:
            raise DomainError("numba backend requested but numba is unavailable")
        if prep.n > _kernel.MAX_KERNEL_ORDER:
            raise DomainError(f"numba backend handles order <= {_kernel.MAX_KERNEL_ORDER}")
        return True
    return _kernel.HAVE_NUMBA and prep.n <= _kernel.MAX_KERNEL_ORDER


def _kernel_arrays(prep: _Prepared):
    n = prep.n
    width = max(1, max(len(row) for row in prep.cand))
    cand_col = np.zeros((n, width), np.int64)
    cand_sym = np.zeros((n, width), np.int64)
    cand_d = np.zeros((n, width), np.int64)
    cand_len = np.zeros(n, np.int64)
    for r, row in enumerate(prep.cand):
        cand_len[r] = len(row)
        for i, (c, s, d) in enumerate(row):
            cand_col[r, i] = c
            cand_sym[r, i] = s
            cand_d[r, i] = d
    lo = np.asarray(prep.lo_suf, np.int64)
    hi = np.asarray(prep.hi_suf, np.int64)
    return cand_col, cand_sym, cand_d, cand_len, lo, hi


def _run_kernel(prep: _Prepared, *, prune: bool, budget: int | None,
                enumerate_all: bool, block_m: int = 0, want_cover: bool = False):
    n = prep.n
    arrays = _kernel_arrays(prep)
    first_cols = np.zeros(n, np.int64)
    sol = np.zeros(n, np.int64)
    cover = np.zeros((n, n) if want_cover else (1, 1), np.int64)
    witness = np.zeros((n * n, n) if want_cover else (1, 1), np.int64)
    witness_have = np.zeros(n * n if want_cover else 1, np.int64)
    status, count, nodes, min_block = _kernel.dfs(
        *arrays, n, prep.target,
        1 if prep.use_syms else 0,
        1 if prep.sd_final else 0,
        1 if prune else 0,
        -1 if budget is None else budget,
        1 if enumerate_all else 0,
        block_m,
        1 if want_cover else 0,
        first_cols, cover, witness, witness_have, sol,
    )
    return status, int(count), int(nodes), int(min_block), first_cols, cover, witness, witness_have


@dataclass(frozen=True)
class EnumerationSummary:
    """Aggregates of a full enumeration: count, per-cell cover, witnesses."""

    count: int
    cover: np.ndarray | None
    witness_cols: dict[tuple[int, int], tuple[int, ...]]
    min_block_hits: int | None
    nodes: int
    first: tuple[int, ...] | None


def _constraints_arg(constraints, kwargs) -> SearchConstraints:
    if constraints is None:
        return SearchConstraints.make(**kwargs)
    if kwargs:
        raise TypeError("pass either a SearchConstraints object or keyword constraints")
    return constraints


def find(square: LatinSquare, constraints: SearchConstraints | None = None, *,
         prune: bool = True, backend: str = "auto",
         **kwargs) -> Transversal | Diagonal | None:
    """First solution in lexicographic column order, or None if none exists.

    Raises BudgetExceeded when the node budget runs out, which is an unknown
    outcome, never a "no".
    """
    cons = _constraints_arg(constraints, kwargs)
    prep = _Prepared(square, cons)
    cols: tuple[int, ...] | None = None
    if not prep.feasible:
        return None
    if _use_kernel(prep, backend):
        status, _, nodes, _, first_cols, _, _, _ = _run_kernel(
            prep, prune=prune, budget=cons.node_budget, enumerate_all=False)
        if status == -1:
            raise BudgetExceeded(nodes)
        if status == 1:
            cols = tuple(int(c) for c in first_cols)
    else:
        counter = _NodeCounter()
        cols = next(_iter_cols(prep, prune, cons.node_budget, counter), None)
    if cols is None:
        return None
    if cons.mode is SearchMode.TRANSVERSAL:
        return as_transversal(square, cols)
    return Diagonal(cols)


def iter_solutions(square: LatinSquare, constraints: SearchConstraints | None = None, *,
                   prune: bool = True, **kwargs) -> Iterator[Diagonal]:
    """Lazy lexicographic enumeration (pure backend); yields bound objects."""
    cons = _constraints_arg(constraints, kwargs)
    prep = _Prepared(square, cons)
    counter = _NodeCounter()
    wrap = (lambda c: as_transversal(square, c)) \
        if cons.mode is SearchMode.TRANSVERSAL else Diagonal
    for cols in _iter_cols(prep, prune, cons.node_budget, counter):
        yield wrap(cols)


def enumerate_solutions(square: LatinSquare, constraints: SearchConstraints | None = None,
                        visitor: Callable[[Diagonal], None] | None = None, *,
                        prune: bool = True, backend: str = "auto", **kwargs) -> int:
    """Visit every solution exactly once in lexicographic order; return the count."""
    cons = _constraints_arg(constraints, kwargs)
    if visitor is None:
        summary = count_and_cover(square, cons, prune=prune, backend=backend,
                                  want_cover=False)
        return summary.count
    count = 0
    for sol in iter_solutions(square, cons, prune=prune):
        visitor(sol)
        count += 1
    return count


def count_and_cover(square: LatinSquare, constraints: SearchConstraints | None = None, *,
                    prune: bool = True, backend: str = "auto", block_m: int = 0,
                    want_cover: bool = True, **kwargs) -> EnumerationSummary:
    """Full enumeration reduced to aggregates: count, cover counts, witnesses.

    The per-cell cover matrix counts how many solutions use each cell; the
    witness map keeps the first solution through each covered cell.
    """
    cons = _constraints_arg(constraints, kwargs)
    prep = _Prepared(square, cons)
    n = prep.n
    if not prep.feasible:
        return EnumerationSummary(count=0, cover=np.zeros((n, n), np.int64) if want_cover else None,
                                  witness_cols={}, min_block_hits=None, nodes=0, first=None)
    if _use_kernel(prep, backend):
        status, count, nodes, min_block, first_cols, cover, witness, have = _run_kernel(
            prep, prune=prune, budget=cons.node_budget, enumerate_all=True,
            block_m=block_m, want_cover=want_cover)
        if status == -1:
            raise BudgetExceeded(nodes, count)
        witness_map = {}
        if want_cover:
            for cell in np.flatnonzero(have):
                r, c = divmod(int(cell), n)
                witness_map[(r, c)] = tuple(int(v) for v in witness[cell])
        return EnumerationSummary(
            count=count,
            cover=cover if want_cover else None,
            witness_cols=witness_map,
            min_block_hits=int(min_block) if (block_m and count) else None,
            nodes=nodes,
            first=tuple(int(c) for c in first_cols) if count else None,
        )
    cover = np.zeros((n, n), np.int64) if want_cover else None
    witness_map: dict[tuple[int, int], tuple[int, ...]] = {}
    min_block = None
    count = 0
    first = None
    counter = _NodeCounter()
    try:
        for cols in _iter_cols(prep, prune, cons.node_budget, counter):
            count += 1
            if first is None:
                first = cols
            if want_cover:
                for r, c in enumerate(cols):
                    cover[r, c] += 1
                    witness_map.setdefault((r, c), cols)
            if block_m:
                x = [0] * 9
                for r, c in enumerate(cols):
                    x[(r // block_m) * 3 + c // block_m] += 1
                mb = min(x)
                min_block = mb if min_block is None else min(min_block, mb)
    except BudgetExceeded as exc:
        raise BudgetExceeded(exc.nodes, count) from None
    return EnumerationSummary(count=count, cover=cover, witness_cols=witness_map,
                              min_block_hits=min_block, nodes=counter.nodes, first=first)


@dataclass(frozen=True, eq=False)
class ClassificationReport:
    """Per-cell transversal status plus the derived counts.

    ``status[r][c]`` is FREE (in no transversal), COVERED (in some but not
    all), PINNED (in every transversal, of which there is at least one), or
    UNKNOWN (budget ran out); ``tau`` counts FREE cells.
    """

    order: int
    family: str | None
    status: tuple[tuple[str, ...], ...]
    tau: int
    pinned: tuple[Entry, ...]
    has_transversal: bool
    transversal_count: int | None
    witnesses: dict
    partial: bool
    nodes: int

    @property
    def free_cells(self) -> tuple[tuple[int, int], ...]:
        return tuple((r, c) for r, row in enumerate(self.status)
                     for c, st in enumerate(row) if st == FREE)

    def to_json_dict(self) -> dict:
        out = {
            "order": self.order,
            "family": self.family,
            "tau": self.tau,
            "hasTransversal": self.has_transversal,
            "pinned": [list(e.as_tuple()) for e in self.pinned],
            "freeCells": [list(rc) for rc in self.free_cells],
        }
        if self.transversal_count is not None:
            out["counts"] = self.transversal_count
        if self.partial:
            out["partial"] = True
        return out


def _report_from_summary(square: LatinSquare, summary: EnumerationSummary) -> ClassificationReport:
    n = square.order
    count = summary.count
    cover = summary.cover
    status = []
    pinned = []
    for r in range(n):
        row = []
        for c in range(n):
            hits = int(cover[r, c]) if count else 0
            if hits == 0:
                row.append(FREE)
            elif hits == count:
                row.append(PINNED)
                pinned.append(square.entry(r, c))
            else:
                row.append(COVERED)
        status.append(tuple(row))
    tau = sum(row.count(FREE) for row in status)
    return ClassificationReport(
        order=n,
        family=square.family,
        status=tuple(status),
        tau=tau,
        pinned=tuple(pinned),
        has_transversal=count > 0,
        transversal_count=count,
        witnesses=dict(summary.witness_cols),
        partial=False,
        nodes=summary.nodes,
    )


def _classify_cell(args):
    grid, family, r, c, budget, backend = args
    square = LatinSquare(grid, family=family)
    entry = square.entry(r, c)
    try:
        witness = find(square, required=(entry,), node_budget=budget, backend=backend)
    except BudgetExceeded as exc:
        return (r, c, UNKNOWN, None, exc.nodes)
    if witness is None:
        return (r, c, FREE, None, 0)
    try:
        avoiding = find(square, forbidden_cells=((r, c),), node_budget=budget,
                        backend=backend)
    except BudgetExceeded as exc:
        return (r, c, UNKNOWN, witness.cols, exc.nodes)
    return (r, c, PINNED if avoiding is None else COVERED, witness.cols, 0)


def classify(square: LatinSquare, *, node_budget: int | None = None, jobs: int = 1,
             backend: str = "auto", strategy: str = "auto") -> ClassificationReport:
    """Classify every cell as FREE / COVERED / PINNED.

    ``strategy='auto'`` first tries one full enumeration with per-cell cover
    counting, capped at AUTO_ENUM_BUDGET nodes, and falls back to independent
    per-cell searches if that cap is exhausted (squares with huge transversal
    counts classify far faster per cell).  Both strategies produce identical
    reports; per-cell work can be spread over ``jobs`` worker processes and
    is merged by cell index, so the report does not depend on the worker
    count.
    """
    n = square.order
    if strategy not in ("auto", "enumerate", "per-cell"):
        raise DomainError(f"unknown classify strategy {strategy!r}")
    if strategy in ("auto", "enumerate"):
        enum_budget = node_budget
        if strategy == "auto":
            # the enumeration pass is opportunistic; cap it so the fallback
            # still has the caller's budget available
            enum_budget = AUTO_ENUM_BUDGET if node_budget is None \
                else min(node_budget, AUTO_ENUM_BUDGET)
        cons = SearchConstraints.make(node_budget=enum_budget)
        try:
            summary = count_and_cover(square, cons, backend=backend)
            return _report_from_summary(square, summary)
        except BudgetExceeded:
            if strategy == "enumerate":
                raise
    tasks = [(square.grid, square.family, r, c, node_budget, backend)
             for r in range(n) for c in range(n)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_classify_cell, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        results = [_classify_cell(t) for t in tasks]
    results.sort(key=lambda t: (t[0], t[1]))
    status = [[UNKNOWN] * n for _ in range(n)]
    witnesses = {}
    pinned = []
    total_nodes = 0
    for r, c, st, wcols, nodes in results:
        status[r][c] = st
        total_nodes += nodes
        if wcols is not None:
            witnesses[(r, c)] = tuple(wcols)
        if st == PINNED:
            pinned.append(square.entry(r, c))
    partial = any(UNKNOWN in row for row in status)
    tau = sum(row.count(FREE) for row in status)
    has_transversal = any(st in (COVERED, PINNED) for row in status for st in row)
    return ClassificationReport(
        order=n,
        family=square.family,
        status=tuple(tuple(row) for row in status),
        tau=tau,
        pinned=tuple(pinned),
        has_transversal=has_transversal,
        transversal_count=None,
        witnesses=witnesses,
        partial=partial,
        nodes=total_nodes,
    )


def is_pinned(square: LatinSquare, entry, *, node_budget: int | None = None,
              backend: str = "auto") -> bool:
    """True iff the square has a transversal and none avoids the entry's cell."""
    e = Entry(*_as_rcs(entry))
    if square.grid[e.row][e.col] != e.sym:
        raise DomainError(f"{e} is not an entry of the square")
    if find(square, node_budget=node_budget, backend=backend) is None:
        return False
    avoiding = find(square, forbidden_cells=((e.row, e.col),),
                    node_budget=node_budget, backend=backend)
    return avoiding is None


def find_disjoint_pair(square: LatinSquare, *, node_budget: int | None = None,
                       backend: str = "auto") -> tuple[Transversal, Transversal] | None:
    """First entry-disjoint pair of transversals in lexicographic order, if any."""
    for first in iter_solutions(square, node_budget=node_budget):
        cells = tuple((r, c) for r, c in enumerate(first.cols))
        second = find(square, forbidden_cells=cells, node_budget=node_budget,
                      backend=backend)
        if second is not None:
            return (first, second)
    return None


def count_parity_check(square: LatinSquare, *, node_budget: int | None = None,
                       backend: str = "auto") -> tuple[int, bool]:
    """Full transversal count of an even-order square plus its evenness."""
    if square.order % 2:
        raise OddOrder("parity check applies to even order")
    count = enumerate_solutions(square, node_budget=node_budget, backend=backend)
    return count, count % 2 == 0
