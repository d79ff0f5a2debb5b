"""Block analysis of the order-3m square: hit counts, symmetries, hit theorem.

The square splits into nine m x m subsquares indexed (i, j) in {1,2,3}^2.
For a transversal, x[i][j] counts its cells inside block (i, j); the row and
column sums of x all equal m.  The claim checked here is that every
transversal hits all nine blocks at least once, together with the two
constrained-search specializations (no transversal misses block (2,2) or
block (1,1) entirely) and the two isotopisms that transport those blocks onto
the rest.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    DomainError,
    Isotopism,
    LatinSquare,
    LatinSquareError,
    apply_isotopism,
    diagonal_cols,
)
from . import engine
from .families import build_L


class SumViolation(LatinSquareError):
    """Block hit counts whose row/column sums differ from m (caller error)."""


class NotAutotopism(LatinSquareError):
    """The isotopism does not fix the square it was checked against."""


# Images of blocks under the two standard isotopisms of build_L(m).
TAU_BLOCK_MAP = {(2, 2): (3, 3), (1, 2): (1, 3), (3, 1): (2, 1), (2, 3): (3, 2)}
PHI_BLOCK_MAP = {(1, 1): (2, 3), (2, 2): (1, 2), (3, 3): (3, 1)}


def block_of(entry_or_cell, m: int) -> tuple[int, int]:
    """1-based block index (i, j) of a cell: i = r//m + 1, j = c//m + 1."""
    if hasattr(entry_or_cell, "row"):
        r, c = entry_or_cell.row, entry_or_cell.col
    else:
        r, c = entry_or_cell[0], entry_or_cell[1]
    if not (0 <= r < 3 * m and 0 <= c < 3 * m):
        raise DomainError(f"cell ({r},{c}) outside an order-{3 * m} square")
    return (r // m + 1, c // m + 1)


def block_cells(i: int, j: int, m: int) -> tuple[tuple[int, int], ...]:
    """All m*m cells of block (i, j)."""
    if not (1 <= i <= 3 and 1 <= j <= 3):
        raise DomainError(f"block index ({i},{j}) outside 1..3")
    return tuple((r, c)
                 for r in range((i - 1) * m, i * m)
                 for c in range((j - 1) * m, j * m))


def block_hits(square: LatinSquare, transversal, m: int) -> tuple[tuple[int, ...], ...]:
    """3x3 matrix of the transversal's cell counts per block; sums must be m."""
    cols = diagonal_cols(transversal)
    if square.order != 3 * m or len(cols) != square.order:
        raise DomainError(f"expected a diagonal of an order-{3 * m} square")
    x = [[0] * 3 for _ in range(3)]
    for r, c in enumerate(cols):
        i, j = block_of((r, c), m)
        x[i - 1][j - 1] += 1
    for t in range(3):
        if sum(x[t]) != m or sum(x[i][t] for i in range(3)) != m:
            raise SumViolation(f"block sums {x} do not all equal m={m}")
    return tuple(tuple(row) for row in x)


def _swap_blocks(m: int, first: int, second: int) -> tuple[int, ...]:
    """Permutation of 0..3m-1 swapping thirds `first` and `second` pointwise."""
    perm = list(range(3 * m))
    for t in range(m):
        a, b = first * m + t, second * m + t
        perm[a], perm[b] = perm[b], perm[a]
    return tuple(perm)


def automorphism_tau(m: int) -> Isotopism:
    """(alpha, alpha, alpha) with alpha swapping the middle and last thirds."""
    if m < 3 or m % 2 == 0:
        raise DomainError(f"block square symmetries need odd m >= 3, got {m}")
    alpha = _swap_blocks(m, 1, 2)
    return Isotopism(alpha, alpha, alpha)


def autotopism_phi(m: int) -> Isotopism:
    """Rows swap thirds 1,2; columns swap thirds 1,3; symbols per the cycle list."""
    if m < 3 or m % 2 == 0:
        raise DomainError(f"block square symmetries need odd m >= 3, got {m}")
    alpha = _swap_blocks(m, 0, 1)
    beta = _swap_blocks(m, 0, 2)
    gamma = list(range(3 * m))
    gamma[0], gamma[2 * m - 1] = 2 * m - 1, 0
    for t in range(m - 1):
        gamma[m + t], gamma[2 * m + t] = 2 * m + t, m + t
    return Isotopism(alpha, beta, tuple(gamma))


def block_image_map(iso: Isotopism, m: int) -> dict[tuple[int, int], tuple[int, int]]:
    """Where each block's cell set lands under (alpha, beta).

    Raises DomainError when some block's image straddles several blocks (the
    row or column permutation does not respect the banding).
    """
    def band_image(perm):
        bands = []
        for t in range(3):
            images = {perm[v] // m for v in range(t * m, (t + 1) * m)}
            if len(images) != 1:
                raise DomainError(f"third {t + 1} is not mapped onto a single third")
            bands.append(images.pop() + 1)
        return bands

    row_band = band_image(iso.alpha)
    col_band = band_image(iso.beta)
    return {(i, j): (row_band[i - 1], col_band[j - 1])
            for i in range(1, 4) for j in range(1, 4)}


def verify_block_maps(square: LatinSquare, iso: Isotopism, m: int,
                      expected: dict | None = None) -> bool:
    """Check iso fixes the square and realizes the expected block images."""
    if apply_isotopism(square, iso) != square:
        raise NotAutotopism("isotopism does not fix the square")
    image = block_image_map(iso, m)
    if expected is None:
        return True
    return all(image[src] == dst for src, dst in expected.items())


@dataclass(frozen=True)
class TheoremCheck:
    """Outcome of the exhaustive block-hit verification for one m."""

    m: int
    transversal_count: int | None
    min_block_hits: int | None
    passed: bool
    block22_ok: bool
    block11_ok: bool
    budget_exhausted: bool

    def to_json_dict(self) -> dict:
        return {
            "m": self.m,
            "transversalCount": self.transversal_count,
            "minBlockHits": self.min_block_hits,
            "pass": self.passed,
            "block22OK": self.block22_ok,
            "block11OK": self.block11_ok,
            "budgetExhausted": self.budget_exhausted,
        }


def verify_hit_theorem(m: int, node_budget: int | None = None, *,
                       backend: str = "auto") -> TheoremCheck:
    """Enumerate all transversals of build_L(m) and check every block is hit.

    Also re-verifies the two block specializations independently: forbidding
    every cell of block (2,2), or of block (1,1), leaves no transversal.
    """
    square = build_L(m)
    exhausted = False
    count: int | None = None
    min_hits: int | None = None
    try:
        summary = engine.count_and_cover(square, block_m=m, want_cover=False,
                                         node_budget=node_budget, backend=backend)
        count = summary.count
        min_hits = summary.min_block_hits
    except engine.BudgetExceeded as exc:
        exhausted = True
        count = exc.count

    def block_is_unavoidable(i, j):
        try:
            hit = engine.find(square, forbidden_cells=block_cells(i, j, m),
                              node_budget=node_budget, backend=backend)
            return hit is None
        except engine.BudgetExceeded:
            nonlocal exhausted
            exhausted = True
            return False

    block22 = block_is_unavoidable(2, 2)
    block11 = block_is_unavoidable(1, 1)
    passed = (not exhausted and count is not None and count > 0
              and min_hits is not None and min_hits >= 1 and block22 and block11)
    return TheoremCheck(
        m=m,
        transversal_count=count,
        min_block_hits=min_hits,
        passed=passed,
        block22_ok=block22,
        block11_ok=block11,
        budget_exhausted=exhausted,
    )
