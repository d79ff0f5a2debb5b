"""Transversal-free lower-bound sets for the T/U/V families.

Every transversal of a family square must take the maximum-delta cell in each
row (the row maxima sum to exactly n/2), so three kinds of cells can never be
used: cells that miss their row's maximum delta in designated rows (M = P u Q
u R), cells sharing a column with a forced cell (N), and cells sharing a
symbol with one (O).  The union M u N u O is materialized literally and its
size compared against the family's closed-form quadratic bound; the case
analysis behind the closed form is validated as a consequence, not
re-derived.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .core import DomainError, Entry, LatinSquare, LatinSquareError
from .delta import delta_grid
from .engine import FREE, ClassificationReport
from .families import build_family, claimed_pinned_entries, family_k


class PartialReport(LatinSquareError):
    """The classification report is incomplete; subset checks need all cells."""


def lower_bound_formula(family: str, n: int) -> Fraction:
    """The family's closed-form lower bound on tau; may be half-integral."""
    family_k(family, n)
    if family == "T":
        return Fraction(19 * n * n - 51 * n + 36, 36)
    if family == "V":
        return Fraction(19 * n * n - 86 * n - 68, 36)
    if family == "U":
        return Fraction(19 * n * n - 73 * n - 182, 36)
    raise DomainError(f"no closed-form bound for family {family!r}")


def lower_bound(family: str, n: int) -> int:
    """Integer bound: tau is an integer, so the ceiling of the closed form."""
    return math.ceil(lower_bound_formula(family, n))


@dataclass(frozen=True)
class BoundSets:
    """The materialized transversal-free sets of one family square."""

    family: str
    n: int
    pinned: tuple[Entry, ...]          # F: the forced cells themselves
    columns: frozenset[int]            # C: columns of F
    symbols: frozenset[int]            # S: symbols of F
    N: frozenset[Entry]                # column-sharing cells, minus F
    O: frozenset[Entry]                # symbol-sharing cells, minus F
    P: frozenset[Entry]
    Q: frozenset[Entry]
    R: frozenset[Entry]

    @property
    def M(self) -> frozenset[Entry]:
        return self.P | self.Q | self.R

    @property
    def union(self) -> frozenset[Entry]:
        return self.M | self.N | self.O

    @property
    def union_size(self) -> int:
        return len(self.union)

    @property
    def formula_value(self) -> Fraction:
        return lower_bound_formula(self.family, self.n)


def _off_max_rows(family: str, k: int) -> tuple[list[tuple[int, int]], ...]:
    """(row, required-delta) pairs for the P, Q, R row slices."""
    if family == "T":
        p = [(3 * u - 2, 2) for u in range(1, k)]
        q = [(3 * u - 1, 1) for u in range(1, k)]
        r = [(3 * u, 0) for u in range(2, k)]
    elif family == "V":
        p = [(3 * u - 2, 2) for u in range(1, k + 1)]
        q = [(3 * u - 1, 1) for u in range(2, k + 1)]
        r = [(3 * u, 0) for u in range(2, k + 1)]
    else:  # U
        p = [(3 * u - 1, 2) for u in range(2, k)]
        q = [(1, 1)] + [(3 * u, 1) for u in range(1, k)]
        r = [(3 * u + 1, 0) for u in range(2, k)]
    return p, q, r


def _column_symbol_sets(family: str, n: int, k: int) -> tuple[set[int], set[int]]:
    if family == "T":
        cols = {(6 * u) % n for u in range(2, k + 1)} | {1}
        syms = {(3 * u) % n for u in range(k + 3, 2 * k + 2)} | {4}
    elif family == "V":
        cols = {(6 * (k - u + 1) + 4) % n for u in range(1, k + 1)}
        syms = {(3 * u + 1) % n for u in range(k + 3, 2 * k + 2)} | {3}
    else:  # U
        cols = {6 * u + 2 for u in range(2, k)} | {3, 4}
        syms = {(3 * u) % n for u in range(k + 4, 2 * k + 2)} | {5, 8}
    return cols, syms


def bound_sets(family: str, n: int) -> BoundSets:
    k = family_k(family, n)
    square = build_family(family, n)
    pinned = claimed_pinned_entries(family, n)
    cols, syms = _column_symbol_sets(family, n, k)
    if cols != {e.col for e in pinned} or syms != {e.sym for e in pinned}:
        raise DomainError(
            f"{family}{n}: column/symbol sets disagree with the forced cells")
    fset = frozenset(pinned)
    grid = square.grid
    n_set = frozenset(Entry(r, c, grid[r][c])
                      for c in cols for r in range(n)) - fset
    o_set = frozenset(e for e in square.entries() if e.sym in syms) - fset
    dg = delta_grid(square)
    p_rows, q_rows, r_rows = _off_max_rows(family, k)

    def slice_set(rows):
        return frozenset(Entry(r, c, grid[r][c])
                         for r, dval in rows for c in range(n) if dg[r, c] != dval)

    return BoundSets(
        family=family,
        n=n,
        pinned=pinned,
        columns=frozenset(cols),
        symbols=frozenset(syms),
        N=n_set,
        O=o_set,
        P=slice_set(p_rows),
        Q=slice_set(q_rows),
        R=slice_set(r_rows),
    )


@dataclass(frozen=True)
class BoundCheck:
    family: str
    n: int
    union_size: int
    formula_value: Fraction
    lower_bound: int
    size_ok: bool
    subset_ok: bool | None
    tau: int | None
    tau_ok: bool | None

    @property
    def ok(self) -> bool:
        return bool(self.size_ok and self.subset_ok is not False and self.tau_ok is not False)

    def to_json_dict(self) -> dict:
        value = self.formula_value
        return {
            "family": self.family,
            "n": self.n,
            "unionSize": self.union_size,
            "formulaValue": int(value) if value.denominator == 1 else float(value),
            "subsetOK": self.subset_ok,
            "tau": self.tau,
        }


def check_sets_only(family: str, n: int) -> BoundCheck:
    """Pure set arithmetic: union size vs the closed form, no search needed."""
    sets = bound_sets(family, n)
    value = sets.formula_value
    return BoundCheck(
        family=family,
        n=n,
        union_size=sets.union_size,
        formula_value=value,
        lower_bound=math.ceil(value),
        size_ok=sets.union_size >= value,
        subset_ok=None,
        tau=None,
        tau_ok=None,
    )


def verify_bound(family: str, n: int, report: ClassificationReport) -> BoundCheck:
    """Check the union against a classification: size, subset-of-FREE, and tau."""
    if report.partial:
        raise PartialReport(f"classification of {family}{n} is incomplete")
    if report.order != n:
        raise DomainError(f"report order {report.order} does not match n={n}")
    sets = bound_sets(family, n)
    value = sets.formula_value
    subset_ok = all(report.status[e.row][e.col] == FREE for e in sets.union)
    tau = report.tau
    return BoundCheck(
        family=family,
        n=n,
        union_size=sets.union_size,
        formula_value=value,
        lower_bound=math.ceil(value),
        size_ok=sets.union_size >= value,
        subset_ok=subset_ok,
        tau=tau,
        tau_ok=value <= tau < n * n,
    )
