"""Immutable latin squares: validation, entries, isotopisms, and text/JSON I/O.

Rows, columns and symbols are always the integers ``0..n-1``.  A square is a
collection of ``n**2`` triples ``(row, col, sym)`` in which any two triples
agree in at most one coordinate; all analysis code in this package works on
that triple view.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

KNOWN_FAMILIES = ("T", "U", "V", "L", "EX6", "EX8", "CAYLEY", "CUSTOM")


class LatinSquareError(Exception):
    """Base class for every error raised by this package."""


class BadSymbol(LatinSquareError):
    """A grid value lies outside the symbol set {0..n-1}."""


class NotLatin(LatinSquareError):
    """A row or column repeats a symbol."""

    def __init__(self, axis: str, index: int, symbol: int):
        self.axis = axis
        self.index = index
        self.symbol = symbol
        super().__init__(f"duplicated symbol {symbol} in {axis} {index}")


class BadPermutation(LatinSquareError):
    """A sequence expected to be a permutation of {0..n-1} is not."""


class NotTransversal(LatinSquareError):
    """A diagonal whose symbols were required to be distinct repeats one."""


class DomainError(LatinSquareError):
    """An argument is outside the domain an operation is defined on."""


class CaseOverlap(LatinSquareError):
    """Two construction cases that should be exclusive matched the same cell."""


class ParseError(LatinSquareError):
    """Malformed square text/JSON; carries a 1-based line and column."""

    def __init__(self, message: str, line: int, column: int = 1):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


@dataclass(frozen=True, order=True)
class Entry:
    """One cell of a square as the triple (row, col, sym)."""

    row: int
    col: int
    sym: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.row, self.col, self.sym)


def _as_rcs(entry) -> tuple[int, int, int]:
    """Accept an Entry or a plain (row, col, sym) triple."""
    if isinstance(entry, Entry):
        return entry.as_tuple()
    r, c, s = entry
    return (int(r), int(c), int(s))


def _check_permutation(seq: Sequence[int], n: int, what: str) -> tuple[int, ...]:
    vals = tuple(int(v) for v in seq)
    if len(vals) != n or set(vals) != set(range(n)):
        raise BadPermutation(f"{what} is not a permutation of 0..{n - 1}: {vals!r}")
    return vals


@dataclass(frozen=True)
class Diagonal:
    """n cells from distinct rows and columns, stored as col(r) per row r."""

    cols: tuple[int, ...]

    def __post_init__(self):
        _check_permutation(self.cols, len(self.cols), "diagonal column map")

    @property
    def order(self) -> int:
        return len(self.cols)

    def entries(self, square: "LatinSquare") -> tuple[Entry, ...]:
        return tuple(square.entry(r, c) for r, c in enumerate(self.cols))

    def symbols(self, square: "LatinSquare") -> tuple[int, ...]:
        return tuple(square.grid[r][c] for r, c in enumerate(self.cols))


@dataclass(frozen=True)
class Transversal(Diagonal):
    """A diagonal whose symbols are also pairwise distinct.

    Symbol distinctness depends on the square, so build instances with
    :func:`as_transversal`.
    """


def diagonal_cols(diag) -> tuple[int, ...]:
    """Accept a Diagonal/Transversal or a plain column sequence."""
    if isinstance(diag, Diagonal):
        return diag.cols
    return tuple(int(c) for c in diag)


def is_transversal(square: "LatinSquare", diag) -> bool:
    cols = diagonal_cols(diag)
    n = square.order
    if len(cols) != n or set(cols) != set(range(n)):
        return False
    return len({square.grid[r][cols[r]] for r in range(n)}) == n


def as_transversal(square: "LatinSquare", diag) -> Transversal:
    """Validate symbol distinctness against `square` and wrap the columns."""
    cols = diagonal_cols(diag)
    t = Transversal(cols)
    syms = t.symbols(square)
    if len(set(syms)) != square.order:
        raise NotTransversal(f"columns {cols!r} repeat a symbol: {syms!r}")
    return t


class LatinSquare:
    """A validated n x n latin square over symbols 0..n-1.

    Instances are immutable after construction and safe to share across
    concurrent workers; every analysis produces new values.
    """

    __slots__ = ("order", "grid", "family", "_array", "_delta_grid")

    def __init__(self, grid, family: str | None = None):
        try:
            arr = np.asarray(grid, dtype=np.int64)
        except (ValueError, TypeError) as exc:
            raise DomainError(f"grid is not a rectangular integer array: {exc}") from None
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise DomainError(f"grid must be square and non-empty, got shape {arr.shape}")
        n = int(arr.shape[0])
        if family is not None and family not in KNOWN_FAMILIES:
            raise DomainError(f"unknown family tag {family!r}")
        if ((arr < 0) | (arr >= n)).any():
            r, c = map(int, np.argwhere((arr < 0) | (arr >= n))[0])
            raise BadSymbol(f"value {int(arr[r, c])} at ({r},{c}) outside 0..{n - 1}")
        _validate_latin(arr)
        self.order = n
        self.grid = tuple(tuple(int(v) for v in row) for row in arr.tolist())
        self.family = family
        arr.setflags(write=False)
        self._array = arr
        self._delta_grid = None

    def to_array(self) -> np.ndarray:
        """Read-only int64 view of the grid."""
        return self._array

    def entry(self, row: int, col: int) -> Entry:
        return Entry(row, col, self.grid[row][col])

    def entries(self) -> Iterator[Entry]:
        for r, row in enumerate(self.grid):
            for c, s in enumerate(row):
                yield Entry(r, c, s)

    def with_family(self, family: str | None) -> "LatinSquare":
        sq = LatinSquare.__new__(LatinSquare)
        sq.order = self.order
        sq.grid = self.grid
        sq.family = family
        sq._array = self._array
        sq._delta_grid = self._delta_grid
        return sq

    def __getitem__(self, rc: tuple[int, int]) -> int:
        r, c = rc
        return self.grid[r][c]

    def __eq__(self, other) -> bool:
        # Family is metadata; equality is the mathematical identity.
        return isinstance(other, LatinSquare) and self.grid == other.grid

    def __hash__(self) -> int:
        return hash(self.grid)

    def __repr__(self) -> str:
        tag = f", family={self.family!r}" if self.family else ""
        return f"LatinSquare(order={self.order}{tag})"


def _validate_latin(arr: np.ndarray) -> None:
    n = arr.shape[0]
    ref = np.arange(n, dtype=np.int64)
    if (np.sort(arr, axis=1) != ref).any():
        for r in range(n):
            seen = set()
            for v in arr[r]:
                if v in seen:
                    raise NotLatin("row", r, int(v))
                seen.add(int(v))
    if (np.sort(arr, axis=0) != ref.reshape(-1, 1)).any():
        for c in range(n):
            seen = set()
            for v in arr[:, c]:
                if v in seen:
                    raise NotLatin("column", c, int(v))
                seen.add(int(v))


def new_square(order: int, grid, family: str | None = None) -> LatinSquare:
    """Validate and freeze a grid stated to have the given order."""
    sq = LatinSquare(grid, family=family)
    if sq.order != order:
        raise DomainError(f"declared order {order} but grid has order {sq.order}")
    return sq


def cayley_table(n: int) -> LatinSquare:
    """Addition table of the integers mod n: grid[a][b] = (a+b) % n."""
    if n < 1:
        raise DomainError(f"order must be positive, got {n}")
    a = np.arange(n, dtype=np.int64)
    return LatinSquare((a.reshape(-1, 1) + a) % n, family="CAYLEY")


@dataclass(frozen=True)
class Isotopism:
    """Permutation triple acting on rows, columns and symbols respectively."""

    alpha: tuple[int, ...]
    beta: tuple[int, ...]
    gamma: tuple[int, ...]

    def __post_init__(self):
        n = len(self.alpha)
        object.__setattr__(self, "alpha", _check_permutation(self.alpha, n, "alpha"))
        object.__setattr__(self, "beta", _check_permutation(self.beta, len(self.beta), "beta"))
        object.__setattr__(self, "gamma", _check_permutation(self.gamma, len(self.gamma), "gamma"))
        if not (len(self.alpha) == len(self.beta) == len(self.gamma)):
            raise BadPermutation("alpha, beta, gamma must act on the same index set")

    @property
    def order(self) -> int:
        return len(self.alpha)

    @classmethod
    def identity(cls, n: int) -> "Isotopism":
        ident = tuple(range(n))
        return cls(ident, ident, ident)

    def entry_image(self, entry) -> Entry:
        r, c, s = _as_rcs(entry)
        return Entry(self.alpha[r], self.beta[c], self.gamma[s])

    def diagonal_image(self, diag) -> Diagonal:
        cols = diagonal_cols(diag)
        new_cols = [0] * len(cols)
        for r, c in enumerate(cols):
            new_cols[self.alpha[r]] = self.beta[c]
        return Diagonal(tuple(new_cols))


def apply_isotopism(square: LatinSquare, iso: Isotopism) -> LatinSquare:
    """Return the square with result[alpha(r)][beta(c)] = gamma(square[r][c])."""
    n = square.order
    if iso.order != n:
        raise BadPermutation(f"isotopism acts on 0..{iso.order - 1}, square has order {n}")
    g = square.to_array()
    alpha = np.asarray(iso.alpha, dtype=np.int64)
    beta = np.asarray(iso.beta, dtype=np.int64)
    gamma = np.asarray(iso.gamma, dtype=np.int64)
    out = np.empty_like(g)
    out[np.ix_(alpha, beta)] = gamma[g]
    return LatinSquare(out)


def serialize(square: LatinSquare) -> str:
    """Text form: first line is n, then n lines of n space-separated symbols."""
    lines = [str(square.order)]
    lines.extend(" ".join(str(v) for v in row) for row in square.grid)
    return "\n".join(lines) + "\n"


def parse(text: str, family: str | None = None) -> LatinSquare:
    """Parse the text form produced by :func:`serialize`."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or not lines[0].strip():
        raise ParseError("missing order line", 1)
    try:
        n = int(lines[0].strip())
    except ValueError:
        raise ParseError(f"order is not an integer: {lines[0].strip()!r}", 1) from None
    if n < 1:
        raise ParseError(f"order must be positive, got {n}", 1)
    if len(lines) - 1 != n:
        raise ParseError(f"expected {n} grid lines, found {len(lines) - 1}", len(lines))
    grid = []
    for i, line in enumerate(lines[1:], start=2):
        tokens = line.split()
        if len(tokens) != n:
            raise ParseError(f"expected {n} values, found {len(tokens)}", i)
        row = []
        for tok in tokens:
            try:
                row.append(int(tok))
            except ValueError:
                col = line.index(tok) + 1
                raise ParseError(f"not an integer: {tok!r}", i, col) from None
        grid.append(row)
    return new_square(n, grid, family=family)


def to_json_dict(square: LatinSquare) -> dict:
    return {
        "order": square.order,
        "grid": [list(row) for row in square.grid],
        "family": square.family,
    }


def from_json_dict(data: dict) -> LatinSquare:
    try:
        order = data["order"]
        grid = data["grid"]
    except (TypeError, KeyError) as exc:
        raise ParseError(f"missing field {exc}", 1) from None
    return new_square(int(order), grid, family=data.get("family"))


def to_json(square: LatinSquare) -> str:
    return json.dumps(to_json_dict(square), sort_keys=True)


def from_json(text: str) -> LatinSquare:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    return from_json_dict(data)
