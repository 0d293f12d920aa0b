"""Pattern matrices over {0, *, ?}, their realization classes and graph views.

A pattern matrix fixes which entries of a real matrix are forced to zero
(``0``), forced to be nonzero (``*``) or left free (``?``).  Text form is one
row per line using exactly those three characters, e.g.::

    0**
    **0
    *?*
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from enum import IntEnum
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

ZERO_TOL = 1e-12


class Symbol(IntEnum):
    """Entry symbol; the integer value doubles as the canonical sort order."""

    ZERO = 0
    STAR = 1
    UNKNOWN = 2

    @property
    def char(self) -> str:
        return _CHARS[self]

    @classmethod
    def from_char(cls, ch: str) -> "Symbol":
        try:
            return cls(_CHARS.index(ch))
        except ValueError:
            raise ValueError(f"invalid pattern symbol {ch!r}; expected one of '0', '*', '?'") from None


_CHARS = "0*?"


class PatternError(ValueError):
    """Malformed or dimension-incompatible pattern input."""


@dataclass(frozen=True, eq=False)
class PatternMatrix:
    """Immutable dense grid of :class:`Symbol` values.

    ``data`` is stored as a read-only ``int8`` array holding the symbol codes.
    """

    data: np.ndarray

    def __post_init__(self):
        arr = np.array(self.data, dtype=np.int8, copy=True)
        if arr.ndim != 2:
            raise PatternError(f"pattern must be 2-D, got shape {arr.shape}")
        if arr.size and (arr.min() < 0 or arr.max() > 2):
            raise PatternError("pattern entries must be symbol codes 0, 1 or 2")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    # construction -----------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Sequence[str], cols: int | None = None) -> "PatternMatrix":
        rows = [r.strip() for r in rows]
        widths = {len(r) for r in rows}
        if len(widths) > 1:
            raise PatternError(f"ragged pattern rows (widths {sorted(widths)})")
        ncols = widths.pop() if widths else (cols or 0)
        grid = np.zeros((len(rows), ncols), dtype=np.int8)
        for i, r in enumerate(rows):
            for j, ch in enumerate(r):
                try:
                    grid[i, j] = Symbol.from_char(ch)
                except ValueError as exc:
                    raise PatternError(f"row {i + 1}, column {j + 1}: {exc}") from None
        return cls(grid)

    @classmethod
    def from_text(cls, text: str) -> "PatternMatrix":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        return cls.from_rows(lines)

    @classmethod
    def from_csv(cls, source: str | Path | io.TextIOBase) -> "PatternMatrix":
        """Read a pattern from CSV (one matrix row per line, cells ``0``/``*``/``?``).

        ``source`` may be a path or an open text stream.
        """
        if isinstance(source, (str, Path)):
            with open(source, newline="") as fh:
                return cls.from_csv(fh)
        rows = ["".join(cell.strip() for cell in rec) for rec in csv.reader(source) if rec]
        return cls.from_rows(rows)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "PatternMatrix":
        return cls(np.zeros((rows, cols), dtype=np.int8))

    @classmethod
    def diag(cls, n: int, symbol: Symbol = Symbol.STAR) -> "PatternMatrix":
        return cls(np.diag(np.full(n, int(symbol), dtype=np.int8)))

    @classmethod
    def from_real(cls, X: np.ndarray, tol: float = ZERO_TOL) -> "PatternMatrix":
        """Pattern with ``*`` where ``|X| > tol`` and ``0`` elsewhere."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return cls((np.abs(X) > tol).astype(np.int8))

    @classmethod
    def block(cls, blocks: Sequence[Sequence["PatternMatrix"]]) -> "PatternMatrix":
        return cls(np.block([[b.data for b in row] for row in blocks]))

    # views ------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def T(self) -> "PatternMatrix":
        return PatternMatrix(self.data.T)

    def mask(self, symbol: Symbol) -> np.ndarray:
        return self.data == int(symbol)

    def __getitem__(self, idx) -> Symbol:
        return Symbol(int(self.data[idx]))

    def replace(self, i: int, j: int, symbol: Symbol) -> "PatternMatrix":
        out = self.data.copy()
        out[i, j] = int(symbol)
        return PatternMatrix(out)

    def hstack(self, other: "PatternMatrix") -> "PatternMatrix":
        if self.rows != other.rows:
            raise PatternError(f"row mismatch in hstack: {self.rows} vs {other.rows}")
        return PatternMatrix(np.hstack([self.data, other.data]))

    def to_text(self) -> str:
        return "\n".join("".join(_CHARS[v] for v in row) for row in self.data.tolist())

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        body = self.to_text().replace("\n", "|")
        return f"PatternMatrix({self.rows}x{self.cols}: {body})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, PatternMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.data, other.data))

    def __hash__(self) -> int:
        return hash((self.shape, self.data.tobytes()))


def pattern_membership(M: np.ndarray, P: PatternMatrix, tol: float = ZERO_TOL) -> bool:
    """Whether the real matrix ``M`` lies in the realization class of ``P``.

    Zero positions must be exactly 0, star positions must exceed ``tol`` in
    magnitude; unknown positions are unconstrained.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim == 1 and P.rows == 1:
        M = M[None, :]
    if M.shape != P.shape:
        raise PatternError(f"dimension mismatch: matrix {M.shape} vs pattern {P.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("realization contains NaN or Inf")
    if np.any(M[P.mask(Symbol.ZERO)] != 0.0):
        return False
    return bool(np.all(np.abs(M[P.mask(Symbol.STAR)]) > tol))


@dataclass(frozen=True)
class DirectedGraph:
    """Graph ``G(M)``: edge ``(j, i)`` for every non-zero entry ``M[i, j]``.

    Edges are 0-based ``(source, target)`` pairs, kept sorted.
    """

    n: int
    star_edges: tuple[tuple[int, int], ...]
    unknown_edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        star = tuple(sorted(set(self.star_edges)))
        unk = tuple(sorted(set(self.unknown_edges)))
        if set(star) & set(unk):
            raise ValueError("an edge cannot be both star and unknown")
        for j, i in star + unk:
            if not (0 <= j < self.n and 0 <= i < self.n):
                raise ValueError(f"edge ({j}, {i}) out of range for {self.n} nodes")
        object.__setattr__(self, "star_edges", star)
        object.__setattr__(self, "unknown_edges", unk)

    def out_neighbors(self, j: int, symbol: Symbol = Symbol.STAR) -> list[int]:
        edges = self.star_edges if symbol == Symbol.STAR else self.unknown_edges
        return [i for (src, i) in edges if src == j]


def graph_of(M: PatternMatrix) -> DirectedGraph:
    rows, cols = np.nonzero(M.data)
    star, unk = [], []
    for i, j in zip(rows.tolist(), cols.tolist()):
        (star if M.data[i, j] == Symbol.STAR else unk).append((j, i))
    return DirectedGraph(max(M.shape), tuple(star), tuple(unk))


def pattern_from_graph(g: DirectedGraph, rows: int, cols: int) -> PatternMatrix:
    """Inverse of :func:`graph_of` for a known matrix shape."""
    grid = np.zeros((rows, cols), dtype=np.int8)
    for sym, edges in ((Symbol.STAR, g.star_edges), (Symbol.UNKNOWN, g.unknown_edges)):
        for j, i in edges:
            if i >= rows or j >= cols:
                raise PatternError(f"edge ({j}, {i}) does not fit a {rows}x{cols} pattern")
            grid[i, j] = int(sym)
    return PatternMatrix(grid)


def adjacency_and_incidence(n_nodes: int, edges: Iterable[tuple[int, int]]) -> tuple[np.ndarray, np.ndarray]:
    """Adjacency and incidence matrices of a directed graph.

    ``edges`` are 0-based ``(tail, head)`` pairs in declaration order.
    ``A_adj[i, j] = 1`` iff there is an edge from node ``j`` to node ``i``;
    ``A_inc[i, e]`` is -1 at the tail of edge ``e`` and +1 at its head.
    """
    if n_nodes < 1:
        raise ValueError("network must have at least one node")
    edges = list(edges)
    A_adj = np.zeros((n_nodes, n_nodes))
    A_inc = np.zeros((n_nodes, len(edges)))
    for e, (tail, head) in enumerate(edges):
        if not (0 <= tail < n_nodes and 0 <= head < n_nodes):
            raise ValueError(f"edge {e + 1} references a node outside 1..{n_nodes}")
        if tail == head:
            raise ValueError(f"edge {e + 1} is a self-loop; incidence is undefined")
        A_adj[head, tail] = 1.0
        A_inc[tail, e] = -1.0
        A_inc[head, e] = 1.0
    return A_adj, A_inc


def degree_costs(
    A: PatternMatrix, count_unknown: bool = True, unknown_weight: float = 1.0
) -> tuple[np.ndarray, np.ndarray]:
    """Row and column non-zero counts of a square pattern, as ``(c_in, c_out)``.

    ``c_in = A 1`` (row counts) and ``c_out = A^T 1`` (column counts).  A
    ``?`` entry contributes ``unknown_weight`` when ``count_unknown`` is set,
    nothing otherwise.
    """
    if A.rows != A.cols:
        raise PatternError(f"degree costs need a square pattern, got {A.shape}")
    w = unknown_weight if count_unknown else 0.0
    W = A.mask(Symbol.STAR).astype(float) + w * A.mask(Symbol.UNKNOWN)
    return W.sum(axis=1), W.sum(axis=0)
