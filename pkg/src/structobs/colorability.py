"""Color-change rule and the two-graph strong structural observability test.

The graph of ``M = [A^T  C^T]`` has one node per column: state nodes
``0..n_x-1`` followed by sensor nodes.  Column ``j`` of ``M`` lists the
out-neighbours of node ``j``.  Every node starts white; node ``j`` forces
its out-neighbour ``i`` black when ``i`` is its only white out-neighbour and
the edge ``(j, i)`` is a ``*`` edge.  White ``?`` out-neighbours block a
force (the entry may be nonzero) but never force themselves.

Two propagation schedules are provided:

``"queue"``
    The work-list schedule of the published colorability procedure: nodes
    with a single outgoing edge seed a FIFO queue, each popped node is tested
    once, and a node re-enters the queue only after it has itself been
    forced.  This is the default; it is sound but may stop before the
    closure does.
``"closure"``
    The full zero-forcing closure: rescan until no node can force.  Its final
    black set does not depend on the order of forcing.
"""
from __future__ import annotations

import json
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .patterns import PatternError, PatternMatrix, Symbol

RULES = ("queue", "closure")


@dataclass(frozen=True)
class ForcingEvent:
    forcer: int
    forced: int
    round: int


@dataclass(frozen=True)
class ColoringState:
    """Final colors (``True`` = black) and the ordered forcing trace."""

    black: tuple[bool, ...]
    trace: tuple[ForcingEvent, ...]
    n_states: int

    @property
    def colorable(self) -> bool:
        return all(self.black[: self.n_states])

    @property
    def black_set(self) -> frozenset[int]:
        return frozenset(i for i, b in enumerate(self.black) if b)

    def to_jsonl(self, one_based: bool = True) -> str:
        off = 1 if one_based else 0
        return "".join(
            json.dumps({"forcer": ev.forcer + off, "forced": ev.forced + off, "round": ev.round}) + "\n"
            for ev in self.trace
        )


@dataclass(frozen=True)
class ObservabilityVerdict:
    state_M: ColoringState
    state_Mbar: ColoringState

    @property
    def colorable_M(self) -> bool:
        return self.state_M.colorable

    @property
    def colorable_Mbar(self) -> bool:
        return self.state_Mbar.colorable

    @property
    def observable(self) -> bool:
        return self.colorable_M and self.colorable_Mbar

    def __bool__(self) -> bool:
        return self.observable


def build_abar(A: PatternMatrix) -> PatternMatrix:
    """Copy of ``A`` whose diagonal is ``*`` where ``A`` had ``0`` and ``?`` elsewhere."""
    if A.rows != A.cols:
        raise PatternError(f"A must be square, got {A.shape}")
    out = A.data.copy()
    d = np.diag(out)
    np.fill_diagonal(out, np.where(d == Symbol.ZERO, Symbol.STAR, Symbol.UNKNOWN))
    return PatternMatrix(out)


def combine_m(A: PatternMatrix, C: PatternMatrix) -> PatternMatrix:
    """``[A^T  C^T]``, of size ``n_x x (n_x + n_y)``."""
    if A.rows != A.cols:
        raise PatternError(f"A must be square, got {A.shape}")
    if C.cols != A.rows:
        raise PatternError(f"C has {C.cols} columns but A is {A.rows}x{A.cols}")
    return A.T.hstack(C.T)


def output_pattern(n_states: int, sensors: Iterable[int]) -> PatternMatrix:
    """Sensor pattern with one ``*`` per row, at the (0-based) sensed state."""
    sensors = list(sensors)
    if len(set(sensors)) != len(sensors):
        raise ValueError(f"duplicate sensor locations in {sensors}")
    C = np.zeros((len(sensors), n_states), dtype=np.int8)
    for r, s in enumerate(sensors):
        if not 0 <= s < n_states:
            raise ValueError(f"sensor location {s} outside 0..{n_states - 1}")
        C[r, s] = Symbol.STAR
    return PatternMatrix(C)


def _edge_lists(M: PatternMatrix, drop_unknown: bool):
    star = M.mask(Symbol.STAR)
    block = star if drop_unknown else (M.data != Symbol.ZERO)
    return star, block


def _color_closure(M, drop_unknown, rng):
    nx, nt = M.shape
    star, block = _edge_lists(M, drop_unknown)
    black = np.zeros(nt, dtype=bool)
    trace = []
    while True:
        eligible = []
        for j in range(nt):
            white = np.flatnonzero(block[:, j] & ~black[:nx])
            if len(white) == 1 and star[white[0], j]:
                eligible.append((j, int(white[0])))
                if rng is None:
                    break
        if not eligible:
            break
        j, i = eligible[0] if rng is None else eligible[rng.integers(len(eligible))]
        black[i] = True
        trace.append(ForcingEvent(j, i, len(trace) + 1))
    return black, trace


def _color_queue(M, drop_unknown):
    nx, nt = M.shape
    star, block = _edge_lists(M, drop_unknown)
    alive = block.copy()  # alive[i, j]: edge j -> i still present
    black = np.zeros(nt, dtype=bool)
    trace = []
    queue = deque(j for j in range(nt) if alive[:, j].sum() == 1)
    while queue:
        j = queue.popleft()
        outs = np.flatnonzero(alive[:, j])
        if len(outs) != 1 or not star[outs[0], j]:
            continue
        i = int(outs[0])
        queue.append(i)
        if not black[i]:
            black[i] = True
            alive[i, :] = False  # incoming edges of a black node no longer count
            trace.append(ForcingEvent(j, i, len(trace) + 1))
    return black, trace


def color(
    M: PatternMatrix,
    rule: str = "queue",
    drop_unknown: bool = False,
    rng: np.random.Generator | None = None,
) -> ColoringState:
    """Run the color-change rule on ``G(M)``; ``M`` has one row per state.

    ``rng`` (closure rule only) picks a random eligible forcer at every step
    instead of the lowest-indexed one.  ``drop_unknown`` deletes ``?`` edges
    before coloring instead of letting them block.
    """
    if rule == "closure":
        black, trace = _color_closure(M, drop_unknown, rng)
    elif rule == "queue":
        if rng is not None:
            raise ValueError("the queue schedule is deterministic; rng applies to rule='closure'")
        black, trace = _color_queue(M, drop_unknown)
    else:
        raise ValueError(f"unknown rule {rule!r}; expected one of {RULES}")
    return ColoringState(tuple(bool(b) for b in black), tuple(trace), M.rows)


def is_colorable(M: PatternMatrix, **kw) -> bool:
    return color(M, **kw).colorable


def check_observability(A: PatternMatrix, C: PatternMatrix, **kw) -> ObservabilityVerdict:
    """Strong structural observability of ``(A, C)``: both ``G(M)`` and ``G(M_bar)`` colorable.

    Keyword arguments are passed to :func:`color`.
    """
    return ObservabilityVerdict(color(combine_m(A, C), **kw), color(combine_m(build_abar(A), C), **kw))


def check_many(
    pairs: Sequence[tuple[PatternMatrix, PatternMatrix]], workers: int | None = None, **kw
) -> list[ObservabilityVerdict]:
    """Evaluate many ``(A, C)`` pairs; results come back in input order."""
    if not workers or workers <= 1:
        return [check_observability(A, C, **kw) for A, C in pairs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda ac: check_observability(ac[0], ac[1], **kw), pairs))
