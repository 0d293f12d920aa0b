"""Sensor costs and the cost-grouped search for a minimal observable placement."""
from __future__ import annotations

import csv
import io
import itertools
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .centrality import PageRankConfig, pagerank, pagerank_cost, state_graph
from .colorability import check_observability, output_pattern
from .patterns import PatternError, PatternMatrix, degree_costs

COMPONENTS = ("c_out", "c_in", "c_pr", "c_ind")
# Low damping: at 0.85 the star's cycle node undercuts the leaves in aggregate cost.
DEFAULT_PAGERANK = PageRankConfig(alpha=0.5)
# Half weight for '?' entries reproduces the published degree columns of the WDN example.
DEFAULT_UNKNOWN_WEIGHT = 0.5
BRUTE_FORCE_LIMIT = 20


def normalize(c) -> np.ndarray:
    """Min-max scale to ``[0, 1]``; a constant vector maps to all zeros."""
    c = np.asarray(c, dtype=float)
    if c.size == 0:
        raise ValueError("cannot normalize an empty cost vector")
    lo, hi = c.min(), c.max()
    if hi == lo:
        return np.zeros_like(c)
    return (c - lo) / (hi - lo)


@dataclass(frozen=True)
class CostTable:
    """Raw per-state cost components and their aggregate.

    ``c_n`` is the weighted sum of the normalized components unless an
    aggregate was supplied directly (``c_n_supplied``), in which case that
    value wins.
    """

    c_out: np.ndarray
    c_in: np.ndarray
    c_pr: np.ndarray
    c_ind: np.ndarray
    weights: tuple[float, float, float, float] = (0.25, 0.25, 0.25, 0.25)
    c_n_supplied: np.ndarray | None = None
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        lengths = set()
        for name in COMPONENTS:
            arr = np.array(getattr(self, name), dtype=float, copy=True).reshape(-1)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
            lengths.add(arr.size)
        if self.c_n_supplied is not None:
            arr = np.array(self.c_n_supplied, dtype=float, copy=True).reshape(-1)
            arr.setflags(write=False)
            object.__setattr__(self, "c_n_supplied", arr)
            lengths.add(arr.size)
        if len(lengths) != 1:
            raise ValueError(f"cost vectors have inconsistent lengths {sorted(lengths)}")
        if len(self.weights) != 4:
            raise ValueError("need exactly four aggregation weights")

    @property
    def n(self) -> int:
        return self.c_out.size

    def normalized(self, name: str) -> np.ndarray:
        return normalize(getattr(self, name))

    @property
    def c_n(self) -> np.ndarray:
        if self.c_n_supplied is not None:
            return self.c_n_supplied
        return sum(w * self.normalized(name) for w, name in zip(self.weights, COMPONENTS))

    def to_csv(self, one_based: bool = True) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["state", *COMPONENTS, "c_n"])
        cn = self.c_n
        for s in range(self.n):
            w.writerow([s + int(one_based)] + [f"{getattr(self, k)[s]:.10g}" for k in COMPONENTS] + [f"{cn[s]:.10g}"])
        return buf.getvalue()


def compute_costs(
    A: PatternMatrix,
    c_ind=None,
    pagerank_cfg: PageRankConfig = DEFAULT_PAGERANK,
    unknown_weight: float = DEFAULT_UNKNOWN_WEIGHT,
    weights=(0.25, 0.25, 0.25, 0.25),
    symmetric_graph: bool = False,
) -> CostTable:
    """Cost table from structure alone: degree counts and inverse PageRank.

    ``c_ind`` (industrial cost) defaults to zeros, i.e. it plays no role.
    """
    c_in, c_out = degree_costs(A, count_unknown=unknown_weight > 0, unknown_weight=unknown_weight)
    pr = pagerank(state_graph(A, symmetric=symmetric_graph), pagerank_cfg)
    supplied = c_ind is not None
    c_ind = np.zeros(A.rows) if c_ind is None else np.asarray(c_ind, dtype=float)
    prov = {"c_out": "computed", "c_in": "computed", "c_pr": "computed", "c_ind": "supplied" if supplied else "default"}
    return CostTable(c_out, c_in, pagerank_cost(pr), c_ind, tuple(weights), None, prov)


def read_costs_csv(source) -> CostTable:
    """Parse ``state,c_out,c_in,c_pr,c_ind[,c_n]`` (1-based states, any row order)."""
    if isinstance(source, (str, Path)):
        with open(source, newline="") as fh:
            return read_costs_csv(fh)
    reader = csv.DictReader(source)
    fields = [f.strip() for f in (reader.fieldnames or [])]
    required = ["state", *COMPONENTS]
    missing = [f for f in required if f not in fields]
    if missing:
        raise ValueError(f"cost CSV is missing columns {missing}")
    rows = {}
    for lineno, rec in enumerate(reader, start=2):
        rec = {k.strip(): (v or "").strip() for k, v in rec.items() if k is not None}
        try:
            state = int(rec["state"])
            vals = {k: float(rec[k]) for k in required[1:]}
            if "c_n" in fields:
                vals["c_n"] = float(rec["c_n"])
        except ValueError as exc:
            raise ValueError(f"cost CSV line {lineno}: {exc}") from None
        if state in rows:
            raise ValueError(f"cost CSV line {lineno}: duplicate state {state}")
        rows[state] = vals
    states = sorted(rows)
    if states != list(range(1, len(states) + 1)):
        raise ValueError(f"cost CSV states must be exactly 1..{len(states)}")
    col = lambda k: np.array([rows[s][k] for s in states])  # noqa: E731
    prov = {k: "supplied" for k in COMPONENTS}
    c_n = col("c_n") if "c_n" in fields else None
    if c_n is not None:
        prov["c_n"] = "supplied"
    return CostTable(col("c_out"), col("c_in"), col("c_pr"), col("c_ind"), c_n_supplied=c_n, provenance=prov)


def group_by_cost(c_n, eps: float = 1e-9) -> list[list[int]]:
    """Partition states into cost groups, cheapest group first.

    States are sorted by cost; a new group starts whenever a cost exceeds
    the first cost of the current group by more than ``eps``.
    """
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    c_n = np.asarray(c_n, dtype=float)
    order = np.argsort(c_n, kind="stable")
    groups: list[list[int]] = []
    anchor = None
    for s in order.tolist():
        if anchor is None or c_n[s] - anchor > eps:
            groups.append([])
            anchor = c_n[s]
        groups[-1].append(s)
    return [sorted(g) for g in groups]


@dataclass(frozen=True)
class PlacementResult:
    """Outcome of :func:`place_sensors`; sensor sets are 0-based state indices."""

    n_states: int
    accepted: tuple[tuple[int, ...], ...]
    groups: tuple[tuple[int, ...], ...]
    group_index: int
    k: int
    combinations_evaluated: int
    rejected_count: int
    fallback: bool = False
    wall_time: float = 0.0

    @property
    def patterns(self) -> list[PatternMatrix]:
        return [output_pattern(self.n_states, s) for s in self.accepted]

    def to_dict(self, one_based: bool = True) -> dict:
        off = int(one_based)
        return {
            "accepted": [[s + off for s in sens] for sens in self.accepted],
            "groups": [[s + off for s in g] for g in self.groups],
            "terminating_group": self.group_index,
            "k": self.k,
            "combinations_evaluated": self.combinations_evaluated,
            "rejected_count": self.rejected_count,
            "fallback": self.fallback,
        }


def place_sensors(
    A: PatternMatrix,
    costs: CostTable | np.ndarray,
    eps: float = 1e-9,
    rule: str = "queue",
    memo: bool = False,
) -> PlacementResult:
    """Search cost groups in ascending order for the smallest observable sensor set.

    For group ``n`` the candidate pool is the union of groups ``1..n``; for
    each size ``k`` the ``k``-subsets of the pool that touch group ``n`` are
    tested in lexicographic order.  The first ``(n, k)`` that yields any
    observable subset ends the search, and all observable subsets of that
    round are returned.  If nothing passes, every state gets a sensor.
    """
    if A.rows != A.cols:
        raise PatternError(f"A must be square, got {A.shape}")
    c_n = costs.c_n if isinstance(costs, CostTable) else np.asarray(costs, dtype=float)
    nx = A.rows
    if c_n.size != nx:
        raise ValueError(f"cost vector has {c_n.size} entries but A has {nx} states")
    t0 = time.perf_counter()
    groups = group_by_cost(c_n, eps)
    seen: set[tuple[int, ...]] = set()
    evaluated = rejected = 0
    pool: list[int] = []
    for n, group in enumerate(groups, start=1):
        pool = sorted(pool + group)
        current = set(group)
        for k in range(1, len(pool) + 1):
            accepted = []
            for combo in itertools.combinations(pool, k):
                if current.isdisjoint(combo):
                    continue
                if memo:
                    if combo in seen:
                        continue
                    seen.add(combo)
                evaluated += 1
                if check_observability(A, output_pattern(nx, combo), rule=rule).observable:
                    accepted.append(combo)
                else:
                    rejected += 1
            if accepted:
                return PlacementResult(
                    nx, tuple(accepted), tuple(map(tuple, groups)), n, k, evaluated, rejected,
                    wall_time=time.perf_counter() - t0,
                )
    everything = tuple(range(nx))
    return PlacementResult(
        nx, (everything,), tuple(map(tuple, groups)), len(groups), nx, evaluated, rejected,
        fallback=True, wall_time=time.perf_counter() - t0,
    )


def brute_force_minimum(
    A: PatternMatrix, limit: int = BRUTE_FORCE_LIMIT, rule: str = "queue"
) -> tuple[int, list[tuple[int, ...]]]:
    """Smallest observable sensor count and every observable set of that size."""
    nx = A.rows
    if nx > limit:
        raise ValueError(f"brute force limited to {limit} states, pattern has {nx}")
    for k in range(nx + 1):
        sets = [
            combo
            for combo in itertools.combinations(range(nx), k)
            if check_observability(A, output_pattern(nx, combo), rule=rule).observable
        ]
        if sets:
            return k, sets
    return nx + 1, []
