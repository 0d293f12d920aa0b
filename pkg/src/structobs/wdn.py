"""Elastic water column (EWC) network model, its linearization and structure.

States are ordered flows first (one per pipe, ``m`` of them) and heads second
(one per node, ``n`` of them).  Parameters follow the usual hydraulic symbols:

====== ===================================== =========
symbol meaning                               shape
====== ===================================== =========
L      hydraulic inductance (diagonal)       m
R      hydraulic resistance (diagonal)       m
D      valve / pressure discharge (diagonal) n
Cl     link capacitance                      m
Cn     node capacitance                      n
Q      outflow and demand                    n
====== ===================================== =========

Diagonal matrices are stored as their diagonals.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .patterns import PatternError, PatternMatrix, Symbol, adjacency_and_incidence

NODE_KINDS = ("junction", "tank", "reservoir")
PARAM_NAMES = ("L", "R", "D", "Cl", "Cn", "Q")


@dataclass(frozen=True)
class Node:
    id: str
    kind: str = "junction"

    def __post_init__(self):
        if self.kind not in NODE_KINDS:
            raise ValueError(f"node {self.id!r}: kind must be one of {NODE_KINDS}, got {self.kind!r}")


@dataclass(frozen=True)
class Pipe:
    id: str
    tail: str
    head: str


@dataclass(frozen=True)
class HydraulicParams:
    L: np.ndarray
    R: np.ndarray
    D: np.ndarray
    Cl: np.ndarray
    Cn: np.ndarray
    Q: np.ndarray

    def __post_init__(self):
        for name in PARAM_NAMES:
            arr = np.array(getattr(self, name), dtype=float, copy=True).reshape(-1)
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"parameter {name} has non-finite entries")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        for name in ("L", "R", "Cl", "Cn"):
            if np.any(getattr(self, name) <= 0):
                raise ValueError(f"parameter {name} must be strictly positive")
        if len(self.L) != len(self.R) or len(self.L) != len(self.Cl):
            raise ValueError("L, R and Cl must all have one entry per pipe")
        if len(self.D) != len(self.Cn) or len(self.D) != len(self.Q):
            raise ValueError("D, Cn and Q must all have one entry per node")

    def scaled(self, **factors: float) -> "HydraulicParams":
        return HydraulicParams(**{k: getattr(self, k) * factors.get(k, 1.0) for k in PARAM_NAMES})

    def to_dict(self) -> dict:
        return {k: getattr(self, k).tolist() for k in PARAM_NAMES}


@dataclass(frozen=True)
class NetworkModel:
    nodes: tuple[Node, ...]
    edges: tuple[Pipe, ...]
    params: HydraulicParams | None = None
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple(self.edges))
        if not self.nodes:
            raise ValueError("network has no nodes")
        index = {nd.id: k for k, nd in enumerate(self.nodes)}
        if len(index) != len(self.nodes):
            raise ValueError("duplicate node ids")
        for e in self.edges:
            for end in (e.tail, e.head):
                if end not in index:
                    raise ValueError(f"pipe {e.id!r} references unknown node {end!r}")
        object.__setattr__(self, "_index", index)
        if self.params is not None:
            if len(self.params.L) != self.m or len(self.params.D) != self.n:
                raise ValueError(
                    f"parameter sizes do not match network: expected {self.m} pipes and {self.n} nodes"
                )

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def n_states(self) -> int:
        return self.m + self.n

    @property
    def edge_pairs(self) -> list[tuple[int, int]]:
        return [(self._index[e.tail], self._index[e.head]) for e in self.edges]

    def adjacency_and_incidence(self) -> tuple[np.ndarray, np.ndarray]:
        return adjacency_and_incidence(self.n, self.edge_pairs)

    @property
    def incidence(self) -> np.ndarray:
        return self.adjacency_and_incidence()[1]

    def state_labels(self) -> list[str]:
        return [f"q[{e.id}]" for e in self.edges] + [f"h[{nd.id}]" for nd in self.nodes]

    def with_params(self, params: HydraulicParams | None) -> "NetworkModel":
        return NetworkModel(self.nodes, self.edges, params)

    # serialization ----------------------------------------------------
    @classmethod
    def from_dict(cls, doc: dict) -> "NetworkModel":
        try:
            nodes = [Node(str(nd["id"]), nd.get("kind", "junction")) for nd in doc["nodes"]]
            edges = [Pipe(str(e["id"]), str(e["tail"]), str(e["head"])) for e in doc.get("edges", [])]
        except KeyError as exc:
            raise ValueError(f"network document is missing field {exc}") from None
        params = None
        if doc.get("params"):
            missing = [k for k in PARAM_NAMES if k not in doc["params"]]
            if missing:
                raise ValueError(f"params block is missing {missing}")
            params = HydraulicParams(**{k: doc["params"][k] for k in PARAM_NAMES})
        return cls(nodes, edges, params)

    @classmethod
    def from_json(cls, path: str | Path) -> "NetworkModel":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        doc = {
            "nodes": [{"id": nd.id, "kind": nd.kind} for nd in self.nodes],
            "edges": [{"id": e.id, "tail": e.tail, "head": e.head} for e in self.edges],
        }
        if self.params is not None:
            doc["params"] = self.params.to_dict()
        return doc


@dataclass(frozen=True)
class OperatingPoint:
    q: np.ndarray
    h: np.ndarray

    def __post_init__(self):
        for name in ("q", "h"):
            arr = np.array(getattr(self, name), dtype=float, copy=True).reshape(-1)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def x(self) -> np.ndarray:
        return np.concatenate([self.q, self.h])

    @classmethod
    def from_state(cls, x: np.ndarray, m: int) -> "OperatingPoint":
        x = np.asarray(x, dtype=float)
        return cls(x[:m], x[m:])

    def satisfies_assumption(self) -> bool:
        """Positive flow in every pipe and positive head at every node."""
        return bool(np.all(self.q > 0) and np.all(self.h > 0))


def _require_params(net: NetworkModel) -> HydraulicParams:
    if net.params is None:
        raise ValueError("network has no hydraulic parameters")
    return net.params


def node_capacitance(net: NetworkModel) -> np.ndarray:
    """Diagonal of ``F = diag(|A_inc| Cl / 2 + Cn)``."""
    p = _require_params(net)
    return 0.5 * np.abs(net.incidence) @ p.Cl + p.Cn


def ewc_rhs(net: NetworkModel, x: np.ndarray) -> np.ndarray:
    """Right-hand side ``f(x)`` of the EWC dynamics for ``x = (q, h)``."""
    p = _require_params(net)
    x = np.asarray(x, dtype=float)
    if x.shape != (net.n_states,):
        raise ValueError(f"state must have length {net.n_states}, got {x.shape}")
    q, h = x[: net.m], x[net.m:]
    if np.any(h <= 0):
        raise ValueError("heads must be strictly positive (square root of head)")
    A_inc = net.incidence
    F = node_capacitance(net)
    dq = (-p.R * np.abs(q) * q + A_inc.T @ h) / p.L
    dh = (A_inc @ q - p.Q - p.D * np.sqrt(h)) / F
    return np.concatenate([dq, dh])


def linearize(net: NetworkModel, xo: OperatingPoint) -> np.ndarray:
    """Analytic Jacobian ``A(x_o)`` of :func:`ewc_rhs`."""
    p = _require_params(net)
    if xo.q.shape != (net.m,) or xo.h.shape != (net.n,):
        raise ValueError("operating point does not match network dimensions")
    if np.any(xo.q == 0) or np.any(xo.h <= 0):
        raise ValueError("linearization needs nonzero flows and positive heads")
    A_inc = net.incidence
    F = node_capacitance(net)
    top_left = -np.diag(p.R / p.L * 2.0 * xo.q**2 / np.abs(xo.q))
    top_right = A_inc.T / p.L[:, None]
    bottom_left = A_inc / F[:, None]
    bottom_right = -np.diag(p.D / F / (2.0 * np.sqrt(xo.h)))
    return np.block([[top_left, top_right], [bottom_left, bottom_right]])


def derive_wdn_pattern(net: NetworkModel) -> PatternMatrix:
    """``[[diag(*), A_inc^T], [A_inc, diag(?)]]`` with ``*`` wherever the incidence is nonzero."""
    if net.n == 0:
        raise ValueError("empty network")
    inc = PatternMatrix.from_real(net.incidence)
    if net.m == 0:
        inc = PatternMatrix.zeros(net.n, 0)
    return PatternMatrix.block(
        [
            [PatternMatrix.diag(net.m, Symbol.STAR), inc.T],
            [inc, PatternMatrix.diag(net.n, Symbol.UNKNOWN)],
        ]
    )


def validate_output_matrix(C: np.ndarray) -> np.ndarray:
    """Check the admissible sensor shape: 0/1 entries, one 1 per row, each state sensed at most once."""
    C = np.asarray(C, dtype=float)
    if C.ndim != 2:
        raise ValueError("output matrix must be 2-D")
    if not np.all((C == 0) | (C == 1)):
        raise ValueError("output matrix entries must be 0 or 1")
    bad_rows = np.flatnonzero(C.sum(axis=1) != 1)
    if bad_rows.size:
        raise ValueError(f"row {bad_rows[0] + 1} of the output matrix must contain exactly one 1")
    dup = np.flatnonzero(C.sum(axis=0) > 1)
    if dup.size:
        raise ValueError(f"state {dup[0] + 1} is measured by more than one sensor")
    return C


def derive_output_pattern(C: np.ndarray) -> PatternMatrix:
    C = np.asarray(C, dtype=float)
    if C.size == 0:
        return PatternMatrix.zeros(0, C.shape[1] if C.ndim == 2 else 0)
    return PatternMatrix.from_real(validate_output_matrix(C))


def output_matrix(n_states: int, sensors) -> np.ndarray:
    """0/1 selection matrix with one row per (0-based) sensed state."""
    C = np.zeros((len(sensors), n_states))
    for r, s in enumerate(sensors):
        C[r, s] = 1.0
    return validate_output_matrix(C)


def mass_spring_pattern(inc: np.ndarray) -> PatternMatrix:
    """Pattern of the mass-spring-damper state matrix ``[[0, I], [-M^-1 K, -M^-1 D]]``.

    ``inc`` is the mass-by-spring incidence (a spring to a fixed wall has a
    single nonzero in its column).  With lumped masses, ``K = A_inc K_c A_inc^T``
    couples a mass to itself and to every mass sharing a spring with it.
    """
    inc = np.atleast_2d(np.asarray(inc, dtype=float))
    n = inc.shape[0]
    touch = (inc != 0).astype(int)
    stiff = (touch @ touch.T) > 0
    return PatternMatrix.block(
        [
            [PatternMatrix.zeros(n, n), PatternMatrix.diag(n, Symbol.STAR)],
            [PatternMatrix(stiff.astype(np.int8)), PatternMatrix.diag(n, Symbol.UNKNOWN)],
        ]
    )


def rlc_pattern() -> PatternMatrix:
    return PatternMatrix.from_rows(["0*", "**"])


def rlc_matrix(R_L: float, R_C: float, L: float, C: float) -> np.ndarray:
    """State matrix of the series RLC circuit with state ``(V_C, I_L)``."""
    return np.array([[0.0, -1.0 / C], [1.0 / L, -(R_L + R_C) / L]])


def equilibrium_params(net: NetworkModel, op: OperatingPoint, D, L, Cl, Cn) -> HydraulicParams:
    """Parameters making ``op`` an equilibrium: solve for ``R`` and ``Q``.

    Needs a positive head gain ``(A_inc^T h)_e > 0`` along every pipe so
    that the resulting resistances are positive.
    """
    A_inc = net.incidence
    gain = A_inc.T @ op.h
    if np.any(gain <= 0):
        raise ValueError("every pipe needs h[head] > h[tail] for a positive-resistance equilibrium")
    R = gain / (np.abs(op.q) * op.q)
    Q = A_inc @ op.q - np.asarray(D) * np.sqrt(op.h)
    return HydraulicParams(L=L, R=R, D=D, Cl=Cl, Cn=Cn, Q=Q)


def random_params(net: NetworkModel, rng: np.random.Generator, low: float = 0.5, high: float = 2.0) -> HydraulicParams:
    """Positive parameter draw; ``D`` is uniform on ``[0, high)`` and ``Q`` signed."""
    m, n = net.m, net.n
    return HydraulicParams(
        L=rng.uniform(low, high, m),
        R=rng.uniform(low, high, m),
        D=rng.uniform(0.0, high, n),
        Cl=rng.uniform(low, high, m),
        Cn=rng.uniform(low, high, n),
        Q=rng.uniform(-high, high, n),
    )


def rk4(net: NetworkModel, x0: np.ndarray, t_end: float, dt: float = 1e-3) -> tuple[np.ndarray, np.ndarray]:
    """Fixed-step RK4 integration of the EWC model; returns ``(t, X)`` with one row per step."""
    steps = int(round(t_end / dt))
    t = np.arange(steps + 1) * dt
    X = np.empty((steps + 1, net.n_states))
    X[0] = x = np.asarray(x0, dtype=float)
    f = lambda z: ewc_rhs(net, z)  # noqa: E731
    for k in range(steps):
        k1 = f(x)
        k2 = f(x + 0.5 * dt * k1)
        k3 = f(x + 0.5 * dt * k2)
        k4 = f(x + dt * k3)
        x = x + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        X[k + 1] = x
    return t, X
