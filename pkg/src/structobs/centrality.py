"""PageRank centrality and the inverse-centrality sensor price."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .patterns import PatternMatrix, Symbol


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class PageRankConfig:
    alpha: float = 0.85
    max_iters: int = 10_000
    residual_tol: float = 1e-12

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.residual_tol <= 0:
            raise ValueError("residual_tol must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")


def transition_matrix(A_adj: np.ndarray) -> np.ndarray:
    """Column-stochastic transition matrix of ``A_adj`` (``A_adj[i, j]`` = edge j -> i).

    Column ``j`` is divided by the out-degree of node ``j``; a node without
    out-edges spreads its mass uniformly.
    """
    A = np.asarray(A_adj, dtype=float)
    n = A.shape[0]
    outdeg = A.sum(axis=0)
    P = np.empty_like(A)
    dangling = outdeg == 0
    P[:, ~dangling] = A[:, ~dangling] / outdeg[~dangling]
    P[:, dangling] = 1.0 / n
    return P


def pagerank(A_adj: np.ndarray, cfg: PageRankConfig = PageRankConfig()) -> np.ndarray:
    """Power iteration for ``PR = alpha P PR + (1 - alpha)/n``, normalized to sum 1.

    Stops once successive iterates differ by less than ``cfg.residual_tol`` in
    max-norm; raises :class:`ConvergenceError` after ``cfg.max_iters`` sweeps.
    """
    A = np.asarray(A_adj, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"adjacency must be square, got {A.shape}")
    if not np.all((A == 0) | (A == 1)):
        raise ValueError("adjacency entries must be 0 or 1")
    n = A.shape[0]
    P = transition_matrix(A)
    teleport = (1.0 - cfg.alpha) / n
    pr = np.full(n, 1.0 / n)
    for _ in range(cfg.max_iters):
        nxt = cfg.alpha * (P @ pr) + teleport
        nxt /= nxt.sum()
        if np.max(np.abs(nxt - pr)) < cfg.residual_tol:
            return nxt
        pr = nxt
    raise ConvergenceError(f"PageRank did not converge within {cfg.max_iters} iterations")


def pagerank_cost(pr: np.ndarray) -> np.ndarray:
    """Elementwise reciprocal: central nodes are cheap sensor locations."""
    pr = np.asarray(pr, dtype=float)
    if np.any(pr <= 0):
        raise ValueError("PageRank entries must be strictly positive")
    return 1.0 / pr


def state_graph(A: PatternMatrix, symmetric: bool = False) -> np.ndarray:
    """0/1 adjacency of the state graph of ``M = [A^T ...]`` restricted to ``*`` entries.

    Node ``j`` links to ``i`` when ``A[j, i] = *`` (self-loops kept).  With
    ``symmetric`` every link is made bidirectional.
    """
    adj = A.T.mask(Symbol.STAR).astype(float)
    if symmetric:
        adj = np.maximum(adj, adj.T)
    return adj
