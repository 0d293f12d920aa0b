"""Numerical oracles: realizations of pattern classes and the Kalman rank test.

Sampling can only ever confirm a positive structural verdict.  A negative
verdict is reported with however many unobservable realizations turned up,
which may be none: unobservable realizations usually form a measure-zero
set.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .colorability import check_observability
from .patterns import PatternMatrix, Symbol


@dataclass(frozen=True)
class RealizationSampler:
    seed: int = 0
    star_low: float = 0.1
    star_high: float = 10.0
    unknown_zero_prob: float = 0.3

    def __post_init__(self):
        if not 0 < self.star_low <= self.star_high:
            raise ValueError("star magnitudes need 0 < star_low <= star_high")
        if not 0.0 <= self.unknown_zero_prob <= 1.0:
            raise ValueError("unknown_zero_prob must be a probability")

    def rng(self, offset: int = 0) -> np.random.Generator:
        return np.random.default_rng([self.seed, offset])


def sample_realization(P: PatternMatrix, s: RealizationSampler, rng: np.random.Generator | None = None) -> np.ndarray:
    """Random member of the realization class of ``P``.

    ``*`` entries get magnitude uniform in ``[star_low, star_high]`` with a
    random sign; ``?`` entries are exactly zero with probability
    ``unknown_zero_prob`` and otherwise drawn like ``*`` entries.
    """
    rng = s.rng() if rng is None else rng
    X = np.zeros(P.shape)

    def draw(k):
        return rng.uniform(s.star_low, s.star_high, k) * rng.choice((-1.0, 1.0), k)

    star = P.mask(Symbol.STAR)
    X[star] = draw(int(star.sum()))
    unk = P.mask(Symbol.UNKNOWN)
    vals = draw(int(unk.sum()))
    vals[rng.random(vals.size) < s.unknown_zero_prob] = 0.0
    X[unk] = vals
    return X


def observability_matrix(A: np.ndarray, C: np.ndarray) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    C = np.atleast_2d(np.asarray(C, dtype=float))
    n = A.shape[0]
    blocks = [C]
    for _ in range(n - 1):
        blocks.append(blocks[-1] @ A)
    return np.vstack(blocks)


def kalman_rank_observable(A: np.ndarray, C: np.ndarray, tol: float = 1e-8) -> bool:
    """Full column rank of ``[C; CA; ...; CA^(n-1)]``, singular values cut at ``tol * sigma_max``."""
    A = np.asarray(A, dtype=float)
    C = np.asarray(C, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError(f"A must be square, got {A.shape}")
    if C.size == 0:
        return n == 0
    C = np.atleast_2d(C)
    if C.shape[1] != n:
        raise ValueError(f"C has {C.shape[1]} columns, A is {n}x{n}")
    # (cA, C) is observable iff (A, C) is; unit spectral norm keeps powers bounded.
    scale = np.linalg.norm(A, 2)
    O = observability_matrix(A / scale if scale > 0 else A, C)
    # Power growth makes raw Krylov rows badly scaled; equilibrate rows first.
    norms = np.linalg.norm(O, axis=1)
    O = O[norms > 0] / norms[norms > 0, None]
    if O.shape[0] < n:
        return False
    sv = np.linalg.svd(O, compute_uv=False)
    return int(np.sum(sv > tol * sv[0])) == n


def pbh_observable(A: np.ndarray, C: np.ndarray, tol: float = 1e-8) -> bool:
    """Eigenvalue test: ``[A - lambda I; C]`` has full column rank for every eigenvalue."""
    A = np.asarray(A, dtype=float)
    C = np.atleast_2d(np.asarray(C, dtype=float))
    n = A.shape[0]
    for lam in np.linalg.eigvals(A):
        stacked = np.vstack([A - lam * np.eye(n), C]) if C.size else A - lam * np.eye(n)
        sv = np.linalg.svd(stacked, compute_uv=False)
        if sv[-1] <= tol * max(sv[0], 1.0):
            return False
    return True


def cross_validate(
    A: PatternMatrix,
    C: PatternMatrix,
    trials: int = 100,
    s: RealizationSampler = RealizationSampler(),
    rule: str = "queue",
    tol: float = 1e-8,
) -> dict:
    """Compare the structural verdict on ``(A, C)`` with rank tests on sampled realizations.

    Trial ``t`` draws from the generator seeded by ``(s.seed, t)``, so a
    reported failing seed reproduces on its own.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    structural = check_observability(A, C, rule=rule).observable
    failures = []
    for t in range(trials):
        rng = s.rng(t)
        Ar = sample_realization(A, s, rng)
        Cr = sample_realization(C, s, rng)
        if not kalman_rank_observable(Ar, Cr, tol):
            failures.append(t)
    report = {
        "structural": structural,
        "trials": trials,
        "passes": trials - len(failures),
        "failures": len(failures),
        "seeds_of_failures": [[s.seed, t] for t in failures],
    }
    if not structural:
        report["note"] = "sampling cannot certify unobservability; zero failures do not refute the verdict"
    return report
