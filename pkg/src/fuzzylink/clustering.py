"""Fuzzy c-means on scalar total linkage scores and best-cluster labelling."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

log = logging.getLogger(__name__)

DEFAULT_LABELS = ("Non-match", "Possible Match", "Match")


@dataclass
class FcmResult:
    centers: np.ndarray  # (k,)
    memberships: np.ndarray  # (k, m), columns sum to 1
    iterations: int
    converged: bool
    objective_history: list[float] = field(default_factory=list)
    diagnostics: list[str] = field(default_factory=list)

    @property
    def k(self) -> int:
        return len(self.centers)


def fcm_objective(values: np.ndarray, centers: np.ndarray, u: np.ndarray, fuzzifier: float) -> float:
    d2 = (values[None, :] - centers[:, None]) ** 2
    return float(np.sum((u ** fuzzifier) * d2))


def fcm_memberships(values: np.ndarray, centers: np.ndarray, fuzzifier: float = 2.0) -> np.ndarray:
    """Optimal memberships (k, m) for fixed centres."""
    values = np.asarray(values, dtype=float)
    centers = np.asarray(centers, dtype=float)
    d = np.abs(values[None, :] - centers[:, None])
    zero = d == 0
    # scale by the nearest distance so tiny distances cannot overflow the power
    dmin = np.where(zero.any(axis=0), 1.0, d.min(axis=0))
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        inv = (d / dmin) ** (-2.0 / (fuzzifier - 1.0))
        u = inv / inv.sum(axis=0, keepdims=True)
    # points sitting on a centre belong to it (shared equally among coincident centres)
    hit = zero.any(axis=0)
    if hit.any():
        u[:, hit] = zero[:, hit] / zero[:, hit].sum(axis=0, keepdims=True)
    return u


def _update_centers(values: np.ndarray, u: np.ndarray, fuzzifier: float) -> np.ndarray:
    um = u ** fuzzifier
    return (um @ values) / um.sum(axis=1)


def fcm(
    values: Sequence[float],
    k: int = 3,
    fuzzifier: float = 2.0,
    tol: float = 1e-6,
    max_iter: int = 300,
    seed: int = 42,
    callback: Callable[[int, np.ndarray, np.ndarray], None] | None = None,
) -> FcmResult:
    """Fuzzy c-means on one-dimensional data.

    Memberships are initialized from ``seed``; each iteration updates the
    centres from the memberships and then the memberships from the centres,
    stopping once no centre moves by ``tol`` or more.  ``callback`` sees
    ``(iteration, centers, memberships)`` after every iteration.  If the data has fewer
    distinct values than ``k``, ``k`` shrinks to that count.
    """
    x = np.asarray(values, dtype=float).ravel()
    if x.size == 0:
        raise ValueError("fuzzy c-means needs at least one value")
    if k < 1:
        raise ValueError(f"cluster count must be >= 1, got {k}")
    if fuzzifier <= 1.0:
        raise ValueError(f"fuzzifier must exceed 1, got {fuzzifier}")

    diagnostics = []
    distinct = np.unique(x).size
    if distinct < k:
        msg = f"only {distinct} distinct value(s) for {k} clusters; using k={distinct}"
        log.warning(msg)
        diagnostics.append(msg)
        k = distinct

    if k == 1:
        return FcmResult(np.array([float(np.mean(x))]), np.ones((1, x.size)), 0, True, [0.0], diagnostics)

    rng = np.random.default_rng(seed)
    u = rng.random((k, x.size))
    u /= u.sum(axis=0, keepdims=True)
    centers = _update_centers(x, u, fuzzifier)
    history = [fcm_objective(x, centers, u, fuzzifier)]
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        u = fcm_memberships(x, centers, fuzzifier)
        new_centers = _update_centers(x, u, fuzzifier)
        history.append(fcm_objective(x, new_centers, u, fuzzifier))
        shift = float(np.max(np.abs(new_centers - centers)))
        centers = new_centers
        if callback is not None:
            callback(it, centers, u)
        if shift < tol:
            converged = True
            break
    u = fcm_memberships(x, centers, fuzzifier)
    return FcmResult(centers, u, it, converged, history, diagnostics)


def cluster_labels(k: int, requested_k: int | None = None, labels: Sequence[str] | None = None) -> list[str]:
    """Labels for ``k`` clusters in ascending centre order.

    With the default three-way labelling, a run that collapsed to fewer
    clusters keeps the top labels, so a single cluster is ``Match``.
    """
    requested_k = requested_k or k
    if labels is None:
        labels = DEFAULT_LABELS if requested_k == 3 else [f"cluster_{i}" for i in range(requested_k)]
    labels = list(labels)
    if len(labels) != requested_k:
        raise ValueError(f"{len(labels)} labels for {requested_k} clusters")
    return labels[requested_k - k:]


def assign_best(result: FcmResult, labels: Sequence[str]) -> tuple[list[str], np.ndarray]:
    """Label each point by its highest-membership cluster.

    Returns the labels and the membership matrix re-ordered by ascending
    centre, shape (m, k).  Ties go to the cluster with the higher centre.
    """
    if len(labels) != result.k:
        raise ValueError(f"{len(labels)} labels for {result.k} clusters")
    order = np.argsort(result.centers, kind="stable")
    u = result.memberships[order].T
    # argmax on the reversed columns returns the last (highest-centre) maximum
    best = u.shape[1] - 1 - np.argmax(u[:, ::-1], axis=1)
    return [labels[i] for i in best], u
