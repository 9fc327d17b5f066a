"""Deterministic and Fellegi-Sunter style probabilistic linkage baselines."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

log = logging.getLogger(__name__)

PROB_CLAMP = (0.01, 0.99)


@dataclass(frozen=True)
class MuEstimate:
    m: float
    u: float


@dataclass
class LinkResult:
    ts: np.ndarray
    is_match: np.ndarray
    diagnostics: list[str]

    @property
    def match_count(self) -> int:
        return int(self.is_match.sum())


def deterministic_link(exact_scores: np.ndarray) -> LinkResult:
    """All-or-nothing linkage on exact per-column agreement.

    ``exact_scores`` is (m, n) with entries in {0, 1}; TS is the row mean and a
    pair matches only when every column agrees.
    """
    s = np.atleast_2d(np.asarray(exact_scores, dtype=float))
    ts = s.mean(axis=1) if s.shape[1] else np.zeros(s.shape[0])
    return LinkResult(ts, s.min(axis=1) >= 1.0 if s.shape[1] else np.zeros(s.shape[0], bool), [])


def estimate_mu(
    scores: np.ndarray,
    truth: Sequence[bool],
    agreement_threshold: float = 0.9,
) -> list[MuEstimate]:
    """Count per-column agreement rates among labelled matches (m) and non-matches (u)."""
    s = np.atleast_2d(np.asarray(scores, dtype=float))
    t = np.asarray(truth, dtype=bool)
    if t.size != s.shape[0]:
        raise ValueError(f"{t.size} labels for {s.shape[0]} sampled pairs")
    if t.all() or not t.any():
        raise ValueError("labelled sample must contain both true matches and true non-matches")
    agree = s >= agreement_threshold
    lo, hi = PROB_CLAMP
    m = np.clip(agree[t].mean(axis=0), lo, hi)
    u = np.clip(agree[~t].mean(axis=0), lo, hi)
    return [MuEstimate(float(a), float(b)) for a, b in zip(m, u)]


def fs_agreement_weight(m: float, u: float) -> tuple[float, float]:
    return math.log2(m / u), math.log2((1.0 - m) / (1.0 - u))


def probabilistic_weights(estimates: Sequence[MuEstimate]) -> tuple[list[float], list[str]]:
    """Agreement weights of the informative columns, normalized to sum to one.

    Columns with a non-positive agreement weight get weight 0 and a diagnostic.
    """
    raw = [fs_agreement_weight(e.m, e.u)[0] for e in estimates]
    diagnostics = [
        f"column {i} dropped: agreement weight {w:.3g} <= 0" for i, w in enumerate(raw) if w <= 0
    ]
    positive = [max(w, 0.0) for w in raw]
    total = math.fsum(positive)
    if total <= 0:
        raise ValueError("no column has a positive agreement weight; nothing discriminates matches")
    for d in diagnostics:
        log.warning(d)
    return [w / total for w in positive], diagnostics


def probabilistic_link(raw_scores: np.ndarray, weights: Sequence[float], cutoff: float = 0.5) -> LinkResult:
    s = np.atleast_2d(np.asarray(raw_scores, dtype=float))
    w = np.asarray(weights, dtype=float)
    if w.size != s.shape[1]:
        raise ValueError(f"{w.size} weights for {s.shape[1]} columns")
    if np.any(w < 0) or not np.isclose(w.sum(), 1.0, atol=1e-9):
        raise ValueError("probabilistic weights must be non-negative and sum to 1")
    ts = s @ w
    return LinkResult(ts, ts >= cutoff, [])
