"""Fuzzy weighted average of fuzzy scores under fuzzy, simplex-constrained weights."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .fuzzy_core import TFN, Interval, alpha_cut

MODE_BINS = 20
FEASIBILITY_TOL = 1e-9


class InfeasibleWeightsError(ValueError):
    """The weight alpha-cuts admit no point on the unit simplex."""


@dataclass(frozen=True)
class FwaInput:
    score_tfns: Sequence[TFN]
    weight_tfns: Sequence[TFN]
    alpha: float = 0.0

    def __post_init__(self) -> None:
        if len(self.score_tfns) != len(self.weight_tfns):
            raise ValueError(
                f"{len(self.score_tfns)} score numbers but {len(self.weight_tfns)} weights"
            )
        if not self.score_tfns:
            raise ValueError("fuzzy weighted average needs at least one column")


def histogram_mode(values: Sequence[float], bins: int = MODE_BINS) -> float:
    """Mode of continuous scores in [0, 1].

    Scores are binned into ``bins`` equal bins; the most populated bin wins
    (ties go to the lower bin) and the median of the scores inside it is
    returned, so repeated exact values come back unchanged.
    """
    arr = np.asarray(values, dtype=float)
    idx = np.clip(np.floor(arr * bins).astype(int), 0, bins - 1)
    counts = np.bincount(idx, minlength=bins)
    best = int(np.argmax(counts))  # first maximum, i.e. the lowest bin
    return float(np.median(arr[idx == best]))


def column_score_tfn(scores: Sequence[float]) -> TFN:
    """(min, mode, max) of one column's observed match scores."""
    arr = np.asarray(scores, dtype=float)
    if arr.size == 0:
        raise ValueError("cannot summarize an empty score column")
    lo, hi = float(arr.min()), float(arr.max())
    if lo == hi:
        return TFN(lo, lo, lo)
    mode = min(max(histogram_mode(arr), lo), hi)
    return TFN(lo, mode, hi)


def _extreme(xs: Sequence[float], lows: Sequence[float], highs: Sequence[float], maximize: bool) -> float:
    """Optimize sum(x_i * w_i) over lows <= w <= highs, sum(w) = 1.

    Start every weight at its lower bound and pour the remaining mass into
    the columns with the smallest (or largest) x first.
    """
    w = list(lows)
    remaining = 1.0 - math.fsum(lows)
    order = sorted(range(len(xs)), key=lambda i: xs[i], reverse=maximize)
    for i in order:
        if remaining <= 0:
            break
        step = min(highs[i] - lows[i], remaining)
        w[i] += step
        remaining -= step
    return math.fsum(x * wi for x, wi in zip(xs, w))


def fwa_interval(inp: FwaInput) -> Interval:
    x_cuts = [alpha_cut(t, inp.alpha) for t in inp.score_tfns]
    w_cuts = [alpha_cut(t, inp.alpha) for t in inp.weight_tfns]
    lows = [c.lo for c in w_cuts]
    highs = [c.hi for c in w_cuts]
    sum_lo, sum_hi = math.fsum(lows), math.fsum(highs)
    if sum_lo > 1.0 + FEASIBILITY_TOL:
        raise InfeasibleWeightsError(
            f"weight lower bounds sum to {sum_lo:.6g} > 1 at alpha={inp.alpha}"
        )
    if sum_hi < 1.0 - FEASIBILITY_TOL:
        raise InfeasibleWeightsError(
            f"weight upper bounds sum to {sum_hi:.6g} < 1 at alpha={inp.alpha}"
        )
    lo = _extreme([c.lo for c in x_cuts], lows, highs, maximize=False)
    hi = _extreme([c.hi for c in x_cuts], lows, highs, maximize=True)
    return Interval(min(lo, hi), max(lo, hi))


def fwa_tfn(score_tfns: Sequence[TFN], weight_tfns: Sequence[TFN]) -> TFN:
    """Fuzzy weighted average as a triangle: support from alpha=0, mode from alpha=1."""
    support = fwa_interval(FwaInput(score_tfns, weight_tfns, 0.0))
    kernel = fwa_interval(FwaInput(score_tfns, weight_tfns, 1.0))
    mode = min(max(0.5 * (kernel.lo + kernel.hi), support.lo), support.hi)
    return TFN(support.lo, mode, support.hi)
