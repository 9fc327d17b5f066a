"""Fuzzy AHP weights for link columns from linguistic relevance terms.

Each relevance term is mapped to a unit-spread triangular rank on the
number scale.  Pairwise comparisons are endpoint ratios of those ranks,
row geometric means give the fuzzy priorities, and the result is
fwa-normalized so the modes sum to one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .fuzzy_core import TFN, centroid_defuzzify, normalize

DEFAULT_TERMS = ("low", "medium", "high")


@dataclass(frozen=True)
class RelevanceTerm:
    name: str
    rank: int  # 1-based position in the term ordering


def make_terms(names: Sequence[str], vocabulary: Sequence[str] = DEFAULT_TERMS) -> list[RelevanceTerm]:
    """Look up each relevance name in the ordered vocabulary."""
    index = {v.lower(): i + 1 for i, v in enumerate(vocabulary)}
    if len(index) != len(vocabulary):
        raise ValueError(f"linguistic terms must be unique, got {list(vocabulary)}")
    out = []
    for n in names:
        try:
            out.append(RelevanceTerm(n.lower(), index[n.lower()]))
        except KeyError:
            raise ValueError(f"unknown relevance term {n!r}; expected one of {list(vocabulary)}") from None
    return out


def term_to_fuzzy_rank(term: RelevanceTerm, scale: int) -> TFN:
    if scale < 2:
        raise ValueError(f"fuzzy number scale must be >= 2, got {scale}")
    if not 1 <= term.rank <= scale:
        raise ValueError(f"term {term.name!r} has rank {term.rank} outside scale 1..{scale}")
    r = term.rank
    return TFN(float(max(r - 1, 1)), float(r), float(min(r + 1, scale)))


def _geo_mean(values: Sequence[float]) -> float:
    return math.exp(math.fsum(math.log(v) for v in values) / len(values))


def fwa_normalize(weights: Sequence[TFN]) -> list[TFN]:
    """Scale all vertices by the sum of modes so the modes add to one."""
    total = math.fsum(w.b for w in weights)
    if total <= 0:
        raise ValueError("cannot fwa-normalize weights whose modes sum to zero")
    return [w.scaled(1.0 / total) for w in weights]


def fahp_geometric_mean(terms: Sequence[RelevanceTerm], scale: int) -> list[TFN]:
    n = len(terms)
    if n == 0:
        raise ValueError("at least one link column is needed to derive weights")
    ranks = [term_to_fuzzy_rank(t, scale) for t in terms]

    # a_ij = M_i / M_j with endpoint division: (l_i/u_j, m_i/m_j, u_i/l_j)
    rows = []
    for mi in ranks:
        lows = [mi.a / mj.c for mj in ranks]
        mids = [mi.b / mj.b for mj in ranks]
        highs = [mi.c / mj.a for mj in ranks]
        rows.append((_geo_mean(lows), _geo_mean(mids), _geo_mean(highs)))

    sum_l = math.fsum(r[0] for r in rows)
    sum_m = math.fsum(r[1] for r in rows)
    sum_u = math.fsum(r[2] for r in rows)
    raw = [TFN(l / sum_u, m / sum_m, u / sum_l) for l, m, u in rows]
    weights = fwa_normalize(raw)
    assert all(w.a >= 0 for w in weights), "FAHP produced a negative weight endpoint"
    return weights


def crisp_weights(fuzzy_weights: Sequence[TFN]) -> list[float]:
    return normalize([centroid_defuzzify(w) for w in fuzzy_weights])
