"""Candidate-pair generation: full cross product, crisp blocking, fuzzy neighbourhoods."""
from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

from .similarity import levenshtein_distance, normalize_text, graphemes

Record = Mapping[str, Any]
Dataset = Sequence[Record]


class ConstraintKind(enum.Enum):
    NONE = "none"
    CRISP = "crisp"
    FUZZY = "fuzzy"


class DmaxMode(enum.Enum):
    OBSERVED = "observed"  # largest distance over the cross product
    MAX_LENGTH = "max_length"  # longest normalized field value; cheap upper bound


@dataclass(frozen=True)
class ConstraintSpec:
    kind: ConstraintKind = ConstraintKind.NONE
    field: str | None = None
    right_field: str | None = None
    lam: float | None = None
    dmax_mode: DmaxMode = DmaxMode.OBSERVED

    def __post_init__(self) -> None:
        if self.kind is not ConstraintKind.NONE and not self.field:
            raise ValueError(f"{self.kind.value} constraint needs a field")
        if self.kind is ConstraintKind.FUZZY:
            if self.lam is None:
                raise ValueError("fuzzy constraint needs a membership threshold (lambda)")
            if not 0.0 <= self.lam <= 1.0:
                raise ValueError(f"constraint lambda must lie in [0, 1], got {self.lam}")

    @property
    def left_key(self) -> str | None:
        return self.field

    @property
    def right_key(self) -> str | None:
        return self.right_field or self.field


@dataclass
class CandidatePair:
    left_id: int
    right_id: int
    mu_c: float = 1.0
    scores: list[float] = field(default_factory=list)

    @property
    def key(self) -> tuple[int, int]:
        return (self.left_id, self.right_id)


def _check_field(data: Dataset, name: str, side: str) -> None:
    if data and name not in data[0]:
        raise KeyError(f"blocking field {name!r} not present in {side} dataset")


def full_cross(A: Dataset, B: Dataset) -> list[CandidatePair]:
    return [CandidatePair(i, j) for i in range(len(A)) for j in range(len(B))]


def _group_by_value(data: Dataset, key: str) -> dict[str, list[int]]:
    groups: dict[str, list[int]] = defaultdict(list)
    for idx, rec in enumerate(data):
        groups[normalize_text(rec.get(key))].append(idx)
    return groups


def crisp_block(A: Dataset, B: Dataset, left_field: str, right_field: str | None = None) -> list[CandidatePair]:
    right_field = right_field or left_field
    _check_field(A, left_field, "left")
    _check_field(B, right_field, "right")
    right_groups = _group_by_value(B, right_field)
    pairs = []
    for i, rec in enumerate(A):
        for j in right_groups.get(normalize_text(rec.get(left_field)), ()):
            pairs.append(CandidatePair(i, j, 1.0))
    return pairs


def neighbourhood_membership(distance: float, dmax: float) -> float:
    """Fuzzy-neighbourhood membership ``1 - d / d_max``; ``d_max == 0`` means every value coincides."""
    if dmax <= 0:
        return 1.0
    return max(0.0, 1.0 - distance / dmax)


def fuzzy_neighborhood_block(
    A: Dataset,
    B: Dataset,
    left_field: str,
    lam: float,
    right_field: str | None = None,
    dmax_mode: DmaxMode = DmaxMode.OBSERVED,
) -> list[CandidatePair]:
    """Keep pairs whose neighbourhood membership on the field is at least ``lam``.

    Distances are computed once per distinct (left value, right value) pair,
    which gives the exact cross-product ``d_max`` without touching every row pair.
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    right_field = right_field or left_field
    _check_field(A, left_field, "left")
    _check_field(B, right_field, "right")
    left_groups = _group_by_value(A, left_field)
    right_groups = _group_by_value(B, right_field)

    dist = {
        (lv, rv): levenshtein_distance(lv, rv)
        for lv in left_groups
        for rv in right_groups
    }
    if dmax_mode is DmaxMode.MAX_LENGTH:
        values = list(left_groups) + list(right_groups)
        dmax = max((len(graphemes(v)) for v in values), default=0)
    else:
        dmax = max(dist.values(), default=0)

    pairs = []
    for lv, left_ids in left_groups.items():
        for rv, right_ids in right_groups.items():
            mu = neighbourhood_membership(dist[(lv, rv)], dmax)
            if mu < lam:
                continue
            for i in left_ids:
                for j in right_ids:
                    pairs.append(CandidatePair(i, j, mu))
    pairs.sort(key=lambda p: p.key)
    return pairs


def block(A: Dataset, B: Dataset, spec: ConstraintSpec) -> list[CandidatePair]:
    if spec.kind is ConstraintKind.NONE:
        return full_cross(A, B)
    if spec.kind is ConstraintKind.CRISP:
        return crisp_block(A, B, spec.left_key, spec.right_key)
    return fuzzy_neighborhood_block(A, B, spec.left_key, spec.lam, spec.right_key, spec.dmax_mode)
