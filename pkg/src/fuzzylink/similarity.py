"""String comparators producing match scores in [0, 1].

All comparators normalize their inputs first (trim, collapse whitespace,
uppercase) and operate on user-perceived characters (grapheme clusters),
so a combining accent counts as part of the letter it decorates.
"""
from __future__ import annotations

import enum
import unicodedata
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Callable, Mapping, Sequence

import regex

_WS = regex.compile(r"\s+")
_GRAPHEME = regex.compile(r"\X")


class Matcher(enum.Enum):
    EXACT = "exact"
    LEVENSHTEIN = "levenshtein"
    JARO_WINKLER = "jaro_winkler"

    @classmethod
    def parse(cls, name: str) -> "Matcher":
        key = str(name).strip().lower().replace("-", "_")
        aliases = {"jarowinkler": "jaro_winkler", "jaro winkler": "jaro_winkler", "lev": "levenshtein"}
        key = aliases.get(key, key)
        try:
            return cls(key)
        except ValueError:
            valid = ", ".join(m.value for m in cls)
            raise ValueError(f"unknown matcher {name!r}; expected one of {valid}") from None


def normalize_text(value: Any) -> str:
    if value is None:
        return ""
    text = unicodedata.normalize("NFC", str(value))
    return _WS.sub(" ", text).strip().upper()


def graphemes(text: str) -> tuple[str, ...]:
    return tuple(_GRAPHEME.findall(text))


def edit_distance(s: Sequence[str], t: Sequence[str]) -> int:
    """Levenshtein distance (unit-cost insert, delete, substitute)."""
    if len(s) < len(t):
        s, t = t, s
    if not t:
        return len(s)
    prev = list(range(len(t) + 1))
    for i, cs in enumerate(s, 1):
        cur = [i]
        for j, ct in enumerate(t, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (cs != ct)))
        prev = cur
    return prev[-1]


@lru_cache(maxsize=65536)
def _levenshtein_norm(s: str, t: str) -> float:
    gs, gt = graphemes(s), graphemes(t)
    longest = max(len(gs), len(gt))
    if longest == 0:
        return 1.0
    return 1.0 - edit_distance(gs, gt) / longest


def _jaro(s: Sequence[str], t: Sequence[str]) -> float:
    if not s and not t:
        return 1.0
    if not s or not t:
        return 0.0
    window = max(max(len(s), len(t)) // 2 - 1, 0)
    s_flags = [False] * len(s)
    t_flags = [False] * len(t)
    matches = 0
    for i, ch in enumerate(s):
        lo, hi = max(0, i - window), min(i + window + 1, len(t))
        for j in range(lo, hi):
            if not t_flags[j] and t[j] == ch:
                s_flags[i] = t_flags[j] = True
                matches += 1
                break
    if matches == 0:
        return 0.0
    s_matched = [ch for ch, f in zip(s, s_flags) if f]
    t_matched = [ch for ch, f in zip(t, t_flags) if f]
    transpositions = sum(a != b for a, b in zip(s_matched, t_matched)) // 2
    m = float(matches)
    return (m / len(s) + m / len(t) + (m - transpositions) / m) / 3.0


@lru_cache(maxsize=65536)
def _jaro_winkler_norm(s: str, t: str, prefix_scale: float = 0.1, max_prefix: int = 4) -> float:
    gs, gt = graphemes(s), graphemes(t)
    jaro = _jaro(gs, gt)
    prefix = 0
    for a, b in zip(gs[:max_prefix], gt[:max_prefix]):
        if a != b:
            break
        prefix += 1
    return min(1.0, jaro + prefix * prefix_scale * (1.0 - jaro))


def exact_sim(s: Any, t: Any) -> float:
    return 1.0 if normalize_text(s) == normalize_text(t) else 0.0


def levenshtein_sim(s: Any, t: Any) -> float:
    a, b = normalize_text(s), normalize_text(t)
    # ordered key keeps the cache symmetric
    return _levenshtein_norm(*sorted((a, b)))


def jaro_winkler_sim(s: Any, t: Any) -> float:
    a, b = normalize_text(s), normalize_text(t)
    if a == b:
        return 1.0
    # Jaro is symmetric; sorting only shares cache entries
    return _jaro_winkler_norm(*sorted((a, b)))


def levenshtein_distance(s: Any, t: Any) -> int:
    return edit_distance(graphemes(normalize_text(s)), graphemes(normalize_text(t)))


SIMILARITY: dict[Matcher, Callable[[Any, Any], float]] = {
    Matcher.EXACT: exact_sim,
    Matcher.LEVENSHTEIN: levenshtein_sim,
    Matcher.JARO_WINKLER: jaro_winkler_sim,
}


@dataclass(frozen=True)
class ColumnSpec:
    """One link column: which fields to compare and how."""

    left: str
    right: str
    matcher: Matcher
    name: str | None = None

    @property
    def label(self) -> str:
        return self.name or self.left


def _is_missing(value: Any) -> bool:
    if value is None:
        return True
    try:
        return value != value  # NaN
    except Exception:
        return False


def score_columns(
    left: Mapping[str, Any],
    right: Mapping[str, Any],
    columns: Sequence[ColumnSpec],
) -> tuple[list[float], list[str]]:
    """Score a record pair on every link column.

    Returns the score vector (configuration order) and the labels of columns
    whose field was missing or null on either side; those score 0.0.
    """
    scores: list[float] = []
    missing: list[str] = []
    for col in columns:
        lv, rv = left.get(col.left), right.get(col.right)
        if col.left not in left or col.right not in right or _is_missing(lv) or _is_missing(rv):
            scores.append(0.0)
            missing.append(col.label)
            continue
        scores.append(SIMILARITY[col.matcher](lv, rv))
    return scores, missing
