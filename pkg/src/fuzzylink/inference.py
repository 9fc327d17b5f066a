"""Linguistic partitions, rule bases and Mamdani inference for total linkage scores."""
from __future__ import annotations

import enum
import itertools
import logging
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .fuzzy_core import TFN, Interval, ShoulderKind, membership

log = logging.getLogger(__name__)

GRID_POINTS = 1001


class PartitionMode(enum.Enum):
    EQUAL = "equal"
    QUANTILE = "quantile"


@dataclass
class FuzzyVariable:
    name: str
    universe: Interval
    terms: dict[str, tuple[TFN, ShoulderKind]]
    diagnostics: list[str] = field(default_factory=list)

    @property
    def term_names(self) -> list[str]:
        return list(self.terms)

    def fuzzify(self, x) -> dict[str, np.ndarray | float]:
        """Membership of ``x`` (scalar or array) in every term."""
        lo, hi = self.universe
        xs = np.clip(np.asarray(x, dtype=float), lo, hi)
        return {name: membership(tfn, sh, xs) for name, (tfn, sh) in self.terms.items()}


def _terms_from_peaks(peaks: Sequence[float], names: Sequence[str]) -> dict[str, tuple[TFN, ShoulderKind]]:
    terms = {}
    last = len(peaks) - 1
    for k, name in enumerate(names):
        left = peaks[max(k - 1, 0)]
        right = peaks[min(k + 1, last)]
        if k == 0:
            terms[name] = (TFN(peaks[0], peaks[0], right), ShoulderKind.LEFT)
        elif k == last:
            terms[name] = (TFN(left, peaks[k], peaks[k]), ShoulderKind.RIGHT)
        else:
            terms[name] = (TFN(left, peaks[k], right), ShoulderKind.NONE)
    return terms


def build_partition(
    universe: Interval,
    term_names: Sequence[str],
    name: str = "",
    mode: PartitionMode = PartitionMode.EQUAL,
    data: Sequence[float] | None = None,
) -> FuzzyVariable:
    """Ruspini partition of ``universe`` into one triangle per term.

    Peaks are equally spaced by default.  In quantile mode they sit at evenly
    spaced percentiles of ``data``; if those percentiles are not strictly
    increasing the partition falls back to equal spacing.
    """
    if len(term_names) < 2:
        raise ValueError("a partition needs at least two terms")
    if len(set(term_names)) != len(term_names):
        raise ValueError(f"duplicate term names in {list(term_names)}")
    lo, hi = universe
    diagnostics: list[str] = []
    if not lo < hi:
        msg = f"{name or 'variable'}: degenerate universe [{lo}, {hi}]; all terms collapse to one point"
        log.warning(msg)
        point = TFN(lo, lo, lo)
        terms = {t: (point, ShoulderKind.NONE) for t in term_names}
        return FuzzyVariable(name, universe, terms, [msg])

    k = len(term_names)
    peaks = list(np.linspace(lo, hi, k))
    if mode is PartitionMode.QUANTILE:
        if data is None or len(data) == 0:
            raise ValueError("quantile partitions need the observed data")
        q = list(np.quantile(np.asarray(data, dtype=float), np.linspace(0.0, 1.0, k)))
        q[0], q[-1] = lo, hi
        if all(a < b for a, b in zip(q, q[1:])):
            peaks = q
        else:
            msg = f"{name or 'variable'}: quantile peaks not distinct, using equal spacing"
            log.info(msg)
            diagnostics.append(msg)
    peaks[0], peaks[-1] = lo, hi
    return FuzzyVariable(name, universe, _terms_from_peaks([float(p) for p in peaks], term_names), diagnostics)


@dataclass(frozen=True)
class FuzzyRule:
    antecedent: tuple[tuple[str, str], ...]  # (variable, term) pairs, conjunctive
    consequent: str

    def describe(self, output: str = "score") -> str:
        lhs = " AND ".join(f"{v}={t}" for v, t in self.antecedent)
        return f"IF {lhs} THEN {output}={self.consequent}"


@dataclass
class RuleBase:
    rules: list[FuzzyRule]

    def __post_init__(self) -> None:
        seen = set()
        for r in self.rules:
            key = tuple(sorted(r.antecedent))
            if key in seen:
                raise ValueError(f"duplicate antecedent in rule base: {r.describe()}")
            seen.add(key)

    def __len__(self) -> int:
        return len(self.rules)

    def validate(self, variables: Sequence[FuzzyVariable], output: FuzzyVariable) -> None:
        by_name = {v.name: v for v in variables}
        for r in self.rules:
            for var, term in r.antecedent:
                if var not in by_name:
                    raise ValueError(f"rule references unknown variable {var!r}: {r.describe()}")
                if term not in by_name[var].terms:
                    raise ValueError(f"rule references unknown term {term!r} of {var!r}: {r.describe()}")
            if r.consequent not in output.terms:
                raise ValueError(f"rule concludes unknown score term {r.consequent!r}")


def weighted_term_index(indices: Sequence[int], weights: Sequence[float]) -> int:
    """round(sum(w_i * idx_i)) with exact halves rounded down."""
    value = math.fsum(w * i for w, i in zip(weights, indices))
    return max(0, math.ceil(value - 0.5 - 1e-9))


def generate_rule_base(
    variable_names: Sequence[str],
    term_names: Sequence[str],
    weights: Sequence[float],
) -> RuleBase:
    """One rule per combination of antecedent terms; the consequent is the weighted mean term."""
    if len(weights) != len(variable_names):
        raise ValueError(f"{len(weights)} weights for {len(variable_names)} variables")
    if abs(math.fsum(weights) - 1.0) > 1e-9:
        raise ValueError(f"rule-base weights must be normalized, sum is {math.fsum(weights)}")
    rules = []
    top = len(term_names) - 1
    for combo in itertools.product(range(len(term_names)), repeat=len(variable_names)):
        out = min(weighted_term_index(combo, weights), top)
        antecedent = tuple((v, term_names[i]) for v, i in zip(variable_names, combo))
        rules.append(FuzzyRule(antecedent, term_names[out]))
    return RuleBase(rules)


_RULE_RE = re.compile(r"^\s*IF\s+(?P<lhs>.+?)\s+THEN\s+(?P<rhs>.+?)\s*$", re.IGNORECASE)
_ATOM_RE = re.compile(r"^\s*([^=\s]+)\s*=\s*([^=\s]+)\s*$")


class RuleParseError(ValueError):
    pass


def parse_rules(text: str, variable_names: Sequence[str], term_names: Sequence[str]) -> RuleBase:
    """Parse ``IF col=term AND ... THEN score=term`` lines.

    Blank lines and ``#`` comments are skipped; variable and term names
    are matched case-insensitively.
    """
    variables = {v.lower(): v for v in variable_names}
    terms = {t.lower(): t for t in term_names}
    rules = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _RULE_RE.match(line)
        if not m:
            raise RuleParseError(f"line {lineno}: expected 'IF <col>=<term> AND ... THEN score=<term>'")
        antecedent = []
        for atom in re.split(r"\s+AND\s+", m["lhs"], flags=re.IGNORECASE):
            am = _ATOM_RE.match(atom)
            if not am:
                raise RuleParseError(f"line {lineno}: malformed condition {atom.strip()!r}")
            var, term = am[1].lower(), am[2].lower()
            if var not in variables:
                raise RuleParseError(f"line {lineno}: unknown column {am[1]!r}")
            if term not in terms:
                raise RuleParseError(f"line {lineno}: unknown term {am[2]!r}")
            antecedent.append((variables[var], terms[term]))
        cm = _ATOM_RE.match(m["rhs"])
        if not cm or cm[1].lower() not in ("score", "ts"):
            raise RuleParseError(f"line {lineno}: consequent must read 'score=<term>'")
        if cm[2].lower() not in terms:
            raise RuleParseError(f"line {lineno}: unknown term {cm[2]!r}")
        if len({v for v, _ in antecedent}) != len(antecedent):
            raise RuleParseError(f"line {lineno}: column repeated in one rule")
        rules.append(FuzzyRule(tuple(antecedent), terms[cm[2].lower()]))
    try:
        return RuleBase(rules)
    except ValueError as exc:
        raise RuleParseError(str(exc)) from None


def load_rules(path: str | Path, variable_names: Sequence[str], term_names: Sequence[str]) -> RuleBase:
    return parse_rules(Path(path).read_text(encoding="utf-8"), variable_names, term_names)


class MamdaniController:
    """min conjunction, min implication, max aggregation, centroid defuzzification."""

    def __init__(
        self,
        variables: Sequence[FuzzyVariable],
        output: FuzzyVariable,
        rules: RuleBase,
        grid_points: int = GRID_POINTS,
    ):
        if len(rules) == 0:
            raise ValueError("rule base is empty")
        rules.validate(variables, output)
        self.variables = list(variables)
        self.output = output
        self.rules = rules
        self.grid = np.linspace(output.universe.lo, output.universe.hi, grid_points)
        self.out_terms = output.term_names
        # consequent membership curves over the output grid, one row per term
        self.curves = np.vstack([membership(*output.terms[t], self.grid) for t in self.out_terms])
        var_pos = {v.name: k for k, v in enumerate(self.variables)}
        self._rule_atoms = [[(var_pos[v], t) for v, t in r.antecedent] for r in rules.rules]
        self._rule_out = [self.out_terms.index(r.consequent) for r in rules.rules]

    def activations(self, scores: np.ndarray) -> np.ndarray:
        """Per-consequent-term firing strength, shape (m, n_out_terms)."""
        scores = np.atleast_2d(np.asarray(scores, dtype=float))
        fuzz = [v.fuzzify(scores[:, k]) for k, v in enumerate(self.variables)]
        strength = np.zeros((scores.shape[0], len(self.out_terms)))
        for atoms, out in zip(self._rule_atoms, self._rule_out):
            act = np.ones(scores.shape[0])
            for k, term in atoms:
                act = np.minimum(act, fuzz[k][term])
            strength[:, out] = np.maximum(strength[:, out], act)
        return strength

    def infer(self, scores, chunk: int = 4096) -> tuple[np.ndarray, np.ndarray]:
        """Defuzzified outputs and a flag marking rows where no rule fired."""
        scores = np.atleast_2d(np.asarray(scores, dtype=float))
        out = np.empty(scores.shape[0])
        fallback = np.zeros(scores.shape[0], dtype=bool)
        mid = 0.5 * (self.output.universe.lo + self.output.universe.hi)
        for start in range(0, scores.shape[0], chunk):
            strength = self.activations(scores[start:start + chunk])
            # clipped consequents aggregated by pointwise max
            agg = np.max(np.minimum(strength[:, :, None], self.curves[None, :, :]), axis=1)
            mass = agg.sum(axis=1)
            dead = mass <= 0
            safe = np.where(dead, 1.0, mass)
            centroid = (agg @ self.grid) / safe
            centroid = np.clip(centroid, self.output.universe.lo, self.output.universe.hi)
            out[start:start + chunk] = np.where(dead, mid, centroid)
            fallback[start:start + chunk] = dead
        return out, fallback


def mamdani_infer(
    variables: Sequence[FuzzyVariable],
    ts_variable: FuzzyVariable,
    rules: RuleBase,
    scores: Sequence[float],
) -> float:
    value, _ = MamdaniController(variables, ts_variable, rules).infer(np.asarray(scores)[None, :])
    return float(value[0])
