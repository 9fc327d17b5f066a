"""Linkage configuration: parsing, defaults and validation."""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Mapping

import yaml

from .blocking import ConstraintKind, ConstraintSpec, DmaxMode
from .fahp import DEFAULT_TERMS, RelevanceTerm, make_terms
from .inference import PartitionMode
from .similarity import ColumnSpec, Matcher

log = logging.getLogger(__name__)


class ConfigError(ValueError):
    pass


class LogicType(enum.Enum):
    BOOLEAN = "Boolean"
    FUZZY = "Fuzzy"


class LinkageType(enum.Enum):
    CRISP = "crisp"
    FUZZY = "fuzzy"


@dataclass(frozen=True)
class LinkColumn:
    spec: ColumnSpec
    relevance: str
    threshold: float = 0.9

    @property
    def label(self) -> str:
        return self.spec.label


@dataclass(frozen=True)
class FcmSettings:
    seed: int = 42
    fuzzifier: float = 2.0
    tol: float = 1e-6
    max_iter: int = 300


@dataclass(frozen=True)
class ProbabilisticSettings:
    cutoff: float = 0.5
    agreement_threshold: float = 0.9
    sample_size: int = 200  # labelled pairs drawn per class


@dataclass(frozen=True)
class LinkageConfig:
    link_columns: tuple[LinkColumn, ...]
    constraint: ConstraintSpec = field(default_factory=ConstraintSpec)
    logic_type: LogicType = LogicType.FUZZY
    linkage_type: LinkageType = LinkageType.CRISP
    crisp_weight_vector: tuple[float, ...] | None = None
    linguistic_terms: tuple[str, ...] = DEFAULT_TERMS
    fuzzy_number_scale: int = 3
    fahp_method: str = "geometric mean"
    fwa_alpha: float = 0.0
    rule_base: str | None = None
    cluster_count: int = 3
    partition_mode: PartitionMode = PartitionMode.EQUAL
    fcm: FcmSettings = field(default_factory=FcmSettings)
    probabilistic: ProbabilisticSettings = field(default_factory=ProbabilisticSettings)

    @property
    def columns(self) -> list[ColumnSpec]:
        return [c.spec for c in self.link_columns]

    @property
    def labels(self) -> list[str]:
        return [c.label for c in self.link_columns]

    @property
    def thresholds(self) -> list[float]:
        return [c.threshold for c in self.link_columns]

    def relevance_terms(self) -> list[RelevanceTerm]:
        return make_terms([c.relevance for c in self.link_columns], self.linguistic_terms)

    def with_modes(self, logic: LogicType, linkage: LinkageType, **changes: Any) -> "LinkageConfig":
        if logic is LogicType.BOOLEAN and linkage is not LinkageType.CRISP:
            raise ConfigError("Boolean logic only supports crisp linkage")
        return replace(self, logic_type=logic, linkage_type=linkage, **changes)


_TOP_KEYS = {
    "constraint", "link_columns", "logic_type", "linkage_type", "crisp_weight_vector",
    "linguistic_terms", "fuzzy_number_scale", "fahp_method", "fwa_alpha", "rule_base",
    "cluster_count", "partition_mode", "fcm", "probabilistic",
}
_CONSTRAINT_KEYS = {"kind", "field", "right_field", "lambda", "dmax"}
_COLUMN_KEYS = {"left", "right", "matcher", "relevance", "threshold", "name"}
_FCM_KEYS = {"seed", "fuzzifier", "tol", "max_iter"}
_PROB_KEYS = {"cutoff", "agreement_threshold", "sample_size"}


def _reject_unknown(section: str, data: Mapping[str, Any], allowed: set[str]) -> None:
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) in {section}: {', '.join(unknown)}")


def _enum(cls: type[enum.Enum], value: Any, what: str):
    if isinstance(value, cls):
        return value
    for member in cls:
        if str(value).strip().lower() == member.value.lower():
            return member
    raise ConfigError(f"{what}: {value!r} is not one of {[m.value for m in cls]}")


def _unit(value: Any, what: str) -> float:
    try:
        v = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{what} must be a number, got {value!r}") from None
    if not 0.0 <= v <= 1.0:
        raise ConfigError(f"{what} must lie in [0, 1], got {v}")
    return v


def validate_config(raw: Mapping[str, Any] | None) -> LinkageConfig:
    """Apply defaults and check a raw configuration mapping."""
    raw = dict(raw or {})
    _reject_unknown("config", raw, _TOP_KEYS)

    terms = tuple(str(t) for t in raw.get("linguistic_terms") or DEFAULT_TERMS)
    if len(terms) < 2 or len({t.lower() for t in terms}) != len(terms):
        raise ConfigError(f"linguistic_terms must hold at least two distinct names, got {list(terms)}")

    cols_raw = raw.get("link_columns")
    if not cols_raw:
        raise ConfigError("link_columns: at least one link column is required")
    columns = []
    for i, c in enumerate(cols_raw):
        where = f"link_columns[{i}]"
        if not isinstance(c, Mapping):
            raise ConfigError(f"{where} must be a mapping")
        _reject_unknown(where, c, _COLUMN_KEYS)
        if "left" not in c:
            raise ConfigError(f"{where}.left is required")
        try:
            matcher = Matcher.parse(c.get("matcher", "levenshtein"))
        except ValueError as exc:
            raise ConfigError(f"{where}.matcher: {exc}") from None
        relevance = str(c.get("relevance", terms[len(terms) // 2]))
        if relevance.lower() not in {t.lower() for t in terms}:
            raise ConfigError(f"{where}.relevance: unknown term {relevance!r}, expected one of {list(terms)}")
        spec = ColumnSpec(str(c["left"]), str(c.get("right", c["left"])), matcher, c.get("name"))
        columns.append(LinkColumn(spec, relevance, _unit(c.get("threshold", 0.9), f"{where}.threshold")))
    labels = [c.label for c in columns]
    if len(set(labels)) != len(labels):
        raise ConfigError(f"link column names must be unique, got {labels}")

    con = dict(raw.get("constraint") or {})
    _reject_unknown("constraint", con, _CONSTRAINT_KEYS)
    try:
        constraint = ConstraintSpec(
            kind=_enum(ConstraintKind, con.get("kind", "none"), "constraint.kind"),
            field=con.get("field"),
            right_field=con.get("right_field"),
            lam=None if con.get("lambda") is None else _unit(con["lambda"], "constraint.lambda"),
            dmax_mode=_enum(DmaxMode, con.get("dmax", "observed"), "constraint.dmax"),
        )
    except ValueError as exc:
        raise ConfigError(f"constraint: {exc}") from None

    logic = _enum(LogicType, raw.get("logic_type", "Fuzzy"), "logic_type")
    linkage = _enum(LinkageType, raw.get("linkage_type", "crisp"), "linkage_type")
    if logic is LogicType.BOOLEAN and linkage is not LinkageType.CRISP:
        log.warning("Boolean logic supports only crisp linkage; linkage_type coerced to 'crisp'")
        linkage = LinkageType.CRISP

    cw = raw.get("crisp_weight_vector")
    if cw is not None:
        try:
            cw = tuple(float(w) for w in cw)
        except (TypeError, ValueError):
            raise ConfigError(f"crisp_weight_vector must be a list of numbers, got {cw!r}") from None
        if len(cw) != len(columns):
            raise ConfigError(f"crisp_weight_vector has {len(cw)} entries for {len(columns)} link columns")
        if any(w < 0 for w in cw) or sum(cw) <= 0:
            raise ConfigError("crisp_weight_vector entries must be non-negative with a positive sum")

    scale = raw.get("fuzzy_number_scale", 3)
    if not isinstance(scale, int) or scale < 2:
        raise ConfigError(f"fuzzy_number_scale must be an integer >= 2, got {scale!r}")
    if scale < len(terms):
        raise ConfigError(f"fuzzy_number_scale {scale} is smaller than the {len(terms)} linguistic terms")

    method = str(raw.get("fahp_method", "geometric mean")).strip().lower().replace("_", " ")
    if method != "geometric mean":
        raise ConfigError(f"fahp_method: only 'geometric mean' is supported, got {raw['fahp_method']!r}")

    k = raw.get("cluster_count", 3)
    if not isinstance(k, int) or k < 1:
        raise ConfigError(f"cluster_count must be an integer >= 1, got {k!r}")

    fcm_raw = dict(raw.get("fcm") or {})
    _reject_unknown("fcm", fcm_raw, _FCM_KEYS)
    fcm = FcmSettings(**{**FcmSettings().__dict__, **fcm_raw})
    if fcm.fuzzifier <= 1:
        raise ConfigError(f"fcm.fuzzifier must exceed 1, got {fcm.fuzzifier}")
    if fcm.tol <= 0 or fcm.max_iter < 1:
        raise ConfigError("fcm.tol must be positive and fcm.max_iter at least 1")

    prob_raw = dict(raw.get("probabilistic") or {})
    _reject_unknown("probabilistic", prob_raw, _PROB_KEYS)
    prob = ProbabilisticSettings(
        cutoff=_unit(prob_raw.get("cutoff", 0.5), "probabilistic.cutoff"),
        agreement_threshold=_unit(prob_raw.get("agreement_threshold", 0.9), "probabilistic.agreement_threshold"),
        sample_size=int(prob_raw.get("sample_size", 200)),
    )

    return LinkageConfig(
        link_columns=tuple(columns),
        constraint=constraint,
        logic_type=logic,
        linkage_type=linkage,
        crisp_weight_vector=cw,
        linguistic_terms=terms,
        fuzzy_number_scale=scale,
        fahp_method="geometric mean",
        fwa_alpha=_unit(raw.get("fwa_alpha", 0.0), "fwa_alpha"),
        rule_base=raw.get("rule_base"),
        cluster_count=k,
        partition_mode=_enum(PartitionMode, raw.get("partition_mode", "equal"), "partition_mode"),
        fcm=fcm,
        probabilistic=prob,
    )


def load_config(path: str | Path) -> LinkageConfig:
    """Read a YAML (or JSON) configuration file; relative rule-base paths resolve against it."""
    path = Path(path)
    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8"))
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    if raw is not None and not isinstance(raw, Mapping):
        raise ConfigError(f"{path}: top level must be a mapping")
    cfg = validate_config(raw)
    if cfg.rule_base and not Path(cfg.rule_base).is_absolute():
        cfg = replace(cfg, rule_base=str(path.parent / cfg.rule_base))
    return cfg
