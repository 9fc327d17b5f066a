"""Seeded synthetic hospital-style datasets with known true pairs."""
from __future__ import annotations

import csv
import random
from pathlib import Path
from typing import Any

LEFT_FIELDS = ("Facility Name", "Address", "City", "State")
RIGHT_FIELDS = ("Provider Name", "Provider Street Address", "Provider City", "Provider State")

_STATES = {
    "TX": ["EL PASO", "HOUSTON", "DALLAS", "AUSTIN", "SAN ANTONIO", "LUBBOCK"],
    "FL": ["TAVARES", "ORLANDO", "MIAMI", "TAMPA", "OCALA", "NAPLES"],
    "CA": ["FRESNO", "OAKLAND", "SAN JOSE", "REDDING", "MODESTO", "VISALIA"],
    "NY": ["ALBANY", "BUFFALO", "ROCHESTER", "UTICA", "ITHACA", "ELMIRA"],
    "OH": ["AKRON", "DAYTON", "TOLEDO", "CANTON", "LIMA", "ZANESVILLE"],
    "GA": ["ATLANTA", "MACON", "SAVANNAH", "AUGUSTA", "ATHENS", "ROME"],
    "IL": ["PEORIA", "JOLIET", "ELGIN", "URBANA", "QUINCY", "DECATUR"],
    "WA": ["SEATTLE", "SPOKANE", "TACOMA", "YAKIMA", "OLYMPIA", "EVERETT"],
}
_SAINTS = ["ST MARY", "ST JOSEPH", "ST LUKE", "ST FRANCIS", "ST ANNE", "ST VINCENT", "GOOD SAMARITAN",
           "MERCY", "PROVIDENCE", "SACRED HEART", "HOLY CROSS", "TRINITY"]
_SURNAMES = ["WATERMAN", "BAPTIST", "METHODIST", "PRESBYTERIAN", "LAKESIDE", "RIVERSIDE", "VALLEY",
             "MEMORIAL", "COMMUNITY", "GENERAL", "UNIVERSITY", "CHILDRENS", "REGIONAL", "NORTHSIDE",
             "SOUTHWEST", "HIGHLAND", "PARKVIEW", "FAIRVIEW", "HILLCREST", "BAYFRONT"]
_KINDS = ["HOSPITAL", "MEDICAL CENTER", "REGIONAL MEDICAL CENTER", "HEALTH SYSTEM", "MEMORIAL HOSPITAL",
          "COMMUNITY HOSPITAL", "CAMPUS"]
_STREETS = ["OREGON", "MAIN", "WATERMAN", "OAK", "MAPLE", "CEDAR", "PINE", "LAKE", "HILL", "PARK",
            "WASHINGTON", "LINCOLN", "JEFFERSON", "MADISON", "FRANKLIN", "RIVER", "CHURCH", "HIGHLAND"]
_SUFFIXES = ["ST", "AVE", "BLVD", "RD", "DR", "WAY", "PKWY"]
_DIRS = ["", "", "N ", "S ", "E ", "W "]


def _hospital_name(rng: random.Random, city: str) -> str:
    form = rng.randrange(3)
    if form == 0:
        return f"{rng.choice(_SAINTS)} {rng.choice(_KINDS)}"
    if form == 1:
        return f"{rng.choice(_SURNAMES)} {rng.choice(_KINDS)}"
    return f"{city} {rng.choice(_SURNAMES)} {rng.choice(_KINDS)}"


def _address(rng: random.Random) -> str:
    return f"{rng.randint(1, 9999)} {rng.choice(_DIRS)}{rng.choice(_STREETS)} {rng.choice(_SUFFIXES)}"


def corrupt(value: str, rng: random.Random) -> str:
    """Apply one random edit (adjacent swap, deletion or token drop) that changes ``value``."""
    ops = ["swap", "delete", "drop"]
    rng.shuffle(ops)
    for op in ops:
        if op == "swap" and len(value) >= 2:
            i = rng.randrange(len(value) - 1)
            out = value[:i] + value[i + 1] + value[i] + value[i + 2:]
        elif op == "delete" and value:
            i = rng.randrange(len(value))
            out = value[:i] + value[i + 1:]
        elif op == "drop" and len(value.split()) >= 2:
            tokens = value.split()
            del tokens[rng.randrange(len(tokens))]
            out = " ".join(tokens)
        else:
            continue
        if out.strip() != value.strip():
            return out
    return value + "X"


def generate_synthetic(
    n_left: int = 500,
    n_right: int = 500,
    corruption_rate: float = 0.3,
    seed: int = 42,
    overlap: float = 0.6,
) -> tuple[list[dict[str, str]], list[dict[str, str]], list[tuple[int, int]]]:
    """Two datasets whose right side holds corrupted copies of some left records.

    Each linked field (name, address, city) of a copied record is corrupted
    independently with probability ``corruption_rate``; the state is kept so
    blocking on it never splits a true pair.  Returns ``(left, right, truth)``
    where ``truth`` lists ``(left_id, right_id)`` row indices.
    """
    if not 0.0 <= corruption_rate <= 1.0:
        raise ValueError(f"corruption_rate must lie in [0, 1], got {corruption_rate}")
    if not 0.0 <= overlap <= 1.0:
        raise ValueError(f"overlap must lie in [0, 1], got {overlap}")
    rng = random.Random(seed)
    states = sorted(_STATES)

    def fresh() -> tuple[str, str, str, str]:
        state = rng.choice(states)
        city = rng.choice(_STATES[state])
        return _hospital_name(rng, city), _address(rng), city, state

    seen: set[tuple[str, str, str]] = set()

    def unique_fresh() -> tuple[str, str, str, str]:
        while True:
            rec = fresh()
            if rec[:3] not in seen:
                seen.add(rec[:3])
                return rec

    left_rows = [unique_fresh() for _ in range(n_left)]
    n_copies = min(n_left, round(overlap * n_right))
    sources = rng.sample(range(n_left), n_copies)

    right_rows: list[tuple[tuple[str, str, str, str], int | None]] = []
    for src in sources:
        name, addr, city, state = left_rows[src]
        fields = [name, addr, city]
        for k in range(3):
            if rng.random() < corruption_rate:
                fields[k] = corrupt(fields[k], rng)
        right_rows.append(((fields[0], fields[1], fields[2], state), src))
    for _ in range(n_right - n_copies):
        right_rows.append((unique_fresh(), None))
    rng.shuffle(right_rows)

    left = [dict(zip(LEFT_FIELDS, r)) for r in left_rows]
    right = [dict(zip(RIGHT_FIELDS, r)) for r, _ in right_rows]
    truth = sorted((src, j) for j, (_, src) in enumerate(right_rows) if src is not None)
    return left, right, truth


def write_csv(path: str | Path, rows: list[dict[str, Any]], fields: tuple[str, ...]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=list(fields), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)


def write_synthetic(out_dir: str | Path, **kwargs: Any) -> dict[str, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    left, right, truth = generate_synthetic(**kwargs)
    paths = {"left": out / "left.csv", "right": out / "right.csv", "truth": out / "truth.csv"}
    write_csv(paths["left"], left, LEFT_FIELDS)
    write_csv(paths["right"], right, RIGHT_FIELDS)
    write_csv(paths["truth"], [{"left_id": i, "right_id": j} for i, j in truth], ("left_id", "right_id"))
    return paths


def benchmark_config() -> dict[str, Any]:
    """Raw configuration matching the synthetic column layout (state-blocked, three link columns)."""
    return {
        "constraint": {"kind": "crisp", "field": "State", "right_field": "Provider State"},
        "link_columns": [
            {"name": "Name", "left": "Facility Name", "right": "Provider Name",
             "matcher": "jaro_winkler", "relevance": "low"},
            {"name": "Address", "left": "Address", "right": "Provider Street Address",
             "matcher": "levenshtein", "relevance": "medium"},
            {"name": "City", "left": "City", "right": "Provider City",
             "matcher": "exact", "relevance": "high"},
        ],
        "crisp_weight_vector": [0.17, 0.31, 0.52],
    }
