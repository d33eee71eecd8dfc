"""Reading and summarizing the bench CSV schema.

The schema (one row per episode and arm):
    domain,param,value,seed,rules,discounted_return,wall_time_s,steps
with `rules` one of on/off and leading `#` comment lines permitted.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

REQUIRED_COLUMNS = ("domain", "param", "value", "seed", "rules",
                    "discounted_return", "wall_time_s", "steps")

EPS = 1e-9


class SchemaError(ValueError):
    """The CSV is missing required columns or holds malformed cells."""


@dataclass(frozen=True)
class Row:
    domain: str
    param: str
    value: int
    seed: int
    rules: bool
    discounted_return: float


@dataclass(frozen=True)
class ArmSummary:
    values: np.ndarray  # swept parameter, ascending
    means: np.ndarray
    stds: np.ndarray  # sample (ddof=1); 0 for singleton groups


@dataclass(frozen=True)
class ImprovementSummary:
    values: np.ndarray
    ratios: np.ndarray  # NaN where the plain mean is within EPS of zero


def read_csv(path: str | Path) -> list[Row]:
    with open(path, newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    reader = csv.DictReader(lines)
    fields = reader.fieldnames or []
    missing = [c for c in REQUIRED_COLUMNS if c not in fields]
    if missing:
        raise SchemaError(f"missing column(s): {', '.join(missing)}")
    rows: list[Row] = []
    for i, rec in enumerate(reader, start=2):
        try:
            ret = float(rec["discounted_return"])
            rows.append(Row(rec["domain"], rec["param"], int(rec["value"]),
                            int(rec["seed"]), rec["rules"] == "on", ret))
        except (TypeError, ValueError) as exc:
            raise SchemaError(f"bad cell in CSV row {i}: {exc}") from None
    if not rows:
        raise SchemaError("CSV holds no data rows")
    # error rows (NaN returns) are excluded from every summary
    return [r for r in rows if not math.isnan(r.discounted_return)]


def param_name(rows: list[Row]) -> str:
    names = {r.param for r in rows}
    if len(names) != 1:
        raise SchemaError(f"expected one swept parameter, found {sorted(names)}")
    return names.pop()


def summarize_arm(rows: list[Row], rules: bool) -> ArmSummary:
    by_value: dict[int, list[float]] = {}
    for r in rows:
        if r.rules == rules:
            by_value.setdefault(r.value, []).append(r.discounted_return)
    values = sorted(by_value)
    means = np.array([np.mean(by_value[v]) for v in values])
    stds = np.array([np.std(by_value[v], ddof=1) if len(by_value[v]) > 1 else 0.0
                     for v in values])
    return ArmSummary(np.array(values), means, stds)


def summarize_improvement(rows: list[Row]) -> ImprovementSummary:
    """Growth of discounted return: (mean_rules - mean_plain) / |mean_plain|."""
    plain = summarize_arm(rows, rules=False)
    biased = summarize_arm(rows, rules=True)
    if plain.values.size == 0 or biased.values.size == 0:
        raise SchemaError("improvement plot needs both arms present")
    common = np.intersect1d(plain.values, biased.values)
    if common.size == 0:
        raise SchemaError("the two arms share no swept values")
    p = plain.means[np.searchsorted(plain.values, common)]
    b = biased.means[np.searchsorted(biased.values, common)]
    denom = np.where(np.abs(p) < EPS, np.nan, np.abs(p))  # NaN marks undefined
    ratios = (b - p) / denom
    return ImprovementSummary(common, ratios)
