"""Paired-seed experiment sweeps with CSV output and aggregate statistics."""
from __future__ import annotations

import csv
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Sequence

import numpy as np

from .defaults import load_default_rules
from .domains import make_instance
from .logic.parser import parse_program
from .logic.terms import Program
from .planner import PlannerConfig, plan_episode

CSV_COLUMNS = ("domain", "param", "value", "seed", "rules",
               "discounted_return", "wall_time_s", "steps")
CSV_META = "# std convention: sample (ddof=1); rules column: on/off"

_SWEEP_PARAMS = ("particles", "grid_size", "path_length")


def parse_kv(text: str) -> dict[str, str]:
    """Parse the key-value config format (``key = value``, # comments)."""
    out: dict[str, str] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {line_no}: expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        out[key.strip()] = value.strip()
    return out


@dataclass
class ExperimentSpec:
    domain: str
    param: str
    values: tuple[int, ...]
    episodes: int = 25
    rule_file: str | None = None  # None: shipped default rules
    base: dict[str, Any] = field(default_factory=dict)
    seed_base: int = 0

    def __post_init__(self):
        if self.param not in _SWEEP_PARAMS:
            raise ValueError(f"unknown sweep parameter {self.param!r}")
        if self.episodes < 1:
            raise ValueError("episodes must be >= 1")
        if list(self.values) != sorted(set(self.values)) or not self.values:
            raise ValueError("sweep values must be strictly increasing")


def load_spec(path: str | Path) -> ExperimentSpec:
    kv = parse_kv(Path(path).read_text())
    known = {"domain", "param", "values", "episodes", "rule_file", "seed_base"}
    base = {k: v for k, v in kv.items() if k not in known}
    return ExperimentSpec(
        domain=kv["domain"],
        param=kv["param"],
        values=tuple(int(v) for v in kv["values"].split()),
        episodes=int(kv.get("episodes", 25)),
        rule_file=kv.get("rule_file"),
        base=base,
        seed_base=int(kv.get("seed_base", 0)),
    )


@dataclass(frozen=True)
class ResultRow:
    domain: str
    param: str
    value: int
    seed: int
    rules: bool
    discounted_return: float  # NaN marks an error row
    wall_time_s: float
    steps: int


def _episode_task(args) -> ResultRow:
    (domain_name, param, value, seed, rules_on, rules_program, options) = args
    start = time.perf_counter()
    try:
        options = dict(options)
        sims = int(options.pop("simulations", 4096))
        particles = int(options.pop("particles", sims))
        if param == "particles":
            sims = particles = value
        elif param == "grid_size":
            options["grid_size"] = value
        elif param == "path_length":
            options["path_length"] = value
        depth = int(options.pop("rollout_depth_limit", 90))
        c = options.pop("exploration_constant", None)
        domain = make_instance(domain_name, seed, options)
        config = PlannerConfig(
            num_simulations=sims, num_particles=particles,
            exploration_constant=float(c) if c is not None else None,
            rollout_depth_limit=depth, rules_enabled=rules_on)
        trace = plan_episode(domain, config, rules_program if rules_on else None,
                             seed)
        return ResultRow(domain_name, param, value, seed, rules_on,
                         trace.discounted_return,
                         time.perf_counter() - start, len(trace.steps))
    except Exception:
        return ResultRow(domain_name, param, value, seed, rules_on,
                         float("nan"), time.perf_counter() - start, -1)


def run_experiment(spec: ExperimentSpec, jobs: int = 1) -> list[ResultRow]:
    """Run the sweep: per value and seed, paired episodes with rules off and on."""
    if spec.rule_file is not None:
        rules = parse_program(Path(spec.rule_file).read_text())
    else:
        rules = load_default_rules(spec.domain)
    tasks = []
    base = {k: v for k, v in spec.base.items()}
    for value in spec.values:
        for ep in range(spec.episodes):
            seed = spec.seed_base + ep
            for rules_on in (False, True):
                tasks.append((spec.domain, spec.param, value, seed, rules_on,
                              rules, base))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_episode_task, tasks))
    return [_episode_task(t) for t in tasks]


def write_rows(rows: Sequence[ResultRow], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(CSV_META + "\n")
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for r in rows:
            writer.writerow([r.domain, r.param, r.value, r.seed,
                             "on" if r.rules else "off",
                             repr(r.discounted_return), repr(r.wall_time_s),
                             r.steps])


def read_rows(path: str | Path) -> list[ResultRow]:
    rows = []
    with open(path, newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    for rec in csv.DictReader(lines):
        rows.append(ResultRow(rec["domain"], rec["param"], int(rec["value"]),
                              int(rec["seed"]), rec["rules"] == "on",
                              float(rec["discounted_return"]),
                              float(rec["wall_time_s"]), int(rec["steps"])))
    return rows


@dataclass(frozen=True)
class GroupStats:
    mean: float
    std: float  # sample (ddof=1) convention; 0 for singleton groups
    count: int


@dataclass(frozen=True)
class Improvement:
    """Growth of discounted return: (mean_rules - mean_plain) / |mean_plain|."""

    ratio: float | None  # None when |mean_plain| is below the division guard
    ci_low: float | None
    ci_high: float | None


def _valid(rows: Sequence[ResultRow]) -> list[ResultRow]:
    return [r for r in rows if not math.isnan(r.discounted_return)]


def aggregate(rows: Sequence[ResultRow], *, bootstrap_samples: int = 1000,
              ci: float = 0.90, bootstrap_seed: int = 0, eps: float = 1e-9,
              ) -> tuple[dict[tuple[int, bool], GroupStats], dict[int, Improvement]]:
    """Per-(value, arm) summary stats and the per-value improvement ratio with
    a paired bootstrap confidence interval."""
    by_group: dict[tuple[int, bool], list[float]] = {}
    paired: dict[int, dict[int, dict[bool, float]]] = {}
    for r in _valid(rows):
        by_group.setdefault((r.value, r.rules), []).append(r.discounted_return)
        paired.setdefault(r.value, {}).setdefault(r.seed, {})[r.rules] = \
            r.discounted_return

    groups = {}
    for key, vals in by_group.items():
        arr = np.asarray(vals)
        std = float(arr.std(ddof=1)) if len(arr) > 1 else 0.0
        groups[key] = GroupStats(float(arr.mean()), std, len(arr))

    rng = np.random.default_rng(bootstrap_seed)
    improvements: dict[int, Improvement] = {}
    alpha = (1.0 - ci) / 2.0
    for value, by_seed in paired.items():
        pairs = np.asarray([(d[False], d[True]) for d in by_seed.values()
                            if False in d and True in d])
        if len(pairs) == 0:
            improvements[value] = Improvement(None, None, None)
            continue

        def ratio(sample: np.ndarray) -> float | None:
            mean_plain = sample[:, 0].mean()
            if abs(mean_plain) < eps:
                return None
            return float((sample[:, 1].mean() - mean_plain) / abs(mean_plain))

        point = ratio(pairs)
        if point is None:
            improvements[value] = Improvement(None, None, None)
            continue
        resampled = []
        for _ in range(bootstrap_samples):
            idx = rng.integers(0, len(pairs), size=len(pairs))
            r = ratio(pairs[idx])
            if r is not None:
                resampled.append(r)
        if resampled:
            low = float(np.quantile(resampled, alpha))
            high = float(np.quantile(resampled, 1.0 - alpha))
        else:
            low = high = None
        improvements[value] = Improvement(point, low, high)
    return groups, improvements
