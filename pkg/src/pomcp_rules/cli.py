"""Command-line entry point."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bench as bench_mod
from .defaults import load_default_rules
from .domains import make_instance
from .ilp import export_ilasp_tasks, make_cdpis
from .logic.engine import evaluate, suggested_actions
from .logic.metrics import rule_distance
from .logic.parser import parse_facts, parse_program
from .planner import PlannerConfig, plan_episode
from .traces import filter_traces, read_trace, write_trace


class _UsageExit(Exception):
    def __init__(self, message: str):
        super().__init__(message)


class _Parser(argparse.ArgumentParser):
    # usage problems exit 1, runtime failures exit 2
    def error(self, message):
        raise _UsageExit(message)


def _add_instance_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--domain", choices=("rocksample", "battery"), help="domain name")
    p.add_argument("--config", help="instance config file (key = value lines)")
    p.add_argument("--grid-size", type=int, help="rocksample grid size N")
    p.add_argument("--num-rocks", type=int, help="rocksample rock count M")
    p.add_argument("--path-length", type=int, help="battery path length")
    p.add_argument("--sims", type=int, default=4096, help="simulations per step")
    p.add_argument("--particles", type=int, help="belief particles (default: --sims)")
    p.add_argument("--depth", type=int, default=90, help="simulation depth limit")
    p.add_argument("--c", type=float, dest="exploration",
                   help="UCT exploration constant (default: domain reward span)")


def _instance_options(args) -> tuple[str, dict]:
    options: dict = {}
    if args.config:
        kv = bench_mod.parse_kv(Path(args.config).read_text())
        options.update(kv)
    for key in ("grid_size", "num_rocks", "path_length"):
        value = getattr(args, key)
        if value is not None:
            options[key] = value
    domain = args.domain or options.pop("domain", None)
    if domain is None:
        raise _UsageExit("--domain (or a config file naming one) is required")
    options.pop("seed", None)
    return domain, options


def _planner_config(args, rules_enabled: bool) -> PlannerConfig:
    particles = args.particles if args.particles is not None else args.sims
    return PlannerConfig(num_simulations=args.sims, num_particles=particles,
                         exploration_constant=args.exploration,
                         rollout_depth_limit=args.depth,
                         rules_enabled=rules_enabled)


def _load_rules(args, domain: str):
    if getattr(args, "no_rules", False) or getattr(args, "rules", None) is None:
        return None
    if args.rules == "default":
        return load_default_rules(domain)
    return parse_program(Path(args.rules).read_text())


def _cmd_run(args) -> int:
    domain_name, options = _instance_options(args)
    rules = _load_rules(args, domain_name)
    domain = make_instance(domain_name, args.seed, options)
    config = _planner_config(args, rules is not None)
    trace = plan_episode(domain, config, rules, args.seed)
    print(f"domain={trace.domain} seed={trace.seed} steps={len(trace.steps)} "
          f"discounted_return={trace.discounted_return:.6f}")
    for step in trace.steps:
        print(f"  t={step.t} action={step.action} reward={step.reward:g}")
    if args.out:
        write_trace(trace, args.out)
    return 0


def _cmd_gen_traces(args) -> int:
    domain_name, options = _instance_options(args)
    rules = _load_rules(args, domain_name)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for i in range(args.count):
        seed = args.seed_base + i
        domain = make_instance(domain_name, seed, options)
        config = _planner_config(args, rules is not None)
        trace = plan_episode(domain, config, rules, seed)
        write_trace(trace, out_dir / f"trace_{seed:05d}.txt")
        print(f"trace_{seed:05d}.txt return={trace.discounted_return:.4f} "
              f"steps={len(trace.steps)}")
    return 0


def _cmd_export_ilasp(args) -> int:
    domain_name, options = _instance_options(args)
    paths = sorted(Path(args.traces).glob("*.txt"))
    if not paths:
        raise FileNotFoundError(f"no trace files under {args.traces}")
    traces = [read_trace(p) for p in paths]
    kept = filter_traces(traces)
    domain = make_instance(domain_name, 0, options)
    groundings = domain.action_groundings()
    cdpis = []
    for k, trace in enumerate(kept):
        for step in trace.steps:
            cdpis.extend(make_cdpis(step, groundings, prefix=f"t{k}_s"))
    biases = {pred: domain.ilasp_mode_bias(pred) for pred in groundings}
    tasks = export_ilasp_tasks(cdpis, domain.ilasp_background(), biases)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for pred, text in tasks.items():
        (out_dir / f"{pred}.las").write_text(text)
    print(f"kept {len(kept)}/{len(traces)} traces, wrote {len(tasks)} task files "
          f"({len(cdpis)} CDPIs)")
    return 0


def _cmd_bench(args) -> int:
    spec = bench_mod.load_spec(args.spec)
    rows = bench_mod.run_experiment(spec, jobs=args.jobs)
    bench_mod.write_rows(rows, args.out)
    groups, improvements = bench_mod.aggregate(rows)
    for (value, rules_on), stats in sorted(groups.items()):
        arm = "rules" if rules_on else "plain"
        print(f"value={value} arm={arm} mean={stats.mean:.4f} "
              f"std={stats.std:.4f} n={stats.count}")
    for value, imp in sorted(improvements.items()):
        if imp.ratio is None:
            print(f"value={value} improvement=undefined")
        else:
            print(f"value={value} improvement={imp.ratio:+.4f} "
                  f"ci90=[{imp.ci_low:+.4f}, {imp.ci_high:+.4f}]")
    return 0


def _cmd_rule_check(args) -> int:
    program = parse_program(Path(args.rules_file).read_text())
    facts = parse_facts(Path(args.facts_file).read_text())
    answer = evaluate(program, facts)
    print("answer set:")
    for atom in sorted(str(a) for a in answer):
        print(f"  {atom}")
    if args.domain:
        vocab = make_instance(args.domain, 0, {}).action_vocabulary
    else:
        vocab = program.head_predicates()
    suggested = suggested_actions(program, facts, vocab)
    print("suggested actions:")
    for atom in sorted(str(a) for a in suggested):
        print(f"  {atom}")
    return 0


def _cmd_rule_diff(args) -> int:
    left = parse_program(Path(args.rules_a).read_text())
    right = parse_program(Path(args.rules_b).read_text())
    by_head = {}
    for rule in right.rules:
        by_head.setdefault(rule.head.predicate, []).append(rule)
    for rule in left.rules:
        peers = by_head.get(rule.head.predicate)
        if peers:
            d = min(rule_distance(rule, peer) for peer in peers)
            print(f"{rule.head.predicate}: {d}")
        else:
            print(f"{rule.head.predicate}: no counterpart")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="pomcp-rules",
                     description="POMCP planning with logic-rule action priors")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="plan one episode and print its summary")
    _add_instance_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rules", help="rule file path, or 'default' for shipped rules")
    p.add_argument("--out", help="also write the trace to this file")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("gen-traces", help="record seeded traces to a directory")
    _add_instance_flags(p)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--seed-base", type=int, default=0)
    p.add_argument("--rules", help="rule file path, or 'default'")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_gen_traces)

    p = sub.add_parser("export-ilasp",
                       help="filter traces and write per-action ILASP tasks")
    _add_instance_flags(p)
    p.add_argument("--traces", required=True, help="directory of trace files")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_export_ilasp)

    p = sub.add_parser("bench", help="run an experiment spec to CSV")
    p.add_argument("--spec", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("rule-check",
                       help="evaluate a rule file against a facts file")
    p.add_argument("rules_file")
    p.add_argument("facts_file")
    p.add_argument("--domain", choices=("rocksample", "battery"))
    p.set_defaults(func=_cmd_rule_check)

    p = sub.add_parser("rule-diff",
                       help="rule distances between two files' same-head rules")
    p.add_argument("rules_a")
    p.add_argument("rules_b")
    p.set_defaults(func=_cmd_rule_diff)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageExit as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 1
    try:
        return args.func(args)
    except _UsageExit as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # runtime failure
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
