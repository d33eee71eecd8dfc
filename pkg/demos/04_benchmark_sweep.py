"""Run a tiny paired-seed sweep and print aggregate statistics.

Run as: python3 demos/04_benchmark_sweep.py
Writes demos/out/battery_sweep.csv; render it with the plot-reports package:
    plot-reports --kind sweep --csv demos/out/battery_sweep.csv --out sweep.png
"""
from pathlib import Path

from pomcp_rules.bench import ExperimentSpec, aggregate, run_experiment, write_rows

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

spec = ExperimentSpec(domain="battery", param="particles",
                      values=(128, 256, 512), episodes=8,
                      base={"path_length": "20"})
rows = run_experiment(spec)
csv_path = OUT / "battery_sweep.csv"
write_rows(rows, csv_path)
print(f"wrote {csv_path} ({len(rows)} rows)")

groups, improvements = aggregate(rows)
for (value, rules_on), stats in sorted(groups.items()):
    arm = "rules" if rules_on else "plain"
    print(f"particles={value:4d} {arm}: mean {stats.mean:+.3f} "
          f"std {stats.std:.3f} (n={stats.count})")
for value, imp in sorted(improvements.items()):
    if imp.ratio is None:
        print(f"particles={value:4d} improvement undefined (baseline near zero)")
    else:
        print(f"particles={value:4d} improvement {imp.ratio:+.3f} "
              f"ci90 [{imp.ci_low:+.3f}, {imp.ci_high:+.3f}]")
