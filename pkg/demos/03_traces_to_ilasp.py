"""Record traces, keep the good half, and export ILASP learning tasks.

Run as: python3 demos/03_traces_to_ilasp.py
Writes the task files under demos/out/.
"""
from pathlib import Path

from pomcp_rules import PlannerConfig, filter_traces, make_cdpis, plan_episode
from pomcp_rules.domains import make_instance
from pomcp_rules.ilp import export_ilasp_tasks

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

# Ten plain-planner episodes on small instances serve as training traces.
traces = []
for seed in range(10):
    domain = make_instance("rocksample", seed, {"grid_size": 8, "num_rocks": 3})
    config = PlannerConfig(num_simulations=1024, num_particles=1024)
    traces.append((seed, plan_episode(domain, config, None, seed)))

kept = set(filter_traces([t for _, t in traces]))
print(f"kept {len(kept)}/{len(traces)} traces at or above the mean return")

cdpis = []
for seed, trace in traces:
    if trace not in kept:
        continue
    groundings = make_instance("rocksample", seed,
                               {"grid_size": 8, "num_rocks": 3}).action_groundings()
    for step in trace.steps:
        cdpis.extend(make_cdpis(step, groundings, prefix=f"t{seed}_s"))
print(f"{len(cdpis)} CDPIs from the kept steps")

domain = make_instance("rocksample", 0, {"grid_size": 8, "num_rocks": 3})
biases = {pred: domain.ilasp_mode_bias(pred)
          for pred in domain.action_groundings()}
tasks = export_ilasp_tasks(cdpis, domain.ilasp_background(), biases)
for pred, text in tasks.items():
    path = OUT / f"{pred}.las"
    path.write_text(text)
    print(f"wrote {path} ({text.count('#pos')} examples)")
