"""Plan full episodes with and without the shipped rule prior.

Run as: python3 demos/02_plan_episode.py
"""
from pomcp_rules import PlannerConfig, load_default_rules, plan_episode
from pomcp_rules.domains import make_instance

SEED = 3
SIMS = 2048

rules = load_default_rules("rocksample")

for rules_on in (False, True):
    domain = make_instance("rocksample", SEED, {"grid_size": 12, "num_rocks": 4})
    config = PlannerConfig(num_simulations=SIMS, num_particles=SIMS,
                           rules_enabled=rules_on)
    trace = plan_episode(domain, config, rules if rules_on else None, SEED)
    label = "with rules" if rules_on else "plain     "
    print(f"{label}: {len(trace.steps):3d} steps, "
          f"discounted return {trace.discounted_return:+.3f}")
    for step in trace.steps[:6]:
        print(f"    t={step.t} {step.action} reward {step.reward:+g}")
    if len(trace.steps) > 6:
        print("    ...")
