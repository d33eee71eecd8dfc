"""POMCP online POMDP planning with particle beliefs and logic-rule priors."""
from .core import (
    BeliefCollapse,
    ParticleBelief,
    belief_update,
    discounted_return,
    marginal_fraction,
)
from .defaults import default_rules_text, load_default_rules
from .ilp import Cdpi, export_ilasp, export_ilasp_tasks, make_cdpis, read_ilasp
from .logic import (
    GroundAtom,
    Program,
    Rule,
    WeakConstraint,
    coverage,
    covers,
    evaluate,
    parse_facts,
    parse_program,
    parse_rule,
    prefer,
    rule_distance,
    suggested_actions,
)
from .planner import (
    Planner,
    PlannerConfig,
    SearchNode,
    apply_bias,
    ground_node_features,
    plan_episode,
    search,
    uct_value,
)
from .traces import Trace, TraceStep, filter_traces, read_trace, write_trace

__version__ = "0.1.0"

__all__ = [
    "BeliefCollapse",
    "Cdpi",
    "GroundAtom",
    "ParticleBelief",
    "Planner",
    "PlannerConfig",
    "Program",
    "Rule",
    "SearchNode",
    "Trace",
    "TraceStep",
    "WeakConstraint",
    "apply_bias",
    "belief_update",
    "coverage",
    "covers",
    "default_rules_text",
    "discounted_return",
    "evaluate",
    "export_ilasp",
    "export_ilasp_tasks",
    "filter_traces",
    "ground_node_features",
    "load_default_rules",
    "make_cdpis",
    "marginal_fraction",
    "parse_facts",
    "parse_program",
    "parse_rule",
    "plan_episode",
    "prefer",
    "read_ilasp",
    "read_trace",
    "rule_distance",
    "search",
    "suggested_actions",
    "uct_value",
    "write_trace",
]
