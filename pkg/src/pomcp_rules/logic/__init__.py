"""Logic layer: rule parsing, stratified evaluation, preferences, metrics."""
from .engine import (
    AnswerSet,
    coverage,
    covers,
    evaluate,
    prefer,
    resolve,
    suggested_actions,
)
from .metrics import rule_distance
from .parser import (
    RecursiveProgramError,
    RuleError,
    RuleSyntaxError,
    UnsafeRuleError,
    parse_facts,
    parse_program,
    parse_rule,
)
from .terms import (
    AtomTemplate,
    GroundAtom,
    Guard,
    Literal,
    Program,
    Rule,
    WeakConstraint,
    format_program,
)

__all__ = [
    "AnswerSet",
    "AtomTemplate",
    "GroundAtom",
    "Guard",
    "Literal",
    "Program",
    "RecursiveProgramError",
    "Rule",
    "RuleError",
    "RuleSyntaxError",
    "UnsafeRuleError",
    "WeakConstraint",
    "coverage",
    "covers",
    "evaluate",
    "format_program",
    "parse_facts",
    "parse_program",
    "parse_rule",
    "prefer",
    "resolve",
    "rule_distance",
    "suggested_actions",
]
