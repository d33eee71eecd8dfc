"""Structural distance between causal rules."""
from __future__ import annotations

from .terms import Guard, Literal, Rule, is_variable


def _signature(rule: Rule) -> dict[tuple, object]:
    """Map each head atom, body literal and guard bound to a canonical key.

    Variables are renamed by first occurrence (head first, then body in source
    order) so e.g. ``dist(R,V)`` and ``dist(R,D)`` compare equal.  A guard is
    keyed by (variable, side) with the numeric bound as its value, so two rules
    bounding the same variable in the same direction share a key even when the
    bounds differ.
    """
    names: dict[str, str] = {}

    def canon(term):
        if is_variable(term):
            return names.setdefault(term, f"_{len(names)}")
        return term

    items: dict[tuple, object] = {}
    items[("head", rule.head.predicate,
           tuple(canon(a) for a in rule.head.args))] = None
    for entry in rule.body:
        if isinstance(entry, Literal):
            key = ("atom", entry.atom.predicate,
                   tuple(canon(a) for a in entry.atom.args), entry.negated)
            items[key] = None
        else:
            assert isinstance(entry, Guard)
            var = canon(entry.variable)
            if entry.lower is not None:
                items[("guard", var, "lower")] = entry.lower
            if entry.upper is not None:
                items[("guard", var, "upper")] = entry.upper
    return items


def rule_distance(r1: Rule, r2: Rule) -> int:
    """Symmetric-difference size of the two rules' atom-and-guard sets.

    Guards sharing variable and direction but differing in bound contribute
    one to the distance (a single union element outside the intersection).
    """
    a1 = _signature(r1)
    a2 = _signature(r2)
    union = set(a1) | set(a2)
    inter = sum(1 for k in a1 if k in a2 and a1[k] == a2[k])
    return len(union) - inter
