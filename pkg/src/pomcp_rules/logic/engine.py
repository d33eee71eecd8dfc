"""Stratified forward-chaining evaluation, weak-constraint preferences and
CDPI coverage for the non-recursive rule fragment."""
from __future__ import annotations

from collections import defaultdict
from typing import Iterable, Iterator, Mapping, Sequence

from .terms import (
    AtomTemplate,
    GroundAtom,
    Guard,
    Literal,
    Program,
    Rule,
    WeakConstraint,
)

AnswerSet = frozenset[GroundAtom]

_EMPTY: dict[str, int] = {}


def _index(atoms: Iterable[GroundAtom]) -> dict[str, list[GroundAtom]]:
    idx: dict[str, list[GroundAtom]] = defaultdict(list)
    for a in atoms:
        idx[a.predicate].append(a)
    return idx


def _join(positives: Sequence[AtomTemplate], idx: Mapping[str, list[GroundAtom]],
          binding: dict[str, int], i: int = 0) -> Iterator[dict[str, int]]:
    if i == len(positives):
        yield binding
        return
    template = positives[i]
    for atom in idx.get(template.predicate, ()):
        extended = template.match(atom, binding)
        if extended is not None:
            yield from _join(positives, idx, extended, i + 1)


def _matches_any(template: AtomTemplate, idx: Mapping[str, list[GroundAtom]],
                 binding: Mapping[str, int]) -> bool:
    for atom in idx.get(template.predicate, ()):
        if template.match(atom, binding) is not None:
            return True
    return False


def _body_groundings(body: Sequence, idx: Mapping[str, list[GroundAtom]]
                     ) -> Iterator[dict[str, int]]:
    positives = [it.atom for it in body if isinstance(it, Literal) and not it.negated]
    guards = [it for it in body if isinstance(it, Guard)]
    negatives = [it.atom for it in body if isinstance(it, Literal) and it.negated]
    for binding in _join(positives, idx, _EMPTY):
        if all(g.holds(binding[g.variable]) for g in guards):
            if not any(_matches_any(n, idx, binding) for n in negatives):
                yield binding


def _rule_depth_order(rules: Sequence[Rule]) -> list[Rule]:
    by_head: dict[str, list[Rule]] = defaultdict(list)
    for r in rules:
        by_head[r.head.predicate].append(r)
    depth: dict[str, int] = {}

    def compute(pred: str) -> int:
        if pred in depth:
            return depth[pred]
        if pred not in by_head:
            depth[pred] = 0
            return 0
        depth[pred] = 0  # placeholder; program is acyclic by construction
        d = 1 + max((compute(item.atom.predicate)
                     for r in by_head[pred] for item in r.body
                     if isinstance(item, Literal)), default=0)
        depth[pred] = d
        return d

    order = list(range(len(rules)))
    order.sort(key=lambda i: compute(rules[i].head.predicate))
    return [rules[i] for i in order]


def evaluate(program: Program, facts: Iterable[GroundAtom]) -> AnswerSet:
    """The unique answer set: input facts closed under the program's rules.

    Rules are processed in dependency order of their head predicates, so
    negation-as-failure only ever consults fully derived predicates.
    """
    interp = set(facts)
    idx = _index(interp)
    for rule in _rule_depth_order(program.rules):
        derived = []
        for binding in _body_groundings(rule.body, idx):
            atom = rule.head.substitute(binding)
            if atom not in interp:
                derived.append(atom)
        for atom in derived:
            interp.add(atom)
            idx[atom.predicate].append(atom)
    return frozenset(interp)


def _constraint_mentions(wc: WeakConstraint, predicate: str) -> bool:
    return any(a.predicate == predicate for a in wc.positive_atoms())


def prefer(program: Program, answer: Iterable[GroundAtom],
           choice_predicate: str) -> set[GroundAtom]:
    """Rank the groundings of ``choice_predicate`` by weak-constraint cost.

    Each candidate's cost vector sums, per priority level, the weights of
    distinct constraint groundings whose bodies hold in ``answer`` and whose
    grounded body mentions the candidate.  Candidates minimizing the vector
    lexicographically (higher levels first) are returned; ties return all.
    """
    answer = set(answer)
    candidates = {a for a in answer if a.predicate == choice_predicate}
    if not candidates:
        return set()
    relevant = [wc for wc in program.weak_constraints
                if _constraint_mentions(wc, choice_predicate)]
    if not relevant:
        return set(candidates)

    idx = _index(answer)
    violations: dict[GroundAtom, set[tuple]] = {c: set() for c in candidates}
    levels: set[int] = {wc.level for wc in relevant}
    for wc in relevant:
        for binding in _body_groundings(wc.body, idx):
            weight = wc.weight_value(binding)
            terms = tuple(binding[t] if isinstance(t, str) else t for t in wc.terms)
            key = (wc.level, weight, terms)
            for atom_t in wc.positive_atoms():
                if atom_t.predicate == choice_predicate:
                    cand = atom_t.substitute(binding)
                    if cand in violations:
                        violations[cand].add(key)

    def cost_vector(cand: GroundAtom) -> tuple:
        per_level: dict[int, int] = defaultdict(int)
        for level, weight, _terms in violations[cand]:
            per_level[level] += weight
        return tuple(per_level[lvl] for lvl in sorted(levels, reverse=True))

    costs = {c: cost_vector(c) for c in candidates}
    best = min(costs.values())
    return {c for c, v in costs.items() if v == best}


def _constrained_heads(program: Program) -> list[str]:
    heads = program.head_predicates()
    mentioned = {a.predicate for wc in program.weak_constraints
                 for a in wc.positive_atoms()}
    targets = heads & mentioned
    if not targets:
        return []
    ordered = _rule_depth_order(program.rules)
    out: list[str] = []
    for rule in ordered:
        if rule.head.predicate in targets and rule.head.predicate not in out:
            out.append(rule.head.predicate)
    return out


def resolve(program: Program, facts: Iterable[GroundAtom]) -> AnswerSet:
    """Evaluate with weak-constraint preferences applied.

    Every rule-head predicate mentioned by a weak constraint is restricted to
    its preferred groundings before dependent rules fire, in dependency order.
    """
    rules = list(program.rules)
    current: set[GroundAtom] = set(facts)
    for pred in _constrained_heads(program):
        sub = Program(tuple(rules), program.weak_constraints)
        answer = evaluate(sub, current)
        preferred = prefer(sub, answer, pred)
        current |= preferred
        rules = [r for r in rules if r.head.predicate != pred]
    return evaluate(Program(tuple(rules), program.weak_constraints), current)


def suggested_actions(program: Program, facts: Iterable[GroundAtom],
                      action_vocabulary: Iterable[str]) -> set[GroundAtom]:
    """Derived atoms whose predicate names an action, with preferences applied."""
    vocab = set(action_vocabulary)
    facts = set(facts)
    return {a for a in resolve(program, facts) if a.predicate in vocab}


def covers(hypothesis: Program, example) -> bool:
    """Whether the hypothesis derives every inclusion and no exclusion of a CDPI."""
    answer = resolve(hypothesis, example.context)
    return (set(example.inclusions) <= answer
            and not (set(example.exclusions) & answer))


def coverage(hypothesis: Program, examples: Sequence) -> float:
    """Fraction of CDPIs covered by the hypothesis."""
    if not examples:
        return 0.0
    return sum(covers(hypothesis, e) for e in examples) / len(examples)
