"""Syntax tree for the stratified rule fragment: atoms, rules, weak constraints."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping, Union

Term = Union[int, str]  # int constant or variable name (uppercase first letter)


def is_variable(term: Term) -> bool:
    return isinstance(term, str)


@dataclass(frozen=True)
class GroundAtom:
    """A predicate applied to integer constants, e.g. ``guess(1, 70)``."""

    predicate: str
    args: tuple[int, ...] = ()

    def __str__(self) -> str:
        if not self.args:
            return self.predicate
        return f"{self.predicate}({','.join(str(a) for a in self.args)})"


@dataclass(frozen=True)
class AtomTemplate:
    """A predicate over variables and constants, e.g. ``guess(R, V)``."""

    predicate: str
    args: tuple[Term, ...] = ()

    def variables(self) -> set[str]:
        return {a for a in self.args if is_variable(a)}

    def is_ground(self) -> bool:
        return not any(is_variable(a) for a in self.args)

    def match(self, atom: GroundAtom, binding: Mapping[str, int]) -> dict[str, int] | None:
        """Extend ``binding`` so the template equals ``atom``, or None."""
        if atom.predicate != self.predicate or len(atom.args) != len(self.args):
            return None
        out: dict[str, int] | None = None
        for t, v in zip(self.args, atom.args):
            if is_variable(t):
                bound = binding.get(t) if out is None or t not in out else out[t]
                if bound is None:
                    if out is None:
                        out = dict(binding)
                    out[t] = v
                elif bound != v:
                    return None
            elif t != v:
                return None
        return dict(binding) if out is None else out

    def substitute(self, binding: Mapping[str, int]) -> GroundAtom:
        return GroundAtom(self.predicate, tuple(
            binding[a] if is_variable(a) else a for a in self.args))

    def __str__(self) -> str:
        if not self.args:
            return self.predicate
        return f"{self.predicate}({','.join(str(a) for a in self.args)})"


@dataclass(frozen=True)
class Literal:
    """A positive or negation-as-failure body literal."""

    atom: AtomTemplate
    negated: bool = False

    def __str__(self) -> str:
        return f"not {self.atom}" if self.negated else str(self.atom)


@dataclass(frozen=True)
class Guard:
    """An interval bound on one variable; ``V > 60`` is stored as lower=61."""

    variable: str
    lower: int | None = None
    upper: int | None = None

    def holds(self, value: int) -> bool:
        if self.lower is not None and value < self.lower:
            return False
        if self.upper is not None and value > self.upper:
            return False
        return True

    def __str__(self) -> str:
        if self.lower is not None and self.upper is not None:
            if self.lower == self.upper:
                return f"{self.variable} = {self.lower}"
            return f"{self.lower} <= {self.variable} <= {self.upper}"
        if self.lower is not None:
            return f"{self.variable} >= {self.lower}"
        return f"{self.variable} <= {self.upper}"


BodyItem = Union[Literal, Guard]


@dataclass(frozen=True)
class Rule:
    head: AtomTemplate
    body: tuple[BodyItem, ...] = ()

    def positive_atoms(self) -> Iterator[AtomTemplate]:
        for item in self.body:
            if isinstance(item, Literal) and not item.negated:
                yield item.atom

    def __str__(self) -> str:
        if not self.body:
            return f"{self.head}."
        return f"{self.head} :- {', '.join(str(b) for b in self.body)}."


@dataclass(frozen=True)
class WeakConstraint:
    """A soft preference ``:~ body. [w@l, terms]`` penalizing body groundings."""

    body: tuple[BodyItem, ...]
    weight: Term  # integer constant or variable name
    level: int = 1
    negate_weight: bool = False  # weight written as -V
    terms: tuple[Term, ...] = ()

    def positive_atoms(self) -> Iterator[AtomTemplate]:
        for item in self.body:
            if isinstance(item, Literal) and not item.negated:
                yield item.atom

    def weight_value(self, binding: Mapping[str, int]) -> int:
        w = binding[self.weight] if is_variable(self.weight) else self.weight
        return -w if self.negate_weight else w

    def __str__(self) -> str:
        w = f"-{self.weight}" if self.negate_weight else str(self.weight)
        parts = [f"{w}@{self.level}"] + [str(t) for t in self.terms]
        body = ", ".join(str(b) for b in self.body)
        return f":~ {body}. [{', '.join(parts)}]"


@dataclass(frozen=True)
class Program:
    rules: tuple[Rule, ...] = ()
    weak_constraints: tuple[WeakConstraint, ...] = ()
    # background knowledge: declared integer ranges per variable sort
    variable_domains: tuple[tuple[str, tuple[int, int]], ...] = ()

    def head_predicates(self) -> set[str]:
        return {r.head.predicate for r in self.rules}

    def __str__(self) -> str:
        lines = [str(r) for r in self.rules]
        lines += [str(w) for w in self.weak_constraints]
        return "\n".join(lines) + ("\n" if lines else "")


def format_program(program: Program) -> str:
    """Render a program in the rule-file grammar; reparsing yields an equal Program."""
    return str(program)
