"""Parser for the rule-file grammar (one statement per line, % comments)."""
from __future__ import annotations

import re

from .terms import (
    AtomTemplate,
    GroundAtom,
    Guard,
    Literal,
    Program,
    Rule,
    WeakConstraint,
)


class RuleError(ValueError):
    """Base class for rule-file problems."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        where = ""
        if line is not None:
            where = f" at line {line}" + (f", column {col}" if col is not None else "")
        super().__init__(message + where)


class RuleSyntaxError(RuleError):
    pass


class UnsafeRuleError(RuleError):
    """A head or comparison variable is not bound by a positive body atom."""


class RecursiveProgramError(RuleError):
    """A predicate (transitively) depends on itself; only the non-recursive
    stratified fragment is supported."""


_TOKEN_RE = re.compile(
    r"""
      (?P<ws>\s+)
    | (?P<arrow>:-|:~)
    | (?P<cmp><=|>=|<|>|=)
    | (?P<int>-?\d+)
    | (?P<name>[a-z_][A-Za-z0-9_]*)
    | (?P<var>[A-Z][A-Za-z0-9_]*)
    | (?P<punct>[().,;\[\]@-])
    """,
    re.VERBOSE,
)


class _Tokens:
    def __init__(self, text: str, line_no: int):
        self.line_no = line_no
        self.toks: list[tuple[str, str, int]] = []  # (kind, value, col)
        pos = 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if m is None:
                raise RuleSyntaxError(
                    f"unexpected character {text[pos]!r}", line_no, pos + 1)
            pos = m.end()
            kind = m.lastgroup
            if kind != "ws":
                self.toks.append((kind, m.group(), m.start() + 1))
        self.i = 0

    def peek(self) -> tuple[str, str, int] | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self, expect_kind: str | None = None, expect_val: str | None = None):
        tok = self.peek()
        if tok is None:
            raise RuleSyntaxError("unexpected end of statement", self.line_no,
                                  self.toks[-1][2] if self.toks else 1)
        kind, val, col = tok
        if expect_kind is not None and kind != expect_kind:
            raise RuleSyntaxError(f"expected {expect_kind}, found {val!r}",
                                  self.line_no, col)
        if expect_val is not None and val != expect_val:
            raise RuleSyntaxError(f"expected {expect_val!r}, found {val!r}",
                                  self.line_no, col)
        self.i += 1
        return tok

    def at(self, kind: str, val: str | None = None) -> bool:
        tok = self.peek()
        return tok is not None and tok[0] == kind and (val is None or tok[1] == val)

    def done(self) -> bool:
        return self.i >= len(self.toks)


def _parse_atom(toks: _Tokens) -> AtomTemplate:
    _, name, _ = toks.next("name")
    args: list[int | str] = []
    if toks.at("punct", "("):
        toks.next()
        while True:
            tok = toks.peek()
            if tok is None:
                raise RuleSyntaxError("unterminated argument list", toks.line_no)
            kind, val, col = tok
            if kind == "int":
                args.append(int(val))
            elif kind == "var":
                args.append(val)
            else:
                raise RuleSyntaxError(f"bad atom argument {val!r}", toks.line_no, col)
            toks.next()
            if toks.at("punct", ","):
                toks.next()
                continue
            toks.next("punct", ")")
            break
    return AtomTemplate(name, tuple(args))


def _guard_from_cmp(var: str, op: str, bound: int, toks: _Tokens) -> Guard:
    if op == ">=":
        return Guard(var, lower=bound)
    if op == "<=":
        return Guard(var, upper=bound)
    if op == ">":
        return Guard(var, lower=bound + 1)
    if op == "<":
        return Guard(var, upper=bound - 1)
    if op == "=":
        return Guard(var, lower=bound, upper=bound)
    raise RuleSyntaxError(f"unsupported comparison {op!r}", toks.line_no)


def _parse_literal(toks: _Tokens):
    tok = toks.peek()
    if tok is None:
        raise RuleSyntaxError("expected a literal", toks.line_no)
    kind, val, col = tok
    if kind == "name" and val == "not":
        toks.next()
        return Literal(_parse_atom(toks), negated=True)
    if kind == "name":
        return Literal(_parse_atom(toks))
    if kind == "var":
        toks.next()
        _, op, _ = toks.next("cmp")
        _, num, _ = toks.next("int")
        return _guard_from_cmp(val, op, int(num), toks)
    if kind == "int":
        # c1 <= V <= c2
        toks.next()
        lo = int(val)
        toks.next("cmp", "<=")
        _, var, _ = toks.next("var")
        toks.next("cmp", "<=")
        _, num, _ = toks.next("int")
        return Guard(var, lower=lo, upper=int(num))
    raise RuleSyntaxError(f"expected a literal, found {val!r}", toks.line_no, col)


def _parse_body(toks: _Tokens) -> tuple:
    items = [_parse_literal(toks)]
    while toks.at("punct", ",") or toks.at("punct", ";"):
        toks.next()
        items.append(_parse_literal(toks))
    return tuple(items)


def _parse_weight(toks: _Tokens) -> tuple[int | str, bool]:
    if toks.at("punct", "-"):
        toks.next()
        _, var, _ = toks.next("var")
        return var, True
    tok = toks.peek()
    if tok is not None and tok[0] == "var":
        toks.next()
        return tok[1], False
    _, num, _ = toks.next("int")
    return int(num), False


def _parse_statement(toks: _Tokens) -> Rule | WeakConstraint:
    if toks.at("arrow", ":~"):
        toks.next()
        body = _parse_body(toks)
        toks.next("punct", ".")
        toks.next("punct", "[")
        weight, neg = _parse_weight(toks)
        toks.next("punct", "@")
        _, lvl, _ = toks.next("int")
        terms: list[int | str] = []
        while toks.at("punct", ","):
            toks.next()
            tok = toks.peek()
            if tok is not None and tok[0] == "var":
                terms.append(tok[1])
                toks.next()
            else:
                _, num, _ = toks.next("int")
                terms.append(int(num))
        toks.next("punct", "]")
        if not toks.done():
            raise RuleSyntaxError("trailing input after weak constraint",
                                  toks.line_no, toks.peek()[2])
        return WeakConstraint(body, weight, int(lvl), neg, tuple(terms))
    head = _parse_atom(toks)
    body: tuple = ()
    if toks.at("arrow", ":-"):
        toks.next()
        body = _parse_body(toks)
    toks.next("punct", ".")
    if not toks.done():
        raise RuleSyntaxError("trailing input after rule", toks.line_no, toks.peek()[2])
    return Rule(head, body)


def _check_safety(stmt: Rule | WeakConstraint, line_no: int) -> None:
    bound: set[str] = set()
    for atom in stmt.positive_atoms():
        bound |= atom.variables()
    need: set[str] = set()
    if isinstance(stmt, Rule):
        need |= stmt.head.variables()
    else:
        if isinstance(stmt.weight, str):
            need.add(stmt.weight)
        need |= {t for t in stmt.terms if isinstance(t, str)}
    for item in stmt.body:
        if isinstance(item, Guard):
            need.add(item.variable)
    unbound = need - bound
    if unbound:
        raise UnsafeRuleError(
            f"variable(s) {', '.join(sorted(unbound))} not bound by a positive body atom",
            line_no)


def _check_nonrecursive(rules: list[tuple[Rule, int]]) -> None:
    deps: dict[str, set[str]] = {}
    for rule, _ in rules:
        body_preds = {item.atom.predicate for item in rule.body
                      if isinstance(item, Literal)}
        deps.setdefault(rule.head.predicate, set()).update(body_preds)

    visiting: set[str] = set()
    done: set[str] = set()

    def visit(pred: str, line: int) -> None:
        if pred in done:
            return
        if pred in visiting:
            raise RecursiveProgramError(f"predicate {pred!r} depends on itself", line)
        visiting.add(pred)
        for dep in deps.get(pred, ()):
            visit(dep, line)
        visiting.discard(pred)
        done.add(pred)

    for rule, line in rules:
        visit(rule.head.predicate, line)


def parse_program(text: str) -> Program:
    """Parse a rule file into a Program.

    Raises RuleSyntaxError, UnsafeRuleError or RecursiveProgramError.
    """
    rules: list[tuple[Rule, int]] = []
    constraints: list[WeakConstraint] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("%", 1)[0].strip()
        if not line:
            continue
        toks = _Tokens(line, line_no)
        stmt = _parse_statement(toks)
        _check_safety(stmt, line_no)
        if isinstance(stmt, Rule):
            rules.append((stmt, line_no))
        else:
            constraints.append(stmt)
    _check_nonrecursive(rules)
    return Program(tuple(r for r, _ in rules), tuple(constraints))


def parse_rule(text: str) -> Rule:
    """Parse a single causal rule."""
    program = parse_program(text)
    if len(program.rules) != 1 or program.weak_constraints:
        raise RuleSyntaxError("expected exactly one causal rule")
    return program.rules[0]


def parse_facts(text: str) -> set[GroundAtom]:
    """Parse a facts file: ground atoms separated by whitespace, commas or periods."""
    facts: set[GroundAtom] = set()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("%", 1)[0].strip()
        if not line:
            continue
        toks = _Tokens(line, line_no)
        while not toks.done():
            atom = _parse_atom(toks)
            if not atom.is_ground():
                raise RuleSyntaxError(f"fact {atom} is not ground", line_no)
            facts.add(atom.substitute({}))
            while toks.at("punct", ",") or toks.at("punct", "."):
                toks.next()
    return facts
