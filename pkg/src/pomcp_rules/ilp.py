"""Turning trace steps into CDPI examples and exporting ILASP learning tasks."""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Sequence

from .logic.terms import GroundAtom
from .traces import TraceStep, _parse_atom_text

KIND_POSITIVE = "positive"
KIND_COUNTEREXAMPLE = "counterexample"
KIND_ORDERING = "ordering-partner"


@dataclass(frozen=True)
class Cdpi:
    """Context-dependent partial interpretation.

    Inclusions must be derivable from the context, exclusions must not;
    ordering partners carry a (preferred_id, dispreferred_id) link.
    """

    id: str
    inclusions: frozenset[GroundAtom]
    exclusions: frozenset[GroundAtom]
    context: frozenset[GroundAtom]
    kind: str = KIND_POSITIVE
    ordering: tuple[str, str] | None = None

    def __post_init__(self):
        if self.inclusions & self.exclusions:
            raise ValueError("inclusions and exclusions must be disjoint")

    @property
    def action_predicate(self) -> str:
        for atom in self.inclusions | self.exclusions:
            return atom.predicate
        raise ValueError(f"CDPI {self.id} has no action atoms")


def make_cdpis(step: TraceStep,
               action_groundings: Mapping[str, Sequence[GroundAtom]],
               prefix: str = "e") -> list[Cdpi]:
    """CDPIs for one trace step.

    One positive example for the executed action, one ordering partner holding
    the unexecuted groundings of the same predicate (dispreferred), and one
    counterexample per unexecuted action predicate.
    """
    action = step.action
    executed_pred = action.predicate
    if executed_pred not in action_groundings:
        raise ValueError(f"unknown action predicate {executed_pred!r}")
    context = frozenset(step.features)
    base = f"{prefix}{step.t}"
    same = frozenset(action_groundings[executed_pred])
    others = same - {action}

    out = [Cdpi(f"{base}_pos", frozenset([action]), others, context, KIND_POSITIVE)]
    if others:
        # orderings are vacuous for single-grounding predicates
        out.append(Cdpi(f"{base}_ord", others, frozenset(), context, KIND_ORDERING,
                        ordering=(f"{base}_pos", f"{base}_ord")))
    for pred in sorted(action_groundings):
        if pred == executed_pred:
            continue
        groundings = frozenset(action_groundings[pred])
        if not groundings:
            continue
        out.append(Cdpi(f"{base}_not_{pred}", frozenset(), groundings, context,
                        KIND_COUNTEREXAMPLE))
    return out


def _atom_block(atoms: frozenset[GroundAtom]) -> str:
    return ", ".join(sorted(str(a) for a in atoms))


def export_ilasp(cdpis: Sequence[Cdpi],
                 background: Mapping[str, tuple[int, int]] | None = None,
                 mode_bias: Mapping[str, Sequence[str]] | None = None) -> str:
    """Render one ILASP learning task; all CDPIs must share one action predicate."""
    preds = {c.action_predicate for c in cdpis}
    if len(preds) > 1:
        raise ValueError(f"mixed action predicates in one task: {sorted(preds)}")
    lines: list[str] = []
    if preds:
        lines.append(f"% ILASP learning task for action predicate: {preds.pop()}")
    for name, (lo, hi) in (background or {}).items():
        lines.append(f"{name}({lo}..{hi}).")
    for head in (mode_bias or {}).get("head", []):
        lines.append(f"#modeh({head}).")
    for body in (mode_bias or {}).get("body", []):
        lines.append(f"#modeb(1, {body}).")
    for c in cdpis:
        ctx = " ".join(f"{a}." for a in sorted(str(x) for x in c.context))
        lines.append(f"#pos({c.id}, {{{_atom_block(c.inclusions)}}}, "
                     f"{{{_atom_block(c.exclusions)}}}, {{{ctx}}}).")
    for c in cdpis:
        if c.ordering is not None:
            preferred, dispreferred = c.ordering
            lines.append(f"#brave_ordering(ord_{c.id}, {preferred}, {dispreferred}).")
    return "\n".join(lines) + "\n"


def export_ilasp_tasks(cdpis: Sequence[Cdpi],
                       background: Mapping[str, tuple[int, int]] | None = None,
                       mode_biases: Mapping[str, Mapping[str, Sequence[str]]]
                       | None = None) -> dict[str, str]:
    """One task text per action predicate."""
    by_pred: dict[str, list[Cdpi]] = {}
    for c in cdpis:
        by_pred.setdefault(c.action_predicate, []).append(c)
    return {pred: export_ilasp(batch, background,
                               (mode_biases or {}).get(pred))
            for pred, batch in sorted(by_pred.items())}


_POS_RE = re.compile(
    r"#pos\(\s*(?P<id>[A-Za-z0-9_]+)\s*,\s*\{(?P<inc>[^}]*)\}\s*,"
    r"\s*\{(?P<exc>[^}]*)\}\s*,\s*\{(?P<ctx>[^}]*)\}\s*\)\s*\.")
_ORD_RE = re.compile(
    r"#brave_ordering\(\s*[A-Za-z0-9_]+\s*,\s*(?P<pref>[A-Za-z0-9_]+)\s*,"
    r"\s*(?P<disp>[A-Za-z0-9_]+)\s*\)\s*\.")


def _parse_atom_list(text: str, line_no: int) -> frozenset[GroundAtom]:
    # split on commas/periods outside parentheses only
    atoms = []
    depth = 0
    piece = ""
    for ch in text + ",":
        if ch in ",." and depth == 0:
            piece = piece.strip()
            if piece:
                atoms.append(_parse_atom_text(piece, line_no))
            piece = ""
            continue
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        piece += ch
    return frozenset(atoms)


def read_ilasp(text: str) -> list[Cdpi]:
    """Parse a task produced by export_ilasp back into CDPIs (round-trip oracle)."""
    raw: list[tuple[str, frozenset, frozenset, frozenset]] = []
    orderings: dict[str, tuple[str, str]] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        m = _POS_RE.match(line)
        if m:
            raw.append((m["id"],
                        _parse_atom_list(m["inc"], line_no),
                        _parse_atom_list(m["exc"], line_no),
                        _parse_atom_list(m["ctx"], line_no)))
            continue
        m = _ORD_RE.match(line)
        if m:
            orderings[m["disp"]] = (m["pref"], m["disp"])
    out = []
    for cid, inc, exc, ctx in raw:
        if cid in orderings:
            kind, ordering = KIND_ORDERING, orderings[cid]
        elif not inc:
            kind, ordering = KIND_COUNTEREXAMPLE, None
        else:
            kind, ordering = KIND_POSITIVE, None
        out.append(Cdpi(cid, inc, exc, ctx, kind, ordering))
    return out
