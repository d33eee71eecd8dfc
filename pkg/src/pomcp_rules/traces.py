"""Recorded episodes and their line-delimited file format."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .logic.parser import RuleSyntaxError, _Tokens
from .logic.terms import GroundAtom

FORMAT_VERSION = 1


class TraceFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"{message} at line {line}"
        super().__init__(message)
        self.line = line


class UnsupportedTraceVersion(TraceFormatError):
    pass


@dataclass(frozen=True)
class TraceStep:
    t: int
    features: frozenset[GroundAtom]
    action: GroundAtom
    reward: float


@dataclass(frozen=True)
class Trace:
    domain: str
    config_digest: str
    seed: int
    gamma: float
    steps: tuple[TraceStep, ...]
    discounted_return: float


def _parse_atom_text(text: str, line_no: int) -> GroundAtom:
    try:
        toks = _Tokens(text, line_no)
        from .logic.parser import _parse_atom
        atom = _parse_atom(toks)
    except RuleSyntaxError as exc:
        raise TraceFormatError(f"bad atom {text!r}: {exc}", line_no) from None
    if not toks.done() or not atom.is_ground():
        raise TraceFormatError(f"bad atom {text!r}", line_no)
    return atom.substitute({})


def format_trace(trace: Trace) -> str:
    lines = [
        f"#trace v{FORMAT_VERSION}",
        f"domain={trace.domain}",
        f"config={trace.config_digest}",
        f"seed={trace.seed}",
        f"gamma={trace.gamma!r}",
        f"return={trace.discounted_return!r}",
    ]
    for step in trace.steps:
        atoms = " ".join(sorted(str(a) for a in step.features))
        lines.append(f"{step.t} | {atoms} | {step.action} | {step.reward!r}")
    return "\n".join(lines) + "\n"


def parse_trace(text: str) -> Trace:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("#trace"):
        raise TraceFormatError("missing trace header", 1)
    version = lines[0].removeprefix("#trace").strip()
    if version != f"v{FORMAT_VERSION}":
        raise UnsupportedTraceVersion(
            f"unsupported trace version {version!r} (expected v{FORMAT_VERSION})", 1)
    header: dict[str, str] = {}
    steps: list[TraceStep] = []
    for line_no, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line:
            continue
        if "|" not in line:
            if "=" not in line:
                raise TraceFormatError(f"malformed line {line!r}", line_no)
            key, _, value = line.partition("=")
            header[key.strip()] = value.strip()
            continue
        parts = [p.strip() for p in line.split("|")]
        if len(parts) != 4:
            raise TraceFormatError(f"expected 4 fields, found {len(parts)}", line_no)
        try:
            t = int(parts[0])
            reward = float(parts[3])
        except ValueError:
            raise TraceFormatError("bad step index or reward", line_no) from None
        features = frozenset(_parse_atom_text(tok, line_no)
                             for tok in parts[1].split())
        action = _parse_atom_text(parts[2], line_no)
        steps.append(TraceStep(t, features, action, reward))
    try:
        return Trace(
            domain=header["domain"],
            config_digest=header["config"],
            seed=int(header["seed"]),
            gamma=float(header["gamma"]),
            steps=tuple(steps),
            discounted_return=float(header["return"]),
        )
    except (KeyError, ValueError) as exc:
        raise TraceFormatError(f"bad or missing header field: {exc}") from None


def write_trace(trace: Trace, path: str | Path) -> None:
    Path(path).write_text(format_trace(trace))


def read_trace(path: str | Path) -> Trace:
    return parse_trace(Path(path).read_text())


def filter_traces(traces: Sequence[Trace]) -> list[Trace]:
    """Keep traces whose discounted return is at least the mean over the input."""
    if not traces:
        raise ValueError("cannot filter an empty trace list")
    mean = sum(t.discounted_return for t in traces) / len(traces)
    return [t for t in traces if t.discounted_return >= mean]
