"""Shipped default rule files (the learned policies for both domains)."""
from __future__ import annotations

from importlib import resources

from .logic.engine import suggested_actions  # noqa: F401  (re-export convenience)
from .logic.parser import parse_program
from .logic.terms import Program

_DOMAINS = ("rocksample", "battery")


def default_rules_text(domain: str) -> str:
    if domain not in _DOMAINS:
        raise ValueError(f"no shipped rules for domain {domain!r}")
    return (resources.files("pomcp_rules") / "rules" / f"{domain}.lp").read_text()


def load_default_rules(domain: str) -> Program:
    return parse_program(default_rules_text(domain))
