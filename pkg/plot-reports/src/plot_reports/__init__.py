"""Figures from pomcp-rules benchmark CSVs."""
from .data import (
    ArmSummary,
    ImprovementSummary,
    Row,
    SchemaError,
    read_csv,
    summarize_arm,
    summarize_improvement,
)
from .render import PlotSpec, render, render_improvement, render_sweep

__version__ = "0.1.0"

__all__ = [
    "ArmSummary",
    "ImprovementSummary",
    "PlotSpec",
    "Row",
    "SchemaError",
    "read_csv",
    "render",
    "render_improvement",
    "render_sweep",
    "summarize_arm",
    "summarize_improvement",
]
