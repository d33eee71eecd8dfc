"""Trace records: formatting, parsing, filtering."""
import pytest

from pomcp_rules.logic import GroundAtom
from pomcp_rules.traces import (
    Trace,
    TraceFormatError,
    TraceStep,
    UnsupportedTraceVersion,
    filter_traces,
    format_trace,
    parse_trace,
    read_trace,
    write_trace,
)


def _trace(returns=-3.25, steps=None):
    if steps is None:
        steps = (
            TraceStep(0, frozenset({GroundAtom("guess", (1, 70)),
                                    GroundAtom("dist", (1, 2))}),
                      GroundAtom("east"), 0.0),
            TraceStep(1, frozenset({GroundAtom("guess", (1, 90))}),
                      GroundAtom("sample", (1,)), -10.0),
        )
    return Trace(domain="rocksample", config_digest="abc123def456", seed=7,
                 gamma=0.95, steps=steps, discounted_return=returns)


def test_round_trip():
    trace = _trace()
    assert parse_trace(format_trace(trace)) == trace


def test_round_trip_empty_steps():
    trace = _trace(steps=())
    text = format_trace(trace)
    assert "|" not in text  # header-only file
    assert parse_trace(text) == trace


def test_file_round_trip(tmp_path):
    path = tmp_path / "t.txt"
    trace = _trace()
    write_trace(trace, path)
    assert read_trace(path) == trace


def test_missing_header_rejected():
    with pytest.raises(TraceFormatError):
        parse_trace("domain=rocksample\n")


def test_version_mismatch_rejected():
    text = format_trace(_trace()).replace("#trace v1", "#trace v2")
    with pytest.raises(UnsupportedTraceVersion):
        parse_trace(text)


def test_malformed_step_line_reports_line_number():
    text = format_trace(_trace(steps=())) + "0 | guess(1,70) | east\n"
    with pytest.raises(TraceFormatError) as exc:
        parse_trace(text)
    assert exc.value.line == 7


def test_bad_atom_rejected():
    text = format_trace(_trace(steps=())) + "0 | guess(1,X) | east | 0.0\n"
    with pytest.raises(TraceFormatError):
        parse_trace(text)


def test_reward_precision_survives_round_trip():
    trace = _trace(returns=1.0000000001)
    assert parse_trace(format_trace(trace)).discounted_return == 1.0000000001


def test_filter_traces_keeps_at_least_mean():
    traces = [_trace(returns=r, steps=()) for r in (10.0, 20.0, 30.0)]
    kept = filter_traces(traces)
    assert [t.discounted_return for t in kept] == [20.0, 30.0]


def test_filter_traces_all_equal_keeps_all():
    traces = [_trace(returns=5.0, steps=())] * 3
    assert filter_traces(traces) == traces


def test_filter_traces_single():
    traces = [_trace(returns=-1.0, steps=())]
    assert filter_traces(traces) == traces


def test_filter_traces_never_empty_property():
    import random
    rng = random.Random(0)
    for _ in range(50):
        traces = [_trace(returns=rng.uniform(-50, 50), steps=())
                  for _ in range(rng.randint(1, 20))]
        kept = filter_traces(traces)
        assert kept and set(kept) <= set(traces)


def test_filter_traces_empty_input_rejected():
    with pytest.raises(ValueError):
        filter_traces([])
