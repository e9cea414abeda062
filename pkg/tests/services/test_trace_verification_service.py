"""
Tests for the trace verifier, including corrupted traces.
"""
from typing import List

import pytest

from src.adversaries import Color, build_roster
from src.models import EventKind, Trace, TraceEvent, TraceHeader
from src.presentation import Presentation
from src.services import PriorityColoringService, obstruction_evidence, verify_trace
from src.services.trace_verification_service import (
    check_finite_injury,
    check_priority_soundness,
)

R, B = Color.RED, Color.BLUE

CHASER = [{"index": 0, "strategy": "color-chaser", "params": {"color": "R"}}]

TWO_CHASERS = [
    {"index": 0, "strategy": "color-chaser", "params": {"color": "R"}},
    {"index": 1, "strategy": "color-chaser", "params": {"color": "B"}},
]

CONSTANT_SETS = [
    {"index": 0, "strategy": "constant-set", "params": {"elements": [0, 2]}},
    {"index": 1, "strategy": "constant-set", "params": {"elements": [1, 4, 13]}},
]


def _run(entries, stages: int):
    return PriorityColoringService(3, build_roster(entries, 3)).run(stages)


def _synthetic(events: List[TraceEvent]) -> Trace:
    return Trace(TraceHeader(n=3, stages=0, adversaries=[]), events)


def _with_event(trace: Trace, position: int, event: TraceEvent) -> Trace:
    events = list(trace.events)
    events[position] = event
    return Trace(trace.header, events)


def _colored_position(trace: Trace, stage: int) -> int:
    return next(
        i for i, e in enumerate(trace.events) if e.kind is EventKind.COLORED and e.stage == stage
    )


@pytest.mark.parametrize(
    "entries, stages",
    [([], 30), (CHASER, 60), (TWO_CHASERS, 60), (CONSTANT_SETS, 60)],
)
def test_clean_runs_verify(entries, stages):
    """Test that untouched runs pass every check."""
    run = _run(entries, stages)
    report = verify_trace(run.trace, run.colors, Presentation(3), entries)
    assert report.passed, report.to_dict()
    assert [c.name for c in report.checks] == [
        "V1", "V2", "V3", "V4", "V5", "V6",
        "replay", "coloring_file", "finite_injury", "priority_soundness",
    ]


def test_flipped_trace_color_fails(chaser_entries):
    """Test that a Colored event disagreeing with the reservations is caught."""
    run = _run(chaser_entries, 20)
    position = _colored_position(run.trace, 2)
    corrupted = _with_event(
        run.trace, position, TraceEvent(kind=EventKind.COLORED, stage=2, vertex=2, color=R)
    )
    report = verify_trace(corrupted, run.colors, Presentation(3), chaser_entries)
    assert not report.passed
    failed = report.failed()
    assert "V1" in failed
    assert "coloring_file" in failed
    assert "replay" in failed
    assert report.get("V1").failure_count == 1
    assert "stage 2" in report.get("V1").failures[0]


def test_flipped_coloring_file_fails(chaser_entries):
    run = _run(chaser_entries, 20)
    colors = list(run.colors)
    colors[4] = colors[4].opposite
    report = verify_trace(run.trace, colors, Presentation(3), chaser_entries)
    assert set(report.failed()) == {"V3", "coloring_file"}


def test_short_coloring_file_fails(chaser_entries):
    run = _run(chaser_entries, 20)
    report = verify_trace(run.trace, run.colors[:-1], Presentation(3), chaser_entries)
    assert "coloring_file" in report.failed()


def test_wrong_roster_fails_replay(chaser_entries):
    """Test that replaying the adversaries of another roster is caught."""
    run = _run(chaser_entries, 20)
    other = [{"index": 0, "strategy": "color-chaser", "params": {"color": "B"}}]
    report = verify_trace(run.trace, run.colors, Presentation(3), other)
    assert "V5" in report.failed()
    assert "replay" in report.failed()


def test_bad_target_fails_copy_check(chaser_entries):
    run = _run(chaser_entries, 20)
    position = next(
        i for i, e in enumerate(run.trace.events) if e.kind is EventKind.TARGET_CHOSEN
    )
    corrupted = _with_event(
        run.trace,
        position,
        run.trace.events[position].model_copy(update={"graph6": "A?"}),
    )
    report = verify_trace(corrupted, run.colors, Presentation(3), chaser_entries)
    assert "V2" in report.failed()


def test_finite_injury_bound():
    """Test injuries against acquisitions by stronger requirements."""
    injured = TraceEvent(kind=EventKind.INJURED, stage=2, requirement=3, injured_by=0)
    first = TraceEvent(kind=EventKind.FIRST_FOLLOWER, stage=1, requirement=0, vertex=0,
                       enumerated_at=1)
    assert not check_finite_injury(_synthetic([injured])).passed
    assert check_finite_injury(_synthetic([first, injured])).passed
    assert not check_finite_injury(_synthetic([first, injured, injured])).passed


def test_priority_soundness():
    """Test that reservations must record every stronger live reservation."""
    strong = TraceEvent(kind=EventKind.RESERVED, stage=1, requirement=0, entry=0, vertex=0,
                        color=B, threshold=0, blocked_by=())

    def weak(entry: int, blocked_by) -> TraceEvent:
        return TraceEvent(kind=EventKind.RESERVED, stage=3, requirement=3, entry=entry,
                          vertex=2, color=R, threshold=2, blocked_by=blocked_by)

    injured = TraceEvent(kind=EventKind.INJURED, stage=2, requirement=0, injured_by=0)
    assert not check_priority_soundness(_synthetic([strong, weak(1, ())])).passed
    assert check_priority_soundness(_synthetic([strong, weak(1, (0,))])).passed
    assert check_priority_soundness(_synthetic([strong, injured, weak(2, ())])).passed


def test_report_serialization(chaser_entries):
    run = _run(chaser_entries, 10)
    report = verify_trace(run.trace, run.colors, Presentation(3), chaser_entries)
    data = report.to_dict()
    assert data["passed"] is True
    assert len(data["checks"]) == 10
    assert report.get("V3").description.startswith("Coloring file")
    with pytest.raises(KeyError):
        report.get("V9")


def test_obstruction_evidence():
    """Test that the chosen targets miss the protecting neighbourhoods."""
    run = _run(TWO_CHASERS, 40)
    evidence = obstruction_evidence(run.trace, Presentation(3), window=200)
    assert [(e.requirement, e.k, e.target_vertices) for e in evidence] == [(0, 0, 2), (3, 1, 5)]
    assert evidence[1].centers == (0, 2)
    assert all(e.holds for e in evidence)


def _without(trace: Trace, position: int) -> Trace:
    events = list(trace.events)
    del events[position]
    return Trace(trace.header, events)


def _position(trace: Trace, kind: EventKind, requirement: int) -> int:
    return next(
        i for i, e in enumerate(trace.events) if e.kind is kind and e.requirement == requirement
    )


@pytest.fixture
def injury_run(injury_entries):
    run = _run(injury_entries, 40)
    assert run.trace.of_kind(EventKind.NEW_FOLLOWER)
    assert run.trace.of_kind(EventKind.INJURED)
    return run


def test_injury_run_verifies(injury_run, injury_entries):
    """Test a run with a new follower and an injury against every check."""
    report = verify_trace(injury_run.trace, injury_run.colors, Presentation(3), injury_entries)
    assert report.passed, report.to_dict()


def test_dropped_new_follower_fails_skip_check(injury_run, injury_entries):
    """Test that removing an acquired follower is reported as a skipped extension."""
    position = _position(injury_run.trace, EventKind.NEW_FOLLOWER, 2)
    corrupted = _without(injury_run.trace, position)
    report = verify_trace(corrupted, injury_run.colors, Presentation(3), injury_entries)
    failed = report.failed()
    assert "V5" in failed
    assert "replay" in failed
    assert any("stage 14" in message for message in report.get("V5").failures)


def test_moved_protecting_reservation_fails_stuck_copy_check(injury_run, injury_entries):
    """Test that a follower of the requirement's color needs a stronger opposite reservation."""
    position = _position(injury_run.trace, EventKind.RESERVED, 1)
    original = injury_run.trace.events[position]
    assert original.vertex == 2
    # 3 is not adjacent to 13.
    corrupted = _with_event(
        injury_run.trace, position, original.model_copy(update={"vertex": 3})
    )
    report = verify_trace(corrupted, injury_run.colors, Presentation(3), injury_entries)
    assert "V4" in report.failed()
    assert "follower 13 of 2" in report.get("V4").failures[0]


def test_extra_followers_fail_size_check(injury_run, injury_entries):
    """Test that followers beyond the target size are reported."""
    position = _position(injury_run.trace, EventKind.NEW_FOLLOWER, 2)
    events = list(injury_run.trace.events)
    events[position + 1:position + 1] = [events[position]] * 4
    corrupted = Trace(injury_run.trace.header, events)
    report = verify_trace(corrupted, injury_run.colors, Presentation(3), injury_entries)
    assert "V6" in report.failed()
    assert "V2" in report.failed()


def test_missing_injury_fails(injury_run, injury_entries):
    position = _position(injury_run.trace, EventKind.INJURED, 3)
    corrupted = _without(injury_run.trace, position)
    report = verify_trace(corrupted, injury_run.colors, Presentation(3), injury_entries)
    assert "V5" in report.failed()
    assert any("were not injured" in message for message in report.get("V5").failures)
