"""
TraceVerificationService: Independent checks over a coloring run's trace.

Responsibilities:
- Replaying planned colors from the recorded reservations
- Checking followers against their target graphs
- Re-running the adversary roster to confirm no new follower was missed
- Bounding injuries and confirming the run replays byte for byte

Failures are report entries, never exceptions.
"""
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

import structlog

from src.adversaries import Color, ColorSplitStream, StageView, build_roster, color_split
from src.graphs import (
    FiniteGraph,
    Graph6DecodeError,
    decode_graph6,
    increasing_iso,
    is_connect_ordered,
)
from src.models import EventKind, Trace, TraceEvent
from src.presentation import Presentation
from src.search import neighbor_cover_obstruction_check, neighbor_sets_clique_free

from .priority_coloring_service import (
    DEFAULT_TARGET_MAX_VERTICES,
    PriorityColoringService,
    ReservationLedger,
    requirement_color,
)

logger = structlog.get_logger(__name__)

MAX_REPORTED_FAILURES = 20

CHECK_DESCRIPTIONS = {
    "V1": "Colored events match the planned color replayed from reservations",
    "V2": "Followers copy their target graph in order",
    "V3": "Coloring file honours the strongest covering reservation",
    "V4": "Followers of the requirement's color sit in a stronger opposite reservation",
    "V5": "No eligible new follower was skipped",
    "V6": "Follower count never exceeds the target size",
    "replay": "Re-running the construction reproduces the trace",
    "coloring_file": "Coloring file agrees with the trace and is total",
    "finite_injury": "Injuries bounded by stronger follower acquisitions",
    "priority_soundness": "Reservations exclude stronger live reservations",
}


@dataclass
class CheckResult:
    """Outcome of one verification item."""

    name: str
    passed: bool = True
    failures: List[str] = field(default_factory=list)
    failure_count: int = 0

    @property
    def description(self) -> str:
        return CHECK_DESCRIPTIONS.get(self.name, self.name)

    def fail(self, message: str) -> None:
        self.passed = False
        self.failure_count += 1
        if len(self.failures) < MAX_REPORTED_FAILURES:
            self.failures.append(message)


@dataclass
class VerificationReport:
    """All check results of one verification."""

    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def failed(self) -> List[str]:
        return [check.name for check in self.checks if not check.passed]

    def get(self, name: str) -> CheckResult:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "checks": [
                {
                    "name": check.name,
                    "passed": check.passed,
                    "failure_count": check.failure_count,
                    "failures": check.failures,
                }
                for check in self.checks
            ],
        }


@dataclass
class _ReplayState:
    priority: int
    followers: List[Tuple[int, int, int]] = field(default_factory=list)
    target: Optional[FiniteGraph] = None
    active: bool = False
    injuries: int = 0
    epoch: int = 0

    @property
    def color(self) -> Color:
        return requirement_color(self.priority)

    def vertices(self) -> List[int]:
        return [v for v, _, _ in self.followers]

    def clear(self) -> None:
        self.followers = []
        self.target = None
        self.active = False
        self.injuries += 1
        self.epoch += 1


@lru_cache(maxsize=64)
def _decode(text: str) -> Optional[FiniteGraph]:
    try:
        return decode_graph6(text)
    except Graph6DecodeError:
        return None


def _decode_target(event: TraceEvent) -> Optional[FiniteGraph]:
    return _decode(event.graph6 or "")


def _colored(trace: Trace) -> List[TraceEvent]:
    return trace.of_kind(EventKind.COLORED)


def check_planned_colors(trace: Trace, ledger: ReservationLedger) -> CheckResult:
    result = CheckResult("V1")
    for event in _colored(trace):
        if event.vertex != event.stage:
            result.fail(f"stage {event.stage}: colored vertex {event.vertex}")
            continue
        expected = ledger.planned_color(event.stage, event.stage)
        if event.color != expected:
            result.fail(
                f"stage {event.stage}: trace has {event.color.value if event.color else None}, "
                f"reservations give {expected.value}"
            )
    return result


def check_target_copies(trace: Trace, presentation: Presentation) -> CheckResult:
    result = CheckResult("V2")
    states: Dict[int, _ReplayState] = {}
    for event in trace.events:
        if event.requirement is None:
            continue
        state = states.setdefault(event.requirement, _ReplayState(event.requirement))
        if event.kind is EventKind.FIRST_FOLLOWER:
            if state.followers:
                result.fail(f"stage {event.stage}: requirement {state.priority} already had followers")
            state.followers = [(event.vertex or 0, event.enumerated_at or 0, event.stage)]
        elif event.kind is EventKind.TARGET_CHOSEN:
            state.target = _decode_target(event)
            if state.target is None or not is_connect_ordered(state.target):
                result.fail(f"stage {event.stage}: target of {state.priority} is not connect-ordered")
        elif event.kind is EventKind.NEW_FOLLOWER:
            if not state.followers or state.target is None:
                result.fail(f"stage {event.stage}: new follower for {state.priority} without target")
                continue
            # Bounded by the previous follower's acquisition stage, as in the construction.
            if (event.vertex or 0) <= state.followers[-1][2]:
                result.fail(
                    f"stage {event.stage}: follower {event.vertex} of {state.priority} does not "
                    f"exceed stage {state.followers[-1][2]}"
                )
            state.followers.append((event.vertex or 0, event.enumerated_at or 0, event.stage))
            vertices = state.vertices()
            if len(vertices) > state.target.vertex_count or not increasing_iso(
                vertices, presentation.adjacent, state.target.restrict(len(vertices))
            ):
                result.fail(
                    f"stage {event.stage}: followers {vertices} of {state.priority} "
                    f"do not copy the target"
                )
        elif event.kind is EventKind.INJURED:
            state.clear()
    return result


def check_coloring_against_reservations(
    trace: Trace, colors: Sequence[Color], presentation: Presentation
) -> CheckResult:
    """Brute force over every recorded reservation, compared with the coloring file."""
    result = CheckResult("V3")
    # (owner, entry, anchor, threshold, color, created, died)
    reservations: List[Tuple[int, int, int, int, Color, int, Optional[int]]] = []
    for position, event in enumerate(trace.events):
        if event.kind is not EventKind.RESERVED or event.requirement is None:
            continue
        died = next(
            (
                later.stage
                for later in trace.events[position + 1:]
                if later.kind is EventKind.INJURED and later.requirement == event.requirement
            ),
            None,
        )
        reservations.append(
            (
                event.requirement,
                event.entry if event.entry is not None else position,
                event.vertex if event.vertex is not None else 0,
                event.threshold if event.threshold is not None else -1,
                event.color or Color.RED,
                event.stage,
                died,
            )
        )

    for s, color in enumerate(colors):
        best = None
        for owner, entry, anchor, threshold, reserved, created, died in reservations:
            if created > s or (died is not None and died <= s):
                continue
            if s <= threshold or not presentation.adjacent(anchor, s):
                continue
            if best is None or (owner, entry) < best[0]:
                best = ((owner, entry), reserved)
        expected = Color.RED if best is None else best[1]
        if color != expected:
            result.fail(f"stage {s}: coloring has {color.value}, expected {expected.value}")
    return result


def check_stuck_copies(
    trace: Trace, colors: Sequence[Color], presentation: Presentation, ledger: ReservationLedger
) -> CheckResult:
    result = CheckResult("V4")
    for event in trace.of_kind(EventKind.NEW_FOLLOWER):
        r = event.requirement
        x = event.vertex
        if r is None or x is None or x >= len(colors):
            result.fail(f"stage {event.stage}: malformed new follower record")
            continue
        own = requirement_color(r)
        if colors[x] != own:
            continue
        protected = any(
            entry.owner < r
            and requirement_color(entry.owner) is own.opposite
            and entry.is_live(x)
            and presentation.adjacent(entry.anchor, x)
            for entry in ledger.entries
        )
        if not protected:
            result.fail(
                f"stage {event.stage}: follower {x} of {r} has no stronger opposite "
                f"reservation live at stage {x}"
            )
    return result


class _MissedExtensionReplay:
    """Re-runs the roster against the traced colors and predicts each new follower."""

    def __init__(
        self,
        trace: Trace,
        presentation: Presentation,
        roster_entries: List[Mapping[str, Any]],
        result: CheckResult,
        sizes: CheckResult,
    ) -> None:
        self.trace = trace
        self.presentation = presentation
        self.result = result
        self.sizes = sizes
        self.splits: Dict[int, ColorSplitStream] = {}
        for stream in build_roster(roster_entries, trace.header.n):
            for offset, color in enumerate((Color.RED, Color.BLUE)):
                self.splits[2 * stream.index + offset] = color_split(stream, color)
        self.states = {p: _ReplayState(p) for p in sorted(self.splits)}
        self._seen: Dict[int, Tuple[Tuple[int, int], int]] = {}

    def _pool(self, state: _ReplayState, t: int) -> List[int]:
        assert state.target is not None
        split = self.splits[state.priority]
        m = len(state.followers)
        # Acquisition stage of the previous follower.
        floor = state.followers[-1][2]
        key = (state.epoch, m)
        previous = self._seen.get(state.priority)
        self._seen[state.priority] = (key, len(split.order))
        if previous is not None and previous[0] == key:
            return sorted(x for x in split.order[previous[1]:] if x > floor)
        above = split.elements_above(floor)
        j = next((i for i in range(m) if state.target.has_edge(i, m)), None)
        if j is None:
            return above
        near = [
            x
            for x in self.presentation.neighbor_set_within(state.followers[j][0], t)
            if x > floor and x in split.enumerated
        ]
        return near if len(near) < len(above) else above

    def _expected(self, t: int) -> Optional[Tuple[int, int]]:
        for state in self.states.values():
            target = state.target
            if not state.active or target is None or not state.followers:
                continue
            if len(state.followers) >= target.vertex_count:
                continue
            vertices = state.vertices()
            m = len(vertices)
            for x in self._pool(state, t):
                if all(
                    self.presentation.adjacent(v, x) == target.has_edge(i, m)
                    for i, v in enumerate(vertices)
                ):
                    return state.priority, x
        return None

    def run(self) -> None:
        colors = [event.color or Color.RED for event in _colored(self.trace)]
        by_stage = self.trace.by_stage()
        for t in range(1, self.trace.header.stages + 1):
            view = StageView(t - 1, colors, self.presentation)
            for split in self.splits.values():
                split.step(view)
            self._apply_stage(t, by_stage.get(t, []))

    def _apply_stage(self, t: int, events: Iterable[TraceEvent]) -> None:
        decided = False
        expected: Optional[Tuple[int, int]] = None
        injured: Set[int] = set()
        actual: Optional[Tuple[int, int]] = None
        for event in events:
            if not decided and event.kind in (
                EventKind.NEW_FOLLOWER,
                EventKind.INJURED,
                EventKind.COLORED,
            ):
                decided = True
                expected = self._expected(t)
                if expected is not None:
                    injured = {
                        p for p, s in self.states.items() if p > expected[0] and s.active
                    }
            if event.requirement is None or event.requirement not in self.states:
                continue
            state = self.states[event.requirement]
            split = self.splits[event.requirement]
            if event.kind is EventKind.ACTIVATED:
                state.active = True
            elif event.kind is EventKind.FIRST_FOLLOWER:
                if split.enumerated.get(event.vertex or 0) != event.enumerated_at:
                    self.result.fail(
                        f"stage {t}: adversary replay disagrees on follower {event.vertex}"
                    )
                state.followers = [(event.vertex or 0, event.enumerated_at or 0, t)]
            elif event.kind is EventKind.TARGET_CHOSEN:
                state.target = _decode_target(event)
            elif event.kind is EventKind.NEW_FOLLOWER:
                actual = (event.requirement, event.vertex or 0)
                state.followers.append((event.vertex or 0, event.enumerated_at or 0, t))
                if state.target is None or len(state.followers) > state.target.vertex_count:
                    self.sizes.fail(
                        f"stage {t}: requirement {event.requirement} has "
                        f"{len(state.followers)} followers"
                    )
            elif event.kind is EventKind.INJURED:
                injured.discard(event.requirement)
                if expected is None or event.requirement <= expected[0]:
                    self.result.fail(f"stage {t}: unexpected injury of {event.requirement}")
                state.clear()
        if actual != expected:
            self.result.fail(f"stage {t}: expected new follower {expected}, trace has {actual}")
        if injured:
            self.result.fail(f"stage {t}: requirements {sorted(injured)} were not injured")


def check_finite_injury(trace: Trace) -> CheckResult:
    result = CheckResult("finite_injury")
    acquisitions: Dict[int, int] = {}
    injuries: Dict[int, int] = {}
    for event in trace.events:
        if event.requirement is None:
            continue
        if event.kind in (EventKind.FIRST_FOLLOWER, EventKind.NEW_FOLLOWER):
            acquisitions[event.requirement] = acquisitions.get(event.requirement, 0) + 1
        elif event.kind is EventKind.INJURED:
            injuries[event.requirement] = injuries.get(event.requirement, 0) + 1
    for priority, count in sorted(injuries.items()):
        bound = sum(n for p, n in acquisitions.items() if p < priority)
        if count > bound:
            result.fail(f"requirement {priority}: {count} injuries, bound {bound}")
    return result


def check_priority_soundness(trace: Trace) -> CheckResult:
    result = CheckResult("priority_soundness")
    live: Dict[int, Tuple[int, int]] = {}
    for event in trace.events:
        if event.kind is EventKind.RESERVED and event.requirement is not None:
            stronger = {i for i, (owner, _) in live.items() if owner < event.requirement}
            missing = stronger - set(event.blocked_by or ())
            if missing:
                result.fail(
                    f"stage {event.stage}: entry {event.entry} of {event.requirement} "
                    f"overlaps stronger entries {sorted(missing)}"
                )
            live[event.entry if event.entry is not None else -1] = (event.requirement, event.stage)
        elif event.kind is EventKind.INJURED:
            live = {i: v for i, v in live.items() if v[0] != event.requirement}
    return result


def check_coloring_file(trace: Trace, colors: Sequence[Color]) -> CheckResult:
    result = CheckResult("coloring_file")
    stages = trace.header.stages
    if len(colors) != stages + 1:
        result.fail(f"coloring covers {len(colors)} stages, expected {stages + 1}")
    traced = _colored(trace)
    if [e.stage for e in traced] != list(range(stages + 1)):
        result.fail("trace does not color exactly one vertex per stage")
    for event in traced:
        if event.stage < len(colors) and colors[event.stage] != event.color:
            result.fail(f"stage {event.stage}: file has {colors[event.stage].value}")
    return result


def check_replay(
    trace: Trace, roster_entries: List[Mapping[str, Any]], target_max_vertices: int
) -> CheckResult:
    result = CheckResult("replay")
    header = trace.header
    try:
        rerun = PriorityColoringService(
            header.n,
            build_roster(roster_entries, header.n),
            Presentation(header.n),
            target_max_vertices=target_max_vertices,
        ).run(header.stages)
    except Exception as e:
        result.fail(f"re-run failed: {e}")
        return result
    if rerun.trace.header != header:
        result.fail("trace header differs from the re-run")
    for position, (ours, theirs) in enumerate(zip(trace.events, rerun.trace.events)):
        if ours != theirs:
            result.fail(f"event {position} (stage {ours.stage}) differs from the re-run")
            return result
    if len(trace.events) != len(rerun.trace.events):
        result.fail(f"trace has {len(trace.events)} events, re-run has {len(rerun.trace.events)}")
    return result


def verify_trace(
    trace: Trace,
    colors: Sequence[Color],
    presentation: Presentation,
    roster_entries: List[Mapping[str, Any]],
    target_max_vertices: int = DEFAULT_TARGET_MAX_VERTICES,
) -> VerificationReport:
    """
    Run every check against a trace, its coloring file and the roster that
    produced it.

    Args:
        trace: The parsed trace.
        colors: Colors read from the coloring file.
        presentation: Presentation for the trace's ``n``.
        roster_entries: ``{index, strategy, params}`` mappings.
        target_max_vertices: Vertex cap used when the trace was produced.
    """
    presentation.ensure_stage(trace.header.stages + 1)
    ledger = ReservationLedger.from_events(trace.events, presentation)

    v5 = CheckResult("V5")
    v6 = CheckResult("V6")
    try:
        _MissedExtensionReplay(trace, presentation, roster_entries, v5, v6).run()
    except Exception as e:
        v5.fail(f"adversary replay failed: {e}")

    report = VerificationReport(
        [
            check_planned_colors(trace, ledger),
            check_target_copies(trace, presentation),
            check_coloring_against_reservations(trace, colors, presentation),
            check_stuck_copies(trace, colors, presentation, ledger),
            v5,
            v6,
            check_replay(trace, roster_entries, target_max_vertices),
            check_coloring_file(trace, colors),
            check_finite_injury(trace),
            check_priority_soundness(trace),
        ]
    )
    if report.passed:
        logger.info("trace_verified", stages=trace.header.stages, checks=len(report.checks))
    else:
        logger.warning("trace_verification_failed", failed=report.failed())
    return report


@dataclass(frozen=True)
class ObstructionEvidence:
    """Result of testing one chosen target against the neighbourhoods of its centres."""

    stage: int
    requirement: int
    k: int
    centers: Tuple[int, ...]
    target_vertices: int
    no_embedding: bool
    neighborhoods_clique_free: bool

    @property
    def holds(self) -> bool:
        return self.no_embedding and self.neighborhoods_clique_free and len(self.centers) == self.k + 1


def obstruction_evidence(
    trace: Trace,
    presentation: Presentation,
    window: int,
    max_target_vertices: int = 24,
) -> List[ObstructionEvidence]:
    """
    For every chosen target with at most ``max_target_vertices`` vertices,
    test that it embeds into no union of the ``k + 1`` relevant neighbourhoods
    inside ``[0, window)``: those of the stronger active followers and of the
    requirement's first follower.
    """
    states: Dict[int, _ReplayState] = {}
    evidence: List[ObstructionEvidence] = []
    for event in trace.events:
        if event.requirement is None:
            continue
        state = states.setdefault(event.requirement, _ReplayState(event.requirement))
        if event.kind is EventKind.ACTIVATED:
            state.active = True
        elif event.kind in (EventKind.FIRST_FOLLOWER, EventKind.NEW_FOLLOWER):
            if event.kind is EventKind.FIRST_FOLLOWER:
                state.followers = []
            state.followers.append((event.vertex or 0, event.enumerated_at or 0, event.stage))
        elif event.kind is EventKind.INJURED:
            state.clear()
        elif event.kind is EventKind.TARGET_CHOSEN:
            target = _decode_target(event)
            if target is None or target.vertex_count > max_target_vertices:
                continue
            centers = [
                v
                for p, s in sorted(states.items())
                if p < event.requirement and s.active
                for v in s.vertices()
            ]
            centers.append(state.followers[0][0])
            evidence.append(
                ObstructionEvidence(
                    stage=event.stage,
                    requirement=event.requirement,
                    k=event.k or 0,
                    centers=tuple(centers),
                    target_vertices=target.vertex_count,
                    no_embedding=neighbor_cover_obstruction_check(
                        target, presentation, centers, window
                    ),
                    neighborhoods_clique_free=neighbor_sets_clique_free(
                        presentation, centers, window
                    ),
                )
            )
    return evidence
