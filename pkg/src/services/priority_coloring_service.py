"""
PriorityColoringService: Builds a computable 2-coloring of the Henson graph
stage by stage with a finite-injury priority construction.

Requirement ``2e`` watches the red part of adversary ``e`` and requirement
``2e + 1`` its blue part; a lower number is stronger. Each requirement picks
followers from its stream, reserves the opposite color on their
neighbourhoods and tries to force the stream into completing a target graph
that cannot fit inside the neighbourhoods protecting it.
"""
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import structlog

from src.adversaries import AdversaryStream, Color, ColorSplitStream, StageView, color_split
from src.graphs import (
    FiniteGraph,
    connect_order,
    encode_graph6,
    increasing_iso,
    reorder,
)
from src.models import EventKind, Trace, TraceEvent, TraceHeader
from src.presentation import Presentation
from src.search import FolkmanCertificate, target_witness

logger = structlog.get_logger(__name__)

DEFAULT_TARGET_MAX_VERTICES = 6


class ConstructionInvariantError(RuntimeError):
    """An internal invariant broke during ``run``; ``trace`` holds the events so far."""

    def __init__(self, message: str, trace: Trace) -> None:
        super().__init__(message)
        self.trace = trace


@dataclass(frozen=True)
class Follower:
    """
    A vertex committed to a requirement.

    Attributes:
        vertex: The follower.
        enumerated_at: Stage at which the split stream enumerated it.
        acquired_at: Stage at which the requirement took it.
    """

    vertex: int
    enumerated_at: int
    acquired_at: int


@dataclass(frozen=True)
class TargetGraph:
    """A connect-ordered target graph and the follower count it was chosen against."""

    graph: FiniteGraph
    k: int
    certificate: FolkmanCertificate
    graph6: str

    @property
    def size(self) -> int:
        return self.graph.vertex_count


@dataclass
class RequirementState:
    """
    Mutable state of one requirement.

    Attributes:
        priority: Position in the priority order, ``2e`` or ``2e + 1``.
        color: Color of the split stream the requirement watches.
        split: The split stream.
        followers: Followers in acquisition order.
        target: The target graph, once chosen.
        last_injury_stage: Stage of the latest injury, ``None`` if never injured.
        injuries: Number of injuries so far.
        active: Activity as of the current stage.
    """

    priority: int
    color: Color
    split: ColorSplitStream
    followers: List[Follower] = field(default_factory=list)
    target: Optional[TargetGraph] = None
    last_injury_stage: Optional[int] = None
    injuries: int = 0
    active: bool = False
    _cursor_key: Optional[Tuple[int, int, int]] = field(default=None, repr=False)
    _cursor_seen: int = field(default=0, repr=False)

    @property
    def index(self) -> int:
        """Roster index ``e`` of the underlying adversary."""
        return self.priority // 2

    def follower_vertices(self) -> List[int]:
        return [f.vertex for f in self.followers]

    def injure(self, stage: int) -> None:
        self.followers = []
        self.target = None
        self.last_injury_stage = stage
        self.injuries += 1
        self.active = False


def requirement_color(priority: int) -> Color:
    return Color.RED if priority % 2 == 0 else Color.BLUE


@dataclass
class ReservationEntry:
    """
    A lazy reservation: every ``x > threshold`` adjacent to ``anchor`` is
    planned to get ``color``.

    Attributes:
        id: Position in the ledger.
        owner: Priority of the reserving requirement.
        color: Planned color.
        anchor: Follower whose neighbourhood is reserved.
        threshold: Only vertices above this are covered.
        created_at: Stage of creation.
        died_at: Stage at which the owner was injured, if it was.
        blocked_by: Ids of stronger entries live at creation; their region
            stays theirs.
    """

    id: int
    owner: int
    color: Color
    anchor: int
    threshold: int
    created_at: int
    died_at: Optional[int] = None
    blocked_by: Tuple[int, ...] = ()

    def is_live(self, stage: int) -> bool:
        """Live at the end of ``stage``."""
        return self.created_at <= stage and (self.died_at is None or self.died_at > stage)


class ReservationLedger:
    """
    History of every reservation made during a run.

    Entries are never removed; an injury stamps ``died_at`` so the planned
    color of any vertex can be evaluated as of any past stage.
    """

    def __init__(self, presentation: Presentation) -> None:
        self.presentation = presentation
        self.entries: List[ReservationEntry] = []
        self._live: Dict[int, List[ReservationEntry]] = {}

    def live_entries(self) -> List[ReservationEntry]:
        """Currently live entries, strongest owner first."""
        return [e for owner in sorted(self._live) for e in self._live[owner]]

    def reserve(
        self, owner: int, color: Color, anchor: int, threshold: int, stage: int
    ) -> ReservationEntry:
        blocked_by = tuple(e.id for e in self.live_entries() if e.owner < owner)
        entry = ReservationEntry(
            id=len(self.entries),
            owner=owner,
            color=color,
            anchor=anchor,
            threshold=threshold,
            created_at=stage,
            blocked_by=blocked_by,
        )
        self.entries.append(entry)
        self._live.setdefault(owner, []).append(entry)
        return entry

    def kill_owner(self, owner: int, stage: int) -> List[ReservationEntry]:
        killed = self._live.pop(owner, [])
        for entry in killed:
            entry.died_at = stage
        return killed

    def covers(self, entry: ReservationEntry, x: int) -> bool:
        return x > entry.threshold and self.presentation.adjacent(entry.anchor, x)

    def covering_entry(self, x: int, stage: int) -> Optional[ReservationEntry]:
        """Strongest entry live at ``stage`` covering ``x``."""
        best: Optional[ReservationEntry] = None
        for entry in self.entries:
            if not entry.is_live(stage) or not self.covers(entry, x):
                continue
            if best is None or (entry.owner, entry.id) < (best.owner, best.id):
                best = entry
        return best

    def planned_color(self, x: int, stage: int) -> Color:
        """
        Color ``x`` would get if colored at ``stage``: the color of the
        strongest covering live entry, Red when nothing covers it.
        """
        best = self.covering_entry(x, stage)
        return Color.RED if best is None else best.color

    @classmethod
    def from_events(
        cls, events: Iterable[TraceEvent], presentation: Presentation
    ) -> "ReservationLedger":
        """Rebuild the ledger from ``Reserved`` and ``Injured`` trace events."""
        ledger = cls(presentation)
        for event in events:
            if event.kind is EventKind.RESERVED:
                entry = ReservationEntry(
                    id=event.entry if event.entry is not None else len(ledger.entries),
                    owner=event.requirement if event.requirement is not None else -1,
                    color=event.color or Color.RED,
                    anchor=event.vertex if event.vertex is not None else 0,
                    threshold=event.threshold if event.threshold is not None else -1,
                    created_at=event.stage,
                    blocked_by=tuple(event.blocked_by or ()),
                )
                ledger.entries.append(entry)
                ledger._live.setdefault(entry.owner, []).append(entry)
            elif event.kind is EventKind.INJURED and event.requirement is not None:
                ledger.kill_owner(event.requirement, event.stage)
        return ledger


def is_active(r: RequirementState, stage: int) -> bool:
    """
    True iff ``r``'s adversary index is at most ``stage`` and its split holds
    an element enumerated after the last injury (any element if never
    injured).
    """
    if r.index > stage:
        return False
    if r.last_injury_stage is None:
        return bool(r.split.order)
    return r.split.has_element_after(r.last_injury_stage)


@lru_cache(maxsize=None)
def _ordered_witness(
    n: int, blocks: int, max_vertices: int
) -> Tuple[FiniteGraph, FolkmanCertificate, str]:
    certificate = target_witness(n, blocks, max_vertices)
    graph = reorder(certificate.graph, connect_order(certificate.graph))
    return graph, certificate, encode_graph6(graph)


def choose_target(
    r: RequirementState,
    k: int,
    n: int,
    max_vertices: int = DEFAULT_TARGET_MAX_VERTICES,
) -> TargetGraph:
    """
    Fix ``r``'s target: a witness defeating ``k + 1`` blocks, relabelled in
    connect order.

    Raises:
        ValueError: If ``r`` has no follower or already has a target.
        FolkmanSearchExhausted: If no witness is found within the caps.
    """
    if not r.followers:
        raise ValueError(f"Requirement {r.priority} has no follower")
    if r.target is not None:
        raise ValueError(f"Requirement {r.priority} already has a target")
    graph, certificate, encoded = _ordered_witness(n, k + 1, max_vertices)
    r.target = TargetGraph(graph, k, certificate, encoded)
    return r.target


def fits_target_row(
    presentation: Presentation, followers: Sequence[int], target: FiniteGraph, x: int
) -> bool:
    """True iff ``followers + [x]`` matches row ``len(followers)`` of ``target``."""
    m = len(followers)
    return all(
        presentation.adjacent(v, x) == target.has_edge(i, m) for i, v in enumerate(followers)
    )


@dataclass
class ColoringRun:
    """Outcome of a run: the coloring of ``[0, stages]``, the trace and final states."""

    n: int
    stages: int
    colors: List[Color]
    trace: Trace
    requirements: List[RequirementState]
    ledger: ReservationLedger

    def injury_counts(self) -> Dict[int, int]:
        return {r.priority: r.injuries for r in self.requirements}

    def follower_counts(self) -> Dict[int, int]:
        return {r.priority: len(r.followers) for r in self.requirements}


class PriorityColoringService:
    """
    PriorityColoringService: Runs the finite-injury coloring construction.

    Responsibilities:
    - Stepping the adversary roster once per stage
    - Activity, follower and target bookkeeping per requirement
    - Reservations and injuries
    - Coloring exactly one new vertex per stage
    - Emitting a replayable trace

    Args:
        n: Forbidden clique size, at least 3.
        roster: Adversary streams indexed ``0 .. len - 1``. Streams are
            consumed by ``run``; build a fresh roster for another run.
        presentation: Shared presentation; a new one is created if omitted.
        target_max_vertices: Vertex cap for the target witness enumeration.
    """

    def __init__(
        self,
        n: int,
        roster: Sequence[AdversaryStream],
        presentation: Optional[Presentation] = None,
        target_max_vertices: int = DEFAULT_TARGET_MAX_VERTICES,
    ) -> None:
        indices = [stream.index for stream in roster]
        if indices != list(range(len(roster))):
            raise ValueError(f"Roster indices must be 0..{len(roster) - 1} in order, got {indices}")
        self.n = n
        self.roster = list(roster)
        self.presentation = presentation or Presentation(n)
        if self.presentation.n != n:
            raise ValueError(f"Presentation is for n={self.presentation.n}, expected {n}")
        self.target_max_vertices = target_max_vertices
        self.requirements: List[RequirementState] = []
        for stream in self.roster:
            for color in (Color.RED, Color.BLUE):
                priority = 2 * stream.index + (0 if color is Color.RED else 1)
                self.requirements.append(
                    RequirementState(priority, color, color_split(stream, color))
                )
        self.ledger = ReservationLedger(self.presentation)
        self.colors: List[Color] = []
        self._trace: Optional[Trace] = None

    def _emit(self, kind: EventKind, stage: int, **payload: object) -> None:
        assert self._trace is not None
        self._trace.events.append(TraceEvent(kind=kind, stage=stage, **payload))

    def _fail(self, message: str) -> ConstructionInvariantError:
        assert self._trace is not None
        logger.error("construction_invariant_broken", message=message)
        return ConstructionInvariantError(message, self._trace)

    def _reserve(self, r: RequirementState, anchor: int, threshold: int, stage: int) -> None:
        entry = self.ledger.reserve(r.priority, r.color.opposite, anchor, threshold, stage)
        self._emit(
            EventKind.RESERVED,
            stage,
            requirement=r.priority,
            entry=entry.id,
            vertex=anchor,
            color=entry.color,
            threshold=threshold,
            blocked_by=entry.blocked_by,
        )

    def run(self, stages: int) -> ColoringRun:
        """
        Color ``[0, stages]``.

        Raises:
            ValueError: If ``stages`` is negative or the service already ran.
            ConstructionInvariantError: If an internal invariant breaks.
            FolkmanSearchExhausted: If a target witness cannot be found.
        """
        if stages < 0:
            raise ValueError(f"stages must be nonnegative, got {stages}")
        if self._trace is not None:
            raise ValueError("PriorityColoringService.run may only be called once")
        header = TraceHeader(
            n=self.n,
            stages=stages,
            adversaries=[stream.describe() for stream in self.roster],
        )
        self._trace = Trace(header)
        logger.info("coloring_run_started", n=self.n, stages=stages, adversaries=len(self.roster))

        self.presentation.ensure_stage(1)
        self._emit(EventKind.STAGE_START, 0)
        self.colors.append(Color.RED)
        self._emit(EventKind.COLORED, 0, vertex=0, color=Color.RED)

        for t in range(1, stages + 1):
            self._stage(t)

        logger.info(
            "coloring_run_finished",
            n=self.n,
            stages=stages,
            events=len(self._trace.events),
            injuries=sum(r.injuries for r in self.requirements),
        )
        return ColoringRun(
            self.n, stages, self.colors, self._trace, self.requirements, self.ledger
        )

    def _stage(self, t: int) -> None:
        self.presentation.ensure_stage(t + 1)
        self._emit(EventKind.STAGE_START, t)

        view = StageView(t - 1, self.colors, self.presentation)
        for r in self.requirements:
            r.split.step(view)

        for r in self.requirements:
            now = is_active(r, t)
            if now and not r.active:
                self._emit(EventKind.ACTIVATED, t, requirement=r.priority)
            r.active = now

        for r in self.requirements:
            if r.active and not r.followers:
                self._assign_first_follower(r, t)

        for position, r in enumerate(self.requirements):
            if r.active and r.followers and r.target is None:
                k = sum(len(q.followers) for q in self.requirements[:position] if q.active)
                target = choose_target(r, k, self.n, self.target_max_vertices)
                self._emit(
                    EventKind.TARGET_CHOSEN,
                    t,
                    requirement=r.priority,
                    graph6=target.graph6,
                    k=k,
                )
                logger.debug(
                    "target_chosen", stage=t, requirement=r.priority, k=k, vertices=target.size
                )

        for position, r in enumerate(self.requirements):
            if self._try_new_follower(r, t):
                for q in self.requirements[position + 1:]:
                    if q.active:
                        self._injure(q, r, t)
                break

        color = self.ledger.planned_color(t, t)
        self.colors.append(color)
        self._emit(EventKind.COLORED, t, vertex=t, color=color)

    def _assign_first_follower(self, r: RequirementState, t: int) -> None:
        bound = -1 if r.last_injury_stage is None else r.last_injury_stage
        fresh = r.split.enumerated_after(bound)
        if not fresh:
            raise self._fail(f"Requirement {r.priority} is active without a fresh element")
        x = fresh[0]
        r.followers.append(Follower(x, r.split.enumerated[x], t))
        self._emit(
            EventKind.FIRST_FOLLOWER,
            t,
            requirement=r.priority,
            vertex=x,
            enumerated_at=r.split.enumerated[x],
        )
        # Every vertex not yet colored.
        self._reserve(r, x, t - 1, t)
        logger.debug("first_follower", stage=t, requirement=r.priority, vertex=x)

    def _candidates(self, r: RequirementState) -> Iterable[int]:
        """Split elements not yet tested against the current follower list and target."""
        assert r.target is not None
        key = (r.injuries, len(r.followers), id(r.target))
        # Floor is the previous follower's acquisition stage, not its enumeration stage.
        floor = r.followers[-1].acquired_at
        if key != r._cursor_key:
            r._cursor_key = key
            fresh: Iterable[int] = r.split.elements_above(floor)
        else:
            fresh = sorted(x for x in r.split.order[r._cursor_seen:] if x > floor)
        r._cursor_seen = len(r.split.order)
        return fresh

    def _try_new_follower(self, r: RequirementState, t: int) -> bool:
        if not r.active or r.target is None or len(r.followers) >= r.target.size:
            return False
        followers = r.follower_vertices()
        for x in self._candidates(r):
            if not fits_target_row(self.presentation, followers, r.target.graph, x):
                continue
            r.followers.append(Follower(x, r.split.enumerated[x], t))
            vertices = r.follower_vertices()
            if not increasing_iso(
                vertices, self.presentation.adjacent, r.target.graph.restrict(len(vertices))
            ):
                raise self._fail(f"Followers {vertices} of {r.priority} do not copy the target")
            self._emit(
                EventKind.NEW_FOLLOWER,
                t,
                requirement=r.priority,
                vertex=x,
                enumerated_at=r.split.enumerated[x],
            )
            self._reserve(r, x, t, t)
            logger.debug(
                "new_follower",
                stage=t,
                requirement=r.priority,
                vertex=x,
                followers=len(r.followers),
                target_size=r.target.size,
            )
            return True
        return False

    def _injure(self, q: RequirementState, by: RequirementState, t: int) -> None:
        self.ledger.kill_owner(q.priority, t)
        q.injure(t)
        self._emit(EventKind.INJURED, t, requirement=q.priority, injured_by=by.priority)
        logger.debug("requirement_injured", stage=t, requirement=q.priority, by=by.priority)
