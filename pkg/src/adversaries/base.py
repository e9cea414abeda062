"""
Adversary Streams

Stage-driven models of computably enumerable sets. A stream wraps a
deterministic strategy, calls it once per stage with a read-only view of the
construction, and records every element with the stage it was enumerated at.
"""
import heapq
from abc import ABC, abstractmethod
from bisect import bisect_right, insort
from dataclasses import dataclass
from enum import Enum
from types import MappingProxyType
from typing import Any, ClassVar, Dict, List, Mapping, Sequence, Tuple, Type

from pydantic import BaseModel

from src.presentation import Presentation


class Color(str, Enum):
    """The two colors of the construction."""

    RED = "R"
    BLUE = "B"

    @property
    def opposite(self) -> "Color":
        return Color.BLUE if self is Color.RED else Color.RED


class AdversaryProtocolError(RuntimeError):
    """A strategy broke the stream contract during a step."""


class AdversaryRegistrationError(ValueError):
    """A strategy failed the replay self-check and cannot join a roster."""


@dataclass(frozen=True)
class StageView:
    """
    What an adversary may read at stage ``stage``: the colors of
    ``[0, stage]`` and the presentation's adjacency.

    ``colors`` may be a longer shared list; only its first ``stage + 1``
    entries are visible through this view.
    """

    stage: int
    colors: Sequence[Color]
    presentation: Presentation

    def __post_init__(self) -> None:
        if len(self.colors) < self.stage + 1:
            raise ValueError(
                f"View at stage {self.stage} needs {self.stage + 1} colors, got {len(self.colors)}"
            )

    def color_of(self, x: int) -> Color:
        if not 0 <= x <= self.stage:
            raise KeyError(f"Color of {x} is not visible at stage {self.stage}")
        return self.colors[x]

    def visible_colors(self) -> Tuple[Color, ...]:
        return tuple(self.colors[: self.stage + 1])

    def adjacent(self, i: int, j: int) -> bool:
        return self.presentation.adjacent(i, j)


class AdversaryStrategy(ABC):
    """
    Base class for enumeration strategies.

    Subclasses declare ``name`` and a pydantic ``params_model`` and implement
    ``propose``. A strategy may keep private state, but its output must be a
    function of the views it has been shown.
    """

    name: ClassVar[str]
    params_model: ClassVar[Type[BaseModel]]

    def __init__(self, **params: Any) -> None:
        self.params = self.params_model(**params)

    @abstractmethod
    def propose(self, view: StageView, enumerated: Mapping[int, int]) -> List[int]:
        """
        Elements to enumerate at this stage.

        Args:
            view: The construction as visible at this stage.
            enumerated: Elements already enumerated, mapped to their stage.

        Returns:
            New elements; none of them may already be enumerated.
        """

    def describe(self) -> Dict[str, Any]:
        return {"strategy": self.name, "params": self.params.model_dump(mode="json")}


class AdversaryStream:
    """
    A monotone enumeration ``W_e`` driven by a strategy.

    Elements returned by ``step`` at a view of stage ``s`` are recorded with
    enumeration stage ``s + 1``.

    Args:
        index: Roster index ``e``.
        strategy: The strategy producing elements.
    """

    def __init__(self, index: int, strategy: AdversaryStrategy) -> None:
        self.index = index
        self.strategy = strategy
        self.enumerated: Dict[int, int] = {}
        self.order: List[int] = []
        self.last_stage = -1

    def step(self, view: StageView) -> List[int]:
        """
        Advance to ``view.stage`` and return the newly enumerated elements.

        Raises:
            AdversaryProtocolError: If stages go backwards or the strategy
                returns an invalid, repeated or already enumerated element.
        """
        if view.stage <= self.last_stage:
            raise AdversaryProtocolError(
                f"Adversary {self.index} stepped at stage {view.stage} after stage {self.last_stage}"
            )
        proposed = self.strategy.propose(view, MappingProxyType(self.enumerated))
        fresh: List[int] = []
        for x in proposed:
            if not isinstance(x, int) or isinstance(x, bool) or x < 0:
                raise AdversaryProtocolError(
                    f"Adversary {self.index} proposed {x!r}, expected a natural number"
                )
            if x in self.enumerated:
                raise AdversaryProtocolError(
                    f"Adversary {self.index} re-enumerated {x} at stage {view.stage}"
                )
            self.enumerated[x] = view.stage + 1
            self.order.append(x)
            fresh.append(x)
        self.last_stage = view.stage
        return fresh

    def history(self) -> List[Tuple[int, int]]:
        """``(element, enumeration stage)`` pairs in enumeration order."""
        return [(x, self.enumerated[x]) for x in self.order]

    def describe(self) -> Dict[str, Any]:
        return {"index": self.index, **self.strategy.describe()}

    def __repr__(self) -> str:
        return f"AdversaryStream(index={self.index}, strategy={self.strategy.name!r})"


class ColorSplitStream:
    """
    The part of a stream that carries one color.

    ``x`` is enumerated at the first stage where the parent has enumerated it,
    ``x`` is already colored, and its color matches.
    """

    def __init__(self, parent: AdversaryStream, color: Color) -> None:
        self.parent = parent
        self.color = color
        self.enumerated: Dict[int, int] = {}
        self.order: List[int] = []
        self.sorted_elements: List[int] = []
        self.last_stage = -1
        self._parent_seen = 0
        self._uncolored: List[int] = []

    @property
    def index(self) -> int:
        return self.parent.index

    def step(self, view: StageView) -> List[int]:
        """Step the parent if it has not seen this stage, then release matches."""
        if view.stage <= self.last_stage:
            raise AdversaryProtocolError(
                f"Split {self.index}/{self.color.value} stepped at stage {view.stage} "
                f"after stage {self.last_stage}"
            )
        if self.parent.last_stage < view.stage:
            self.parent.step(view)

        decided: List[int] = []
        for x in self.parent.order[self._parent_seen:]:
            if x <= view.stage:
                decided.append(x)
            else:
                heapq.heappush(self._uncolored, x)
        self._parent_seen = len(self.parent.order)
        while self._uncolored and self._uncolored[0] <= view.stage:
            decided.append(heapq.heappop(self._uncolored))

        fresh = sorted(x for x in decided if view.color_of(x) == self.color)
        for x in fresh:
            self.enumerated[x] = view.stage + 1
            self.order.append(x)
            insort(self.sorted_elements, x)
        self.last_stage = view.stage
        return fresh

    def elements_above(self, bound: int) -> List[int]:
        """Enumerated elements greater than ``bound``, ascending."""
        return self.sorted_elements[bisect_right(self.sorted_elements, bound):]

    def enumerated_after(self, stage: int) -> List[int]:
        """Elements whose enumeration stage exceeds ``stage``, ascending."""
        return sorted(x for x, at in self.enumerated.items() if at > stage)

    def has_element_after(self, stage: int) -> bool:
        # Enumeration stages never decrease along `order`.
        return bool(self.order) and self.enumerated[self.order[-1]] > stage

    def __repr__(self) -> str:
        return f"ColorSplitStream(index={self.index}, color={self.color.value!r})"


def color_split(stream: AdversaryStream, color: Color) -> ColorSplitStream:
    """The sub-stream of ``stream`` holding elements of ``color``."""
    return ColorSplitStream(stream, color)
