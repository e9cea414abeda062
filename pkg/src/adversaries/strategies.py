"""
Built-in adversary strategies.

Each strategy is named as it appears in roster configs and validates its
parameters with a pydantic model.
"""
from typing import Any, Dict, List, Mapping

from pydantic import BaseModel, ConfigDict, Field, NonNegativeInt

from .base import AdversaryStrategy, Color, StageView


class _Params(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class ConstantSetParams(_Params):
    elements: List[NonNegativeInt] = Field(default_factory=list)


class ConstantSetStrategy(AdversaryStrategy):
    """Enumerates a fixed list, one element per stage."""

    name = "constant-set"
    params_model = ConstantSetParams

    def propose(self, view: StageView, enumerated: Mapping[int, int]) -> List[int]:
        for x in self.params.elements:
            if x not in enumerated:
                return [x]
        return []


class FiniteSetParams(_Params):
    elements: List[NonNegativeInt] = Field(default_factory=list)
    at_stage: int = Field(default=0, ge=0)


class FiniteSetStrategy(AdversaryStrategy):
    """Enumerates a fixed finite set all at once."""

    name = "finite-set"
    params_model = FiniteSetParams

    def propose(self, view: StageView, enumerated: Mapping[int, int]) -> List[int]:
        if view.stage < self.params.at_stage:
            return []
        return sorted({x for x in self.params.elements if x not in enumerated})


class ColorChaserParams(_Params):
    color: Color
    start: int = Field(default=0, ge=0)


class ColorChaserStrategy(AdversaryStrategy):
    """Enumerates every vertex of one color as soon as it is colored."""

    name = "color-chaser"
    params_model = ColorChaserParams

    def propose(self, view: StageView, enumerated: Mapping[int, int]) -> List[int]:
        s = view.stage
        if s >= self.params.start and view.color_of(s) == self.params.color and s not in enumerated:
            return [s]
        return []


class GreedyCopierParams(_Params):
    color: Color


class GreedyCopierStrategy(AdversaryStrategy):
    """
    Builds, inside one color class, an order-isomorphic copy of the
    presentation's prefix, adding the least fitting vertex whenever one shows
    up. Emits at most one vertex per stage.
    """

    name = "greedy-copier"
    params_model = GreedyCopierParams

    def __init__(self, **params: Any) -> None:
        super().__init__(**params)
        self.copy: List[int] = []
        self._scan_from = 0

    def _fits(self, view: StageView, x: int) -> bool:
        m = len(self.copy)
        return all(view.adjacent(self.copy[i], x) == view.adjacent(i, m) for i in range(m))

    def propose(self, view: StageView, enumerated: Mapping[int, int]) -> List[int]:
        for x in range(self._scan_from, view.stage + 1):
            if view.color_of(x) == self.params.color and x not in enumerated and self._fits(view, x):
                self.copy.append(x)
                self._scan_from = x + 1
                return [x]
        self._scan_from = view.stage + 1
        return []


class InnerStrategySpec(_Params):
    strategy: str
    params: Dict[str, Any] = Field(default_factory=dict)


class DelayedParams(_Params):
    wake_stage: int = Field(ge=0)
    inner: InnerStrategySpec


class DelayedStrategy(AdversaryStrategy):
    """Stays silent until ``wake_stage``, then behaves like ``inner``."""

    name = "delayed"
    params_model = DelayedParams

    def __init__(self, **params: Any) -> None:
        super().__init__(**params)
        from .factory import StrategyFactory

        self.inner = StrategyFactory.create_strategy(
            self.params.inner.strategy, **self.params.inner.params
        )

    def propose(self, view: StageView, enumerated: Mapping[int, int]) -> List[int]:
        if view.stage < self.params.wake_stage:
            return []
        return self.inner.propose(view, enumerated)
