"""
Strategy Factory

Creates adversary strategies by name and admits streams into a roster only
after they pass a replay self-check.
"""
from typing import Any, Callable, Dict, List, Mapping, Optional, Type

import structlog

from src.presentation import Presentation

from .base import (
    AdversaryProtocolError,
    AdversaryRegistrationError,
    AdversaryStrategy,
    AdversaryStream,
    Color,
    StageView,
)
from .strategies import (
    ColorChaserStrategy,
    ConstantSetStrategy,
    DelayedStrategy,
    FiniteSetStrategy,
    GreedyCopierStrategy,
)

logger = structlog.get_logger(__name__)

SELF_CHECK_STAGES = 100


def synthetic_color(x: int) -> Color:
    """Fixed coloring used by the self-check: parity of the binary digit sum."""
    return Color.RED if bin(x).count("1") % 2 == 0 else Color.BLUE


def replay_self_check(
    build: Callable[[], AdversaryStrategy], n: int = 3, stages: int = SELF_CHECK_STAGES
) -> None:
    """
    Run two fresh instances side by side over the same synthetic views and
    require identical, protocol-abiding output.

    Raises:
        AdversaryRegistrationError: On divergence or a protocol violation.
    """
    presentation = Presentation(n)
    colors = [synthetic_color(x) for x in range(stages)]
    first = AdversaryStream(0, build())
    second = AdversaryStream(0, build())
    for stage in range(stages):
        view = StageView(stage, colors, presentation)
        try:
            a = first.step(view)
            b = second.step(view)
        except AdversaryProtocolError as e:
            raise AdversaryRegistrationError(
                f"Strategy {first.strategy.name!r} failed the self-check at stage {stage}: {e}"
            ) from e
        if a != b:
            raise AdversaryRegistrationError(
                f"Strategy {first.strategy.name!r} is not replay-deterministic: "
                f"stage {stage} gave {a} and {b}"
            )


class StrategyFactory:
    """Factory for adversary strategies."""

    _registry: Dict[str, Type[AdversaryStrategy]] = {
        ConstantSetStrategy.name: ConstantSetStrategy,
        FiniteSetStrategy.name: FiniteSetStrategy,
        ColorChaserStrategy.name: ColorChaserStrategy,
        GreedyCopierStrategy.name: GreedyCopierStrategy,
        DelayedStrategy.name: DelayedStrategy,
    }

    @classmethod
    def register_strategy(
        cls,
        name: str,
        strategy_class: Type[AdversaryStrategy],
        sample_params: Optional[Mapping[str, Any]] = None,
    ) -> None:
        """
        Register a new strategy implementation after the replay self-check.

        Args:
            name: Identifier used in roster configs
            strategy_class: The strategy class to register
            sample_params: Parameters the self-check builds instances with

        Raises:
            ValueError: If the class is not a strategy or rejects the sample
                parameters.
            AdversaryRegistrationError: The strategy failed the self-check.
        """
        if not issubclass(strategy_class, AdversaryStrategy):
            raise ValueError("Strategy must implement AdversaryStrategy")
        arguments = dict(sample_params or {})
        replay_self_check(lambda: strategy_class(**arguments))
        cls._registry[name] = strategy_class

    @classmethod
    def create_strategy(cls, name: str, **params: Any) -> AdversaryStrategy:
        """
        Create an instance of the named strategy.

        Raises:
            ValueError: If the name is not registered or the parameters do
                not validate.
        """
        if name not in cls._registry:
            raise ValueError(
                f"Unknown strategy: {name}. "
                f"Available strategies: {sorted(cls._registry.keys())}"
            )
        return cls._registry[name](**params)

    @classmethod
    def create_stream(
        cls,
        index: int,
        name: str,
        params: Optional[Mapping[str, Any]] = None,
        n: int = 3,
    ) -> AdversaryStream:
        """
        Create a roster stream after the replay self-check passes.

        Raises:
            ValueError: Unknown strategy or invalid parameters.
            AdversaryRegistrationError: The strategy failed the self-check.
        """
        arguments = dict(params or {})
        replay_self_check(lambda: cls.create_strategy(name, **arguments), n=n)
        logger.debug("adversary_registered", index=index, strategy=name)
        return AdversaryStream(index, cls.create_strategy(name, **arguments))

    @classmethod
    def list_available_strategies(cls) -> Dict[str, str]:
        """Strategy names mapped to the first line of their docstring."""
        return {
            name: (strategy_class.__doc__ or "").strip().splitlines()[0]
            for name, strategy_class in sorted(cls._registry.items())
        }


def build_roster(entries: List[Mapping[str, Any]], n: int) -> List[AdversaryStream]:
    """Streams for ``{index, strategy, params}`` entries, ordered by index."""
    return [
        StrategyFactory.create_stream(entry["index"], entry["strategy"], entry.get("params"), n=n)
        for entry in sorted(entries, key=lambda entry: entry["index"])
    ]
