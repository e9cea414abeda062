"""
Adversaries

Deterministic stage-driven enumerators standing in for c.e. sets, their
color splits, and the strategy factory.
"""
from .base import (
    AdversaryProtocolError,
    AdversaryRegistrationError,
    AdversaryStrategy,
    AdversaryStream,
    Color,
    ColorSplitStream,
    StageView,
    color_split,
)
from .factory import StrategyFactory, build_roster, replay_self_check

__all__ = [
    'AdversaryProtocolError',
    'AdversaryRegistrationError',
    'AdversaryStrategy',
    'AdversaryStream',
    'Color',
    'ColorSplitStream',
    'StageView',
    'color_split',
    'StrategyFactory',
    'build_roster',
    'replay_self_check',
]
