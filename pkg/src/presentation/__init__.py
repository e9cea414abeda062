"""
Henson Graph Presentation

Deterministic computable presentation of H_n with extension-witness search.
"""
from .henson import (
    ExtensionRequirement,
    Presentation,
    PresentationError,
    RequirementSchedule,
    extend_copy,
    find_extension,
    new_presentation,
)

__all__ = [
    'ExtensionRequirement',
    'Presentation',
    'PresentationError',
    'RequirementSchedule',
    'extend_copy',
    'find_extension',
    'new_presentation',
]
