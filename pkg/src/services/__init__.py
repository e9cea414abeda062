"""
Services

The priority coloring construction and the trace verifier.
"""
from .priority_coloring_service import (
    ColoringRun,
    ConstructionInvariantError,
    Follower,
    PriorityColoringService,
    RequirementState,
    ReservationEntry,
    ReservationLedger,
    TargetGraph,
    choose_target,
    is_active,
)
from .trace_verification_service import (
    CheckResult,
    ObstructionEvidence,
    VerificationReport,
    obstruction_evidence,
    verify_trace,
)

__all__ = [
    'ColoringRun',
    'ConstructionInvariantError',
    'Follower',
    'PriorityColoringService',
    'RequirementState',
    'ReservationEntry',
    'ReservationLedger',
    'TargetGraph',
    'choose_target',
    'is_active',
    'CheckResult',
    'ObstructionEvidence',
    'VerificationReport',
    'obstruction_evidence',
    'verify_trace',
]
