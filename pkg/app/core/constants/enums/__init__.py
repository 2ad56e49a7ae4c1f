from .base import (
    ActionKind,
    Activation,
    BaseEnum,
    BatchOutputPolicy,
    NodeKind,
    NonFinitePolicy,
    OptimizerKind,
    RoutePolicy,
)
from .experiment import (
    EpisodeEvent,
    Exp1Variant,
    ExperimentId,
    PhaseName,
    Reductor,
)

__all__ = [
    "ActionKind",
    "Activation",
    "BaseEnum",
    "BatchOutputPolicy",
    "NodeKind",
    "NonFinitePolicy",
    "OptimizerKind",
    "RoutePolicy",
    "EpisodeEvent",
    "Exp1Variant",
    "ExperimentId",
    "PhaseName",
    "Reductor",
]
