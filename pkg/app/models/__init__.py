from app.models.action import ActionId
from app.models.node import Node
from app.models.processing_unit import ProcessingUnit
from app.models.tape import Link, TapeEntry
from app.models.tensor import (
    FeedForwardNet,
    ForwardTrace,
    Layer,
    OptimizerState,
    ParamGrads,
    Tensor,
)
from app.models.transition import ReplayBuffer, Transition

__all__ = [
    "ActionId",
    "FeedForwardNet",
    "ForwardTrace",
    "Layer",
    "Link",
    "Node",
    "OptimizerState",
    "ParamGrads",
    "ProcessingUnit",
    "ReplayBuffer",
    "TapeEntry",
    "Tensor",
    "Transition",
]
