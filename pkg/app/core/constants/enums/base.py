from enum import Enum


class BaseEnum(str, Enum):
    """
    A base class for all Enums in the application. Members compare equal
    to their string values and print as them.
    """

    def __str__(self) -> str:
        return str(self.value)


class Activation(BaseEnum):
    """
    Enum for layer activations.

    - Attributes:
        - IDENTITY: str = "identity"
        - RELU: str = "relu"
        - TANH: str = "tanh"
        - SIGMOID: str = "sigmoid"
    """

    IDENTITY = "identity"
    RELU = "relu"
    TANH = "tanh"
    SIGMOID = "sigmoid"


class OptimizerKind(BaseEnum):
    """
    Enum for optimizer kinds.

    - Attributes:
        - SGD: str = "sgd"
        - ADAM: str = "adam"
    """

    SGD = "sgd"
    ADAM = "adam"


class NonFinitePolicy(BaseEnum):
    """
    What apply_grads does with a gradient holding NaN or Inf.

    - Attributes:
        - CLIP: str = "clip"
        - REJECT: str = "reject"
    """

    CLIP = "clip"
    REJECT = "reject"


class NodeKind(BaseEnum):
    """
    Enum for Node kinds.

    - Attributes:
        - SLOT: str = "slot"
        - ACCUMULATOR: str = "accumulator"
    """

    SLOT = "slot"
    ACCUMULATOR = "accumulator"


class BatchOutputPolicy(BaseEnum):
    """
    How a PU writes the rows of a batch run over accumulator entries.

    - Attributes:
        - MEAN_REDUCE: str = "mean_reduce"
        - WRITE_ALL: str = "write_all"
    """

    MEAN_REDUCE = "mean_reduce"
    WRITE_ALL = "write_all"


class RoutePolicy(BaseEnum):
    """
    Per-PU gradient normalization applied after a tape backprop.

    - Attributes:
        - NONE: str = "none"
        - PER_PU_CLIP: str = "per_pu_clip"
        - PER_PU_UNIT_NORM: str = "per_pu_unit_norm"
    """

    NONE = "none"
    PER_PU_CLIP = "per_pu_clip"
    PER_PU_UNIT_NORM = "per_pu_unit_norm"


class ActionKind(BaseEnum):
    """
    Enum for Control Unit action kinds.

    - Attributes:
        - PU: str = "pu"
        - ENV: str = "env"
    """

    PU = "pu"
    ENV = "env"
