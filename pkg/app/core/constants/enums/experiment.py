from app.core.constants.enums.base import BaseEnum


class ExperimentId(BaseEnum):
    """
    Enum for the experiment layouts the harness can build.

    - Attributes:
        - EXP1: str = "exp1"
        - EXP2: str = "exp2"
        - FNN: str = "fnn"
        - RNN: str = "rnn"
    """

    EXP1 = "exp1"
    EXP2 = "exp2"
    FNN = "fnn"
    RNN = "rnn"


class Exp1Variant(BaseEnum):
    """
    Enum for the variants of the choose-between-alternatives task.

    - Attributes:
        - BASE: str = "base"
        - INPUTS_TO_CU: str = "inputs_to_cu"
        - TRAINING_WHEELS: str = "training_wheels"
        - PRETRAINED_PUS: str = "pretrained_pus"
    """

    BASE = "base"
    INPUTS_TO_CU = "inputs_to_cu"
    TRAINING_WHEELS = "training_wheels"
    PRETRAINED_PUS = "pretrained_pus"


class Reductor(BaseEnum):
    """
    Enum for the function folded over the Exp2 input sequence.

    - Attributes:
        - CONSTANT: str = "constant"
        - PASSTHROUGH: str = "passthrough"
        - XOR: str = "xor"
    """

    CONSTANT = "constant"
    PASSTHROUGH = "passthrough"
    XOR = "xor"


class EpisodeEvent(BaseEnum):
    """
    Enum for events an environment reports about its current task.

    - Attributes:
        - SUCCEEDED: str = "succeeded"
        - FAILED: str = "failed"
        - TIMED_OUT: str = "timed_out"
        - REPLAYED: str = "replayed"
    """

    SUCCEEDED = "succeeded"
    FAILED = "failed"
    TIMED_OUT = "timed_out"
    REPLAYED = "replayed"


class PhaseName(BaseEnum):
    """
    Enum for the phases of one loop iteration, in execution order.
    """

    INPUT = "input"
    ASSEMBLE = "assemble_state"
    SELECT = "select_action"
    DISPATCH = "dispatch"
    FEEDBACK = "feedback"
    STORE = "store_transition"
