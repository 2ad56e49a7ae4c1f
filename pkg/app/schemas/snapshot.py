from pydantic import Field

from app.core.constants.enums import NodeKind
from app.schemas.settings.base import BaseSchema


class NodeState(BaseSchema):
    """
    Value of one Node at capture time.

    Attributes:
        id (str): The Node id.
        kind (NodeKind): slot or accumulator.
        size (int): Value length of a slot or of one entry.
        value (list): The slot vector, or one row per accumulator entry.
        summary (list[float]): The CU-visible summary.
    """

    id: str = Field(examples=["n0"])
    kind: NodeKind
    size: int
    value: list[float] | list[list[float]]
    summary: list[float]


class ControlUnitState(BaseSchema):
    """
    The Control Unit memory that feeds its next input.

    Attributes:
        history (list[int]): Last executed heads, oldest first.
        last_head (int | None): Head of the last action.
        last_greedy (bool): Whether the last action was greedy.
        task_steps (int): Actions since the current task started.
        steps (int): Actions since the run started.
    """

    history: list[int] = []
    last_head: int | None = None
    last_greedy: bool = False
    task_steps: int = 0
    steps: int = 0


class SnapshotDocument(BaseSchema):
    """
    A snapshot of an Interaction Network at a fixed point in time.

    Attributes:
        iteration (int): Loop iterations run so far.
        nodes (list[NodeState]): Every Node, in insertion order.
        catalog (list[str]): Action labels, head order.
        retired (list[str]): Labels of retired heads.
        last_action (str | None): Label of the last executed action.
        q_values (dict[str, float]): CU estimates for the current state.
        checksums (dict[str, str]): Parameter digest per PU.
        control_unit (ControlUnitState)
        environments (dict[str, dict]): State of every environment.
        signals (dict[str, list[float]]): Current environment signals.
    """

    iteration: int = Field(examples=[10000])
    nodes: list[NodeState]
    catalog: list[str] = Field(examples=[["pu0", "pu1", "exp2:0"]])
    retired: list[str] = []
    last_action: str | None = None
    q_values: dict[str, float] = {}
    checksums: dict[str, str]
    control_unit: ControlUnitState = Field(default_factory=ControlUnitState)
    environments: dict[str, dict] = {}
    signals: dict[str, list[float]] = {}
