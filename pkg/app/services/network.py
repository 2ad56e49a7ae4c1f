from typing import TYPE_CHECKING

import numpy as np

from app.core.constants import messages
from app.core.constants.enums import BatchOutputPolicy, NodeKind
from app.core.errors import (
    ConfigurationError,
    ConflictError,
    NotFoundError,
)
from app.models.action import ActionId
from app.models.node import Node
from app.models.processing_unit import ProcessingUnit
from app.models.tape import Link, TapeEntry
from app.services.autodiff import forward
from app.services.tape import ProvenanceTape

if TYPE_CHECKING:
    from app.services.control_unit import ControlUnit
    from app.services.environments.base import Environment


class InteractionNetwork:
    """
    Structural state of an Interaction Network: Nodes, Processing Units,
    Environments, the action catalog and the provenance tape.

    - Attributes:
        - nodes: dict[str, Node]
        - pus: dict[str, ProcessingUnit]
        - environments: dict[str, Environment]
        - tape: ProvenanceTape
        - control_unit: ControlUnit | None
        - batch_policy: BatchOutputPolicy
        - iteration: int
        - triggered: dict[str, list[str]]: Watched Nodes written since the
          last feedback phase, per environment.

    - Methods:
        - add_node / remove_node / add_pu / remove_pu / add_environment
        - actions(): The action catalog.
        - execute_pu(pu_id): Run one PU and record it on the tape.
        - write_node(node_id, value, provenance): Write a Node.
        - clear_accumulator(node_id)
        - summary_of(node_id)
    """

    def __init__(
        self,
        tape: ProvenanceTape | None = None,
        batch_policy: BatchOutputPolicy = BatchOutputPolicy.MEAN_REDUCE,
    ):
        self.nodes: dict[str, Node] = {}
        self.pus: dict[str, ProcessingUnit] = {}
        self.environments: dict[str, "Environment"] = {}
        self.tape = tape or ProvenanceTape()
        self.control_unit: "ControlUnit | None" = None
        self.batch_policy = BatchOutputPolicy(batch_policy)
        self.iteration = 0
        self.triggered: dict[str, list[str]] = {}

    # structure

    def node(self, node_id: str) -> Node:
        if node_id not in self.nodes:
            raise NotFoundError(f"{messages.ERROR_NODE_NOT_FOUND}: {node_id}")
        return self.nodes[node_id]

    def pu(self, pu_id: str) -> ProcessingUnit:
        if pu_id not in self.pus:
            raise NotFoundError(f"{messages.ERROR_PU_NOT_FOUND}: {pu_id}")
        return self.pus[pu_id]

    def environment(self, env_id: str) -> "Environment":
        if env_id not in self.environments:
            raise NotFoundError(f"{messages.ERROR_ENV_NOT_FOUND}: {env_id}")
        return self.environments[env_id]

    def add_node(
        self,
        node_id: str,
        size: int,
        kind: NodeKind = NodeKind.SLOT,
        summary_size: int | None = None,
        cu_visible: bool = False,
    ) -> Node:
        if node_id in self.nodes:
            raise ConflictError(
                f"{messages.ERROR_NODE_ALREADY_EXISTS}: {node_id}"
            )

        node = Node(node_id, size, kind, summary_size, cu_visible)
        self.nodes[node_id] = node

        if self.control_unit is not None and cu_visible:
            self.control_unit.add_state_segment(
                f"node:{node.id}", node.summary_length
            )

        return node

    def remove_node(self, node_id: str) -> None:
        self.node(node_id)

        for pu in self.pus.values():
            if node_id in pu.inputs or node_id in pu.outputs:
                raise ConflictError(
                    f"{messages.ERROR_NODE_STILL_REFERENCED}: {node_id}"
                )

        for env in self.environments.values():
            if node_id in env.watched:
                raise ConflictError(
                    f"{messages.ERROR_NODE_STILL_REFERENCED}: {node_id}"
                )

        # the CU keeps the columns of a removed visible Node, reading zeros
        del self.nodes[node_id]

    def add_pu(self, pu: ProcessingUnit) -> ActionId:
        """
        Bind a PU to existing Nodes and register its action.

        - Args:
            - pu:: ProcessingUnit
        - Returns:
            - ActionId: The new catalog entry.
        """
        if pu.id in self.pus:
            raise ConflictError(f"{messages.ERROR_PU_ALREADY_EXISTS}: {pu.id}")

        if not pu.outputs:
            raise ConfigurationError(messages.ERROR_PU_NO_OUTPUTS)

        if len(set(pu.inputs)) != len(pu.inputs):
            raise ConflictError(messages.ERROR_PU_DUPLICATE_INPUT)

        if len(set(pu.outputs)) != len(pu.outputs):
            raise ConflictError(messages.ERROR_PU_DUPLICATE_OUTPUT)

        inputs = [self.node(node_id) for node_id in pu.inputs]
        outputs = [self.node(node_id) for node_id in pu.outputs]

        if sum(node.size for node in inputs) != pu.net.input_dim:
            raise ConfigurationError(f"{messages.ERROR_PU_INPUT_DIM}: {pu.id}")

        if sum(node.size for node in outputs) != pu.net.output_dim:
            raise ConfigurationError(
                f"{messages.ERROR_PU_OUTPUT_DIM}: {pu.id}"
            )

        pu.bind_slices([node.size for node in outputs])
        self.pus[pu.id] = pu

        action = ActionId.pu(pu.id)
        if self.control_unit is not None:
            self.control_unit.register_action(action)

        return action

    def remove_pu(self, pu_id: str) -> None:
        self.pu(pu_id)
        del self.pus[pu_id]
        self.tape.retire_pu(pu_id)

        if self.control_unit is not None:
            self.control_unit.retire_action(ActionId.pu(pu_id))

    def add_environment(self, env: "Environment") -> list[ActionId]:
        if env.id in self.environments:
            raise ConflictError(
                f"{messages.ERROR_ENV_ALREADY_EXISTS}: {env.id}"
            )

        for node_id in env.watched:
            self.node(node_id)

        self.environments[env.id] = env
        actions = [
            ActionId.env(env.id, index) for index in range(env.action_count)
        ]

        if self.control_unit is not None:
            self.control_unit.add_state_segment(
                f"env:{env.id}", env.signal_size
            )
            for action in actions:
                self.control_unit.register_action(action)

        return actions

    def actions(self) -> list[ActionId]:
        """
        The action catalog: every PU, then every environment action, in
        the order they were added.
        """
        catalog = [ActionId.pu(pu_id) for pu_id in self.pus]
        for env_id in self.environments:
            count = self.environments[env_id].action_count
            catalog.extend(ActionId.env(env_id, i) for i in range(count))
        return catalog

    def attach_control_unit(self, control_unit: "ControlUnit") -> None:
        self.control_unit = control_unit

    def visible_nodes(self) -> list[Node]:
        return [node for node in self.nodes.values() if node.cu_visible]

    # operations

    def write_node(
        self,
        node_id: str,
        value: np.ndarray,
        provenance: Link | None = None,
    ) -> None:
        """
        Replace a slot value or append an accumulator entry, then queue the
        environments watching the Node. External writes pass no provenance,
        which cuts gradient chains at this Node.
        """
        node = self.node(node_id)
        node.write(value, provenance)

        for env_id, env in self.environments.items():
            if node_id in env.watched:
                queue = self.triggered.setdefault(env_id, [])
                if node_id not in queue:
                    queue.append(node_id)

    def clear_accumulator(self, node_id: str) -> None:
        self.node(node_id).clear()

    def summary_of(self, node_id: str) -> np.ndarray:
        return self.node(node_id).summary()

    def execute_pu(self, pu_id: str) -> TapeEntry:
        """
        Run one PU on the current values of its input Nodes.

        Accumulator inputs make a batch with one row per entry (the shortest
        accumulator decides the batch size, slot inputs are repeated on every
        row). An empty accumulator yields zero outputs.

        - Args:
            - pu_id:: str
        - Returns:
            - TapeEntry: The recorded execution.
        """
        pu = self.pu(pu_id)
        inputs = [self.node(node_id) for node_id in pu.inputs]
        outputs = [self.node(node_id) for node_id in pu.outputs]
        step = self.tape.next_step

        counts = [len(node.entries) for node in inputs if node.is_accumulator]
        batch = min(counts) if counts else 1

        snapshots = []
        upstream = []
        for node in inputs:
            if node.is_accumulator:
                snapshots.append(node.read()[:batch])
                upstream.append(list(node.entry_writers[:batch]))
            else:
                snapshots.append(node.read())
                upstream.append([node.last_writer])

        if batch == 0:
            entry = TapeEntry(
                step, pu, pu.inputs, snapshots, None, pu.outputs, upstream
            )
            entry.inert = True
            for node in outputs:
                self.write_node(node.id, np.zeros(node.size), None)
            self.tape.record(entry)
            return entry

        rows = np.hstack(
            [
                np.broadcast_to(snapshot, (batch, snapshot.shape[-1]))
                for snapshot in snapshots
            ]
        )
        output, trace = forward(pu.net, rows)
        values = output.array()

        write_all = self.batch_policy == BatchOutputPolicy.WRITE_ALL
        entry = TapeEntry(
            step,
            pu,
            pu.inputs,
            snapshots,
            trace,
            pu.outputs,
            upstream,
            reduced=not (write_all and batch > 1),
        )

        for position, node in enumerate(outputs):
            block = values[:, pu.slices[position]]

            if pu.output_filter is not None:
                block = pu.output_filter(block)

            if node.is_accumulator and not entry.reduced:
                for row in range(batch):
                    self.write_node(
                        node.id, block[row], Link(entry, position, row)
                    )
            else:
                self.write_node(
                    node.id, block.mean(axis=0), Link(entry, position)
                )

        self.tape.record(entry)

        return entry

    def pop_triggered(self) -> dict[str, list[str]]:
        triggered = self.triggered
        self.triggered = {}
        return triggered
