from collections import deque
from typing import TYPE_CHECKING

import numpy as np
import pandas as pd

from app.core.constants import messages
from app.core.errors import SnapshotMismatchError
from app.logging import LogManager
from app.repositories.snapshot import SnapshotRepository
from app.schemas.snapshot import ControlUnitState, NodeState, SnapshotDocument
from app.services.network import InteractionNetwork

if TYPE_CHECKING:
    from app.services.runtime import InteractionLoop


def snapshot(network: InteractionNetwork) -> SnapshotDocument:
    """
    Capture the state of a network.

    Two captures with no step in between are identical; the PU checksums
    change exactly when parameters change.

    - Args:
        - network:: InteractionNetwork
    - Returns:
        - SnapshotDocument
    """
    nodes = [
        NodeState(
            id=node.id,
            kind=node.kind,
            size=node.size,
            value=node.read().tolist(),
            summary=node.summary().tolist(),
        )
        for node in network.nodes.values()
    ]
    checksums = {
        pu_id: pu.net.checksum() for pu_id, pu in network.pus.items()
    }
    environments = {
        env_id: env.state_dict()
        for env_id, env in network.environments.items()
    }
    signals = {
        env_id: env.checked_signals().tolist()
        for env_id, env in network.environments.items()
    }

    cu = network.control_unit
    if cu is None or cu.q_net is None:
        return SnapshotDocument(
            iteration=network.iteration,
            nodes=nodes,
            catalog=[action.label() for action in network.actions()],
            checksums=checksums,
            environments=environments,
            signals=signals,
        )

    values = cu.q_values(cu.assemble_state(network))
    last_action = (
        cu.heads[cu.last_action].label()
        if cu.last_action is not None
        else None
    )

    return SnapshotDocument(
        iteration=network.iteration,
        nodes=nodes,
        catalog=[action.label() for action in cu.heads],
        retired=[cu.heads[head].label() for head in sorted(cu.retired)],
        last_action=last_action,
        q_values={
            cu.heads[head].label(): float(values[head])
            for head in cu.active_heads
        },
        checksums=checksums,
        control_unit=ControlUnitState(
            history=list(cu.history),
            last_head=cu.last_action,
            last_greedy=cu.last_greedy,
            task_steps=cu.task_steps,
            steps=cu.steps,
        ),
        environments=environments,
        signals=signals,
    )


def restore(network: InteractionNetwork, document: SnapshotDocument) -> None:
    """
    Load a snapshot into a network of the same structure and parameters.

    Node values are restored without provenance, so gradients never flow
    back past a restore.

    - Args:
        - network:: InteractionNetwork
        - document:: SnapshotDocument
    - Raises:
        - SnapshotMismatchError: Nodes, catalog or PU parameters differ.
    """
    if [state.id for state in document.nodes] != list(network.nodes):
        raise SnapshotMismatchError(messages.ERROR_SNAPSHOT_STRUCTURE)

    for pu_id, pu in network.pus.items():
        if document.checksums.get(pu_id) != pu.net.checksum():
            raise SnapshotMismatchError(
                f"{messages.ERROR_SNAPSHOT_CHECKSUM}: {pu_id}"
            )

    if set(document.checksums) != set(network.pus):
        raise SnapshotMismatchError(messages.ERROR_SNAPSHOT_STRUCTURE)

    cu = network.control_unit
    if cu is not None and cu.q_net is not None:
        if document.catalog != [action.label() for action in cu.heads]:
            raise SnapshotMismatchError(messages.ERROR_SNAPSHOT_STRUCTURE)

    for state in document.nodes:
        node = network.node(state.id)
        value = np.asarray(state.value, dtype=np.float64)

        if node.is_accumulator:
            node.clear()
            for row in value.reshape(-1, node.size):
                node.write(row, None)
        else:
            node.write(value, None)

    network.iteration = document.iteration
    network.triggered = {}

    for env_id, env in network.environments.items():
        if env_id in document.environments:
            env.load_state_dict(document.environments[env_id])

    if cu is not None and cu.q_net is not None:
        memory = document.control_unit
        cu.history = deque(memory.history, maxlen=cu.history.maxlen)
        cu.last_action = memory.last_head
        cu.last_greedy = memory.last_greedy
        cu.task_steps = memory.task_steps
        cu.steps = memory.steps


class SnapshotWriter:
    """
    Loop hook that writes a snapshot every `every` iterations and, when
    `on_finish` is set, after the last one.
    """

    def __init__(
        self,
        repository: SnapshotRepository,
        every: int = 10000,
        on_finish: bool = True,
        experiment: str = "",
        seed: int | None = None,
    ):
        self.repository = repository
        self.every = every
        self.on_finish_enabled = on_finish
        self.experiment = experiment
        self.seed = seed
        self.paths: list[str] = []
        self._last: int | None = None

    def write(self, network: InteractionNetwork) -> str:
        path = self.repository.add(snapshot(network))
        self.paths.append(path)
        self._last = network.iteration
        LogManager.create_info_log(
            action="snapshot",
            experiment=self.experiment,
            seed=self.seed,
            iteration=network.iteration,
            detail=f"{messages.MESSAGE_SNAPSHOT_WRITTEN}: {path}",
        )
        return path

    def on_step(self, loop: "InteractionLoop", outcome) -> None:
        iteration = loop.network.iteration
        if self.every and iteration % self.every == 0:
            self.write(loop.network)

    def on_finish(self, loop: "InteractionLoop") -> None:
        if self.on_finish_enabled and self._last != loop.network.iteration:
            self.write(loop.network)


def describe_snapshot(document: SnapshotDocument) -> str:
    """
    A compact text report of a snapshot: Nodes with their summaries, the
    action catalog with Q-values, and the PU checksums.

    - Args:
        - document:: SnapshotDocument
    - Returns:
        - str
    """
    nodes = pd.DataFrame(
        [
            {
                "node": state.id,
                "kind": str(state.kind),
                "size": state.size,
                "summary": " ".join(f"{v:+.4f}" for v in state.summary),
            }
            for state in document.nodes
        ]
    )
    actions = pd.DataFrame(
        [
            {
                "action": label,
                "q": document.q_values.get(label),
                "retired": label in document.retired,
            }
            for label in document.catalog
        ]
    )
    checksums = pd.DataFrame(
        [
            {"pu": pu_id, "checksum": value[:12]}
            for pu_id, value in sorted(document.checksums.items())
        ]
    )

    lines = [
        f"iteration: {document.iteration}",
        f"last action: {document.last_action}",
        "",
        nodes.to_string(index=False) if not nodes.empty else "no nodes",
        "",
        actions.to_string(index=False) if not actions.empty else "no actions",
        "",
        checksums.to_string(index=False) if not checksums.empty else "no PUs",
    ]

    return "\n".join(lines)
