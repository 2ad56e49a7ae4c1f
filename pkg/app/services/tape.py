import heapq
from collections import deque

import numpy as np

from app.core.constants import messages
from app.core.constants.enums import RoutePolicy
from app.core.errors import RejectedInputError
from app.models.node import Node
from app.models.tape import Link, TapeEntry
from app.models.tensor import ParamGrads
from app.services.autodiff import backward

GradMap = dict[str, ParamGrads]


class ProvenanceTape:
    """
    Bounded record of PU executions, used to backpropagate a Node gradient
    through the executions that produced the Node's value.

    - Attributes:
        - capacity: int: Entries kept; older entries become inert.
        - horizon: int: Deepest execution a backprop visits.
        - entries: deque[TapeEntry]
        - last_visited: list[int]: Steps visited by the last backprop.

    - Methods:
        - record(entry): Append an entry, evicting the oldest.
        - backprop_from_node(node, grad, horizon): Per-PU parameter grads.
    """

    def __init__(self, capacity: int = 512, horizon: int = 8):
        if capacity < horizon or horizon < 1:
            raise RejectedInputError(messages.ERROR_TAPE_CAPACITY)

        self.capacity = capacity
        self.horizon = horizon
        self.entries: deque[TapeEntry] = deque()
        self.next_step = 0
        self.last_visited: list[int] = []

    def __len__(self) -> int:
        return len(self.entries)

    def record(self, entry: TapeEntry) -> None:
        if self.entries and entry.step <= self.entries[-1].step:
            raise RejectedInputError(messages.ERROR_TAPE_STEP_ORDER)

        self.entries.append(entry)
        self.next_step = entry.step + 1

        while len(self.entries) > self.capacity:
            self.entries.popleft().release()

    def retire_pu(self, pu_id: str) -> None:
        for entry in self.entries:
            if entry.pu_id == pu_id:
                entry.release()

    def backprop_from_node(
        self,
        node: Node,
        node_grad: np.ndarray,
        horizon: int | None = None,
    ) -> GradMap:
        """
        Walk the executions behind a Node's value, newest first.

        Gradients reaching the same execution are summed before it is
        visited; its depth is the shortest link distance from the Node.
        An execution whose depth exceeds the horizon is skipped. One within
        the horizon receives the gradient of every path that reaches it,
        longer paths included.

        - Args:
            - node:: Node: The Node the gradient is given for.
            - node_grad:: np.ndarray: Shaped like node.read().
            - horizon:: int | None: Overrides the tape horizon.
        - Returns:
            - dict[str, ParamGrads]: Accumulated gradients per trainable PU.
        """
        horizon = self.horizon if horizon is None else horizon
        grad = np.asarray(node_grad, dtype=np.float64)

        if grad.shape != node.read().shape:
            raise RejectedInputError(messages.ERROR_NODE_GRAD_SHAPE)

        if node.is_accumulator:
            seeds = list(zip(node.entry_writers, grad))
        else:
            seeds = [(node.last_writer, grad)]

        pending: dict[int, np.ndarray] = {}
        depth: dict[int, int] = {}
        by_step: dict[int, TapeEntry] = {}
        heap: list[int] = []

        def deliver(link: Link | None, value: np.ndarray, level: int):
            if link is None or link.entry.inert:
                return

            entry = link.entry
            step = entry.step

            if step not in pending:
                pending[step] = np.zeros(
                    (entry.batch_size, entry.pu.net.output_dim)
                )
                depth[step] = level
                by_step[step] = entry
                heapq.heappush(heap, -step)
            else:
                depth[step] = min(depth[step], level)

            cut = entry.pu.slices[link.output]
            if link.row is not None:
                pending[step][link.row, cut] += value
            else:
                pending[step][:, cut] += value / entry.batch_size

        for link, value in seeds:
            deliver(link, value, 1)

        grads: GradMap = {}
        self.last_visited = []

        while heap:
            step = -heapq.heappop(heap)
            entry = by_step[step]

            if entry.inert or entry.trace is None or depth[step] > horizon:
                continue

            self.last_visited.append(step)
            input_grad, param_grads = backward(
                entry.pu.net, entry.trace, pending.pop(step)
            )

            if entry.pu.trainable:
                if entry.pu_id in grads:
                    grads[entry.pu_id].add_(param_grads)
                else:
                    grads[entry.pu_id] = param_grads

            rows = input_grad.array().reshape(entry.batch_size, -1)
            offset = 0
            for snapshot, links in zip(entry.inputs, entry.upstream):
                width = snapshot.shape[-1]
                block = rows[:, offset : offset + width]
                offset += width

                if snapshot.ndim == 2:
                    for row, link in enumerate(links):
                        deliver(link, block[row], depth[step] + 1)
                else:
                    deliver(links[0], block.sum(axis=0), depth[step] + 1)

        return grads


def normalize_route_grads(
    grad_map: GradMap, policy: RoutePolicy, clip: float = 1.0
) -> GradMap:
    """
    Rescale each PU's total gradient.

    - Args:
        - grad_map:: dict[str, ParamGrads]
        - policy:: RoutePolicy: none, per_pu_clip or per_pu_unit_norm.
        - clip:: float: Norm bound of per_pu_clip.
    - Returns:
        - dict[str, ParamGrads]
    """
    policy = RoutePolicy(policy)

    if policy == RoutePolicy.NONE:
        return grad_map

    result = {}
    for pu_id, grads in grad_map.items():
        norm = grads.norm()

        if norm == 0.0:
            result[pu_id] = grads
        elif policy == RoutePolicy.PER_PU_CLIP and norm > clip:
            result[pu_id] = grads.scaled(clip / norm)
        elif policy == RoutePolicy.PER_PU_UNIT_NORM:
            result[pu_id] = grads.scaled(1.0 / norm)
        else:
            result[pu_id] = grads

    return result


def interference_guard(
    grad_map: GradMap, per_pu_scale: dict[str, float] | float
) -> GradMap:
    """
    Shrink gradients of PUs that were used experimentally.

    - Args:
        - grad_map:: dict[str, ParamGrads]
        - per_pu_scale:: dict[str, float] | float: Scale in (0, 1], either
          one per PU (missing PUs keep 1) or one for all.
    - Returns:
        - dict[str, ParamGrads]
    """
    result = {}
    for pu_id, grads in grad_map.items():
        if isinstance(per_pu_scale, dict):
            scale = per_pu_scale.get(pu_id, 1.0)
        else:
            scale = per_pu_scale

        if not 0.0 < scale <= 1.0:
            raise RejectedInputError(messages.ERROR_ROUTE_SCALE)

        result[pu_id] = grads if scale == 1.0 else grads.scaled(scale)

    return result
