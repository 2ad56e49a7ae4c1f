from collections import deque
from typing import TYPE_CHECKING, Sequence

import numpy as np

from app.core.constants import messages
from app.core.constants.enums import Activation, OptimizerKind
from app.core.errors import ConfigurationError, ConflictError, NotFoundError
from app.core.generate.seeds import derive_rng
from app.models.action import ActionId
from app.models.tensor import FeedForwardNet, OptimizerState
from app.models.transition import ReplayBuffer, Transition
from app.services.autodiff import apply_grads, backward, forward

if TYPE_CHECKING:
    from app.services.network import InteractionNetwork


class EpsilonSchedule:
    """
    Linear exploration decay from `start` to `end` over `decay_steps`
    actions, optionally scaled by the environments.
    """

    def __init__(
        self, start: float = 1.0, end: float = 0.05, decay_steps: int = 20000
    ):
        self.start = start
        self.end = end
        self.decay_steps = decay_steps

    def value(self, step: int, scale: float = 1.0) -> float:
        if self.decay_steps <= 0:
            eps = self.end
        else:
            fraction = min(1.0, step / self.decay_steps)
            eps = self.start + fraction * (self.end - self.start)

        return float(np.clip(eps * scale, 0.0, 1.0))


class StateAssembler:
    """
    Builds the Control Unit input vector.

    Layout: the last `history_window` actions as one-hot blocks (oldest
    first, zero blocks as padding), the last action one-hot, the greedy
    flag, the normalized steps since the task started, then one segment per
    environment signal vector and per CU-visible Node summary, in the order
    they were registered. One-hot blocks have `action_capacity` columns.
    """

    def __init__(
        self, history_window: int, action_capacity: int, step_norm: float
    ):
        self.history_window = history_window
        self.action_capacity = action_capacity
        self.step_norm = step_norm
        self.segments: list[tuple[str, int]] = []

    @property
    def meta_size(self) -> int:
        return (self.history_window + 1) * self.action_capacity + 2

    @property
    def size(self) -> int:
        return self.meta_size + sum(size for _, size in self.segments)

    def assemble(
        self,
        network: "InteractionNetwork",
        history: Sequence[int],
        last_action: int | None,
        greedy: bool,
        task_steps: int,
    ) -> np.ndarray:
        capacity = self.action_capacity
        state = np.zeros(self.size)

        padding = self.history_window - len(history)
        for position, head in enumerate(history):
            start = (padding + position) * capacity
            state[start + head] = 1.0

        offset = self.history_window * capacity
        if last_action is not None:
            state[offset + last_action] = 1.0

        offset += capacity
        state[offset] = 1.0 if greedy else 0.0
        state[offset + 1] = task_steps / self.step_norm
        offset += 2

        for key, size in self.segments:
            kind, ref = key.split(":", 1)
            if kind == "env" and ref in network.environments:
                state[offset : offset + size] = network.environments[
                    ref
                ].checked_signals()
            elif kind == "node" and ref in network.nodes:
                state[offset : offset + size] = network.nodes[ref].summary()
            offset += size

        return state


class ControlUnit:
    """
    The DQN that picks one action per iteration.

    - Attributes:
        - q_net, target_net: FeedForwardNet: One output head per action.
        - heads: list[ActionId]: Head index -> action, in registration order.
        - retired: set[int]: Masked heads.
        - buffer: ReplayBuffer
        - epsilon: EpsilonSchedule
        - history: deque[int]: Last executed heads.

    - Methods:
        - attach(network): Build the Q-networks for a network's catalog.
        - assemble_state(network): The current CU input.
        - select_action(state, eps): Epsilon-greedy choice.
        - td_targets(batch) / td_update(batch): Q-learning.
        - store_transition(t)
        - register_action(action) / retire_action(action)
    """

    def __init__(
        self,
        hidden: Sequence[int] = (64, 64),
        activation: Activation = Activation.TANH,
        gamma: float = 0.9,
        buffer_capacity: int = 10000,
        batch_size: int = 32,
        target_sync: int = 500,
        history_window: int = 3,
        action_capacity: int = 16,
        step_norm: float = 20.0,
        register_margin: float = 1.0,
        probe_size: int = 256,
        optimizer: OptimizerState | None = None,
        epsilon: EpsilonSchedule | None = None,
        seed: int = 0,
    ):
        self.hidden = list(hidden)
        self.activation = Activation(activation)
        self.gamma = gamma
        self.batch_size = batch_size
        self.target_sync = target_sync
        self.register_margin = register_margin
        self.probe_size = probe_size
        self.optimizer = optimizer or OptimizerState(OptimizerKind.ADAM, 1e-3)
        self.epsilon = epsilon or EpsilonSchedule()
        self.assembler = StateAssembler(
            history_window, action_capacity, step_norm
        )
        self.buffer = ReplayBuffer(buffer_capacity)

        self.init_rng = derive_rng(seed, "cu.init")
        self.explore_rng = derive_rng(seed, "cu.explore")
        self.replay_rng = derive_rng(seed, "cu.replay")

        self.q_net: FeedForwardNet | None = None
        self.target_net: FeedForwardNet | None = None
        self.heads: list[ActionId] = []
        self.retired: set[int] = set()
        self.updates = 0
        self.steps = 0
        self.observed_min: float | None = None

        self.history: deque[int] = deque(maxlen=history_window)
        self.last_action: int | None = None
        self.last_greedy = False
        self.task_steps = 0

    # structure

    def attach(self, network: "InteractionNetwork") -> None:
        """
        Build the Q-networks for the network's current catalog and layout.
        """
        for env in network.environments.values():
            if env.signal_size:
                self.assembler.segments.append(
                    (f"env:{env.id}", env.signal_size)
                )

        for node in network.visible_nodes():
            self.assembler.segments.append(
                (f"node:{node.id}", node.summary_length)
            )

        self.heads = network.actions()

        if not self.heads:
            raise ConfigurationError(messages.ERROR_ACTION_CATALOG_EMPTY)

        if len(self.heads) > self.assembler.action_capacity:
            raise ConfigurationError(messages.ERROR_ACTION_CAPACITY)

        sizes = [self.assembler.size, *self.hidden, len(self.heads)]
        self.q_net = FeedForwardNet.initialize(
            sizes, self.activation, self.init_rng
        )
        self.target_net = self.q_net.copy()
        network.attach_control_unit(self)

    @property
    def active_heads(self) -> list[int]:
        return [
            head for head in range(len(self.heads)) if head not in self.retired
        ]

    def head_of(self, action: ActionId) -> int:
        for head in reversed(range(len(self.heads))):
            if self.heads[head] == action and head not in self.retired:
                return head
        raise NotFoundError(f"{messages.ERROR_ACTION_NOT_FOUND}: {action}")

    def add_state_segment(self, key: str, size: int) -> None:
        """
        Append a state segment; the Q-networks get zero input columns and
        stored transitions are zero-padded.
        """
        if size == 0:
            return

        self.assembler.segments.append((key, size))
        self.q_net.extend_inputs(size)
        self.target_net.extend_inputs(size)
        self.optimizer.ensure_moments(self.q_net)
        self.buffer.pad_states(self.assembler.size)

    def register_action(
        self,
        action: ActionId,
        probe_states: np.ndarray | None = None,
    ) -> int:
        """
        Add an output head whose Q-value starts below every known estimate.

        The new head has zero weights and a bias equal to the minimum of the
        Q-values seen so far and over the probe states (given ones plus the
        most recent buffer states), minus the margin, so the greedy action
        of those states does not change.

        - Args:
            - action:: ActionId
            - probe_states:: np.ndarray | None: Extra states to protect.
        - Returns:
            - int: The new head index.
        """
        if any(self.heads[head] == action for head in self.active_heads):
            raise ConflictError(
                f"{messages.ERROR_ACTION_ALREADY_REGISTERED}: {action}"
            )

        if len(self.heads) >= self.assembler.action_capacity:
            raise ConfigurationError(messages.ERROR_ACTION_CAPACITY)

        probes = [np.zeros(self.assembler.size)]
        if probe_states is not None:
            probes.extend(np.atleast_2d(probe_states))
        recent = list(self.buffer)[-self.probe_size :]
        probes.extend(transition.state for transition in recent)

        q, _ = forward(self.q_net, np.vstack(probes))
        lowest = float(q.array()[:, self.active_heads].min())

        if self.observed_min is not None:
            lowest = min(lowest, self.observed_min)

        bias = lowest - self.register_margin
        self.q_net.extend_outputs(1, bias)
        self.target_net.extend_outputs(1, bias)
        self.optimizer.ensure_moments(self.q_net)
        self.heads.append(action)

        return len(self.heads) - 1

    def retire_action(self, action: ActionId) -> None:
        self.retired.add(self.head_of(action))

    # acting

    def assemble_state(self, network: "InteractionNetwork") -> np.ndarray:
        return self.assembler.assemble(
            network,
            self.history,
            self.last_action,
            self.last_greedy,
            self.task_steps,
        )

    def q_values(self, state: np.ndarray) -> np.ndarray:
        """
        Q-values of every head; retired heads read -inf.
        """
        output, _ = forward(self.q_net, state)
        values = output.array()
        values[list(self.retired)] = -np.inf
        return values

    def current_epsilon(self, scale: float = 1.0) -> float:
        return self.epsilon.value(self.steps, scale)

    def select_action(
        self, state: np.ndarray, eps: float
    ) -> tuple[ActionId, bool]:
        """
        Epsilon-greedy selection; ties go to the lowest head index.

        - Args:
            - state:: np.ndarray
            - eps:: float: Probability of a uniform random action.
        - Returns:
            - tuple[ActionId, bool]: The action and whether it was greedy.
        """
        active = self.active_heads

        if not active:
            raise ConfigurationError(messages.ERROR_ACTION_CATALOG_EMPTY)

        values = self.q_values(state)
        low = float(values[active].min())
        self.observed_min = (
            low if self.observed_min is None else min(self.observed_min, low)
        )

        if eps > 0.0 and self.explore_rng.random() < eps:
            head = int(self.explore_rng.choice(active))
            return self.heads[head], False

        return self.heads[int(np.argmax(values))], True

    def record_action(self, action: ActionId, greedy: bool) -> int:
        head = self.head_of(action)
        self.history.append(head)
        self.last_action = head
        self.last_greedy = greedy
        self.task_steps += 1
        self.steps += 1
        return head

    def episode_reset(self) -> None:
        self.task_steps = 0

    # learning

    def store_transition(self, transition: Transition) -> None:
        self.buffer.append(transition)

    def td_targets(self, batch: list[Transition]) -> np.ndarray:
        """
        r for transitions that end an episode, else
        r + gamma * max over active heads of Q_target(next_state).
        """
        rewards = np.array([t.reward for t in batch])
        ends = np.array([t.episode_end for t in batch])
        next_states = np.vstack([t.next_state for t in batch])

        next_q, _ = forward(self.target_net, next_states)
        best = next_q.array()[:, self.active_heads].max(axis=1)

        return np.where(ends, rewards, rewards + self.gamma * best)

    def td_update(self, batch: list[Transition]) -> float:
        """
        One squared-error step of Q(state, action) toward the TD targets.

        - Args:
            - batch:: list[Transition]: Non-empty.
        - Returns:
            - float: The mean squared TD error before the step.
        """
        if not batch:
            raise ConfigurationError(messages.ERROR_BATCH_EMPTY)

        targets = self.td_targets(batch)
        states = np.vstack([t.state for t in batch])
        actions = np.array([t.action for t in batch])
        rows = np.arange(len(batch))

        q, trace = forward(self.q_net, states)
        chosen = q.array()[rows, actions]
        errors = chosen - targets

        output_grad = np.zeros((len(batch), self.q_net.output_dim))
        output_grad[rows, actions] = 2.0 * errors / len(batch)

        _, grads = backward(self.q_net, trace, output_grad)
        apply_grads(self.q_net, grads, self.optimizer)

        self.updates += 1
        if self.target_sync and self.updates % self.target_sync == 0:
            self.sync_target()

        return float(np.mean(errors**2))

    def train_step(self) -> float | None:
        if len(self.buffer) < self.batch_size:
            return None

        batch = self.buffer.sample(self.replay_rng, self.batch_size)
        return self.td_update(batch)

    def sync_target(self) -> None:
        self.target_net.load_state(self.q_net)
