from dataclasses import dataclass, field
from typing import Protocol

import numpy as np

from app.core.constants import messages
from app.core.constants.enums import EpisodeEvent, PhaseName, RoutePolicy
from app.core.errors import RuntimeFailureError
from app.logging import LogManager
from app.models.action import ActionId
from app.models.tensor import ParamGrads
from app.models.transition import Transition
from app.services.autodiff import apply_grads
from app.services.control_unit import ControlUnit
from app.services.environments.base import EpisodeRecord, Feedback
from app.services.network import InteractionNetwork
from app.services.tape import (
    GradMap,
    interference_guard,
    normalize_route_grads,
)
from app.services.wheels import TrainingWheels


@dataclass
class GradientEvent:
    node_id: str
    norm: float


@dataclass
class IterationOutcome:
    """
    Everything one loop iteration did.

    - Attributes:
        - iteration: int
        - action: ActionId: The executed action.
        - greedy: bool
        - reward: float: The CU reward stored in the transition.
        - env_reward: float: Sum of the environment rewards.
        - episode_end: bool
        - events: list[EpisodeEvent]
        - gradients: list[GradientEvent]
        - pu_grad_norms: dict[str, float]: Applied gradient norm per PU.
        - phases: list[PhaseName]: Phases in the order they ran.
        - scripted: ActionId | None: The wheels' action, when active.
        - epsilon: float
        - td_loss: float | None
        - episodes: list[EpisodeRecord]: Tasks closed this iteration.
    """

    iteration: int
    action: ActionId
    greedy: bool
    reward: float
    env_reward: float = 0.0
    episode_end: bool = False
    events: list[EpisodeEvent] = field(default_factory=list)
    gradients: list[GradientEvent] = field(default_factory=list)
    pu_grad_norms: dict[str, float] = field(default_factory=dict)
    phases: list[PhaseName] = field(default_factory=list)
    scripted: ActionId | None = None
    chosen: ActionId | None = None
    epsilon: float = 0.0
    td_loss: float | None = None
    episodes: list[EpisodeRecord] = field(default_factory=list)

    @property
    def followed_script(self) -> bool | None:
        if self.scripted is None:
            return None
        return self.chosen == self.scripted


class RewardRouter:
    """
    Collects the CU reward of the current iteration.
    """

    def __init__(self):
        self.pending = 0.0
        self.episode_end = False
        self.finalized = False

    def add(self, reward: float, episode_end: bool = False) -> None:
        self.pending += float(reward)
        self.episode_end = self.episode_end or episode_end

    def finalize(self) -> tuple[float, bool]:
        if self.finalized:
            raise RuntimeFailureError(messages.ERROR_REWARD_FINALIZED)

        self.finalized = True
        return self.pending, self.episode_end


class LoopHook(Protocol):
    def on_step(
        self, loop: "InteractionLoop", outcome: IterationOutcome
    ) -> None: ...

    def on_finish(self, loop: "InteractionLoop") -> None: ...


class InteractionLoop:
    """
    The main loop: input, state, action, dispatch, feedback, transition.

    - Attributes:
        - network: InteractionNetwork
        - control_unit: ControlUnit
        - wheels: TrainingWheels | None
        - route_policy: RoutePolicy
        - route_clip: float
        - exploratory_scale: float: Gradient scale after random actions.
        - batched: bool: Apply all gradients of an iteration at once.
        - handler_penalty: float: Reward when an environment handler fails.
        - train: bool: Run a TD update every iteration.

    - Methods:
        - step(): One iteration.
        - run(n, hooks): n iterations.
        - route_gradient(node_id, grad, scale): Backprop and apply.
        - episode_boundary(): Close the current task.
    """

    def __init__(
        self,
        network: InteractionNetwork,
        control_unit: ControlUnit,
        wheels: TrainingWheels | None = None,
        route_policy: RoutePolicy = RoutePolicy.NONE,
        route_clip: float = 1.0,
        exploratory_scale: float = 1.0,
        batched: bool = False,
        handler_penalty: float = -0.5,
        train: bool = True,
        experiment: str = "",
        seed: int | None = None,
    ):
        self.network = network
        self.control_unit = control_unit
        self.wheels = wheels
        self.route_policy = RoutePolicy(route_policy)
        self.route_clip = route_clip
        self.exploratory_scale = exploratory_scale
        self.batched = batched
        self.handler_penalty = handler_penalty
        self.train = train
        self.experiment = experiment
        self.seed = seed
        self._batch: GradMap = {}
        self._norms: dict[str, float] = {}

    def _guarded(self, handler, *args) -> tuple[Feedback, bool]:
        try:
            return handler(*args), True
        except Exception as error:
            LogManager.create_error_log(
                action="environment",
                experiment=self.experiment,
                seed=self.seed,
                iteration=self.network.iteration,
                detail=f"{messages.ERROR_ENV_HANDLER_FAILED}: {error!r}",
            )
            return Feedback(reward=self.handler_penalty), False

    def step(self) -> IterationOutcome:
        """
        Run one iteration.

        - Returns:
            - IterationOutcome
        """
        network = self.network
        cu = self.control_unit
        phases = []
        router = RewardRouter()
        env_ids = sorted(network.environments)

        for env_id in env_ids:
            env = network.environments[env_id]
            delivered, ok = self._guarded(env.deliver, network)
            if not ok:
                router.add(delivered.reward)
        phases.append(PhaseName.INPUT)

        state = cu.assemble_state(network)
        phases.append(PhaseName.ASSEMBLE)

        scripted = self.wheels.scripted_step(network) if self.wheels else None
        scale = float(
            np.prod(
                [network.environments[i].exploration_scale() for i in env_ids]
            )
        )
        eps = cu.current_epsilon(scale)
        chosen, greedy = cu.select_action(state, eps)

        action = chosen
        if scripted and self.wheels.enforce and scripted.action is not None:
            action = scripted.action
            greedy = greedy and chosen == action
        phases.append(PhaseName.SELECT)

        head = cu.record_action(action, greedy)
        dispatched = Feedback()
        for env_id in env_ids:
            network.environments[env_id].observe(action)

        if action.is_pu:
            network.execute_pu(action.target)
        else:
            env = network.environment(action.target)
            dispatched, _ = self._guarded(env.perform, network, action.index)
        phases.append(PhaseName.DISPATCH)

        feedback = dispatched
        triggered = network.pop_triggered()
        for env_id in env_ids:
            env = network.environments[env_id]
            result, _ = self._guarded(
                env.evaluate, network, triggered.get(env_id, [])
            )
            feedback = feedback.merge(result)

        self._norms = {}
        scale = 1.0 if greedy else self.exploratory_scale
        gradient_events = [
            self.route_gradient(node_id, grad, scale)
            for node_id, grad in feedback.gradients
        ]
        if self.batched:
            self._flush_batch()

        router.add(feedback.reward, feedback.episode_end)
        env_reward, episode_end = router.finalize()

        reward = env_reward
        if scripted is not None:
            reward = scripted.reward_for(chosen)

        if episode_end:
            self.episode_boundary()
        phases.append(PhaseName.FEEDBACK)

        next_state = cu.assemble_state(network)
        cu.store_transition(
            Transition(state, head, reward, next_state, episode_end)
        )
        td_loss = cu.train_step() if self.train else None
        phases.append(PhaseName.STORE)

        episodes = []
        for env_id in env_ids:
            episodes.extend(network.environments[env_id].drain_finished())

        outcome = IterationOutcome(
            iteration=network.iteration,
            action=action,
            greedy=greedy,
            reward=reward,
            env_reward=env_reward,
            episode_end=episode_end,
            events=feedback.events,
            gradients=gradient_events,
            pu_grad_norms=dict(self._norms),
            phases=phases,
            scripted=scripted.action if scripted else None,
            chosen=chosen,
            epsilon=eps,
            td_loss=td_loss,
            episodes=episodes,
        )
        network.iteration += 1

        return outcome

    def run(self, n_iterations: int, hooks: list[LoopHook] = ()) -> dict:
        """
        Run n iterations, feeding every outcome to the hooks.

        - Args:
            - n_iterations:: int
            - hooks:: list[LoopHook]
        - Returns:
            - dict: iterations run, total and mean CU reward.
        """
        total = 0.0
        for _ in range(n_iterations):
            outcome = self.step()
            total += outcome.reward
            for hook in hooks:
                hook.on_step(self, outcome)

        for hook in hooks:
            hook.on_finish(self)

        return {
            "iterations": n_iterations,
            "total_reward": total,
            "mean_reward": total / n_iterations if n_iterations else 0.0,
        }

    def route_gradient(
        self, node_id: str, grad: np.ndarray, scale: float = 1.0
    ) -> GradientEvent:
        """
        Backpropagate a Node gradient through the tape, normalize it per PU,
        shrink it by `scale` and apply it (or keep it for the batch).
        """
        node = self.network.node(node_id)
        grad = np.asarray(grad, dtype=np.float64).reshape(node.read().shape)

        grads = self.network.tape.backprop_from_node(node, grad)
        grads = normalize_route_grads(
            grads, self.route_policy, self.route_clip
        )
        grads = interference_guard(grads, scale)

        for pu_id, pu_grads in grads.items():
            if self.batched:
                if pu_id in self._batch:
                    self._batch[pu_id].add_(pu_grads)
                else:
                    self._batch[pu_id] = pu_grads.copy()
            else:
                self._apply(pu_id, pu_grads)

        return GradientEvent(node_id, float(np.linalg.norm(grad)))

    def _apply(self, pu_id: str, grads: ParamGrads) -> None:
        pu = self.network.pus.get(pu_id)
        if pu is None:
            return

        apply_grads(pu.net, grads, pu.optimizer)
        self._norms[pu_id] = self._norms.get(pu_id, 0.0) + grads.norm()

    def _flush_batch(self) -> None:
        batch, self._batch = self._batch, {}
        for pu_id, grads in batch.items():
            self._apply(pu_id, grads)

    def episode_boundary(self) -> None:
        self.control_unit.episode_reset()
