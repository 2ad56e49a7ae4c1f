from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable

from app.models.action import ActionId

if TYPE_CHECKING:
    from app.services.network import InteractionNetwork

ScriptedPolicy = Callable[["InteractionNetwork"], ActionId | None]


@dataclass
class ScriptedStep:
    """
    The scripted action of one iteration and the reward for following it.
    """

    action: ActionId | None
    reward: float

    def reward_for(self, chosen: ActionId) -> float:
        return self.reward if chosen == self.action else 0.0


class TrainingWheels:
    """
    A temporary hardcoded policy. While active, the Control Unit is trained
    on the script-following reward instead of the environments' reward.

    - Attributes:
        - policy: ScriptedPolicy: Next scripted action for a network state.
        - active_until: int: Last iteration (exclusive) the wheels are on.
        - scripted_reward: float: Reward for following the script.
        - enforce: bool: Execute the scripted action instead of the CU's.
    """

    def __init__(
        self,
        policy: ScriptedPolicy,
        active_until: int,
        scripted_reward: float = 1.0,
        enforce: bool = False,
    ):
        self.policy = policy
        self.active_until = active_until
        self.scripted_reward = scripted_reward
        self.enforce = enforce

    def is_active(self, iteration: int) -> bool:
        return iteration < self.active_until

    def scripted_step(
        self, network: "InteractionNetwork"
    ) -> ScriptedStep | None:
        """
        The scripted next action, or None once the wheels came off.
        """
        if not self.is_active(network.iteration):
            return None

        return ScriptedStep(self.policy(network), self.scripted_reward)


def environment_script(network: "InteractionNetwork") -> ActionId | None:
    """
    The first scripted action offered by the network's environments, in
    ascending environment id order.
    """
    for env_id in sorted(network.environments):
        action = network.environments[env_id].scripted_action(network)
        if action is not None:
            return action
    return None
