from pydantic import ConfigDict, Field

from app.core.constants.enums import (
    Activation,
    BatchOutputPolicy,
    Exp1Variant,
    ExperimentId,
    NonFinitePolicy,
    OptimizerKind,
    Reductor,
    RoutePolicy,
)
from app.models.tensor import OptimizerState
from app.schemas.settings import validators
from app.schemas.settings.base import BaseSchema


class ConfigSection(BaseSchema):
    """
    Base class of every run config section. Unknown keys are rejected.
    """

    model_config = ConfigDict(extra="forbid")


class OptimizerSection(ConfigSection):
    """
    Optimizer of a group of networks.

    Attributes:
        kind (OptimizerKind): sgd or adam.
        lr (float): Learning rate.
        clip_norm (float | None): Global gradient norm clip.
        non_finite (NonFinitePolicy): What to do with NaN/Inf gradients.
        beta1 (float): Adam first moment decay.
        beta2 (float): Adam second moment decay.
        epsilon (float): Adam denominator term.
    """

    kind: OptimizerKind = Field(
        examples=["sgd", "adam"], default=OptimizerKind.SGD
    )
    lr: float = Field(
        examples=[0.01, 0.001], default=0.01, description="Learning rate"
    )
    clip_norm: float | None = Field(
        examples=[1.0, None],
        default=None,
        gt=0,
        description="Global gradient norm clip",
    )
    non_finite: NonFinitePolicy = Field(
        examples=["clip", "reject"], default=NonFinitePolicy.CLIP
    )
    beta1: float = Field(default=0.9, ge=0, lt=1)
    beta2: float = Field(default=0.999, ge=0, lt=1)
    epsilon: float = Field(default=1e-8, gt=0)

    _validate_lr = validators.validate_lr

    def build(self) -> OptimizerState:
        return OptimizerState(
            kind=self.kind,
            lr=self.lr,
            clip_norm=self.clip_norm,
            non_finite=self.non_finite,
            beta1=self.beta1,
            beta2=self.beta2,
            epsilon=self.epsilon,
        )


class OptimizerConfig(ConfigSection):
    """
    Attributes:
        pu (OptimizerSection): Optimizer of every Processing Unit.
        cu (OptimizerSection): Optimizer of the Control Unit Q-network.
    """

    pu: OptimizerSection = Field(default_factory=OptimizerSection)
    cu: OptimizerSection = Field(
        default_factory=lambda: OptimizerSection(
            kind=OptimizerKind.ADAM, lr=1e-3
        )
    )


class ControlUnitConfig(ConfigSection):
    """
    Hyperparameters of the Control Unit.

    Attributes:
        hidden (list[int]): Hidden layer widths of the Q-network.
        activation (Activation): Hidden layer activation.
        gamma (float): Discount factor.
        buffer_capacity (int): Transition buffer size.
        batch_size (int): Transitions per TD update.
        target_sync (int): TD updates between target network copies.
        history_window (int): Past actions fed back as input.
        action_capacity (int): Width of every action one-hot block.
        step_norm (float): Normalizer of the steps-since-task-start input.
        register_margin (float): Gap below the lowest known Q-value given
            to a newly registered action.
        probe_size (int): Recent states protected on registration.
        eps_start (float): Initial exploration rate.
        eps_end (float): Final exploration rate.
        eps_decay_steps (int): Actions over which the rate decays.
        train (bool): Run a TD update every iteration.
    """

    hidden: list[int] = Field(examples=[[64, 64]], default=[64, 64])
    activation: Activation = Field(default=Activation.TANH)
    gamma: float = Field(examples=[0.9], default=0.9)
    buffer_capacity: int = Field(default=10000, ge=1)
    batch_size: int = Field(default=32, ge=1)
    target_sync: int = Field(default=500, ge=0)
    history_window: int = Field(default=3, ge=0)
    action_capacity: int = Field(default=16, ge=1)
    step_norm: float = Field(default=20.0, gt=0)
    register_margin: float = Field(default=1.0, ge=0)
    probe_size: int = Field(default=256, ge=0)
    eps_start: float = Field(default=1.0)
    eps_end: float = Field(default=0.05)
    eps_decay_steps: int = Field(default=20000, ge=0)
    train: bool = True

    _validate_hidden = validators.validate_hidden
    _validate_gamma = validators.validate_gamma
    _validate_epsilon = validators.validate_epsilon


class TapeConfig(ConfigSection):
    """
    Provenance tape and gradient routing.

    Attributes:
        capacity (int): Entries kept on the tape.
        horizon (int): Deepest chain a backprop walks.
        route_policy (RoutePolicy): Per-PU gradient normalization.
        route_clip (float): Norm bound of per_pu_clip.
        exploratory_scale (float): Gradient scale after random actions.
        batched (bool): Apply the gradients of an iteration at once.
    """

    capacity: int = Field(examples=[512], default=512)
    horizon: int = Field(examples=[8], default=8)
    route_policy: RoutePolicy = Field(default=RoutePolicy.NONE)
    route_clip: float = Field(default=1.0, gt=0)
    exploratory_scale: float = Field(default=1.0)
    batched: bool = False

    _validate_exploratory_scale = validators.validate_exploratory_scale
    _validate_tape_window = validators.validate_tape_window


class RuntimeConfig(ConfigSection):
    """
    Attributes:
        handler_penalty (float): CU reward when an environment handler
            raises.
        batch_output_policy (BatchOutputPolicy): How batch runs over
            accumulator entries are written.
    """

    handler_penalty: float = Field(default=-0.5)
    batch_output_policy: BatchOutputPolicy = Field(
        default=BatchOutputPolicy.MEAN_REDUCE
    )


class LayoutConfig(ConfigSection):
    """
    Architecture of the experiment Processing Units.

    Attributes:
        pu_hidden (list[int]): Hidden layer widths; empty means linear.
        pu_activation (Activation): Hidden layer activation.
    """

    pu_hidden: list[int] = Field(examples=[[], [8]], default=[8])
    pu_activation: Activation = Field(default=Activation.TANH)

    _validate_hidden = validators.validate_hidden


class Exp1Config(ConfigSection):
    """
    The choose-between-alternatives task.

    Attributes:
        variant (Exp1Variant): base, inputs_to_cu, training_wheels or
            pretrained_pus.
        max_steps (int): Iterations before an unsubmitted task times out.
        timeout_penalty (float): CU reward of a timeout.
        success_mse (float): Loss under which a submission succeeds.
    """

    variant: Exp1Variant = Field(
        examples=["base", "pretrained_pus"], default=Exp1Variant.BASE
    )
    max_steps: int = Field(default=10, ge=1)
    timeout_penalty: float = Field(default=0.0)
    success_mse: float = Field(default=0.01, gt=0)


class Exp2Config(ConfigSection):
    """
    The repeated-function-application task. The streak defaults are
    implementation choices.

    Attributes:
        reductor (Reductor): constant, passthrough or xor.
        constant (float): Result of the constant reductor.
        initial_length (int): First required sequence length.
        success_streak_up (int): Successes in a row that lengthen tasks.
        fail_streak_down (int): Failures in a row that shorten tasks.
        wrong_penalty (float): CU reward of a wrong submission.
        invalid_penalty (float): CU reward of an invalid action.
        timeout_penalty (float): CU reward of a timeout.
        round_intermediate (bool): Snap the memory Node to 0 or 1.
        scale_exploration (bool): Divide exploration by the length.
    """

    reductor: Reductor = Field(
        examples=["constant", "xor"], default=Reductor.CONSTANT
    )
    constant: float = Field(default=1.0)
    initial_length: int = Field(default=1, ge=1)
    success_streak_up: int = Field(default=10)
    fail_streak_down: int = Field(default=50)
    wrong_penalty: float = Field(default=-0.2)
    invalid_penalty: float = Field(default=-0.5)
    timeout_penalty: float = Field(default=-0.5)
    round_intermediate: bool = False
    scale_exploration: bool = True

    _validate_streak = validators.validate_streak


class ReplayConfig(ConfigSection):
    """
    Attributes:
        enabled (bool): Add the experience replay environment.
        capacity (int): Stored samples.
        reward (float): CU reward of one replayed sample.
    """

    enabled: bool = False
    capacity: int = Field(default=1000, ge=1)
    reward: float = Field(default=0.05)


class FixtureConfig(ConfigSection):
    """
    Sizes of the supervised fnn and rnn layouts.

    Attributes:
        input_dim (int)
        output_dim (int)
        memory_size (int): Size of the rnn memory Node.
        sequence_length (int): Items per rnn sequence.
        movers (bool): Route the fnn input and output through fixed
            identity PUs.
    """

    input_dim: int = Field(default=2, ge=1)
    output_dim: int = Field(default=1, ge=1)
    memory_size: int = Field(default=4, ge=1)
    sequence_length: int = Field(default=5, ge=1)
    movers: bool = False


class WheelsConfig(ConfigSection):
    """
    Attributes:
        enabled (bool | None): None turns the wheels on for the
            training_wheels variant only.
        active_until (int): First iteration without wheels.
        scripted_reward (float): Reward for following the script.
        enforce (bool): Execute the scripted action.
    """

    enabled: bool | None = None
    active_until: int = Field(default=100000, ge=0)
    scripted_reward: float = Field(default=1.0)
    enforce: bool = False


class PretrainConfig(ConfigSection):
    """
    Attributes:
        enabled (bool | None): None pretrains for the pretrained_pus
            variant only.
        threshold (float): Target mse of every PU.
        sample_budget (int): Samples per PU before giving up.
        lr (float): Supervised learning rate.
        parameters_file (str | None): Load instead of training when set.
    """

    enabled: bool | None = None
    threshold: float = Field(default=1e-4, gt=0)
    sample_budget: int = Field(default=50000, ge=1)
    lr: float = Field(default=0.05)
    parameters_file: str | None = None

    _validate_lr = validators.validate_lr


class MetricsConfig(ConfigSection):
    """
    Attributes:
        window (int): Iterations per metrics record.
        file (str): Metrics stream file name in the output directory.
    """

    window: int = Field(default=1000, ge=1)
    file: str = Field(default="metrics.jsonl")


class SnapshotConfig(ConfigSection):
    """
    Attributes:
        every (int): Iterations between snapshots; 0 disables them.
        on_finish (bool): Snapshot after the last iteration.
    """

    every: int = Field(default=10000, ge=0)
    on_finish: bool = True


class RunConfig(ConfigSection):
    """
    The complete configuration of one run.

    Attributes:
        experiment (ExperimentId): exp1, exp2, fnn or rnn.
        seed (int): Root seed of every random stream.
        iterations (int): Iteration budget.
    """

    experiment: ExperimentId = Field(
        examples=["exp1", "exp2"], default=ExperimentId.EXP1
    )
    seed: int = Field(examples=[0, 1, 2], default=0, ge=0)
    iterations: int = Field(examples=[100000], default=100000, ge=0)
    optimizer: OptimizerConfig = Field(default_factory=OptimizerConfig)
    control_unit: ControlUnitConfig = Field(
        default_factory=ControlUnitConfig
    )
    tape: TapeConfig = Field(default_factory=TapeConfig)
    runtime: RuntimeConfig = Field(default_factory=RuntimeConfig)
    layout: LayoutConfig = Field(default_factory=LayoutConfig)
    exp1: Exp1Config = Field(default_factory=Exp1Config)
    exp2: Exp2Config = Field(default_factory=Exp2Config)
    replay: ReplayConfig = Field(default_factory=ReplayConfig)
    fixture: FixtureConfig = Field(default_factory=FixtureConfig)
    wheels: WheelsConfig = Field(default_factory=WheelsConfig)
    pretrain: PretrainConfig = Field(default_factory=PretrainConfig)
    metrics: MetricsConfig = Field(default_factory=MetricsConfig)
    snapshot: SnapshotConfig = Field(default_factory=SnapshotConfig)

    @property
    def wheels_enabled(self) -> bool:
        if self.wheels.enabled is not None:
            return self.wheels.enabled
        return (
            self.experiment == ExperimentId.EXP1
            and self.exp1.variant == Exp1Variant.TRAINING_WHEELS
        )

    @property
    def pretrain_enabled(self) -> bool:
        if self.pretrain.enabled is not None:
            return self.pretrain.enabled
        return (
            self.experiment == ExperimentId.EXP1
            and self.exp1.variant == Exp1Variant.PRETRAINED_PUS
        )

    def resolved(self) -> dict:
        """
        Every value of the config, defaults included, as plain JSON types.
        """
        return self.model_dump(mode="json")
