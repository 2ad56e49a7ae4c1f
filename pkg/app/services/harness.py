import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np

from app.core.constants import messages
from app.core.constants.enums import ExperimentId
from app.core.errors import ConfigurationError
from app.core.generate.seeds import derive_rng
from app.logging import LogManager
from app.models.tensor import FeedForwardNet, OptimizerState
from app.repositories.metrics import MetricsRepository
from app.repositories.parameters import ParameterRepository
from app.repositories.snapshot import SnapshotRepository
from app.schemas.config import RunConfig
from app.schemas.parameters import NetParameters, ParameterFile
from app.schemas.result import RunResult, SweepResult
from app.services.autodiff import apply_grads, backward, forward, mse_loss
from app.services.control_unit import ControlUnit, EpsilonSchedule
from app.services.environments import exp1_pretrain_targets
from app.services.layouts import Layout, build_layout
from app.services.metrics import MetricsCollector
from app.services.network import InteractionNetwork
from app.services.runtime import InteractionLoop
from app.services.snapshot import SnapshotWriter
from app.services.wheels import TrainingWheels, environment_script

PARAMETERS_FILE = "parameters.json"
VALIDATION_SAMPLES = 256
VALIDATION_EVERY = 250

# One labelled sample: the value of every input Node and the target of
# every PU that has an oracle.
LabelledSample = tuple[dict[str, np.ndarray], dict[str, np.ndarray]]


def exp1_samples(rng: np.random.Generator) -> LabelledSample:
    a, b = rng.random(2)
    values = {"n0": np.array([a]), "n1": np.array([b])}
    return values, exp1_pretrain_targets(a, b)


ORACLES: dict[ExperimentId, Callable[[np.random.Generator], LabelledSample]]
ORACLES = {ExperimentId.EXP1: exp1_samples}


def build_control_unit(config: RunConfig) -> ControlUnit:
    section = config.control_unit
    return ControlUnit(
        hidden=section.hidden,
        activation=section.activation,
        gamma=section.gamma,
        buffer_capacity=section.buffer_capacity,
        batch_size=section.batch_size,
        target_sync=section.target_sync,
        history_window=section.history_window,
        action_capacity=section.action_capacity,
        step_norm=section.step_norm,
        register_margin=section.register_margin,
        probe_size=section.probe_size,
        optimizer=config.optimizer.cu.build(),
        epsilon=EpsilonSchedule(
            section.eps_start, section.eps_end, section.eps_decay_steps
        ),
        seed=config.seed,
    )


def wheels_schedule(
    config: RunConfig, network: InteractionNetwork
) -> TrainingWheels:
    """
    Training wheels following the scripted-optimal policy of the network's
    environments until `wheels.active_until`.

    - Args:
        - config:: RunConfig
        - network:: InteractionNetwork
    - Returns:
        - TrainingWheels
    - Raises:
        - ConfigurationError: No environment has a script.
    """
    if not any(env.has_script for env in network.environments.values()):
        raise ConfigurationError(messages.ERROR_WHEELS_NO_SCRIPT)

    return TrainingWheels(
        environment_script,
        active_until=config.wheels.active_until,
        scripted_reward=config.wheels.scripted_reward,
        enforce=config.wheels.enforce,
    )


def _pu_input(pu_inputs: list[str], values: dict[str, np.ndarray]):
    return np.concatenate([values[node_id] for node_id in pu_inputs])


def pretrain_pus(config: RunConfig) -> ParameterFile:
    """
    Train every PU with an oracle on labelled samples, one sample per
    step, until its validation mse falls below `pretrain.threshold` or
    `pretrain.sample_budget` samples were used.

    - Args:
        - config:: RunConfig
    - Returns:
        - ParameterFile: Parameters, final losses and convergence flags.
    - Raises:
        - ConfigurationError: The experiment has no oracle labels.
    """
    if config.experiment not in ORACLES:
        raise ConfigurationError(messages.ERROR_PRETRAIN_NO_LABELS)

    oracle = ORACLES[config.experiment]
    network = build_layout(config).network
    section = config.pretrain

    validation_rng = derive_rng(config.seed, "pretrain.validation")
    validation = [oracle(validation_rng) for _ in range(VALIDATION_SAMPLES)]

    pus, losses, converged = {}, {}, {}
    for pu_id in sorted(validation[0][1]):
        pu = network.pu(pu_id)
        optimizer = OptimizerState(config.optimizer.pu.kind, section.lr)
        rng = derive_rng(config.seed, f"pretrain.{pu_id}")

        inputs = np.vstack([_pu_input(pu.inputs, v) for v, _ in validation])
        targets = np.vstack([t[pu_id] for _, t in validation])

        def validation_loss() -> float:
            output, _ = forward(pu.net, inputs)
            return float(np.mean((output.array() - targets) ** 2))

        loss = validation_loss()
        for sample in range(1, section.sample_budget + 1):
            if loss < section.threshold:
                break

            values, labels = oracle(rng)
            output, trace = forward(pu.net, _pu_input(pu.inputs, values))
            _, grad = mse_loss(output, labels[pu_id])
            _, grads = backward(pu.net, trace, grad)
            apply_grads(pu.net, grads, optimizer)

            if sample % VALIDATION_EVERY == 0:
                loss = validation_loss()

        loss = validation_loss()
        pus[pu_id] = NetParameters.model_validate(pu.net.to_dict())
        losses[pu_id] = loss
        converged[pu_id] = loss < section.threshold

    parameters = ParameterFile(
        experiment=config.experiment.value,
        seed=config.seed,
        pus=pus,
        losses=losses,
        converged=converged,
    )

    if parameters.all_converged:
        LogManager.create_info_log(
            action="pretrain",
            experiment=config.experiment.value,
            seed=config.seed,
            detail=f"{messages.MESSAGE_PRETRAIN_CONVERGED}: {losses}",
        )
    else:
        LogManager.create_warning_log(
            action="pretrain",
            experiment=config.experiment.value,
            seed=config.seed,
            detail=f"{messages.MESSAGE_PRETRAIN_NOT_CONVERGED}: {losses}",
        )

    return parameters


def load_parameters(
    network: InteractionNetwork, parameters: ParameterFile
) -> None:
    """
    Copy pretrained parameters into the PUs of a network, bit for bit.
    """
    for pu_id, net in parameters.pus.items():
        network.pu(pu_id).net.load_state(
            FeedForwardNet.from_dict(net.to_dict())
        )


def prepare_layout(
    config: RunConfig, out_dir: str
) -> tuple[Layout, bool | None]:
    """
    Build the experiment layout and apply pretrained parameters when the
    config asks for them. Returns the layout and the pretraining status,
    or None when no pretraining was involved.
    """
    layout = build_layout(config)
    converged = None

    if config.pretrain_enabled:
        if config.pretrain.parameters_file:
            parameters = ParameterRepository.get(
                config.pretrain.parameters_file
            )
        else:
            parameters = pretrain_pus(config)
            ParameterRepository.add(
                os.path.join(out_dir, PARAMETERS_FILE), parameters
            )
        load_parameters(layout.network, parameters)
        converged = parameters.all_converged

    return layout, converged


def build_loop(
    config: RunConfig, network: InteractionNetwork
) -> InteractionLoop:
    """
    Attach a Control Unit to the network and wrap both in a loop.
    """
    control_unit = build_control_unit(config)
    control_unit.attach(network)
    wheels = (
        wheels_schedule(config, network) if config.wheels_enabled else None
    )

    return InteractionLoop(
        network,
        control_unit,
        wheels=wheels,
        route_policy=config.tape.route_policy,
        route_clip=config.tape.route_clip,
        exploratory_scale=config.tape.exploratory_scale,
        batched=config.tape.batched,
        handler_penalty=config.runtime.handler_penalty,
        train=config.control_unit.train,
        experiment=config.experiment.value,
        seed=config.seed,
    )


def run_experiment(config: RunConfig, out_dir: str) -> RunResult:
    """
    Build, prepare and run one experiment, streaming metrics and
    snapshots into `out_dir`.

    - Args:
        - config:: RunConfig
        - out_dir:: str
    - Returns:
        - RunResult
    """
    experiment = config.experiment.value
    os.makedirs(out_dir, exist_ok=True)
    LogManager.create_info_log(
        action="run",
        experiment=experiment,
        seed=config.seed,
        iteration=0,
        detail=f"{messages.MESSAGE_RUN_STARTED}: {out_dir}",
    )

    layout, converged = prepare_layout(config, out_dir)
    loop = build_loop(config, layout.network)

    metrics_path = os.path.join(out_dir, config.metrics.file)
    collector = MetricsCollector(
        MetricsRepository(metrics_path),
        config.metrics.window,
        experiment,
        config.seed,
        config.resolved(),
    )
    collector.pretrain_converged = converged
    collector.start()

    writer = SnapshotWriter(
        SnapshotRepository(out_dir),
        every=config.snapshot.every,
        on_finish=config.snapshot.on_finish,
        experiment=experiment,
        seed=config.seed,
    )

    loop.run(config.iterations, [collector, writer])
    summary = collector.summary()

    LogManager.create_info_log(
        action="run",
        experiment=experiment,
        seed=config.seed,
        iteration=layout.network.iteration,
        detail=f"{messages.MESSAGE_RUN_FINISHED}: {summary.to_dict()}",
    )

    return RunResult(
        experiment=experiment,
        seed=config.seed,
        out_dir=out_dir,
        metrics_file=metrics_path,
        snapshots=writer.paths,
        summary=summary,
    )


def run_sweep(
    config: RunConfig, seeds: list[int], out_dir: str
) -> SweepResult:
    """
    Run one experiment per seed, one worker thread each, into
    `out_dir/seed_<seed>`, then merge the results into `sweep.json`.
    """
    def run_seed(seed: int) -> RunResult:
        seeded = config.model_copy(update={"seed": seed})
        return run_experiment(seeded, os.path.join(out_dir, f"seed_{seed}"))

    with ThreadPoolExecutor(max_workers=max(1, len(seeds))) as executor:
        runs = list(executor.map(run_seed, seeds))

    result = SweepResult(experiment=config.experiment.value, runs=runs)
    os.makedirs(out_dir, exist_ok=True)
    with open(
        os.path.join(out_dir, "sweep.json"), "w", encoding="utf-8"
    ) as file:
        file.write(result.model_dump_json(indent=2))

    LogManager.create_info_log(
        action="sweep",
        experiment=config.experiment.value,
        detail=f"{messages.MESSAGE_SWEEP_FINISHED}: {seeds}",
    )

    return result
