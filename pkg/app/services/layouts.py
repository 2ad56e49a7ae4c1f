from dataclasses import dataclass
from typing import Callable

import numpy as np

from app.core.constants.enums import ExperimentId
from app.core.generate.seeds import derive_rng
from app.models.processing_unit import ProcessingUnit
from app.models.tensor import FeedForwardNet, Layer
from app.schemas.config import RunConfig
from app.services.environments import (
    Curriculum,
    Exp1Environment,
    Exp2Environment,
    ReplayEnvironment,
    ReplayLane,
    ReplayStore,
    SequenceTaskEnvironment,
    TaskEnvironment,
    running_sum_stream,
    snap_binary,
    target_net_stream,
)
from app.services.network import InteractionNetwork
from app.services.tape import ProvenanceTape


@dataclass
class Layout:
    """
    A network wired for one experiment.

    - Attributes:
        - network: InteractionNetwork
        - replay_store: ReplayStore | None: Present when replay is on.
    """

    network: InteractionNetwork
    replay_store: ReplayStore | None = None


def pu_net(
    config: RunConfig, input_dim: int, output_dim: int, pu_id: str
) -> FeedForwardNet:
    """
    A freshly initialized PU network drawn from the PU's own stream.
    """
    sizes = [input_dim, *config.layout.pu_hidden, output_dim]
    rng = derive_rng(config.seed, f"pu.{pu_id}")
    return FeedForwardNet.initialize(sizes, config.layout.pu_activation, rng)


def _add_pu(
    network: InteractionNetwork,
    config: RunConfig,
    pu_id: str,
    inputs: list[str],
    outputs: list[str],
    output_filter: Callable | None = None,
) -> ProcessingUnit:
    input_dim = sum(network.node(node_id).size for node_id in inputs)
    output_dim = sum(network.node(node_id).size for node_id in outputs)
    pu = ProcessingUnit(
        pu_id,
        pu_net(config, input_dim, output_dim, pu_id),
        inputs,
        outputs,
        optimizer=config.optimizer.pu.build(),
        output_filter=output_filter,
    )
    network.add_pu(pu)
    return pu


def _add_mover(
    network: InteractionNetwork, pu_id: str, source: str, target: str
) -> ProcessingUnit:
    """
    A fixed identity PU that copies `source` into `target`.
    """
    size = network.node(source).size
    pu = ProcessingUnit(
        pu_id,
        FeedForwardNet([Layer(np.eye(size), np.zeros(size))]),
        [source],
        [target],
        trainable=False,
    )
    network.add_pu(pu)
    return pu


def _empty_network(config: RunConfig) -> InteractionNetwork:
    return InteractionNetwork(
        tape=ProvenanceTape(config.tape.capacity, config.tape.horizon),
        batch_policy=config.runtime.batch_output_policy,
    )


def build_exp1(config: RunConfig) -> Layout:
    """
    n0 and n1 receive the two inputs, n2 takes the submission and the
    CU-visible n3 holds the comparison. pu0 compares (n0, n1) into n3,
    pu1 maps n0 to n2 and pu2 maps n1 to n2.

    With replay on, aliases of pu1 and pu2 read r0 and r2 and write r1
    and r3, sharing the live parameters.
    """
    network = _empty_network(config)
    for node_id in ("n0", "n1", "n2"):
        network.add_node(node_id, 1)
    network.add_node("n3", 1, cu_visible=True)

    _add_pu(network, config, "pu0", ["n0", "n1"], ["n3"])
    pu1 = _add_pu(network, config, "pu1", ["n0"], ["n2"])
    pu2 = _add_pu(network, config, "pu2", ["n1"], ["n2"])

    store = None
    if config.replay.enabled:
        store = ReplayStore(
            config.replay.capacity, derive_rng(config.seed, "replay.store")
        )
        for node_id in ("r0", "r1", "r2", "r3"):
            network.add_node(node_id, 1)

        lanes = []
        for live, source, target in ((pu1, "r0", "r1"), (pu2, "r2", "r3")):
            network.add_pu(live.alias(f"{live.id}r", [source], [target]))
            lanes.append(ReplayLane(live.id, [source], target))

        network.add_environment(
            ReplayEnvironment(
                derive_rng(config.seed, "env.replay"),
                store,
                lanes,
                reward=config.replay.reward,
            )
        )

    network.add_environment(
        Exp1Environment(
            derive_rng(config.seed, "env.exp1"),
            variant=config.exp1.variant,
            max_steps=config.exp1.max_steps,
            timeout_penalty=config.exp1.timeout_penalty,
            success_mse=config.exp1.success_mse,
            replay_store=store,
        )
    )

    return Layout(network, store)


def build_exp2(config: RunConfig) -> Layout:
    """
    n0 receives the sequence values, n1 takes the final output and n2
    holds the intermediate result. pu0 submits n2 to n1, pu1 folds
    (n0, n2) into n2 and pu2 resets n2.
    """
    section = config.exp2
    network = _empty_network(config)
    network.add_node("n0", 1)
    network.add_node("n1", 1)
    network.add_node("n2", 1, cu_visible=True)

    _add_pu(network, config, "pu0", ["n2"], ["n1"])
    _add_pu(
        network,
        config,
        "pu1",
        ["n0", "n2"],
        ["n2"],
        output_filter=snap_binary if section.round_intermediate else None,
    )
    _add_pu(network, config, "pu2", ["n2"], ["n2"])

    network.add_environment(
        Exp2Environment(
            derive_rng(config.seed, "env.exp2"),
            reductor=section.reductor,
            constant=section.constant,
            curriculum=Curriculum(
                section.initial_length,
                section.success_streak_up,
                section.fail_streak_down,
            ),
            wrong_penalty=section.wrong_penalty,
            invalid_penalty=section.invalid_penalty,
            timeout_penalty=section.timeout_penalty,
            scale_exploration=section.scale_exploration,
        )
    )

    return Layout(network)


def build_fnn(config: RunConfig) -> Layout:
    """
    A feed-forward network as an Interaction Network: the task environment
    writes n0, pu0 maps n0 to n1 and the environment grades n1.

    With movers, pu0 reads n2 and writes n3 instead; mv_in copies n0 to n2
    and mv_out copies n3 to n1.
    """
    fixture = config.fixture
    network = _empty_network(config)
    network.add_node("n0", fixture.input_dim)
    network.add_node("n1", fixture.output_dim)

    if fixture.movers:
        network.add_node("n2", fixture.input_dim)
        network.add_node("n3", fixture.output_dim)
        _add_mover(network, "mv_in", "n0", "n2")
        _add_pu(network, config, "pu0", ["n2"], ["n3"])
        _add_mover(network, "mv_out", "n3", "n1")
        sequence = ["mv_in", "pu0", "mv_out"]
    else:
        _add_pu(network, config, "pu0", ["n0"], ["n1"])
        sequence = ["pu0"]

    rng = derive_rng(config.seed, "env.task")
    network.add_environment(
        TaskEnvironment(
            rng,
            target_net_stream(rng, fixture.input_dim, fixture.output_dim),
            pu_sequence=sequence,
        )
    )

    return Layout(network)


def build_rnn(config: RunConfig) -> Layout:
    """
    A recurrent network: pu0 reads the item in n0 and the memory n2 and
    writes the output n1 and the memory n2.
    """
    fixture = config.fixture
    network = _empty_network(config)
    network.add_node("n0", 1)
    network.add_node("n1", 1)
    network.add_node("n2", fixture.memory_size)
    _add_pu(network, config, "pu0", ["n0", "n2"], ["n1", "n2"])

    rng = derive_rng(config.seed, "env.task")
    network.add_environment(
        SequenceTaskEnvironment(
            rng, running_sum_stream(rng, fixture.sequence_length)
        )
    )

    return Layout(network)


LAYOUTS: dict[ExperimentId, Callable[[RunConfig], Layout]] = {
    ExperimentId.EXP1: build_exp1,
    ExperimentId.EXP2: build_exp2,
    ExperimentId.FNN: build_fnn,
    ExperimentId.RNN: build_rnn,
}


def build_layout(config: RunConfig) -> Layout:
    return LAYOUTS[config.experiment](config)
