import numpy as np
from pytest import fixture

from app.core.constants.enums import Activation
from app.core.generate.seeds import derive_rng
from app.models.processing_unit import ProcessingUnit
from app.models.tensor import FeedForwardNet, Layer, OptimizerState
from app.services.network import InteractionNetwork
from app.services.tape import ProvenanceTape


@fixture
def mock_rng():
    return derive_rng(0, "tests")


@fixture
def mock_net(mock_rng):
    return FeedForwardNet.initialize([3, 4, 2], Activation.TANH, mock_rng)


@fixture
def mock_chain_network(mock_rng):
    """
    n0 -> pu0 -> n1 -> pu1 -> n2, sgd with lr 0.1, tanh hidden layers.
    """
    network = InteractionNetwork(tape=ProvenanceTape(64, 8))
    network.add_node("n0", 2)
    network.add_node("n1", 3)
    network.add_node("n2", 1)

    for pu_id, inputs, outputs, sizes in (
        ("pu0", ["n0"], ["n1"], [2, 4, 3]),
        ("pu1", ["n1"], ["n2"], [3, 4, 1]),
    ):
        network.add_pu(
            ProcessingUnit(
                pu_id,
                FeedForwardNet.initialize(sizes, Activation.TANH, mock_rng),
                inputs,
                outputs,
                optimizer=OptimizerState("sgd", 0.1),
            )
        )

    return network


@fixture
def mock_identity_net():
    return FeedForwardNet([Layer(np.eye(1), np.zeros(1))])


@fixture
def mock_run_config():
    """
    A short exp1 run that still crosses several metrics windows and
    snapshot boundaries.
    """
    return {
        "experiment": "exp1",
        "seed": 7,
        "iterations": 300,
        "control_unit": {
            "hidden": [16],
            "buffer_capacity": 500,
            "batch_size": 8,
            "target_sync": 50,
            "eps_decay_steps": 200,
            "probe_size": 32,
        },
        "metrics": {"window": 100},
        "snapshot": {"every": 100},
    }


@fixture
def mock_exp2_config():
    return {
        "experiment": "exp2",
        "seed": 3,
        "iterations": 200,
        "control_unit": {"hidden": [16], "batch_size": 8},
        "layout": {"pu_hidden": [2], "pu_activation": "relu"},
        "exp2": {"reductor": "xor"},
        "metrics": {"window": 50},
        "snapshot": {"every": 0, "on_finish": False},
    }
