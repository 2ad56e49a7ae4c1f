from typing import Iterable

import numpy as np

from app.core.constants import messages
from app.core.constants.enums import Activation, NonFinitePolicy, OptimizerKind
from app.core.errors import RejectedInputError
from app.core.generate.ids import id_generator, parameter_checksum


class Tensor:
    """
    A dense real-valued array of rank 1 or 2, stored row-major as a flat
    float64 vector.

    - Attributes:
        - shape: tuple[int, ...]: Positive dimensions.
        - data: np.ndarray: Flat values, len(data) == product(shape).
    """

    __slots__ = ("shape", "data")

    def __init__(self, data, shape: Iterable[int] | None = None):
        array = np.asarray(data, dtype=np.float64)

        if shape is None:
            shape = array.shape if array.ndim > 0 else (1,)

        shape = tuple(int(size) for size in shape)

        if not 1 <= len(shape) <= 2:
            raise RejectedInputError(messages.ERROR_TENSOR_RANK)

        if any(size <= 0 for size in shape):
            raise RejectedInputError(messages.ERROR_TENSOR_EMPTY_SHAPE)

        flat = array.reshape(-1)

        if int(np.prod(shape)) != flat.size:
            raise RejectedInputError(messages.ERROR_TENSOR_SHAPE_MISMATCH)

        if not np.all(np.isfinite(flat)):
            raise RejectedInputError(messages.ERROR_TENSOR_NOT_FINITE)

        self.shape = shape
        self.data = flat.copy()

    @classmethod
    def zeros(cls, *shape: int) -> "Tensor":
        return cls(np.zeros(int(np.prod(shape))), shape)

    @classmethod
    def from_array(cls, array: np.ndarray) -> "Tensor":
        return cls(array, np.shape(array) or (1,))

    def array(self) -> np.ndarray:
        """
        A copy of the values with the tensor's shape.
        """
        return self.data.reshape(self.shape).copy()

    def tolist(self) -> list:
        return self.array().tolist()

    def __len__(self) -> int:
        return int(self.data.size)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Tensor):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(
            self.data, other.data
        )

    def __repr__(self) -> str:
        return f"Tensor(shape={self.shape}, data={self.data.tolist()})"


class Layer:
    """
    One affine map followed by an activation.

    - Attributes:
        - weight: np.ndarray: Shape (out_dim, in_dim).
        - bias: np.ndarray: Shape (out_dim,).
        - activation: Activation
    """

    __slots__ = ("weight", "bias", "activation")

    def __init__(
        self,
        weight: np.ndarray,
        bias: np.ndarray,
        activation: Activation = Activation.IDENTITY,
    ):
        self.weight = np.array(weight, dtype=np.float64, ndmin=2)
        self.bias = np.array(bias, dtype=np.float64).reshape(-1)
        self.activation = Activation(activation)

        if self.bias.size != self.weight.shape[0]:
            raise RejectedInputError(messages.ERROR_NET_LAYERS_CHAIN)

    @property
    def input_dim(self) -> int:
        return int(self.weight.shape[1])

    @property
    def output_dim(self) -> int:
        return int(self.weight.shape[0])


class FeedForwardNet:
    """
    A feed-forward network made of chained Layers. Used both inside the
    Processing Units and as the Control Unit's Q-network.

    - Attributes:
        - layers: list[Layer]: Ordered layers, dimensions chain.
        - token: str: Identity of this network object; traces carry it.
        - version: int: Incremented on every parameter update.

    - Methods:
        - initialize(sizes, activations, rng): Seeded uniform init.
        - parameters(): The live parameter arrays [W0, b0, W1, b1, ...].
        - checksum(): Digest of all parameters.
        - copy(): Independent deep copy.
        - load_state(other): Copy parameter values from another network.
        - extend_outputs(count, bias): Append output heads.
        - extend_inputs(count): Append zero input columns.
    """

    def __init__(self, layers: list[Layer]):
        if not layers:
            raise RejectedInputError(messages.ERROR_NET_EMPTY)

        for previous, current in zip(layers, layers[1:]):
            if previous.output_dim != current.input_dim:
                raise RejectedInputError(messages.ERROR_NET_LAYERS_CHAIN)

        self.layers = layers
        self.token = id_generator()
        self.version = 0

    @classmethod
    def initialize(
        cls,
        sizes: list[int],
        activations: list[Activation] | Activation,
        rng: np.random.Generator,
    ) -> "FeedForwardNet":
        """
        Build a network with weights uniform in [-1/sqrt(fan_in),
        +1/sqrt(fan_in)] and biases drawn from the same range.

        - Args:
            - sizes:: list[int]: [input_dim, hidden..., output_dim].
            - activations:: list[Activation] | Activation: One per layer, or
              a single hidden activation (the last layer is then identity).
            - rng:: Generator: The seeded stream to draw from.
        - Returns:
            - FeedForwardNet
        """
        n_layers = len(sizes) - 1

        if isinstance(activations, (Activation, str)):
            activations = [Activation(activations)] * (n_layers - 1) + [
                Activation.IDENTITY
            ]

        if n_layers < 1 or len(activations) != n_layers:
            raise RejectedInputError(messages.ERROR_NET_LAYERS_CHAIN)

        layers = []
        for fan_in, fan_out, activation in zip(
            sizes[:-1], sizes[1:], activations
        ):
            bound = 1.0 / np.sqrt(fan_in)
            weight = rng.uniform(-bound, bound, size=(fan_out, fan_in))
            bias = rng.uniform(-bound, bound, size=fan_out)
            layers.append(Layer(weight, bias, activation))

        return cls(layers)

    @property
    def input_dim(self) -> int:
        return self.layers[0].input_dim

    @property
    def output_dim(self) -> int:
        return self.layers[-1].output_dim

    @property
    def dims(self) -> tuple[tuple[int, int], ...]:
        return tuple(
            (layer.input_dim, layer.output_dim) for layer in self.layers
        )

    def parameters(self) -> list[np.ndarray]:
        params = []
        for layer in self.layers:
            params.append(layer.weight)
            params.append(layer.bias)
        return params

    def checksum(self) -> str:
        return parameter_checksum(self.parameters())

    def copy(self) -> "FeedForwardNet":
        clone = FeedForwardNet(
            [
                Layer(layer.weight.copy(), layer.bias.copy(), layer.activation)
                for layer in self.layers
            ]
        )
        clone.version = self.version
        return clone

    def load_state(self, other: "FeedForwardNet") -> None:
        if other.dims != self.dims:
            raise RejectedInputError(messages.ERROR_NET_GRADS_SHAPE)

        for mine, theirs in zip(self.layers, other.layers):
            mine.weight[...] = theirs.weight
            mine.bias[...] = theirs.bias
            mine.activation = theirs.activation

        self.version += 1

    def extend_outputs(self, count: int, bias: float) -> None:
        last = self.layers[-1]
        last.weight = np.vstack(
            [last.weight, np.zeros((count, last.input_dim))]
        )
        last.bias = np.concatenate([last.bias, np.full(count, float(bias))])
        self.version += 1

    def extend_inputs(self, count: int) -> None:
        first = self.layers[0]
        first.weight = np.hstack(
            [first.weight, np.zeros((first.output_dim, count))]
        )
        self.version += 1

    def to_dict(self) -> dict:
        return {
            "layers": [
                {
                    "weight": layer.weight.tolist(),
                    "bias": layer.bias.tolist(),
                    "activation": layer.activation.value,
                }
                for layer in self.layers
            ]
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FeedForwardNet":
        return cls(
            [
                Layer(
                    np.array(layer["weight"], dtype=np.float64),
                    np.array(layer["bias"], dtype=np.float64),
                    Activation(layer["activation"]),
                )
                for layer in data["layers"]
            ]
        )


class ForwardTrace:
    """
    Intermediates of one forward call, needed by backward.

    - Attributes:
        - net_token: str: Token of the network that produced the trace.
        - inputs: np.ndarray: Input rows, shape (batch, input_dim).
        - pre: list[np.ndarray]: Per-layer pre-activations.
        - post: list[np.ndarray]: Per-layer post-activations.
        - batched: bool: Whether the forward input was rank 2.
    """

    __slots__ = ("net_token", "dims", "inputs", "pre", "post", "batched")

    def __init__(
        self,
        net_token: str,
        dims: tuple[tuple[int, int], ...],
        inputs: np.ndarray,
        batched: bool,
    ):
        self.net_token = net_token
        self.dims = dims
        self.inputs = inputs
        self.pre: list[np.ndarray] = []
        self.post: list[np.ndarray] = []
        self.batched = batched

    @property
    def batch_size(self) -> int:
        return int(self.inputs.shape[0])

    def __len__(self) -> int:
        return len(self.pre)


class ParamGrads:
    """
    Gradients of every parameter of one network, in parameters() order.
    """

    __slots__ = ("arrays",)

    def __init__(self, arrays: list[np.ndarray]):
        self.arrays = [np.asarray(array, dtype=np.float64) for array in arrays]

    @classmethod
    def zeros_like(cls, net: FeedForwardNet) -> "ParamGrads":
        return cls([np.zeros_like(param) for param in net.parameters()])

    def norm(self) -> float:
        return float(
            np.sqrt(sum(float(np.sum(array**2)) for array in self.arrays))
        )

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(array)) for array in self.arrays)

    def scaled(self, factor: float) -> "ParamGrads":
        return ParamGrads([array * factor for array in self.arrays])

    def __add__(self, other: "ParamGrads") -> "ParamGrads":
        return ParamGrads(
            [mine + theirs for mine, theirs in zip(self.arrays, other.arrays)]
        )

    def add_(self, other: "ParamGrads") -> "ParamGrads":
        for mine, theirs in zip(self.arrays, other.arrays):
            mine += theirs
        return self

    def copy(self) -> "ParamGrads":
        return ParamGrads([array.copy() for array in self.arrays])

    def matches(self, net: FeedForwardNet) -> bool:
        params = net.parameters()
        return len(params) == len(self.arrays) and all(
            param.shape == array.shape
            for param, array in zip(params, self.arrays)
        )


class OptimizerState:
    """
    Optimizer of one network.

    - Attributes:
        - kind: OptimizerKind
        - lr: float: Learning rate.
        - clip_norm: float | None: Global gradient-norm clip.
        - non_finite: NonFinitePolicy: What to do with NaN/Inf gradients.
        - beta1, beta2, epsilon: Adam constants.
        - step: int: Number of applied updates.
        - m, v: list[np.ndarray] | None: Adam moments, parameter shaped.
    """

    def __init__(
        self,
        kind: OptimizerKind = OptimizerKind.SGD,
        lr: float = 0.01,
        clip_norm: float | None = None,
        non_finite: NonFinitePolicy = NonFinitePolicy.CLIP,
        beta1: float = 0.9,
        beta2: float = 0.999,
        epsilon: float = 1e-8,
    ):
        self.kind = OptimizerKind(kind)
        self.lr = float(lr)
        self.clip_norm = clip_norm
        self.non_finite = NonFinitePolicy(non_finite)
        self.beta1 = beta1
        self.beta2 = beta2
        self.epsilon = epsilon
        self.step = 0
        self.m: list[np.ndarray] | None = None
        self.v: list[np.ndarray] | None = None

    def ensure_moments(self, net: FeedForwardNet) -> None:
        """
        Create the Adam moments, or zero-pad them after the network grew.
        """
        params = net.parameters()

        if self.m is None or len(self.m) != len(params):
            self.m = [np.zeros_like(param) for param in params]
            self.v = [np.zeros_like(param) for param in params]
            return

        for index, param in enumerate(params):
            if self.m[index].shape != param.shape:
                self.m[index] = _pad_to(self.m[index], param.shape)
                self.v[index] = _pad_to(self.v[index], param.shape)


def _pad_to(array: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    padded = np.zeros(shape)
    region = tuple(slice(0, size) for size in array.shape)
    padded[region] = array
    return padded
