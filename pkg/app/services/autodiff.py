from typing import Callable

import numpy as np

from app.core.constants import messages
from app.core.constants.enums import Activation, NonFinitePolicy, OptimizerKind
from app.core.errors import NonFiniteGradientError, RejectedInputError
from app.models.tensor import (
    FeedForwardNet,
    ForwardTrace,
    OptimizerState,
    ParamGrads,
    Tensor,
)


def activate(activation: Activation, pre: np.ndarray) -> np.ndarray:
    if activation == Activation.RELU:
        return np.maximum(pre, 0.0)
    if activation == Activation.TANH:
        return np.tanh(pre)
    if activation == Activation.SIGMOID:
        return 1.0 / (1.0 + np.exp(-pre))
    return pre.copy()


def activation_derivative(
    activation: Activation, pre: np.ndarray, post: np.ndarray
) -> np.ndarray:
    if activation == Activation.RELU:
        return (pre > 0.0).astype(np.float64)
    if activation == Activation.TANH:
        return 1.0 - post**2
    if activation == Activation.SIGMOID:
        return post * (1.0 - post)
    return np.ones_like(pre)


def _as_array(value: Tensor | np.ndarray | list) -> np.ndarray:
    if isinstance(value, Tensor):
        return value.array()
    return np.asarray(value, dtype=np.float64)


def forward(
    net: FeedForwardNet, input: Tensor | np.ndarray
) -> tuple[Tensor, ForwardTrace]:
    """
    Run the network on one input vector, or on a batch of row vectors.

    - Args:
        - net:: FeedForwardNet
        - input:: Tensor | np.ndarray: Shape (input_dim,) or
          (batch, input_dim).
    - Returns:
        - tuple[Tensor, ForwardTrace]: The output, shaped like the input
          (output_dim,) or (batch, output_dim), and the trace.
    """
    x = _as_array(input)
    batched = x.ndim == 2

    rows = x if batched else x.reshape(1, -1)

    if rows.shape[1] != net.input_dim:
        raise RejectedInputError(messages.ERROR_NET_INPUT_DIM)

    trace = ForwardTrace(net.token, net.dims, rows.copy(), batched)

    current = rows
    for layer in net.layers:
        pre = current @ layer.weight.T + layer.bias
        post = activate(layer.activation, pre)
        trace.pre.append(pre)
        trace.post.append(post)
        current = post

    output = current if batched else current[0]

    return Tensor.from_array(output), trace


def backward(
    net: FeedForwardNet,
    trace: ForwardTrace,
    output_grad: Tensor | np.ndarray,
) -> tuple[Tensor, ParamGrads]:
    """
    Backpropagate an output gradient through the network.

    The recorded activations are used with the current parameters, so a
    trace stays valid across parameter updates of the same network object.

    - Args:
        - net:: FeedForwardNet: The network that produced the trace.
        - trace:: ForwardTrace
        - output_grad:: Tensor | np.ndarray: Shaped like the forward output.
    - Returns:
        - tuple[Tensor, ParamGrads]: Gradient w.r.t. the input and the
          parameter gradients summed over the batch.
    """
    if trace.net_token != net.token or trace.dims != net.dims:
        raise RejectedInputError(messages.ERROR_NET_STALE_TRACE)

    grad = _as_array(output_grad).reshape(trace.batch_size, -1)

    if grad.shape[1] != net.output_dim:
        raise RejectedInputError(messages.ERROR_NET_OUTPUT_GRAD_DIM)

    arrays: list[np.ndarray] = []

    for index in reversed(range(len(net.layers))):
        layer = net.layers[index]
        delta = grad * activation_derivative(
            layer.activation, trace.pre[index], trace.post[index]
        )
        layer_input = trace.post[index - 1] if index > 0 else trace.inputs

        arrays.insert(0, delta.sum(axis=0))
        arrays.insert(0, delta.T @ layer_input)

        grad = delta @ layer.weight

    input_grad = grad if trace.batched else grad[0]

    return Tensor.from_array(input_grad), ParamGrads(arrays)


def clip_grads(grads: ParamGrads, clip_norm: float | None) -> ParamGrads:
    """
    Rescale the gradients to a global norm of at most clip_norm.
    """
    if clip_norm is None:
        return grads

    norm = grads.norm()

    if norm <= clip_norm or norm == 0.0:
        return grads

    return grads.scaled(clip_norm / norm)


def sanitize_grads(grads: ParamGrads, opt: OptimizerState) -> ParamGrads:
    if grads.is_finite():
        return grads

    if opt.non_finite == NonFinitePolicy.REJECT:
        raise NonFiniteGradientError(messages.ERROR_NON_FINITE_GRADIENT)

    bound = opt.clip_norm if opt.clip_norm is not None else 1.0

    return ParamGrads(
        [
            np.nan_to_num(array, nan=0.0, posinf=bound, neginf=-bound)
            for array in grads.arrays
        ]
    )


def apply_grads(
    net: FeedForwardNet, grads: ParamGrads, opt: OptimizerState
) -> FeedForwardNet:
    """
    Update the network parameters in place with one optimizer step.

    - Args:
        - net:: FeedForwardNet
        - grads:: ParamGrads: Must match the parameter shapes.
        - opt:: OptimizerState: Its step counter is incremented.
    - Returns:
        - FeedForwardNet: The same, updated, network.
    """
    if not grads.matches(net):
        raise RejectedInputError(messages.ERROR_NET_GRADS_SHAPE)

    grads = clip_grads(sanitize_grads(grads, opt), opt.clip_norm)
    params = net.parameters()

    if opt.kind == OptimizerKind.ADAM:
        opt.ensure_moments(net)
        step = opt.step + 1
        correction1 = 1.0 - opt.beta1**step
        correction2 = 1.0 - opt.beta2**step

        for index, (param, grad) in enumerate(zip(params, grads.arrays)):
            opt.m[index] = opt.beta1 * opt.m[index] + (1 - opt.beta1) * grad
            opt.v[index] = opt.beta2 * opt.v[index] + (1 - opt.beta2) * (
                grad**2
            )
            m_hat = opt.m[index] / correction1
            v_hat = opt.v[index] / correction2
            param -= opt.lr * m_hat / (np.sqrt(v_hat) + opt.epsilon)
    else:
        for param, grad in zip(params, grads.arrays):
            param -= opt.lr * grad

    opt.step += 1
    net.version += 1

    return net


def mse_loss(
    pred: Tensor | np.ndarray, target: Tensor | np.ndarray
) -> tuple[float, Tensor]:
    """
    Mean squared error and its gradient w.r.t. the prediction.

    - Args:
        - pred:: Tensor | np.ndarray
        - target:: Tensor | np.ndarray: Same length as pred.
    - Returns:
        - tuple[float, Tensor]: mean((pred - target)^2) and
          2 * (pred - target) / n, shaped like pred.
    """
    prediction = _as_array(pred)
    expected = _as_array(target)

    if prediction.size != expected.size:
        raise RejectedInputError(messages.ERROR_LOSS_LENGTH_MISMATCH)

    diff = prediction - expected.reshape(prediction.shape)
    loss = float(np.mean(diff**2))
    grad = 2.0 * diff / diff.size

    return loss, Tensor.from_array(grad)


def finite_diff_grads(
    net: FeedForwardNet,
    input: Tensor | np.ndarray,
    loss_fn: Callable[[np.ndarray], float],
    eps: float = 1e-5,
) -> ParamGrads:
    """
    Central finite-difference estimate of d loss_fn(forward(net, input))
    w.r.t. every parameter. The network is left unchanged.
    """
    if eps <= 0:
        raise RejectedInputError(messages.ERROR_EPS_NOT_POSITIVE)

    def evaluate() -> float:
        output, _ = forward(net, input)
        return float(loss_fn(output.array()))

    arrays = []
    for param in net.parameters():
        estimate = np.zeros_like(param)
        flat = param.reshape(-1)
        flat_estimate = estimate.reshape(-1)

        for index in range(flat.size):
            original = flat[index]
            flat[index] = original + eps
            upper = evaluate()
            flat[index] = original - eps
            lower = evaluate()
            flat[index] = original
            flat_estimate[index] = (upper - lower) / (2.0 * eps)

        arrays.append(estimate)

    return ParamGrads(arrays)
