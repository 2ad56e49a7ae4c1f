from typing import Callable

from app.models.tensor import FeedForwardNet, OptimizerState


class ProcessingUnit:
    """
    A feed-forward network bound to input and output Nodes.

    The network output is cut into consecutive slices, one per output Node,
    in the order of `outputs`.

    - Attributes:
        - id: str
        - net: FeedForwardNet: May be shared with other units.
        - inputs: list[str]: Input Node ids.
        - outputs: list[str]: Output Node ids.
        - optimizer: OptimizerState: Shared along with the net.
        - trainable: bool: Gradients still flow through when False.
        - output_filter: Callable | None: Applied to the values written to
          the Nodes only; gradients pass through unchanged.
    """

    def __init__(
        self,
        pu_id: str,
        net: FeedForwardNet,
        inputs: list[str],
        outputs: list[str],
        optimizer: OptimizerState | None = None,
        trainable: bool = True,
        output_filter: Callable | None = None,
    ):
        self.id = pu_id
        self.net = net
        self.inputs = list(inputs)
        self.outputs = list(outputs)
        self.optimizer = optimizer or OptimizerState()
        self.trainable = trainable
        self.output_filter = output_filter
        self.slices: list[slice] = []

    def bind_slices(self, sizes: list[int]) -> None:
        self.slices = []
        offset = 0
        for size in sizes:
            self.slices.append(slice(offset, offset + size))
            offset += size

    def alias(self, pu_id: str, inputs: list[str], outputs: list[str]):
        """
        A unit sharing this unit's network and optimizer on other Nodes.
        """
        return ProcessingUnit(
            pu_id,
            self.net,
            inputs,
            outputs,
            optimizer=self.optimizer,
            trainable=self.trainable,
            output_filter=self.output_filter,
        )
