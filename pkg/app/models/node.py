import numpy as np

from app.core.constants import messages
from app.core.constants.enums import NodeKind
from app.core.errors import RejectedInputError
from app.models.tape import Link


class Node:
    """
    A persistent state slot of the network.

    A slot Node holds one vector of fixed length; an accumulator holds an
    ordered list of entries of that length. Each stored value remembers the
    tape link of the execution that wrote it, or None for external writes.

    - Attributes:
        - id: str
        - kind: NodeKind
        - size: int: Length of the value (of every entry for accumulators).
        - summary_size: int: Leading components shown to the Control Unit.
        - cu_visible: bool: Whether the summary is part of the CU state.
        - value: np.ndarray | None: Slot value; None reads as zeros.
        - entries: list[np.ndarray]: Accumulator entries.
        - last_writer: Link | None: Provenance of the slot value.
        - entry_writers: list[Link | None]: Provenance per entry.
    """

    def __init__(
        self,
        node_id: str,
        size: int,
        kind: NodeKind = NodeKind.SLOT,
        summary_size: int | None = None,
        cu_visible: bool = False,
    ):
        if size <= 0:
            raise RejectedInputError(messages.ERROR_TENSOR_EMPTY_SHAPE)

        summary_size = size if summary_size is None else summary_size

        if not 0 <= summary_size <= size:
            raise RejectedInputError(messages.ERROR_NODE_SUMMARY_SIZE)

        self.id = node_id
        self.kind = NodeKind(kind)
        self.size = int(size)
        self.summary_size = int(summary_size)
        self.cu_visible = cu_visible
        self.value: np.ndarray | None = None
        self.entries: list[np.ndarray] = []
        self.last_writer: Link | None = None
        self.entry_writers: list[Link | None] = []

    @property
    def is_accumulator(self) -> bool:
        return self.kind == NodeKind.ACCUMULATOR

    @property
    def summary_length(self) -> int:
        return 2 if self.is_accumulator else self.summary_size

    def read(self) -> np.ndarray:
        """
        The current value: a vector for slots, a (count, size) matrix for
        accumulators.
        """
        if self.is_accumulator:
            if not self.entries:
                return np.zeros((0, self.size))
            return np.vstack(self.entries)

        if self.value is None:
            return np.zeros(self.size)

        return self.value.copy()

    def write(self, value: np.ndarray, provenance: Link | None) -> None:
        """
        Replace a slot value, or append one entry to an accumulator.
        """
        vector = np.asarray(value, dtype=np.float64).reshape(-1)

        if vector.size != self.size:
            raise RejectedInputError(messages.ERROR_NODE_SHAPE_MISMATCH)

        if not np.all(np.isfinite(vector)):
            raise RejectedInputError(messages.ERROR_TENSOR_NOT_FINITE)

        if self.is_accumulator:
            self.entries.append(vector.copy())
            self.entry_writers.append(provenance)
            return

        self.value = vector.copy()
        self.last_writer = provenance

    def clear(self) -> None:
        if not self.is_accumulator:
            raise RejectedInputError(messages.ERROR_NODE_NOT_ACCUMULATOR)

        self.entries = []
        self.entry_writers = []

    def summary(self) -> np.ndarray:
        if self.is_accumulator:
            if not self.entries:
                return np.zeros(2)
            firsts = [entry[0] for entry in self.entries]
            return np.array([float(len(self.entries)), float(np.mean(firsts))])

        return self.read()[: self.summary_size]

    def __len__(self) -> int:
        return len(self.entries) if self.is_accumulator else self.size
