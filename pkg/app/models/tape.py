from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from app.models.tensor import ForwardTrace

if TYPE_CHECKING:
    from app.models.processing_unit import ProcessingUnit


@dataclass(eq=False)
class TapeEntry:
    """
    Record of one PU execution.

    - Attributes:
        - step: int: Strictly increasing position on the tape.
        - pu: ProcessingUnit: The unit that ran.
        - input_ids: list[str]: Input Node ids, in PU order.
        - inputs: list[np.ndarray]: Value of each input Node when it ran.
        - trace: ForwardTrace | None: None when the unit saw no entries.
        - output_ids: list[str]
        - upstream: list[list[Link | None]]: Per input Node, the links of
          the rows it contributed (one row for slots).
        - reduced: bool: Whether outputs were written as the batch mean.
        - inert: bool: Evicted, or its unit was removed.
    """

    step: int
    pu: "ProcessingUnit"
    input_ids: list[str]
    inputs: list[np.ndarray]
    trace: ForwardTrace | None
    output_ids: list[str]
    upstream: list[list["Link | None"]] = field(default_factory=list)
    reduced: bool = True
    inert: bool = False

    @property
    def pu_id(self) -> str:
        return self.pu.id

    @property
    def batch_size(self) -> int:
        return 0 if self.trace is None else self.trace.batch_size

    def release(self) -> None:
        """
        Make the entry inert and drop everything it references.        """
        self.inert = True
        self.trace = None
        self.inputs = []
        self.upstream = []


@dataclass(frozen=True, eq=False)
class Link:
    """
    Points at the output of a TapeEntry that produced a stored value.

    - Attributes:
        - entry: TapeEntry
        - output: int: Position of the Node among the entry's outputs.
        - row: int | None: Batch row, for values written one row per entry.
    """

    entry: TapeEntry
    output: int
    row: int | None = None
