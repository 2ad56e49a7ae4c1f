from typing import Iterable, Literal

from pydantic import BaseModel


class BaseSchema(BaseModel):
    """
    Base class of every schema: config sections, metrics lines, snapshots
    and parameter files.

    - Methods:
        - to_dict: The model as a mapping, optionally trimmed or extended.
    """

    def to_dict(
        self,
        exclude: Iterable[str] = (),
        include: dict | None = None,
        mode: Literal["python", "json"] = "python",
    ) -> dict:
        """
        Method to convert the model to a dictionary.

        - Args:
            - exclude: Iterable[str]: Top-level fields to leave out.
            - include: dict | None: Extra keys merged into the result.
            - mode: str: "json" turns enums and tuples into JSON types.
        - Returns:
            - dict : A dictionary representation of the model.
        """
        result = self.model_dump(mode=mode, exclude=set(exclude) or None)

        if include:
            result.update(include)

        return result
