from pydantic import Field

from app.core.constants.enums import Activation
from app.schemas.settings.base import BaseSchema


class LayerParameters(BaseSchema):
    weight: list[list[float]]
    bias: list[float]
    activation: Activation


class NetParameters(BaseSchema):
    layers: list[LayerParameters]


class ParameterFile(BaseSchema):
    """
    Pretrained Processing Unit parameters.

    Attributes:
        experiment (str): The experiment the PUs belong to.
        seed (int): Seed of the pretraining run.
        pus (dict[str, NetParameters]): Parameters per PU id.
        losses (dict[str, float]): Final mse per PU.
        converged (dict[str, bool]): Whether each PU reached the threshold.
    """

    experiment: str = Field(examples=["exp1"])
    seed: int = 0
    pus: dict[str, NetParameters]
    losses: dict[str, float] = {}
    converged: dict[str, bool] = {}

    @property
    def all_converged(self) -> bool:
        return all(self.converged.values())
