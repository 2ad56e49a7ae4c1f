from pydantic import ValidationInfo, field_validator, model_validator

from app.core.constants.messages import *
from app.core.errors import ValidationError


@field_validator("success_streak_up", "fail_streak_down", mode="after")
def validate_streak(cls, value: int, info: ValidationInfo) -> int:
    """
    A function that validates the curriculum streak thresholds.

    - Args:
        - cls: The class instance.
        - value: The threshold.
        - info: The validation info, holding the field name.
    - Returns:
        - int: The threshold.
    """
    if value < 1:
        raise ValidationError(
            field=info.field_name, detail=ERROR_STREAK_THRESHOLD
        )

    return value


@field_validator("hidden", "pu_hidden", mode="after", check_fields=False)
def validate_hidden(
    cls, value: list[int], info: ValidationInfo
) -> list[int]:
    """
    A function that validates hidden layer widths.

    - Args:
        - cls: The class instance.
        - value: The widths.
        - info: The validation info, holding the field name.
    - Returns:
        - list[int]: The widths.
    """
    if any(width < 1 for width in value):
        raise ValidationError(
            field=info.field_name, detail=ERROR_LAYER_WIDTH
        )

    return value


@field_validator("lr", mode="after")
def validate_lr(cls, value: float) -> float:
    """
    A function that validates a learning rate.

    - Args:
        - cls: The class instance.
        - value: The learning rate.
    - Returns:
        - float: The learning rate.
    """
    if value <= 0:
        raise ValidationError(field="lr", detail=ERROR_LEARNING_RATE)

    return value


@field_validator("exploratory_scale", mode="after")
def validate_exploratory_scale(cls, value: float) -> float:
    if not 0.0 < value <= 1.0:
        raise ValidationError(
            field="exploratory_scale", detail=ERROR_ROUTE_SCALE
        )

    return value


@field_validator("gamma", mode="after")
def validate_gamma(cls, value: float) -> float:
    if not 0.0 <= value <= 1.0:
        raise ValidationError(field="gamma", detail=ERROR_GAMMA_RANGE)

    return value


@field_validator("eps_start", "eps_end", mode="after")
def validate_epsilon(cls, value: float, info: ValidationInfo) -> float:
    if not 0.0 <= value <= 1.0:
        raise ValidationError(
            field=info.field_name, detail=ERROR_EPSILON_RANGE
        )

    return value


@model_validator(mode="after")
def validate_tape_window(self):
    """
    A function that validates that the tape keeps at least one horizon of
    entries.

    - Args:
        - self: The tape section.
    - Returns:
        - The tape section.
    """
    if self.horizon < 1 or self.capacity < self.horizon:
        raise ValidationError(field="horizon", detail=ERROR_TAPE_CAPACITY)

    return self
