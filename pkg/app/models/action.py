from dataclasses import dataclass

from app.core.constants.enums import ActionKind


@dataclass(frozen=True, order=True)
class ActionId:
    """
    One entry of the action catalog: run a PU, or trigger action `index` of
    an environment.
    """

    kind: ActionKind
    target: str
    index: int = 0

    @classmethod
    def pu(cls, pu_id: str) -> "ActionId":
        return cls(ActionKind.PU, pu_id, 0)

    @classmethod
    def env(cls, env_id: str, index: int = 0) -> "ActionId":
        return cls(ActionKind.ENV, env_id, index)

    @property
    def is_pu(self) -> bool:
        return self.kind == ActionKind.PU

    def label(self) -> str:
        if self.is_pu:
            return self.target
        return f"{self.target}:{self.index}"

    @classmethod
    def parse(cls, label: str) -> "ActionId":
        if ":" in label:
            env_id, index = label.rsplit(":", 1)
            return cls.env(env_id, int(index))
        return cls.pu(label)
