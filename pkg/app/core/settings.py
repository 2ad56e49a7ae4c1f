from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    A class to represent the process settings of the application.

    Attributes:
        LOG_DIR (str): Directory of the rotating log files.
        OUT_DIR (str): Default directory for run artifacts.
        CONFIG_DIR (str): Directory of the shipped run configs.
        DEFAULT_SEED (int): Seed used when neither config nor CLI sets one.
    """

    LOG_DIR: str = Field(
        title="Log directory",
        description="Directory where info.log and error.log are written",
        default="logs",
    )
    OUT_DIR: str = Field(
        title="Output directory",
        description="Default directory for metrics, snapshots and plots",
        default="runs",
    )
    CONFIG_DIR: str = Field(
        title="Config directory",
        description="Directory of the shipped run configs",
        default="configs",
    )
    DEFAULT_SEED: int = Field(
        title="Default seed",
        description="Seed used when neither config nor CLI sets one",
        default=0,
    )

    model_config = SettingsConfigDict(env_file=".env", case_sensitive=True)


config = Settings()
