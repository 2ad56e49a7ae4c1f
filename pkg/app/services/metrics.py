import math

import pandas as pd

from app.repositories.metrics import MetricsRepository
from app.schemas.metrics import MetricsHeader, MetricsRecord, SummaryRecord
from app.services.environments import Exp2Environment
from app.services.runtime import InteractionLoop, IterationOutcome


def _mean(series: pd.Series) -> float | None:
    values = series.dropna()
    if values.empty:
        return None
    return float(values.mean())


class MetricsCollector:
    """
    Loop hook that aggregates iterations into windows and streams them.

    The stream starts with a header holding the resolved config, carries
    one window record every `window` iterations (plus a last partial one)
    and ends with a summary record. Nothing in it depends on wall time.

    - Attributes:
        - repository: MetricsRepository
        - window: int
        - records: list[MetricsRecord]: Records written so far.
        - pretrain_converged: bool | None: Reported in the summary.
    """

    def __init__(
        self,
        repository: MetricsRepository,
        window: int,
        experiment: str,
        seed: int,
        config: dict,
        reward_threshold: float = 0.9,
    ):
        self.repository = repository
        self.window = window
        self.reward_threshold = reward_threshold
        self.header = MetricsHeader(
            experiment=experiment, seed=seed, config=config
        )
        self.records: list[MetricsRecord] = []
        self.pretrain_converged: bool | None = None
        self.total_reward = 0.0
        self.iterations = 0
        self._rows: list[dict] = []
        self._episodes: list[dict] = []
        self._norms: list[dict[str, float]] = []

    def start(self) -> None:
        self.repository.start(self.header)

    def on_step(
        self, loop: InteractionLoop, outcome: IterationOutcome
    ) -> None:
        followed = outcome.followed_script
        self._rows.append(
            {
                "reward": outcome.reward,
                "env_reward": outcome.env_reward,
                "action": outcome.action.label(),
                "followed": math.nan if followed is None else float(followed),
                "td_loss": (
                    math.nan if outcome.td_loss is None else outcome.td_loss
                ),
                "epsilon": outcome.epsilon,
            }
        )
        self._episodes.extend(
            {
                "success": float(record.success),
                "optimal": float(record.optimal),
            }
            for record in outcome.episodes
        )
        self._norms.append(dict(outcome.pu_grad_norms))
        self.total_reward += outcome.reward
        self.iterations = outcome.iteration + 1

        if self.iterations % self.window == 0:
            self.flush(loop)

    def on_finish(self, loop: InteractionLoop) -> None:
        if self._rows:
            self.flush(loop)
        self.repository.add(self.summary())

    def flush(self, loop: InteractionLoop) -> MetricsRecord:
        """
        Aggregate and write the pending window.
        """
        rows = pd.DataFrame(self._rows)
        episodes = pd.DataFrame(self._episodes, columns=["success", "optimal"])
        norms = pd.DataFrame(self._norms)

        histogram = rows["action"].value_counts().sort_index()
        sequence_length = max_sequence_length = None
        for env in loop.network.environments.values():
            if isinstance(env, Exp2Environment):
                sequence_length = env.curriculum.length
                max_sequence_length = env.curriculum.max_length

        record = MetricsRecord(
            iteration=self.iterations,
            mean_reward=float(rows["reward"].mean()),
            mean_env_reward=float(rows["env_reward"].mean()),
            epsilon=float(rows["epsilon"].iloc[-1]),
            action_histogram={
                str(label): int(count) for label, count in histogram.items()
            },
            episodes=len(episodes),
            success_rate=_mean(episodes["success"]),
            optimal_rate=_mean(episodes["optimal"]),
            script_follow_rate=_mean(rows["followed"]),
            sequence_length=sequence_length,
            max_sequence_length=max_sequence_length,
            td_loss=_mean(rows["td_loss"]),
            pu_grad_norms={
                str(pu_id): float(value)
                for pu_id, value in norms.mean().sort_index().items()
                if not math.isnan(value)
            },
        )

        self.repository.add(record)
        self.records.append(record)
        self._rows, self._episodes, self._norms = [], [], []

        return record

    def summary(self) -> SummaryRecord:
        """
        Peak windowed reward, iterations to the reward threshold and to a
        95% optimal rate, and the longest sequence solved.
        """
        peak = max((r.mean_reward for r in self.records), default=None)
        to_threshold = next(
            (
                r.iteration
                for r in self.records
                if r.mean_reward >= self.reward_threshold
            ),
            None,
        )
        to_optimal = next(
            (
                r.iteration
                for r in self.records
                if r.optimal_rate is not None and r.optimal_rate >= 0.95
            ),
            None,
        )
        lengths = [
            r.max_sequence_length
            for r in self.records
            if r.max_sequence_length is not None
        ]

        return SummaryRecord(
            iterations=self.iterations,
            total_reward=self.total_reward,
            peak_mean_reward=peak,
            reward_threshold=self.reward_threshold,
            iterations_to_threshold=to_threshold,
            iterations_to_optimal=to_optimal,
            max_sequence_length=max(lengths) if lengths else None,
            pretrain_converged=self.pretrain_converged,
        )
