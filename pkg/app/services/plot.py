import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from app.core.constants import messages  # noqa: E402
from app.logging import LogManager  # noqa: E402
from app.repositories.metrics import MetricsRepository  # noqa: E402
from app.schemas.metrics import MetricsHeader, MetricsRecord  # noqa: E402

plt.rcParams["svg.hashsalt"] = "interaction-network"


def axis_range(values: list[float]) -> tuple[float, float]:
    """
    Limits that contain every value with a 5% margin; a flat series gets
    a margin of 0.5.
    """
    if not values:
        return 0.0, 1.0

    low, high = min(values), max(values)
    margin = 0.05 * (high - low) if high > low else 0.5
    return low - margin, high + margin


def plot_rewards(metrics_path: str, out_path: str) -> str:
    """
    Render windowed reward against iterations, and the maximum sequence
    length when the stream has one, to an SVG file.

    - Args:
        - metrics_path:: str: A metrics stream.
        - out_path:: str: The SVG file to write.
    - Returns:
        - str: out_path
    """
    lines = MetricsRepository.get_all(metrics_path)
    windows = [line for line in lines if isinstance(line, MetricsRecord)]
    header = next(
        (line for line in lines if isinstance(line, MetricsHeader)), None
    )

    iterations = [record.iteration for record in windows]
    rewards = [record.mean_reward for record in windows]
    lengths = [
        (record.iteration, record.max_sequence_length)
        for record in windows
        if record.max_sequence_length is not None
    ]

    rows = 2 if lengths else 1
    figure, axes = plt.subplots(
        rows, 1, figsize=(8, 3.5 * rows), squeeze=False
    )

    reward_axis = axes[0][0]
    reward_axis.plot(iterations, rewards, color="tab:blue")
    reward_axis.set_xlim(*axis_range(iterations))
    reward_axis.set_ylim(*axis_range(rewards))
    reward_axis.set_xlabel("iteration")
    reward_axis.set_ylabel("mean reward")
    if header is not None:
        reward_axis.set_title(f"{header.experiment} (seed {header.seed})")

    if lengths:
        length_axis = axes[1][0]
        xs = [x for x, _ in lengths]
        ys = [float(y) for _, y in lengths]
        length_axis.step(xs, ys, where="post", color="tab:orange")
        length_axis.set_xlim(*axis_range(xs))
        length_axis.set_ylim(*axis_range(ys))
        length_axis.set_xlabel("iteration")
        length_axis.set_ylabel("max sequence length")

    figure.tight_layout()

    directory = os.path.dirname(out_path)
    if directory:
        os.makedirs(directory, exist_ok=True)

    figure.savefig(out_path, format="svg", metadata={"Date": None})
    plt.close(figure)

    LogManager.create_info_log(
        action="plot",
        experiment=header.experiment if header else "",
        seed=header.seed if header else None,
        detail=f"{messages.MESSAGE_PLOT_WRITTEN}: {out_path}",
    )

    return out_path
