import argparse
import os

from app.services.plot import plot_rewards


def plot(args: argparse.Namespace) -> None:
    out = args.out or f"{os.path.splitext(args.metrics)[0]}.svg"
    print(plot_rewards(args.metrics, out))


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(
        "plot", help="Render a metrics stream to SVG"
    )
    parser.add_argument("metrics", help="A metrics JSON lines file")
    parser.add_argument(
        "--out", help="SVG file, next to the metrics file by default"
    )
    parser.set_defaults(handler=plot)
