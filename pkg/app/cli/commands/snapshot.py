import argparse

from app.repositories.snapshot import SnapshotRepository
from app.services.snapshot import describe_snapshot


def inspect_snapshot(args: argparse.Namespace) -> None:
    print(describe_snapshot(SnapshotRepository.get(args.snapshot)))


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(
        "inspect-snapshot", help="Print a report of a snapshot"
    )
    parser.add_argument("snapshot", help="A snapshot JSON file")
    parser.set_defaults(handler=inspect_snapshot)
