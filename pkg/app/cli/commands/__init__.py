from . import plot, pretrain, run, snapshot

COMMANDS = [run, pretrain, plot, snapshot]

__all__ = ["COMMANDS"]
