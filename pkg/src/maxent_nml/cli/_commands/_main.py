from __future__ import annotations

from argparse import ArgumentParser

from . import nml, fit, genes, select


def register_commands(parser: ArgumentParser) -> None:
    subparsers = parser.add_subparsers(help="All subcommands")

    fit.register(subparsers)
    nml.register(subparsers)
    select.register(subparsers)
    genes.register(subparsers)
