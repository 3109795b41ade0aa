from __future__ import annotations

import sys
import logging
import argparse
from typing import Any, Type, Optional, NoReturn
from typing_extensions import ClassVar, override

import pydantic

from .. import __version__
from ._errors import CLIError, display_error
from .._compat import PYDANTIC_V2, ConfigDict, model_parse
from .._models import BaseModel
from ._commands import register_commands
from .._utils._logs import set_verbosity
from .._exceptions import MaxEntNMLError

log: logging.Logger = logging.getLogger("maxent_nml.cli")


class Arguments(BaseModel):
    if PYDANTIC_V2:
        model_config: ClassVar[ConfigDict] = ConfigDict(
            extra="ignore",
            frozen=True,
        )
    else:

        class Config(pydantic.BaseConfig):  # type: ignore
            extra: Any = pydantic.Extra.ignore  # type: ignore
            allow_mutation: bool = False

    verbosity: int
    version: Optional[str] = None

    as_json: bool = False
    bits: bool = False

    # internal, set by subparsers to parse their specific args
    args_model: Optional[Type[BaseModel]] = None

    # internal, the subcommand path used to label artifacts and errors
    command: Optional[str] = None


class _Parser(argparse.ArgumentParser):
    """Usage errors raise instead of exiting so that `main` can map them to an exit code."""

    @override
    def error(self, message: str) -> NoReturn:
        raise CLIError(f"{self.prog}: {message}")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(description="MDL / NML model selection for maximum entropy models", prog="maxent-nml")
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        dest="verbosity",
        default=0,
        help="Set verbosity (-v for progress, -vv for solver diagnostics).",
    )
    parser.add_argument("--json", dest="as_json", action="store_true", help="Print machine-readable JSON.")
    parser.add_argument("--bits", action="store_true", help="Display codelengths in bits instead of nats.")

    # prints the package version
    parser.add_argument(
        "-V",
        "--version",
        action="version",
        version="%(prog)s " + __version__,
    )

    def help() -> None:
        parser.print_help()

    parser.set_defaults(func=help)

    register_commands(parser)
    return parser


def main() -> int:
    try:
        _main()
    except MaxEntNMLError as err:
        display_error(err, stage=getattr(err, "stage", None))
        return err.exit_code
    except pydantic.ValidationError as err:
        display_error(err)
        return CLIError.exit_code
    except KeyboardInterrupt:
        sys.stderr.write("\n")
        return 1
    except Exception as err:
        log.debug("unexpected failure", exc_info=True)
        display_error(err, stage="internal")
        return MaxEntNMLError.exit_code
    return 0


def _main() -> None:
    parser = _build_parser()
    parsed = parser.parse_args(sys.argv[1:])
    args = model_parse(Arguments, vars(parsed))

    set_verbosity(args.verbosity)

    if args.args_model:
        parsed.func(
            model_parse(
                args.args_model,
                {
                    # omit None values so that the models' defaults apply
                    key: value
                    for key, value in vars(parsed).items()
                    if value is not None
                },
            )
        )
    else:
        parsed.func()


if __name__ == "__main__":
    sys.exit(main())
