from __future__ import annotations

from typing import TYPE_CHECKING, List, Optional
from argparse import ArgumentParser

from ..._compat import model_dump
from ...maxent import fit_maxent, empirical_moments, build_moment_features
from ...types import MomentVector
from .._utils import (
    stage,
    in_unit,
    envelope,
    unit_name,
    float_list,
    write_json,
    write_rows,
    read_sample,
    alphabet_for,
)
from .._errors import CLIError
from .._models import CommandArgs

if TYPE_CHECKING:
    from argparse import _SubParsersAction


def register(subparser: _SubParsersAction[ArgumentParser]) -> None:
    sub = subparser.add_parser("fit", help="Fit the maximum entropy distribution under moment constraints")

    sub.add_argument("--alphabet", help="Comma separated symbol values, e.g. 0,1,2", type=float_list)
    sub.add_argument("--levels", help="Use the integer alphabet 0..LEVELS-1", type=int)
    sub.add_argument("--mean", help="Comma separated target moments E[x], E[x^2], ...", type=float_list)
    sub.add_argument("--sample", help="File of alphabet indices whose empirical moments are the targets")
    sub.add_argument("-m", "--m", help="Number of moments to match with --sample", type=int)
    sub.set_defaults(func=CLIFit.run, args_model=CLIFitArgs, command="fit")


class CLIFitArgs(CommandArgs):
    alphabet: Optional[List[float]] = None
    levels: Optional[int] = None
    mean: Optional[List[float]] = None
    sample: Optional[str] = None
    m: Optional[int] = None


class CLIFit:
    @staticmethod
    def run(args: CLIFitArgs) -> None:
        if (args.mean is None) == (args.sample is None):
            raise CLIError("exactly one of --mean and --sample is required")

        with stage("parse"):
            sample = read_sample(args.sample) if args.sample is not None else None
            alphabet = alphabet_for(args.alphabet, args.levels, sample)
        if alphabet is None:
            raise CLIError("one of --alphabet or --levels is required with --mean")

        with stage("fit"):
            if args.mean is not None:
                if args.m is not None and args.m != len(args.mean):
                    raise CLIError(f"--m {args.m} does not match the {len(args.mean)} given means")
                features = build_moment_features(alphabet, len(args.mean))
                moments = MomentVector(means=args.mean)
            else:
                assert sample is not None
                features = build_moment_features(alphabet, 1 if args.m is None else args.m)
                moments = empirical_moments(sample, features)
            dist = fit_maxent(features, moments)

        if args.as_json:
            result = model_dump(dist)
            result["entropy"] = in_unit(dist.entropy_nats, args.bits)
            result["unit"] = unit_name(args.bits)
            write_json(envelope("fit", args, {"sample": args.sample}, result))
            return

        unit = unit_name(args.bits)
        rows = [(f"p({symbol:g})", f"{prob:.10f}") for symbol, prob in zip(alphabet.symbols, dist.probs)]
        rows.extend((f"lambda_{k}", f"{value:.10f}") for k, value in enumerate(dist.lambdas))
        rows.append((f"entropy ({unit})", f"{in_unit(dist.entropy_nats, args.bits):.10f}"))
        if dist.boundary:
            rows.append(("support", ",".join(str(j) for j in dist.support)))
        write_rows(rows)
