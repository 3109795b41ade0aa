from __future__ import annotations

from typing import TYPE_CHECKING, List, Optional
from argparse import ArgumentParser

from ..._types import CompMethod
from ..._compat import model_dump
from ...types import ClassSet, CodelengthReport
from ...maxent import build_moment_features
from ..._constants import DEFAULT_MC_DRAWS
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
    read_class_labels,
)
from .._errors import CLIError
from .._models import CommandArgs
from ...codelength import nml_codelength
from ...discriminative import cond_nml, build_cond_moment_features

if TYPE_CHECKING:
    from argparse import _SubParsersAction


def add_comp_arguments(sub: ArgumentParser) -> None:
    sub.add_argument(
        "--method",
        help="How COMP is computed: exact enumeration, a sum over type classes, or Monte-Carlo",
        choices=["exact", "types", "mc"],
    )
    sub.add_argument("--draws", help=f"Monte-Carlo draws (default {DEFAULT_MC_DRAWS})", type=int)
    sub.add_argument("--seed", help="Monte-Carlo seed (default 0)", type=int)


def register(subparser: _SubParsersAction[ArgumentParser]) -> None:
    sub = subparser.add_parser("nml", help="NML codelength of a sample under the moment model")

    # Required
    sub.add_argument("--sample", help="File of alphabet indices", required=True)

    # Optional
    sub.add_argument("-m", "--m", help="Number of moments x^1..x^m (default 1)", type=int)
    sub.add_argument("--alphabet", help="Comma separated symbol values", type=float_list)
    sub.add_argument("--levels", help="Use the integer alphabet 0..LEVELS-1", type=int)
    sub.add_argument(
        "--labels",
        help="File of class labels, one per observation; computes the conditional codelength of the labels",
    )
    sub.add_argument(
        "--no-intercept",
        dest="intercept",
        help="Drop the per-class intercept from the conditional features",
        action="store_false",
        default=None,
    )
    add_comp_arguments(sub)
    sub.set_defaults(func=CLINml.run, args_model=CLINmlArgs, command="nml")


class CLINmlArgs(CommandArgs):
    sample: str
    m: int = 1
    alphabet: Optional[List[float]] = None
    levels: Optional[int] = None
    labels: Optional[str] = None
    intercept: bool = True
    method: CompMethod = "types"
    draws: int = DEFAULT_MC_DRAWS
    seed: int = 0


def print_report(report: CodelengthReport, bits: bool) -> None:
    unit = unit_name(bits)
    rows = [
        (f"ERR ({unit})", f"{in_unit(report.err_nats, bits):.10f}"),
        (f"COMP ({unit})", f"{in_unit(report.comp_nats, bits):.10f}"),
        (f"NML ({unit})", f"{in_unit(report.nml_nats, bits):.10f}"),
        ("method", report.method),
        ("n", str(report.n)),
        ("features", str(report.num_features)),
    ]
    if report.mc_stderr_nats is not None:
        rows.append((f"stderr ({unit})", f"{in_unit(report.mc_stderr_nats, bits):.10f}"))
    write_rows(rows)


class CLINml:
    @staticmethod
    def run(args: CLINmlArgs) -> None:
        with stage("parse"):
            sample = read_sample(args.sample)
            labels, class_names = read_class_labels(args.labels) if args.labels is not None else (None, [])
        alphabet = alphabet_for(args.alphabet, args.levels, sample)
        assert alphabet is not None

        with stage("codelength"):
            if labels is None:
                features = build_moment_features(alphabet, args.m)
                report = nml_codelength(features, sample, args.method, draws=args.draws, seed=args.seed)
            else:
                if len(labels) != sample.n:
                    raise CLIError(f"{args.labels} has {len(labels)} labels for {sample.n} observations")
                classes = ClassSet(labels=class_names) if len(class_names) > 1 else ClassSet.numbered(2)
                features = build_cond_moment_features(alphabet, classes, args.m, intercept=args.intercept)
                report = cond_nml(features, sample, labels, args.method, draws=args.draws, seed=args.seed)

        if args.as_json:
            result = model_dump(report)
            result["bits"] = report.in_bits()
            write_json(envelope("nml", args, {"sample": args.sample, "labels": args.labels}, result))
            return
        print_report(report, args.bits)
