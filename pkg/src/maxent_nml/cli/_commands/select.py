from __future__ import annotations

from typing import TYPE_CHECKING, List, Optional
from argparse import ArgumentParser

from .nml import add_comp_arguments
from ...types import ClassSet, Candidate, CandidateSet, SelectionResult
from ..._types import Criterion, CompMethod
from ...maxent import build_moment_features
from ..._compat import model_dump
from ..._utils import parse_int_range
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
from ..._constants import DEFAULT_M_RANGE, DEFAULT_MC_DRAWS
from ...selection import select_by_nml, select_by_minimax
from ...discriminative import build_cond_moment_features

if TYPE_CHECKING:
    from argparse import _SubParsersAction


def register(subparser: _SubParsersAction[ArgumentParser]) -> None:
    sub = subparser.add_parser("select", help="Choose the number of moments by NML or minimax entropy")

    # Required
    sub.add_argument("--sample", help="File of alphabet indices", required=True)

    # Optional
    sub.add_argument("--m-range", dest="m_range", help="Moment counts to compare, e.g. 1..7", type=parse_int_range)
    sub.add_argument("--criterion", help="Selection criterion (default nml)", choices=["nml", "minimax"])
    sub.add_argument("--alphabet", help="Comma separated symbol values", type=float_list)
    sub.add_argument("--levels", help="Use the integer alphabet 0..LEVELS-1", type=int)
    sub.add_argument("--labels", help="File of class labels; compares conditional models of the labels")
    sub.add_argument(
        "--no-intercept",
        dest="intercept",
        help="Drop the per-class intercept from the conditional features",
        action="store_false",
        default=None,
    )
    sub.add_argument("--workers", help="Candidates scored in parallel (default 1)", type=int)
    add_comp_arguments(sub)
    sub.set_defaults(func=CLISelect.run, args_model=CLISelectArgs, command="select")


class CLISelectArgs(CommandArgs):
    sample: str
    m_range: List[int] = list(DEFAULT_M_RANGE)
    criterion: Criterion = "nml"
    alphabet: Optional[List[float]] = None
    levels: Optional[int] = None
    labels: Optional[str] = None
    intercept: bool = True
    method: CompMethod = "types"
    draws: int = DEFAULT_MC_DRAWS
    seed: int = 0
    workers: int = 1


def print_selection(result: SelectionResult, bits: bool) -> None:
    unit = unit_name(bits)
    rows = [("criterion", result.criterion)]
    for row in result.rows:
        marker = " *" if row.id == result.chosen_id else ""
        rows.append((row.id, f"{in_unit(row.score_nats, bits):.10f} {unit}{marker}"))
    for candidate_id, reason in result.failures.items():
        rows.append((candidate_id, f"failed: {reason}"))
    rows.append(("chosen", result.chosen_id))
    write_rows(rows)


class CLISelect:
    @staticmethod
    def run(args: CLISelectArgs) -> None:
        if any(m < 0 for m in args.m_range):
            raise CLIError(f"--m-range must not contain negative values, got {args.m_range}")

        with stage("parse"):
            sample = read_sample(args.sample)
            labels, class_names = read_class_labels(args.labels) if args.labels is not None else (None, [])
        alphabet = alphabet_for(args.alphabet, args.levels, sample)
        assert alphabet is not None

        with stage("features"):
            if labels is None:
                candidates = [
                    Candidate(id=f"m={m}", features=build_moment_features(alphabet, m)) for m in args.m_range
                ]
            else:
                if len(labels) != sample.n:
                    raise CLIError(f"{args.labels} has {len(labels)} labels for {sample.n} observations")
                classes = ClassSet(labels=class_names) if len(class_names) > 1 else ClassSet.numbered(2)
                candidates = [
                    Candidate(
                        id=f"m={m}",
                        features=build_cond_moment_features(alphabet, classes, m, intercept=args.intercept),
                    )
                    for m in args.m_range
                    if m > 0 or args.intercept
                ]
            candidate_set = CandidateSet(candidates=candidates)

        with stage("selection"):
            if args.criterion == "minimax":
                result = select_by_minimax(candidate_set, sample, labels=labels, workers=args.workers)
            else:
                result = select_by_nml(
                    candidate_set,
                    sample,
                    args.method,
                    labels=labels,
                    draws=args.draws,
                    seed=args.seed,
                    workers=args.workers,
                )

        if args.as_json:
            inputs = {"sample": args.sample, "labels": args.labels}
            write_json(envelope("select", args, inputs, model_dump(result)))
            return
        print_selection(result, args.bits)
