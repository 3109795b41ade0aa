from __future__ import annotations

import logging
from typing import TYPE_CHECKING, Dict, List, Tuple
from pathlib import Path
from argparse import ArgumentParser

from ..._types import CompMethod, QuantizeMethod
from ..._compat import model_dump
from ..._utils import parse_int_range
from ...pipeline import (
    PipelineConfig,
    evaluate,
    rank_genes,
    preprocess,
    curve_table,
    load_matrix,
    sweep_table,
    write_table,
    curves_table,
    write_labels,
    write_matrix,
    ranking_table,
    build_classifier,
    classifier_curve,
    quantization_sweep,
    make_synthetic_matrix,
)
from ...types import ExpressionMatrix
from .._utils import stage, in_unit, envelope, unit_name, write_json, write_rows, header_lines
from .._models import CommandArgs
from ..._constants import DEFAULT_LEVELS, DEFAULT_M_RANGE, DEFAULT_MC_DRAWS

if TYPE_CHECKING:
    from argparse import _SubParsersAction

log: logging.Logger = logging.getLogger("maxent_nml.cli")


def register(subparser: _SubParsersAction[ArgumentParser]) -> None:
    sub = subparser.add_parser("genes", help="Gene selection pipeline on an expression matrix")
    namespaced = sub.add_subparsers(title="Pipeline steps")

    rank = namespaced.add_parser("rank", help="Choose m for every gene and rank genes by minimum NML")
    _add_pipeline_arguments(rank)
    rank.set_defaults(func=CLIGenes.rank, args_model=GenesArgs, command="genes rank")

    classify = namespaced.add_parser("classify", help="Classify with the top ranked genes")
    _add_pipeline_arguments(classify)
    classify.add_argument(
        "--top-range",
        dest="top_range",
        help="Gene counts of the accuracy curve (default 1..130)",
        type=parse_int_range,
    )
    classify.add_argument(
        "--fixed-m",
        dest="fixed_m",
        help="Moment counts of the fixed-m baselines on the curve (default 1,10)",
        type=parse_int_range,
    )
    classify.set_defaults(func=CLIGenes.classify, args_model=ClassifyArgs, command="genes classify")

    sweep = namespaced.add_parser("sweep", help="Repeat ranking and classification for every level count")
    _add_pipeline_arguments(sweep, sweep_levels=True)
    sweep.set_defaults(func=CLIGenes.sweep, args_model=SweepArgs, command="genes sweep")

    synth = namespaced.add_parser("synth", help="Write a synthetic two-class expression matrix")
    synth.add_argument("--out", help="Output directory (default .)")
    synth.add_argument("--informative", help="Number of informative genes (default 10)", type=int)
    synth.add_argument("--noise", help="Number of noise genes (default 40)", type=int)
    synth.add_argument("--seed", help="Random seed (default 0)", type=int)
    synth.set_defaults(func=CLIGenes.synth, args_model=SynthArgs, command="genes synth")


def _add_pipeline_arguments(sub: ArgumentParser, *, sweep_levels: bool = False) -> None:
    # Required
    sub.add_argument("--matrix", help="Expression matrix: genes by samples, tab or comma separated", required=True)
    sub.add_argument("--labels", help="Sample labels: sample_id, label and optionally train/test", required=True)

    # Optional
    sub.add_argument("--out", help="Output directory (default .)")
    if sweep_levels:
        sub.add_argument(
            "--levels",
            "--levels-range",
            dest="levels_range",
            help="Level counts to sweep, e.g. 2..8 (default 2..8)",
            type=parse_int_range,
        )
    else:
        sub.add_argument("--levels", help=f"Quantization levels (default {DEFAULT_LEVELS})", type=int)
    sub.add_argument("--m-range", dest="m_range", help="Moment counts per gene (default 1..7)", type=parse_int_range)
    sub.add_argument(
        "--include-m0", dest="include_m0", help="Also report the intercept-only model", action="store_true"
    )
    sub.add_argument(
        "--no-intercept",
        dest="intercept",
        help="Drop the per-class intercept from the features",
        action="store_false",
        default=None,
    )
    sub.add_argument("--method", help="How COMP is computed (default types)", choices=["exact", "types", "mc"])
    sub.add_argument("--draws", help=f"Monte-Carlo draws (default {DEFAULT_MC_DRAWS})", type=int)
    sub.add_argument("--seed", help="Monte-Carlo seed (default 0)", type=int)
    sub.add_argument("--quantize", help="Cut points from quantiles or equal widths", choices=["quantile", "width"])
    sub.add_argument(
        "--no-clamp", dest="clamp", help="Keep raw intensities unclamped", action="store_false", default=None
    )
    sub.add_argument(
        "--no-filter",
        dest="filter_genes",
        help="Keep genes that fail the variation filter",
        action="store_false",
        default=None,
    )
    sub.add_argument(
        "--no-log", dest="log_transform", help="Skip the log10 transform", action="store_false", default=None
    )
    sub.add_argument("--workers", help="Genes ranked in parallel (default 1)", type=int)
    sub.add_argument("--top-g", dest="top_g", help="Number of top genes used downstream (default 25)", type=int)


class GenesArgs(CommandArgs):
    matrix: str
    labels: str
    out: str = "."
    levels: int = DEFAULT_LEVELS
    m_range: List[int] = list(DEFAULT_M_RANGE)
    include_m0: bool = False
    intercept: bool = True
    method: CompMethod = "types"
    draws: int = DEFAULT_MC_DRAWS
    seed: int = 0
    quantize: QuantizeMethod = "quantile"
    clamp: bool = True
    filter_genes: bool = True
    log_transform: bool = True
    workers: int = 1
    top_g: int = 25

    def config(self) -> PipelineConfig:
        return PipelineConfig(
            levels=self.levels,
            m_range=self.m_range,
            include_m0=self.include_m0,
            intercept=self.intercept,
            comp_method=self.method,
            mc_draws=self.draws,
            seed=self.seed,
            quantize_method=self.quantize,
            clamp=self.clamp,
            filter_genes=self.filter_genes,
            log_transform=self.log_transform,
            top_g=self.top_g,
            workers=self.workers,
        )


class ClassifyArgs(GenesArgs):
    top_range: List[int] = list(range(1, 131))
    fixed_m: List[int] = [1, 10]


class SweepArgs(GenesArgs):
    levels_range: List[int] = list(range(2, 9))


class SynthArgs(CommandArgs):
    out: str = "."
    informative: int = 10
    noise: int = 40
    seed: int = 0


def _progress() -> bool:
    return logging.getLogger("maxent_nml").isEnabledFor(logging.INFO)


def _load(args: GenesArgs, config: PipelineConfig) -> ExpressionMatrix:
    with stage("parse"):
        matrix = load_matrix(args.matrix, args.labels)
    with stage("preprocess"):
        matrix = preprocess(matrix, config)
    log.info("%d genes and %d samples after preprocessing", matrix.num_genes, matrix.num_samples)
    return matrix


def _out_dir(path: str) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _inputs(args: GenesArgs) -> Dict[str, str]:
    return {"matrix": args.matrix, "labels": args.labels}


class CLIGenes:
    @staticmethod
    def rank(args: GenesArgs) -> None:
        config = args.config()
        matrix = _load(args, config)
        with stage("ranking"):
            selections = rank_genes(matrix, config, progress=_progress())

        unit = unit_name(args.bits)
        header = header_lines("genes rank", args, _inputs(args))
        with stage("write"):
            out = _out_dir(args.out)
            write_table(ranking_table(selections, config.moments, unit), out / "ranking.csv", header)
            write_table(curves_table(selections, unit), out / "curves.csv", header)

        top = selections[: args.top_g]
        if args.as_json:
            result = [model_dump(selection) for selection in top]
            write_json(envelope("genes rank", args, _inputs(args), result))
            return
        write_rows(
            [
                (selection.gene_id, f"m={selection.chosen_m}  {in_unit(selection.min_nml_nats, args.bits):.6f} {unit}")
                for selection in top
            ]
        )

    @staticmethod
    def classify(args: ClassifyArgs) -> None:
        config = args.config()
        matrix = _load(args, config)
        with stage("ranking"):
            selections = rank_genes(matrix, config, progress=_progress())

        split = "test" if matrix.mask("test").any() else "train"
        with stage("classify"):
            top_g = min(args.top_g, len(selections))
            classifier = build_classifier(matrix, selections, top_g, smoothing_floor=config.smoothing_floor)
            report = evaluate(classifier, matrix, split)
            points = classifier_curve(
                matrix,
                selections,
                args.top_range,
                fixed_ms=args.fixed_m,
                split=split,
                smoothing_floor=config.smoothing_floor,
            )

        result = {
            "evaluation": model_dump(report),
            "genes": [{"gene_id": gene.gene_id, "m": gene.m} for gene in classifier.genes],
            "priors": classifier.priors,
        }
        document = envelope("genes classify", args, _inputs(args), result)
        with stage("write"):
            out = _out_dir(args.out)
            write_json(document, out / "evaluation.json")
            write_table(curve_table(points), out / "curve.csv", header_lines("genes classify", args, _inputs(args)))

        if args.as_json:
            write_json(document)
            return
        rows: List[Tuple[str, str]] = [
            ("split", split),
            ("genes", str(top_g)),
            ("accuracy", f"{report.accuracy:.4f}"),
        ]
        for name, counts in zip(report.class_names, report.confusion):
            rows.append((f"true {name}", " ".join(str(count) for count in counts)))
        write_rows(rows)

    @staticmethod
    def sweep(args: SweepArgs) -> None:
        config = args.config()
        matrix = _load(args, config)
        with stage("sweep"):
            result = quantization_sweep(matrix, config, args.levels_range, progress=_progress())

        unit = unit_name(args.bits)
        with stage("write"):
            out = _out_dir(args.out)
            write_table(sweep_table(result, unit), out / "sweep.csv", header_lines("genes sweep", args, _inputs(args)))

        if args.as_json:
            write_json(envelope("genes sweep", args, _inputs(args), model_dump(result)))
            return
        rows: List[Tuple[str, str]] = []
        for row in result.rows:
            if row.failure is not None:
                rows.append((f"levels={row.levels}", f"failed: {row.failure}"))
            else:
                assert row.mean_min_nml_nats is not None
                rows.append(
                    (
                        f"levels={row.levels}",
                        f"{in_unit(row.mean_min_nml_nats, args.bits):.6f} {unit}  accuracy {row.accuracy:.4f}",
                    )
                )
        rows.append(("nml argmin", str(result.nml_argmin_levels)))
        rows.append(("accuracy argmax", str(result.accuracy_argmax_levels)))
        rows.append(("coincide", "yes" if result.coincide else "no"))
        write_rows(rows)

    @staticmethod
    def synth(args: SynthArgs) -> None:
        matrix = make_synthetic_matrix(args.informative, args.noise, seed=args.seed)
        with stage("write"):
            out = _out_dir(args.out)
            write_matrix(matrix, out / "matrix.tsv")
            write_labels(matrix, out / "labels.tsv")
        write_rows([("matrix", str(out / "matrix.tsv")), ("labels", str(out / "labels.tsv"))])
