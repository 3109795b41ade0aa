from __future__ import annotations

from typing import Sequence
from typing_extensions import Literal

import pandas as pd

from ..types import CurvePoint, SweepResult, GeneSelection
from .._constants import NATS_PER_BIT

__all__ = ["ranking_table", "curves_table", "sweep_table", "curve_table"]

Unit = Literal["nats", "bits"]


def _scale(unit: Unit) -> float:
    return 1.0 / NATS_PER_BIT if unit == "bits" else 1.0


def ranking_table(selections: Sequence[GeneSelection], moments: Sequence[int], unit: Unit = "nats") -> pd.DataFrame:
    """rank, gene_id, chosen_m, the codelength at every swept m, and the minimum."""
    scale = _scale(unit)
    records = []
    for rank, selection in enumerate(selections, start=1):
        record: dict[str, object] = {"rank": rank, "gene_id": selection.gene_id, "chosen_m": selection.chosen_m}
        for m in moments:
            value = selection.nml_nats.get(m)
            record[f"nml_{unit}_m{m}"] = None if value is None else value * scale
        record[f"min_nml_{unit}"] = selection.min_nml_nats * scale
        records.append(record)
    return pd.DataFrame.from_records(records)


def curves_table(selections: Sequence[GeneSelection], unit: Unit = "nats") -> pd.DataFrame:
    """Long-form codelength against m for every gene, in ranking order."""
    scale = _scale(unit)
    records = [
        {
            "gene_id": selection.gene_id,
            "m": m,
            f"err_{unit}": selection.err_nats[m] * scale,
            f"comp_{unit}": selection.comp_nats[m] * scale,
            f"nml_{unit}": nml * scale,
        }
        for selection in selections
        for m, nml in sorted(selection.nml_nats.items())
    ]
    return pd.DataFrame.from_records(records, columns=["gene_id", "m", f"err_{unit}", f"comp_{unit}", f"nml_{unit}"])


def sweep_table(result: SweepResult, unit: Unit = "nats") -> pd.DataFrame:
    scale = _scale(unit)
    return pd.DataFrame.from_records(
        [
            {
                "levels": row.levels,
                f"mean_min_nml_{unit}": None if row.mean_min_nml_nats is None else row.mean_min_nml_nats * scale,
                "accuracy": row.accuracy,
                "num_genes": row.num_genes,
                "failure": row.failure or "",
            }
            for row in result.rows
        ]
    )


def curve_table(points: Sequence[CurvePoint]) -> pd.DataFrame:
    """Accuracy against top_g; one column per fixed-moment baseline."""
    records = []
    for point in points:
        record: dict[str, object] = {"top_g": point.top_g, "accuracy_mdl": point.accuracy}
        for m, accuracy in sorted(point.fixed_accuracy.items()):
            record[f"accuracy_m{m}"] = accuracy
        records.append(record)
    return pd.DataFrame.from_records(records)
