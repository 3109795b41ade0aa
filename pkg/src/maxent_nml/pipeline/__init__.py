from ._io import load_matrix as load_matrix
from ._io import write_table as write_table
from ._io import write_labels as write_labels
from ._io import write_matrix as write_matrix
from ._sweep import quantization_sweep as quantization_sweep
from ._config import PipelineConfig as PipelineConfig
from ._ranking import rank_genes as rank_genes
from ._ranking import select_m_for_gene as select_m_for_gene
from ._ranking import precompute_complexities as precompute_complexities
from ._quantize import quantize as quantize
from ._quantize import quantize_matrix as quantize_matrix
from ._quantize import apply_cut_points as apply_cut_points
from ._synthetic import make_synthetic_matrix as make_synthetic_matrix
from ._classifier import predict as predict
from ._classifier import evaluate as evaluate
from ._classifier import build_classifier as build_classifier
from ._classifier import minimax_ranking as minimax_ranking
from ._classifier import classifier_curve as classifier_curve
from ._preprocess import preprocess as preprocess
from ._tables import curve_table as curve_table
from ._tables import sweep_table as sweep_table
from ._tables import curves_table as curves_table
from ._tables import ranking_table as ranking_table
from ._io import load_tokens as load_tokens
