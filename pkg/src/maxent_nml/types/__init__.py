from __future__ import annotations

from .sample import Sample as Sample
from .alphabet import Alphabet as Alphabet
from .candidate import Candidate as Candidate
from .candidate import CandidateSet as CandidateSet
from .class_set import ClassSet as ClassSet
from .classifier import GeneModel as GeneModel
from .classifier import Prediction as Prediction
from .classifier import MaxEntClassifier as MaxEntClassifier
from .type_class import TypeClass as TypeClass
from .quantization import Quantization as Quantization
from .sweep import SweepRow as SweepRow
from .sweep import CurvePoint as CurvePoint
from .sweep import SweepResult as SweepResult
from .feature_table import FeatureTable as FeatureTable
from .feature_table import CondFeatureTable as CondFeatureTable
from .moment_vector import MomentVector as MomentVector
from .gene_selection import GeneSelection as GeneSelection
from .selection_result import CandidateScore as CandidateScore
from .selection_result import SelectionResult as SelectionResult
from .codelength_report import CodelengthReport as CodelengthReport
from .evaluation_report import EvaluationReport as EvaluationReport
from .expression_matrix import ExpressionMatrix as ExpressionMatrix
from .conditional_model import ConditionalModel as ConditionalModel
from .maxent_distribution import MaxEntDistribution as MaxEntDistribution
