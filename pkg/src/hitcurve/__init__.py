"""
hitcurve - AUC and average precision for diagnostic scores

Both metrics are read off the hit curve of a grouped score table: exact and
approximate AUC, AP with asymptotic and bootstrap standard errors, the
two-segment hit-curve model and binormal simulation.
"""

__version__ = "0.1.0"

from hitcurve.data import LabeledSample, PartitionTable, partition, read_scores
from hitcurve.inference import ap_asymptotic_variance, bootstrap_se, difference_se
from hitcurve.metrics import ap, auc, beta_hat, hit_curve, pr_curve, rescale, roc_curve
from hitcurve.quasiconcave import QuasiConcaveModel, model_ap, model_auc
from hitcurve.simulation import BinormalScenario, generate

__all__ = [
    "__version__",
    "LabeledSample",
    "PartitionTable",
    "partition",
    "read_scores",
    "ap",
    "auc",
    "beta_hat",
    "rescale",
    "hit_curve",
    "roc_curve",
    "pr_curve",
    "ap_asymptotic_variance",
    "bootstrap_se",
    "difference_se",
    "QuasiConcaveModel",
    "model_auc",
    "model_ap",
    "BinormalScenario",
    "generate",
]
