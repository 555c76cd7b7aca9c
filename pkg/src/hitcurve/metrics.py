"""Threshold-free metrics on a partition table: curves, AUC, AP and friends.

All counts are accumulated as integers and divided once per term, so the
metrics are as exact as a single floating-point division allows.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum
from typing import Literal

import numpy as np
from numpy.typing import NDArray
from scipy import stats

from hitcurve.data import LabeledSample, PartitionTable
from hitcurve.errors import (
    DegenerateClass,
    DomainError,
    InvalidPrevalence,
    RandomDenominator,
)

logger = logging.getLogger(__name__)

CurveKind = Literal["hit", "roc", "pr"]
AUCMode = Literal["exact", "paper"]


class SEMethod(str, Enum):
    """How a standard error was obtained."""

    ASYMPTOTIC = "asymptotic"
    PARAMETRIC = "parametric-bootstrap"
    NONPARAMETRIC = "nonparametric-bootstrap"
    NONE = "none"


@dataclass(frozen=True)
class MetricEstimate:
    """A metric value with an optional standard error."""

    value: float
    se: float | None = None
    method: SEMethod = SEMethod.NONE

    def __post_init__(self) -> None:
        if self.se is not None and not self.se >= 0:
            raise ValueError(f"standard error must be nonnegative, got {self.se}")

    def interval(self, level: float = 0.95) -> tuple[float, float] | None:
        """Normal-theory interval value +/- z * se, or None without an se."""
        if self.se is None:
            return None
        if not 0 < level < 1:
            raise DomainError(f"level must be in (0, 1), got {level}")
        z = float(stats.norm.ppf((1 + level) / 2))
        return (self.value - z * self.se, self.value + z * self.se)


@dataclass(frozen=True)
class BetaHat:
    """Momentum estimate with a flag for values outside [pi, 1]."""

    value: float
    in_range: bool


@dataclass(frozen=True, eq=False)
class Curve:
    """Ordered curve points."""

    kind: CurveKind
    x: NDArray[np.float64]
    y: NDArray[np.float64]

    @property
    def points(self) -> list[tuple[float, float]]:
        return [(float(a), float(b)) for a, b in zip(self.x, self.y)]

    def __len__(self) -> int:
        return len(self.x)


def hit_curve(table: PartitionTable) -> Curve:
    """Hit curve: (d(k)/n, h(k)/n) for k = 1..K, starting at the origin."""
    n = table.n
    x = np.concatenate([[0.0], table.d / n])
    y = np.concatenate([[0.0], table.h / n])
    return Curve(kind="hit", x=x, y=y)


def roc_curve(table: PartitionTable) -> Curve:
    """ROC curve (FPF, TPF), starting at the origin.

    Raises:
        DegenerateClass: If either class is empty
    """
    table.require_both_classes()
    h = table.h
    fpf = (table.d - h) / table.n0
    tpf = h / table.n1
    return Curve(kind="roc", x=np.concatenate([[0.0], fpf]), y=np.concatenate([[0.0], tpf]))


def pr_curve(table: PartitionTable) -> Curve:
    """Precision-recall curve (Recall(k), Precision(k)) for k = 1..K.

    Raises:
        DegenerateClass: If either class is empty
    """
    table.require_both_classes()
    h = table.h
    return Curve(kind="pr", x=h / table.n1, y=h / table.d)


def curve_area(curve: Curve) -> float:
    """Trapezoidal area under a curve over the x-range it covers."""
    return float(np.sum(np.diff(curve.x) * (curve.y[1:] + curve.y[:-1])) / 2)


def auc(table: PartitionTable, mode: AUCMode = "exact") -> float:
    """Area under the ROC curve.

    ``exact`` is the trapezoidal area, identical to the Mann-Whitney pair
    statistic (concordant + tied/2) / (n1 n0). ``paper`` is the right-endpoint
    weight form, which overshoots on small or heavily tied data.

    Raises:
        DegenerateClass: If either class is empty
    """
    table.require_both_classes()
    n1, n0 = table.n1, table.n0
    if mode == "exact":
        controls_above = np.cumsum(table.Zbar)
        # twice (concordant + tied / 2)
        numerator = int(np.sum(table.Z * (2 * (n0 - controls_above) + table.Zbar)))
        return numerator / (2 * n1 * n0)
    if mode == "paper":
        numerator = 2 * int(np.sum(table.h * table.S)) - n1 * n1
        return numerator / (2 * n1 * n0)
    raise DomainError(f"unknown AUC mode: {mode!r}")


def ap(table: PartitionTable) -> float:
    """Average precision: sum over groups of h(k)/d(k) * Z_k/n1.

    Within a tie group every positive receives the end-of-group precision.
    With no controls AP is 1.

    Raises:
        DegenerateClass: If there are no class-1 subjects
    """
    if table.n1 == 0:
        raise DegenerateClass("no class-1 subjects (n1 = 0)")
    return float(np.sum(table.Z * table.h / table.d)) / table.n1


def auc_weights(table: PartitionTable) -> NDArray[np.float64]:
    """Weights w'_k = (S_k + ... + S_K)/n placed on Z_k/n1 by the AUC."""
    return np.cumsum(table.S[::-1])[::-1] / table.n


def ap_weights(table: PartitionTable) -> NDArray[np.float64]:
    """Weights w_k = h(k)/d(k) (cumulative precision) placed on Z_k/n1 by the AP."""
    return table.h / table.d


def _check_prevalence(pi: float) -> None:
    if not 0 < pi < 1:
        raise InvalidPrevalence(f"prevalence must be in (0, 1), got {pi}")


def rescale(ap: float, auc: float, pi: float) -> tuple[float, float]:
    """Map AP and AUC so that a random test scores 0 and a perfect test 1.

    Raises:
        InvalidPrevalence: If pi is not in (0, 1)
    """
    _check_prevalence(pi)
    return (ap - pi) / (1 - pi), 2 * auc - 1


def beta_hat(ap: float, auc: float, pi: float) -> BetaHat:
    """Momentum estimate: rescaled AP over rescaled AUC.

    The raw value is never clamped; ``in_range`` is False outside [pi, 1].

    Raises:
        RandomDenominator: If auc is exactly 1/2
        InvalidPrevalence: If pi is not in (0, 1)
    """
    if auc == 0.5:
        raise RandomDenominator("beta_hat is undefined when AUC = 0.5")
    ap_tilde, auc_tilde = rescale(ap, auc, pi)
    value = ap_tilde / auc_tilde
    in_range = pi <= value <= 1
    if not in_range:
        logger.info("beta_hat %.6g lies outside [%.6g, 1]", value, pi)
    return BetaHat(value=value, in_range=in_range)


def reference_values(pi: float) -> dict[str, dict[str, float]]:
    """AP and AUC of a random and of a perfect test at prevalence pi."""
    _check_prevalence(pi)
    return {
        "random": {"ap": pi, "auc": 0.5},
        "perfect": {"ap": 1.0, "auc": 1.0},
    }


def inflate_controls(samples: Sequence[LabeledSample], m: int) -> list[LabeledSample]:
    """Replicate every class-0 sample m-fold (the original plus m - 1 copies).

    Raises:
        DomainError: If m < 1
    """
    if m < 1:
        raise DomainError(f"inflation factor must be >= 1, got {m}")
    controls = [s for s in samples if s.label == 0]
    return list(samples) + controls * (m - 1)


def inflate_table(table: PartitionTable, m: int) -> PartitionTable:
    """Grouped-count equivalent of :func:`inflate_controls`."""
    if m < 1:
        raise DomainError(f"inflation factor must be >= 1, got {m}")
    zbar = table.Zbar * m
    return PartitionTable(scores=table.scores, S=table.Z + zbar, Z=table.Z, Zbar=zbar)
