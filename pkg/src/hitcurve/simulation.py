"""Binormal score simulation.

Controls score N(0, 1) and cases N(delta, 1); ``delta`` sets the strength
of the simulated test.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field

from hitcurve.data import LabeledSample, PartitionTable, to_samples
from hitcurve.errors import DegenerateScenario, DomainError, RandomDenominator
from hitcurve.metrics import BetaHat, Curve, ap, auc, beta_hat, hit_curve
from hitcurve.streams import substream

logger = logging.getLogger(__name__)


class BinormalScenario(BaseModel):
    """Sample size, prevalence, class separation and seed of one simulation."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(gt=0)
    pi: float = Field(gt=0, lt=1)
    delta: float = Field(ge=0)
    seed: int = Field(default=0, ge=0)

    @property
    def n1(self) -> int:
        """Number of cases, n pi rounded half up."""
        return math.floor(self.n * self.pi + 0.5)

    @property
    def n0(self) -> int:
        return self.n - self.n1

    def check(self) -> None:
        """Raise DegenerateScenario unless both classes get at least one subject."""
        if self.n1 < 1 or self.n0 < 1:
            raise DegenerateScenario(
                f"n={self.n}, pi={self.pi} gives {self.n1} case(s) and {self.n0} control(s)"
            )


@dataclass(frozen=True, eq=False)
class ScenarioSummary:
    """Metrics of one simulated dataset plus the beta_hat overlay line."""

    scenario: BinormalScenario
    ap: float
    auc_exact: float
    auc_paper: float
    beta_hat: BetaHat
    hit: Curve

    @property
    def overlay_slope(self) -> float:
        """Slope of the line f(t) = beta_hat t drawn over the hit curve."""
        return self.beta_hat.value


@dataclass(frozen=True)
class ReplicateMetrics:
    """Metrics of one replicate; beta_hat is None when AUC is exactly 1/2."""

    ap: float
    auc: float
    beta_hat: float | None
    in_range: bool | None


@dataclass(frozen=True)
class StudyResult:
    """Replicate metrics and their aggregates."""

    scenario: BinormalScenario
    replicates: list[ReplicateMetrics]

    def _column(self, name: str) -> NDArray[np.float64]:
        values = [getattr(r, name) for r in self.replicates]
        return np.array([v for v in values if v is not None], dtype=np.float64)

    def mean(self, name: str) -> float:
        """Mean of ``ap``, ``auc`` or ``beta_hat`` (undefined beta_hat skipped)."""
        column = self._column(name)
        return float(column.mean()) if column.size else math.nan

    def sd(self, name: str) -> float:
        """Sample standard deviation of ``ap``, ``auc`` or ``beta_hat``."""
        column = self._column(name)
        return float(column.std(ddof=1)) if column.size > 1 else math.nan

    @property
    def out_of_range(self) -> int:
        """Replicates whose beta_hat fell outside [pi, 1]."""
        return sum(1 for r in self.replicates if r.in_range is False)

    @property
    def undefined(self) -> int:
        """Replicates with AUC exactly 1/2."""
        return sum(1 for r in self.replicates if r.beta_hat is None)

    def aggregates(self) -> dict[str, float | int]:
        return {
            "replicates": len(self.replicates),
            "ap_mean": self.mean("ap"),
            "ap_sd": self.sd("ap"),
            "auc_mean": self.mean("auc"),
            "auc_sd": self.sd("auc"),
            "beta_hat_mean": self.mean("beta_hat"),
            "beta_hat_sd": self.sd("beta_hat"),
            "beta_hat_out_of_range": self.out_of_range,
            "beta_hat_undefined": self.undefined,
        }


def draw_scores(
    scenario: BinormalScenario, rng: np.random.Generator
) -> tuple[NDArray[np.float64], NDArray[np.int64]]:
    """Scores and labels for one dataset, cases first."""
    scenario.check()
    cases = rng.normal(scenario.delta, 1.0, size=scenario.n1)
    controls = rng.normal(0.0, 1.0, size=scenario.n0)
    labels = np.concatenate(
        [np.ones(scenario.n1, dtype=np.int64), np.zeros(scenario.n0, dtype=np.int64)]
    )
    return np.concatenate([cases, controls]), labels


def generate(scenario: BinormalScenario) -> list[LabeledSample]:
    """Simulate one dataset, deterministic in ``scenario.seed``.

    Raises:
        DegenerateScenario: If a class would be empty
    """
    return to_samples(*draw_scores(scenario, substream(scenario.seed)))


def _summarize(scenario: BinormalScenario, table: PartitionTable) -> ScenarioSummary:
    ap_value = ap(table)
    auc_exact = auc(table)
    return ScenarioSummary(
        scenario=scenario,
        ap=ap_value,
        auc_exact=auc_exact,
        auc_paper=auc(table, mode="paper"),
        beta_hat=beta_hat(ap_value, auc_exact, table.pi),
        hit=hit_curve(table),
    )


def run_scenario(scenario: BinormalScenario) -> ScenarioSummary:
    """Simulate one dataset and summarize AP, AUC, beta_hat and its hit curve.

    Raises:
        RandomDenominator: If the empirical AUC is exactly 1/2
    """
    table = PartitionTable.from_arrays(*draw_scores(scenario, substream(scenario.seed)))
    return _summarize(scenario, table)


def scenario_grid(
    n: int, pis: Sequence[float], deltas: Sequence[float], seed: int = 0
) -> list[ScenarioSummary]:
    """Run one dataset per (pi, delta) cell; cell i uses substream (seed, i)."""
    summaries = []
    for i, (pi, delta) in enumerate((p, d) for p in pis for d in deltas):
        scenario = BinormalScenario(n=n, pi=pi, delta=delta, seed=seed)
        table = PartitionTable.from_arrays(*draw_scores(scenario, substream(seed, i)))
        summaries.append(_summarize(scenario, table))
    return summaries


def replicate_study(scenario: BinormalScenario, R: int) -> StudyResult:
    """Run R independent datasets; replicate r uses substream (seed, r).

    Raises:
        DomainError: If R < 2
    """
    if R < 2:
        raise DomainError(f"a replicate study needs R >= 2, got {R}")
    scenario.check()
    rows = []
    for r in range(R):
        table = PartitionTable.from_arrays(*draw_scores(scenario, substream(scenario.seed, r)))
        ap_value = ap(table)
        auc_value = auc(table)
        try:
            estimate = beta_hat(ap_value, auc_value, table.pi)
            rows.append(ReplicateMetrics(ap_value, auc_value, estimate.value, estimate.in_range))
        except RandomDenominator:
            rows.append(ReplicateMetrics(ap_value, auc_value, None, None))
        if (r + 1) % 100 == 0:
            logger.debug("Replicate %d/%d done", r + 1, R)
    return StudyResult(scenario=scenario, replicates=rows)
