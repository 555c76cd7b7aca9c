"""Standard errors for AP.

The grouped data follow two multinomials (class-1 and class-0 group
frequencies ``p`` and ``q``) and a binomial prevalence ``pi``. AP is a smooth
function ``g(p, q, pi)`` of their maximum likelihood estimates, which gives
a delta-method variance. Parametric and nonparametric bootstraps are provided
as cross-checks.
"""

import logging
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import linalg, stats

from hitcurve.data import PartitionTable
from hitcurve.errors import (
    DegenerateReplicate,
    DomainError,
    InvalidCorrelation,
    SingularInformation,
)
from hitcurve.metrics import MetricEstimate, SEMethod, ap, auc
from hitcurve.streams import substream

logger = logging.getLogger(__name__)

Metric = Literal["ap", "auc"]
Scheme = Literal["parametric", "nonparametric"]

DEFAULT_BOOTSTRAP = 5000

_SCHEME_METHOD = {
    "parametric": SEMethod.PARAMETRIC,
    "nonparametric": SEMethod.NONPARAMETRIC,
}


@dataclass(frozen=True, eq=False)
class MultinomialFit:
    """Maximum likelihood estimates for the grouped model.

    The prevalence estimate is always n1/n, so it is derived rather than stored.

    Attributes:
        p_hat: Class-1 group frequencies Z_k/n1
        q_hat: Class-0 group frequencies Zbar_k/n0
        n1: Class-1 count
        n0: Class-0 count
    """

    p_hat: NDArray[np.float64]
    q_hat: NDArray[np.float64]
    n1: int
    n0: int

    def __post_init__(self) -> None:
        if len(self.p_hat) != len(self.q_hat) or len(self.p_hat) == 0:
            raise ValueError("p_hat and q_hat must be nonempty and of equal length")
        for name, v in (("p_hat", self.p_hat), ("q_hat", self.q_hat)):
            if np.any(v < 0) or np.any(v > 1) or abs(float(v.sum()) - 1) > 1e-9:
                raise ValueError(f"{name} must be a probability vector")
        if self.n1 < 1 or self.n0 < 1:
            raise ValueError(f"both classes need members, got n1={self.n1}, n0={self.n0}")

    @property
    def K(self) -> int:
        return len(self.p_hat)

    @property
    def n(self) -> int:
        return self.n1 + self.n0

    @property
    def pi_hat(self) -> float:
        """Prevalence n1/n."""
        return self.n1 / self.n


@dataclass(frozen=True, eq=False)
class GradientVector:
    """Gradient of g in the constrained (K-1)-dimensional parameterization.

    Group ``reference`` absorbs the multinomial constraints and is left out
    of ``d_p`` and ``d_q``.
    """

    d_p: NDArray[np.float64]
    d_q: NDArray[np.float64]
    d_pi: float
    reference: int

    def as_array(self) -> NDArray[np.float64]:
        """Stacked (d_p, d_q, d_pi), matching the Fisher information layout."""
        return np.concatenate([self.d_p, self.d_q, [self.d_pi]])


@dataclass(frozen=True, eq=False)
class BootstrapResult:
    """Bootstrap standard error with its replicates."""

    se: float
    replicates: NDArray[np.float64]
    redraws: int
    metric: Metric
    scheme: Scheme

    @property
    def B(self) -> int:
        return len(self.replicates)


@dataclass(frozen=True)
class DifferenceTest:
    """Normal test for the difference of two correlated estimates."""

    difference: float
    se: float
    z: float
    p_value: float


def fit_multinomial(table: PartitionTable) -> MultinomialFit:
    """Frequency estimates p_k = Z_k/n1, q_k = Zbar_k/n0, pi = n1/n.

    Raises:
        DegenerateClass: If either class is empty
    """
    table.require_both_classes()
    return MultinomialFit(
        p_hat=table.Z / table.n1,
        q_hat=table.Zbar / table.n0,
        n1=table.n1,
        n0=table.n0,
    )


def _cumulatives(
    p: NDArray[np.float64], q: NDArray[np.float64], pi: float
) -> tuple[NDArray[np.float64], NDArray[np.float64], NDArray[np.float64]]:
    P = np.cumsum(p)
    Q = np.cumsum(q)
    C = pi * P + (1 - pi) * Q
    return P, Q, C


def _safe_ratio(num: NDArray[np.float64], den: NDArray[np.float64]) -> NDArray[np.float64]:
    # C_k = 0 only before the first nonempty group, where p_k = 0 as well
    return np.divide(num, den, out=np.zeros_like(num), where=den > 0)


def ap_from_probabilities(p: ArrayLike, q: ArrayLike, pi: float) -> float:
    """AP as g(p, q, pi) = sum_k p_k * pi P_k / (pi P_k + (1 - pi) Q_k).

    Takes any probability vectors and prevalence, not only a fitted model.
    """
    p_arr = np.asarray(p, dtype=np.float64)
    P, _, C = _cumulatives(p_arr, np.asarray(q, dtype=np.float64), pi)
    return float(np.sum(p_arr * _safe_ratio(pi * P, C)))


def ap_from_fit(fit: MultinomialFit) -> float:
    """AP evaluated at the maximum likelihood estimates."""
    return ap_from_probabilities(fit.p_hat, fit.q_hat, fit.pi_hat)


def _free_gradient(
    fit: MultinomialFit,
) -> tuple[NDArray[np.float64], NDArray[np.float64], float]:
    """Partial derivatives of g treating every p_k and q_k as free."""
    pi = fit.pi_hat
    P, Q, C = _cumulatives(fit.p_hat, fit.q_hat, pi)
    C2 = C * C
    tail_p = np.cumsum((fit.p_hat * _safe_ratio(pi * (1 - pi) * Q, C2))[::-1])[::-1]
    tail_q = np.cumsum((fit.p_hat * _safe_ratio(pi * (1 - pi) * P, C2))[::-1])[::-1]
    grad_p = _safe_ratio(pi * P, C) + tail_p
    grad_q = -tail_q
    grad_pi = float(np.sum(fit.p_hat * _safe_ratio(P * Q, C2)))
    return grad_p, grad_q, grad_pi


def _reference(fit: MultinomialFit, reference: int | None) -> int:
    if reference is None:
        return fit.K - 1
    if not 0 <= reference < fit.K:
        raise DomainError(f"reference group must be in [0, {fit.K}), got {reference}")
    return reference


def ap_gradient(fit: MultinomialFit, reference: int | None = None) -> GradientVector:
    """Analytic gradient of g with respect to (p, q, pi).

    By default the last group absorbs the constraints sum(p) = sum(q) = 1.
    """
    r = _reference(fit, reference)
    grad_p, grad_q, grad_pi = _free_gradient(fit)
    return GradientVector(
        d_p=np.delete(grad_p - grad_p[r], r),
        d_q=np.delete(grad_q - grad_q[r], r),
        d_pi=grad_pi,
        reference=r,
    )


def _multinomial_block(
    probs: NDArray[np.float64], count: int, r: int
) -> NDArray[np.float64]:
    kept = np.delete(probs, r)
    return (np.diag(kept) - np.outer(kept, kept)) / count


def fisher_information(fit: MultinomialFit, reference: int | None = None) -> NDArray[np.float64]:
    """Observed Fisher information of (p, q, pi) at the MLE.

    Raises:
        SingularInformation: If some group has zero estimated probability
    """
    r = _reference(fit, reference)
    if np.any(fit.p_hat == 0) or np.any(fit.q_hat == 0):
        raise SingularInformation("Fisher information needs every group probability positive")

    def block(probs: NDArray[np.float64], count: int) -> NDArray[np.float64]:
        z = probs * count
        curvature = z / probs**2
        kept = np.delete(curvature, r)
        return np.diag(kept) + curvature[r]

    pi = fit.pi_hat
    a = fit.n1 / pi**2 + fit.n0 / (1 - pi) ** 2
    return linalg.block_diag(block(fit.p_hat, fit.n1), block(fit.q_hat, fit.n0), [[a]])


def fisher_information_inverse(
    fit: MultinomialFit, reference: int | None = None
) -> NDArray[np.float64]:
    """Closed-form inverse of the Fisher information.

    The multinomial blocks are (diag(p) - p p^T)/n1 and (diag(q) - q q^T)/n0
    on the non-reference groups, which stays finite at zero counts.
    """
    r = _reference(fit, reference)
    pi = fit.pi_hat
    return linalg.block_diag(
        _multinomial_block(fit.p_hat, fit.n1, r),
        _multinomial_block(fit.q_hat, fit.n0, r),
        [[pi * (1 - pi) / fit.n]],
    )


def ap_asymptotic_variance(table: PartitionTable) -> float:
    """Delta-method variance of AP, (grad g)^T J^-1 (grad g).

    Evaluated as the multinomial variance of the free gradient, which equals
    the constrained quadratic form for any choice of reference group and is
    nonnegative by construction.

    Raises:
        DegenerateClass: If either class is empty
    """
    fit = fit_multinomial(table)
    grad_p, grad_q, grad_pi = _free_gradient(fit)
    var_p = float(np.sum(fit.p_hat * (grad_p - np.dot(fit.p_hat, grad_p)) ** 2)) / fit.n1
    var_q = float(np.sum(fit.q_hat * (grad_q - np.dot(fit.q_hat, grad_q)) ** 2)) / fit.n0
    var_pi = grad_pi**2 * fit.pi_hat * (1 - fit.pi_hat) / fit.n
    return var_p + var_q + var_pi


def _parametric_draw(
    table: PartitionTable, fit: MultinomialFit, rng: np.random.Generator
) -> tuple[NDArray[np.int64], NDArray[np.int64]]:
    n1 = int(rng.binomial(table.n, fit.pi_hat))
    return rng.multinomial(n1, fit.p_hat), rng.multinomial(table.n - n1, fit.q_hat)


def _nonparametric_draw(
    table: PartitionTable, cells: NDArray[np.int64], rng: np.random.Generator
) -> tuple[NDArray[np.int64], NDArray[np.int64]]:
    picked = cells[rng.integers(0, table.n, size=table.n)]
    counts = np.bincount(picked, minlength=2 * table.K).reshape(table.K, 2)
    return counts[:, 1], counts[:, 0]


def bootstrap_se(
    table: PartitionTable,
    metric: Metric = "ap",
    scheme: Scheme = "nonparametric",
    B: int = DEFAULT_BOOTSTRAP,
    seed: int = 0,
    max_redraws: int | None = None,
) -> BootstrapResult:
    """Bootstrap standard error of AP or exact AUC.

    The parametric scheme draws n1* ~ binomial(n, pi) and then group counts
    from the two fitted multinomials; the nonparametric scheme resamples n
    subjects with replacement. Replicate ``b`` uses substream ``(seed, b)``.
    Replicates missing a class are redrawn, so exactly B are kept.

    Raises:
        DomainError: If B < 2 or the metric/scheme is unknown
        DegenerateClass: If either class is empty
        DegenerateReplicate: If more than ``max_redraws`` redraws are needed
    """
    if B < 2:
        raise DomainError(f"bootstrap needs B >= 2, got {B}")
    if metric not in ("ap", "auc"):
        raise DomainError(f"unknown metric: {metric!r}")
    if scheme not in _SCHEME_METHOD:
        raise DomainError(f"unknown bootstrap scheme: {scheme!r}")
    fit = fit_multinomial(table)
    if max_redraws is None:
        max_redraws = 100 * B

    # cell 2k holds the controls of group k, cell 2k + 1 its cases
    cells = np.repeat(
        np.arange(2 * table.K), np.column_stack([table.Zbar, table.Z]).ravel()
    )

    logger.debug("Bootstrapping %s: scheme=%s B=%d seed=%d", metric, scheme, B, seed)
    replicates = np.empty(B)
    redraws = 0
    for b in range(B):
        rng = substream(seed, b)
        while True:
            if scheme == "parametric":
                z, zbar = _parametric_draw(table, fit, rng)
            else:
                z, zbar = _nonparametric_draw(table, cells, rng)
            if z.sum() > 0 and zbar.sum() > 0:
                break
            redraws += 1
            if redraws > max_redraws:
                raise DegenerateReplicate(
                    f"gave up after {redraws} replicates with an empty class"
                )
        resampled = PartitionTable.from_counts(table.scores, z, zbar)
        replicates[b] = ap(resampled) if metric == "ap" else auc(resampled)

    if redraws:
        logger.warning("Redrew %d degenerate bootstrap replicate(s)", redraws)
    return BootstrapResult(
        se=float(np.std(replicates, ddof=1)),
        replicates=replicates,
        redraws=redraws,
        metric=metric,
        scheme=scheme,
    )


def standard_error(
    table: PartitionTable,
    metric: Metric,
    method: SEMethod,
    B: int = DEFAULT_BOOTSTRAP,
    seed: int = 0,
) -> MetricEstimate:
    """Metric value with its standard error by the requested method.

    The asymptotic method exists for AP only; for AUC it yields no se.
    """
    value = ap(table) if metric == "ap" else auc(table)
    if method == SEMethod.ASYMPTOTIC:
        if metric != "ap":
            return MetricEstimate(value=value)
        return MetricEstimate(
            value=value, se=math.sqrt(ap_asymptotic_variance(table)), method=method
        )
    if method == SEMethod.NONE:
        return MetricEstimate(value=value)
    scheme: Scheme = "parametric" if method == SEMethod.PARAMETRIC else "nonparametric"
    result = bootstrap_se(table, metric=metric, scheme=scheme, B=B, seed=seed)
    return MetricEstimate(value=value, se=result.se, method=method)


def difference_se(se1: float, se2: float, rho: float) -> float:
    """Standard error of a difference of two estimates with correlation rho.

    Raises:
        InvalidCorrelation: If |rho| > 1
        DomainError: If a standard error is negative
    """
    if not -1 <= rho <= 1:
        raise InvalidCorrelation(f"correlation must be in [-1, 1], got {rho}")
    if se1 < 0 or se2 < 0:
        raise DomainError("standard errors must be nonnegative")
    return math.sqrt(max(se1**2 + se2**2 - 2 * rho * se1 * se2, 0.0))


def difference_test(
    value1: float, value2: float, se1: float, se2: float, rho: float
) -> DifferenceTest:
    """Two-sided normal test of value1 - value2 given the correlation rho."""
    diff = value1 - value2
    se = difference_se(se1, se2, rho)
    if se == 0:
        z = 0.0 if diff == 0 else math.copysign(math.inf, diff)
    else:
        z = diff / se
    p_value = float(2 * stats.norm.sf(abs(z)))
    return DifferenceTest(difference=diff, se=se, z=z, p_value=p_value)
