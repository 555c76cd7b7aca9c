"""Two-segment (quasi-concave) hit-curve model.

The hit curve rises with slope ``beta`` (momentum) up to the change point
``alpha`` (stamina), then runs straight to (1, pi). AUC and AP have closed
forms in (alpha, beta, pi).
"""

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, Field, model_validator

from hitcurve.errors import DomainError, InvalidPrevalence

APMode = Literal["exact", "taylor"]

# below this change point the log term is replaced by its limit
ALPHA_LIMIT = 1e-12


class QuasiConcaveModel(BaseModel):
    """Parameters (alpha, beta, pi) of the two-segment hit curve."""

    model_config = ConfigDict(frozen=True)

    alpha: float = Field(ge=0, le=1, description="change point (stamina)")
    beta: float = Field(le=1, description="initial true positive rate (momentum)")
    pi: float = Field(gt=0, lt=1, description="prevalence")

    @model_validator(mode="after")
    def _check_constraints(self) -> "QuasiConcaveModel":
        if self.beta < self.pi:
            raise ValueError(f"constraint beta >= pi violated: beta={self.beta}, pi={self.pi}")
        if self.alpha * self.beta > self.pi:
            raise ValueError(
                f"constraint alpha <= pi/beta violated: alpha={self.alpha}, "
                f"pi/beta={self.pi / self.beta}"
            )
        return self

    @property
    def tail_slope(self) -> float:
        """Slope of the second segment, (pi - alpha beta)/(1 - alpha)."""
        if self.alpha == 1:
            return self.beta
        return (self.pi - self.alpha * self.beta) / (1 - self.alpha)


@dataclass(frozen=True)
class Theorem2Check:
    """Both sides of rescaled AP ~ beta x rescaled AUC, and their gap."""

    ap_tilde: float
    beta_times_auc_tilde: float

    @property
    def gap(self) -> float:
        return self.ap_tilde - self.beta_times_auc_tilde


def model_hit(model: QuasiConcaveModel, t: ArrayLike) -> float | NDArray[np.float64]:
    """Evaluate the hit curve at t in [0, 1] (scalar or array).

    Raises:
        DomainError: If any t lies outside [0, 1]
    """
    arr = np.asarray(t, dtype=np.float64)
    if np.any(arr < 0) or np.any(arr > 1) or np.any(np.isnan(arr)):
        raise DomainError("t must lie in [0, 1]")
    a, b = model.alpha, model.beta
    values = np.where(arr <= a, b * arr, a * b + model.tail_slope * (arr - a))
    if values.ndim == 0:
        return float(values)
    return values


def model_auc(model: QuasiConcaveModel) -> float:
    """Closed-form AUC: (beta - pi) alpha / (2 pi (1 - pi)) + 1/2."""
    pi = model.pi
    return (model.beta - pi) * model.alpha / (2 * pi * (1 - pi)) + 0.5


def model_ap(model: QuasiConcaveModel, mode: APMode = "exact") -> float:
    """AP of the model, exactly or under the log(alpha) ~ alpha - 1 approximation."""
    a, b, pi = model.alpha, model.beta, model.pi
    if mode == "taylor":
        return (b / pi) * (b - pi) * a + pi
    if mode != "exact":
        raise DomainError(f"unknown AP mode: {mode!r}")
    if a < ALPHA_LIMIT:
        return pi
    if a == 1:
        # only valid when beta == pi
        return b * b / pi
    s = model.tail_slope
    log_term = s * ((b - pi) * a / (1 - a)) * math.log(a)
    return (b * b * a + s * s * (1 - a) - log_term) / pi


def theorem1_equal_auc(m1: QuasiConcaveModel, m2: QuasiConcaveModel) -> bool:
    """True when (beta - pi) alpha agrees, i.e. the two models share their AUC.

    Raises:
        InvalidPrevalence: If the models have different prevalence
    """
    if m1.pi != m2.pi:
        raise InvalidPrevalence(f"models must share pi, got {m1.pi} and {m2.pi}")
    product1 = (m1.beta - m1.pi) * m1.alpha
    product2 = (m2.beta - m2.pi) * m2.alpha
    return abs(product1 - product2) < 1e-12


def theorem2_check(model: QuasiConcaveModel, mode: APMode = "exact") -> Theorem2Check:
    """Compare rescaled AP with beta times rescaled AUC.

    Under ``taylor`` the two sides agree identically; ``exact`` shows the gap
    left by the approximation.
    """
    pi = model.pi
    ap_tilde = (model_ap(model, mode) - pi) / (1 - pi)
    auc_tilde = 2 * model_auc(model) - 1
    return Theorem2Check(ap_tilde=ap_tilde, beta_times_auc_tilde=model.beta * auc_tilde)
