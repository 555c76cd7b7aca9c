"""Tests for the two-segment hit-curve model."""

import numpy as np
import pytest
from pydantic import ValidationError
from scipy import integrate

from hitcurve.errors import DomainError, InvalidPrevalence
from hitcurve.quasiconcave import (
    QuasiConcaveModel,
    model_ap,
    model_auc,
    model_hit,
    theorem1_equal_auc,
    theorem2_check,
)


def valid_models():
    """A grid over (alpha, beta, pi) including the boundary change points."""
    for pi in (0.1, 0.2, 0.5, 0.8):
        for beta in np.linspace(pi, 1.0, 5):
            # shrink the bound so alpha * beta stays below pi after rounding
            top = 1.0 if beta == pi else pi / beta * (1 - 1e-9)
            for alpha in [0.0, 1e-13, 1e-6, *np.linspace(0.05, top, 5)]:
                if alpha <= top:
                    yield QuasiConcaveModel(alpha=float(alpha), beta=float(beta), pi=pi)


def quadrature_ap(model):
    """AP as (1/pi) times the integral of h(t)/t dh along the curve."""
    a, b, pi = model.alpha, model.beta, model.pi
    head = b * b * a
    s = model.tail_slope
    if a == 0:
        tail = s * s
    elif a < 1:
        # t = exp(u) keeps the integrand smooth near a small change point
        tail, _ = integrate.quad(
            lambda u: (a * b + s * (np.exp(u) - a)) * s, np.log(a), 0, epsabs=1e-14, epsrel=1e-12
        )
    else:
        tail = 0.0
    return (head + tail) / pi


def quadrature_auc(model):
    pi = model.pi
    points = [model.alpha] if 0 < model.alpha < 1 else None
    area, _ = integrate.quad(lambda t: model_hit(model, t), 0, 1, points=points, epsabs=1e-13)
    return (area - pi * pi / 2) / (pi * (1 - pi))


def reference_model():
    return QuasiConcaveModel(alpha=0.2, beta=0.8, pi=0.2)


def test_model_constraints():
    """Models outside beta >= pi, alpha * beta <= pi or 0 < pi < 1 are rejected."""
    with pytest.raises(ValidationError, match="beta >= pi"):
        QuasiConcaveModel(alpha=0.1, beta=0.1, pi=0.2)
    with pytest.raises(ValidationError, match="alpha <= pi/beta"):
        QuasiConcaveModel(alpha=0.5, beta=0.8, pi=0.2)
    with pytest.raises(ValidationError):
        QuasiConcaveModel(alpha=0.1, beta=0.8, pi=1.0)


def test_model_frozen():
    """Models are immutable."""
    model = reference_model()
    with pytest.raises(ValidationError):
        model.alpha = 0.3


def test_hit_values():
    """h(0) = 0, h(alpha) = alpha * beta and h(1) = pi."""
    model = reference_model()

    assert model_hit(model, 0.0) == 0.0
    assert model_hit(model, 0.2) == pytest.approx(0.16)
    assert model_hit(model, 1.0) == pytest.approx(0.2)


def test_hit_random_line():
    """beta = pi gives the random line pi * t."""
    model = QuasiConcaveModel(alpha=0.3, beta=0.4, pi=0.4)
    t = np.linspace(0, 1, 11)

    assert np.allclose(model_hit(model, t), 0.4 * t)


def test_hit_slopes_within_unit_interval():
    """Both segment slopes lie in [0, 1] and the tail is no steeper than the head."""
    for model in valid_models():
        assert 0 <= model.beta <= 1
        assert 0 <= model.tail_slope <= model.beta + 1e-12


def test_hit_domain():
    """t must lie in [0, 1]."""
    model = reference_model()
    with pytest.raises(DomainError):
        model_hit(model, 1.5)
    with pytest.raises(DomainError):
        model_hit(model, [0.5, -0.1])


def test_auc_examples():
    """Closed-form AUC on hand-checked models."""
    assert model_auc(reference_model()) == pytest.approx(0.875)
    assert model_auc(QuasiConcaveModel(alpha=0.4, beta=0.5, pi=0.2)) == pytest.approx(0.875)
    assert model_auc(QuasiConcaveModel(alpha=0.6, beta=0.3, pi=0.3)) == 0.5


def test_auc_matches_quadrature():
    """Closed-form AUC agrees with numerical integration of the hit curve."""
    for model in valid_models():
        assert model_auc(model) == pytest.approx(quadrature_auc(model), abs=1e-10)
        assert 0.5 <= model_auc(model) <= 1 + 1e-12


def test_ap_examples():
    """Exact and Taylor AP on the reference model."""
    model = reference_model()

    assert model_ap(model) == pytest.approx(0.71035, abs=1e-5)
    assert model_ap(model, mode="taylor") == pytest.approx(0.68)


def test_ap_random_line():
    """The random line has AP equal to pi in both modes."""
    for alpha in (0.0, 0.3, 1.0):
        model = QuasiConcaveModel(alpha=alpha, beta=0.3, pi=0.3)
        assert model_ap(model) == pytest.approx(0.3)
        assert model_ap(model, mode="taylor") == pytest.approx(0.3)


def test_ap_matches_quadrature():
    """Exact AP agrees with numerical integration."""
    for model in valid_models():
        assert model_ap(model) == pytest.approx(quadrature_ap(model), abs=1e-8)


def test_metrics_monotone_in_beta():
    """At fixed alpha and pi, AUC and AP never fall as beta grows."""
    for pi in (0.1, 0.3, 0.6):
        for alpha in (0.05, 0.2, 0.5):
            top = min(1.0, pi / alpha * (1 - 1e-9))
            if top < pi:
                continue
            betas = np.linspace(pi, top, 20)
            models = [QuasiConcaveModel(alpha=alpha, beta=b, pi=pi) for b in betas]
            aucs = [model_auc(m) for m in models]
            aps = [model_ap(m) for m in models]
            assert np.all(np.diff(aucs) >= -1e-12)
            assert np.all(np.diff(aps) >= -1e-12)


def test_taylor_close_for_large_change_point():
    """Taylor AP is within 5% of exact AP when alpha >= 0.7."""
    for pi in (0.1, 0.3, 0.5, 0.7):
        for alpha in (0.7, 0.8, 0.9):
            for beta in np.linspace(pi, min(1.0, pi / alpha * (1 - 1e-9)), 6):
                model = QuasiConcaveModel(alpha=alpha, beta=float(beta), pi=pi)
                exact = model_ap(model)
                taylor = model_ap(model, mode="taylor")
                assert abs(exact - taylor) / exact <= 0.05


def test_ap_unknown_mode():
    """Only the exact and Taylor modes exist."""
    with pytest.raises(DomainError):
        model_ap(reference_model(), mode="pade")


def test_equal_auc_examples():
    """Equal (beta - pi) * alpha means equal AUC."""
    model = reference_model()
    partner = QuasiConcaveModel(alpha=0.4, beta=0.5, pi=0.2)
    weaker = QuasiConcaveModel(alpha=0.2, beta=0.5, pi=0.2)

    assert theorem1_equal_auc(model, partner)
    assert not theorem1_equal_auc(model, weaker)
    assert theorem1_equal_auc(model, model)


def test_equal_auc_agrees_with_model_auc():
    """The product condition holds exactly when the closed-form AUCs match."""
    rng = np.random.default_rng(53)
    pairs = 0
    while pairs < 100:
        pi = float(rng.uniform(0.05, 0.9))
        beta1 = float(rng.uniform(pi, 1))
        alpha1 = float(rng.uniform(0, min(1, pi / beta1)))
        m1 = QuasiConcaveModel(alpha=alpha1, beta=beta1, pi=pi)
        beta2 = float(rng.uniform(pi, 1))
        if beta2 == pi:
            continue
        if rng.random() < 0.5:
            alpha2 = (beta1 - pi) * alpha1 / (beta2 - pi)
        else:
            alpha2 = float(rng.uniform(0, 1))
        if alpha2 > 1 or alpha2 * beta2 > pi:
            continue
        m2 = QuasiConcaveModel(alpha=alpha2, beta=beta2, pi=pi)
        same_auc = abs(model_auc(m1) - model_auc(m2)) < 1e-12
        assert theorem1_equal_auc(m1, m2) == same_auc
        pairs += 1


def test_equal_auc_needs_shared_prevalence():
    """Models with different pi cannot be compared."""
    with pytest.raises(InvalidPrevalence):
        theorem1_equal_auc(reference_model(), QuasiConcaveModel(alpha=0.2, beta=0.8, pi=0.3))


def test_taylor_relation_is_exact():
    """Rescaled Taylor AP equals beta times rescaled AUC."""
    for model in valid_models():
        assert theorem2_check(model, mode="taylor").gap == pytest.approx(0, abs=1e-12)


def test_exact_gap():
    """Gap between rescaled exact AP and beta times rescaled AUC."""
    check = theorem2_check(reference_model())

    assert check.ap_tilde == pytest.approx(0.63794, abs=1e-5)
    assert check.beta_times_auc_tilde == pytest.approx(0.6)
    assert check.gap == pytest.approx(0.038, abs=1e-3)


def test_random_line_sides_vanish():
    """Both sides are zero on the random line."""
    check = theorem2_check(QuasiConcaveModel(alpha=0.5, beta=0.4, pi=0.4))

    assert check.ap_tilde == pytest.approx(0, abs=1e-12)
    assert check.beta_times_auc_tilde == pytest.approx(0, abs=1e-12)
