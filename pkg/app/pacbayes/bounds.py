"""Concentration and PAC-Bayesian bounds as explicit component-wise computations.

Every bound returns a :class:`BoundReport` whose total is the sum of an
empirical term, an eta-proportional slack term and a complexity term.
Natural logarithms are used throughout; log base alpha is ln(x) / ln(alpha).
"""
import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np
from django.core.exceptions import ValidationError

from .config.messages import (ERROR_DIMENSION_MISMATCH,
                              ERROR_ETA_OUT_OF_RANGE, ERROR_ETA_OUTSIDE_GRID,
                              ERROR_INVALID_COEFFICIENTS,
                              ERROR_INVALID_GRID, ERROR_INVALID_V,
                              ERROR_POSITIVE_LOWER_END, ERROR_UNBOUNDED_V,
                              ERROR_UNKNOWN_FLAVOR, ERROR_UNKNOWN_SLACK,
                              ERROR_ZERO_PRIOR_MASS, WARNING_DEGENERATE_RANGE,
                              WARNING_ETA_CLAMPED)
from .config.numerics import GRID_COVER_TOLERANCE
from .config.strings import FLAVOR_HOEFFDING, FLAVOR_VARIANCE
from .kernels import LossRange, phi
from .validators.arguments import (validate_alpha, validate_cap,
                                   validate_delta, validate_eta,
                                   validate_index, validate_kl,
                                   validate_loss_range, validate_positive_b,
                                   validate_sample_size,
                                   validate_second_moment)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BoundReport:
    """Decomposition of a bound's right-hand side.

    Attributes:
        empirical_term (float): The empirical risk part.
        slack_term (float): The eta-proportional part, 0 where absent.
        complexity_term (float): The log-complexity part scaled by 1/(eta n) or alpha/(eta n).
        total (float): Sum of the three terms.
        eta_used (Optional[float]): The eta the bound was evaluated at; None when the
            optimal eta degenerates to 0 or infinity.
        degenerate (bool): True when a limiting value was returned for a degenerate input.
        constants (dict[str, float]): Auxiliary constants (u, C, ...) of grid-type bounds.
    """

    empirical_term: float
    slack_term: float
    complexity_term: float
    total: float
    eta_used: Optional[float]
    degenerate: bool = False
    constants: dict[str, float] = field(default_factory=dict)

    @classmethod
    def compose(cls, empirical: float, slack: float, complexity: float, eta: Optional[float],
                **extra) -> 'BoundReport':
        """Build a report whose total is the sum of its parts."""
        return cls(
            empirical_term=empirical,
            slack_term=slack,
            complexity_term=complexity,
            total=empirical + slack + complexity,
            eta_used=eta,
            **extra,
        )


@dataclass(frozen=True)
class EtaGrid:
    """Geometric grid u * alpha^i covering [u, v].

    Attributes:
        u (float): Lower endpoint.
        v (float): Upper endpoint.
        alpha (float): Grid ratio, greater than one.
        points (tuple[float, ...]): The grid points.
    """

    u: float
    v: float
    alpha: float
    points: tuple[float, ...]

    @property
    def cardinality(self) -> int:
        """Return the number of grid points."""
        return len(self.points)

    def covering_point(self, eta: float) -> float:
        """Return the grid point eta_i with eta_i <= eta <= alpha * eta_i."""
        index = math.floor(math.log(eta / self.u) / math.log(self.alpha))
        return self.points[min(max(index, 0), self.cardinality - 1)]


@dataclass(frozen=True)
class HoeffdingSlack:
    """Slack model converting M_eta to R through a bounded loss range."""

    loss_range: LossRange


@dataclass(frozen=True)
class VarianceSlack:
    """Slack model converting M_eta to R through the second moment.

    Attributes:
        sec_moment (float): E[loss^2] of the hypothesis.
        a (float): Lower loss bound, at most 0.
        v (float): Cap on eta; math.inf is allowed when a = 0.
    """

    sec_moment: float
    a: float
    v: float


SlackModel = Union[HoeffdingSlack, VarianceSlack]


@dataclass(frozen=True)
class GridConstants:
    """Constants of the grid-based PAC-Hoeffding and PAC-Variance bounds."""

    u: float
    c: float
    log_factor: float


def _log_inverse(delta: float) -> float:
    return -math.log(validate_delta(delta))


def _log_base(value: float, base: float) -> float:
    return math.log(value) / math.log(base)


def _weights(prior) -> np.ndarray:
    return np.asarray(getattr(prior, 'weights', prior), dtype=float)


def phi_at_cap(a: float, v: float) -> float:
    """Return phi(-v a), reading phi(0) = 1/2 when a = 0 even for v = inf."""
    if a == 0:
        return 0.5
    return phi(-v * a)


def _validate_lower_end(a: float) -> float:
    if not a <= 0:
        raise ValidationError(ERROR_POSITIVE_LOWER_END.format(a=a), code='invalid_range')
    return float(a)


def _validate_eta_cap(eta: float, v: float) -> float:
    validate_eta(eta)
    if eta > v:
        raise ValidationError(ERROR_ETA_OUT_OF_RANGE.format(eta=eta, v=v), code='eta_out_of_range')
    return eta


def _clamp(eta: float, lower: float, upper: float) -> float:
    clamped = min(max(eta, lower), upper)
    if clamped != eta:
        logger.debug(WARNING_ETA_CLAMPED, eta, lower, upper)
    return clamped


def chernoff_bound(empirical_risk: float, n: int, eta: float, delta: float) -> BoundReport:
    """Bound M_eta(h) for a fixed hypothesis by R_n + ln(1/delta) / (eta n).

    Args:
        empirical_risk (float): R_n(D, h).
        n (int): Sample size.
        eta (float): Learning rate.
        delta (float): Confidence parameter.

    Returns:
        BoundReport: The decomposed bound.
    """
    n = validate_sample_size(n)
    eta = validate_eta(eta)
    return BoundReport.compose(empirical_risk, 0.0, _log_inverse(delta) / (eta * n), eta)


def hoeffding_bound(empirical_risk: float, n: int, loss_range: LossRange, delta: float) -> BoundReport:
    """Bound R(h) by Hoeffding's inequality at its optimal eta.

    The optimal eta is sqrt(8 ln(1/delta) / (n (b-a)^2)); at it the slack and
    complexity terms coincide. For delta = 1 or a = b the limiting bound
    R_n is returned with ``eta_used=None``.

    Args:
        empirical_risk (float): R_n(D, h).
        n (int): Sample size.
        loss_range (LossRange): Range of the loss.
        delta (float): Confidence parameter.

    Returns:
        BoundReport: The decomposed bound.
    """
    return _optimal_hoeffding(empirical_risk, validate_sample_size(n), loss_range, _log_inverse(delta))


def _optimal_hoeffding(empirical: float, n: int, loss_range: LossRange, log_term: float) -> BoundReport:
    if log_term == 0:
        return BoundReport.compose(empirical, 0.0, 0.0, None)
    if loss_range.is_degenerate:
        logger.warning(WARNING_DEGENERATE_RANGE, loss_range.a, loss_range.b)
        return BoundReport.compose(empirical, 0.0, 0.0, None, degenerate=True)
    width_sq = loss_range.width ** 2
    eta = math.sqrt(8 * log_term / (n * width_sq))
    return BoundReport.compose(empirical, eta * width_sq / 8, log_term / (eta * n), eta)


def hoeffding_confidence(epsilon: float, n: int, loss_range: LossRange) -> float:
    """Return delta such that R(h) <= R_n + epsilon / n holds with probability 1 - delta.

    This is the usual statement exp(-2 epsilon^2 / (n (b-a)^2)) of Hoeffding's inequality.
    """
    n = validate_sample_size(n)
    if loss_range.is_degenerate:
        return 1.0 if epsilon == 0 else 0.0
    return math.exp(-2 * epsilon ** 2 / (n * loss_range.width ** 2))


def variance_bound(empirical_risk: float, sec_moment: float, n: int, a: float, v: float,
                   eta: float, delta: float) -> BoundReport:
    """Bound R(h) by the variance-type inequality with slack eta phi(-va) E[loss^2].

    Args:
        empirical_risk (float): R_n(D, h).
        sec_moment (float): E[loss^2].
        n (int): Sample size.
        a (float): Lower loss bound, at most 0.
        v (float): Cap on eta; math.inf is allowed only when a = 0.
        eta (float): Learning rate in (0, v].
        delta (float): Confidence parameter.

    Returns:
        BoundReport: The decomposed bound.

    Raises:
        ValidationError: If eta > v, a > 0, or v is unbounded with a < 0.
    """
    n = validate_sample_size(n)
    sec_moment = validate_second_moment(sec_moment)
    a = _validate_lower_end(a)
    v = validate_cap(v)
    if math.isinf(v) and a != 0:
        raise ValidationError(ERROR_UNBOUNDED_V, code='unbounded_v')
    eta = _validate_eta_cap(eta, v)
    slack = eta * phi_at_cap(a, v) * sec_moment
    return BoundReport.compose(empirical_risk, slack, _log_inverse(delta) / (eta * n), eta)


def _selected_terms(empirical_risks: Sequence[float], prior, selected: int) -> tuple[float, float]:
    """Return the empirical risk and ln(1/prior mass) of the selected hypothesis."""
    weights = _weights(prior)
    if len(empirical_risks) != weights.size:
        raise ValidationError(
            ERROR_DIMENSION_MISMATCH.format(left=len(empirical_risks), right=weights.size),
            code='dimension_mismatch',
        )
    selected = validate_index(selected, weights.size)
    if weights[selected] <= 0:
        raise ValidationError(ERROR_ZERO_PRIOR_MASS.format(index=selected), code='zero_prior_mass')
    return float(empirical_risks[selected]), -math.log(weights[selected])


def union_bound(empirical_risks: Sequence[float], prior, selected: int, n: int, eta: float,
                delta: float) -> BoundReport:
    """Bound M_eta of a selected hypothesis uniformly over a countable class.

    The complexity term is (ln(1/prior[selected]) + ln(1/delta)) / (eta n).

    Args:
        empirical_risks (Sequence[float]): R_n for every hypothesis.
        prior (ProbVector | Sequence[float]): Data-independent weights.
        selected (int): Index of the chosen hypothesis.
        n (int): Sample size.
        eta (float): Learning rate.
        delta (float): Confidence parameter.

    Returns:
        BoundReport: The decomposed bound.

    Raises:
        ValidationError: If the prior has no mass on the selected hypothesis.
    """
    n = validate_sample_size(n)
    eta = validate_eta(eta)
    empirical, log_mass = _selected_terms(empirical_risks, prior, selected)
    complexity = (log_mass + _log_inverse(delta)) / (eta * n)
    return BoundReport.compose(empirical, 0.0, complexity, eta)


def union_bound_eta_opt(empirical_risks: Sequence[float], prior, selected: int, n: int, delta: float,
                        slack_model: SlackModel) -> BoundReport:
    """Bound R of a selected hypothesis with eta optimized per hypothesis.

    The per-hypothesis eta depends only on the prior mass, delta, n and the
    slack model, never on the data, so the bound holds simultaneously over
    all hypotheses at the stated delta.

    Args:
        empirical_risks (Sequence[float]): R_n for every hypothesis.
        prior (ProbVector | Sequence[float]): Data-independent weights.
        selected (int): Index of the chosen hypothesis.
        n (int): Sample size.
        delta (float): Confidence parameter.
        slack_model (SlackModel): HoeffdingSlack or VarianceSlack.

    Returns:
        BoundReport: The decomposed bound.
    """
    n = validate_sample_size(n)
    empirical, log_mass = _selected_terms(empirical_risks, prior, selected)
    log_term = log_mass + _log_inverse(delta)
    if isinstance(slack_model, HoeffdingSlack):
        return _optimal_hoeffding(empirical, n, slack_model.loss_range, log_term)
    if not isinstance(slack_model, VarianceSlack):
        raise ValidationError(ERROR_UNKNOWN_SLACK.format(slack=slack_model), code='unknown_slack')
    a = _validate_lower_end(slack_model.a)
    v = validate_cap(slack_model.v)
    if math.isinf(v) and a != 0:
        raise ValidationError(ERROR_UNBOUNDED_V, code='unbounded_v')
    coefficient = phi_at_cap(a, v) * validate_second_moment(slack_model.sec_moment)
    if log_term == 0:
        return BoundReport.compose(empirical, 0.0, 0.0, None)
    if coefficient == 0:
        if math.isinf(v):
            return BoundReport.compose(empirical, 0.0, 0.0, None, degenerate=True)
        return BoundReport.compose(empirical, 0.0, log_term / (v * n), v)
    eta = min(math.sqrt(log_term / (n * coefficient)), v)
    return BoundReport.compose(empirical, eta * coefficient, log_term / (eta * n), eta)


def pac_bayes_bound(posterior_empirical_risk: float, kl: float, n: int, eta: float,
                    delta: float) -> BoundReport:
    """Bound E_post[M_eta] by E_post[R_n] + (KL + ln(1/delta)) / (eta n), in probability.

    Args:
        posterior_empirical_risk (float): E_post[R_n].
        kl (float): KL(post || prior); math.inf gives a vacuous bound.
        n (int): Sample size.
        eta (float): Learning rate.
        delta (float): Confidence parameter.

    Returns:
        BoundReport: The decomposed bound.
    """
    n = validate_sample_size(n)
    eta = validate_eta(eta)
    complexity = (validate_kl(kl) + _log_inverse(delta)) / (eta * n)
    return BoundReport.compose(posterior_empirical_risk, 0.0, complexity, eta)


def pac_bayes_expectation_bound(posterior_empirical_risk: float, kl: float, n: int, eta: float) -> BoundReport:
    """Bound E_D E_post[M_eta] by E_D[E_post[R_n] + KL / (eta n)]; no delta involved."""
    n = validate_sample_size(n)
    eta = validate_eta(eta)
    return BoundReport.compose(posterior_empirical_risk, 0.0, validate_kl(kl) / (eta * n), eta)


def build_eta_grid(u: float, v: float, alpha: float) -> EtaGrid:
    """Build the geometric grid u * alpha^i, i < ceil(log_alpha(v / u)).

    Args:
        u (float): Lower endpoint.
        v (float): Upper endpoint.
        alpha (float): Grid ratio.

    Returns:
        EtaGrid: Grid whose points cover [u, v] within a factor alpha.

    Raises:
        ValidationError: If u >= v, u <= 0 or alpha <= 1.
    """
    if not (0 < u < v and math.isfinite(v) and alpha > 1):
        raise ValidationError(ERROR_INVALID_GRID.format(u=u, v=v, alpha=alpha), code='invalid_grid')
    # rounding keeps exact powers of alpha (v / u = alpha^k) at k points
    size = max(1, math.ceil(round(_log_base(v / u, alpha), 12)))
    if u * alpha ** size < v * (1 - GRID_COVER_TOLERANCE):
        size += 1
    grid = EtaGrid(u=float(u), v=float(v), alpha=float(alpha),
                   points=tuple(u * alpha ** index for index in range(size)))
    logger.debug('Built eta grid on [%g, %g] with alpha=%g: %d points', u, v, alpha, size)
    return grid


def pac_bayes_grid_bound(posterior_empirical_risk: float, kl: float, n: int, eta: float,
                         grid: EtaGrid, delta: float) -> BoundReport:
    """Bound E_post[M_eta] simultaneously for every eta in [u, v].

    The complexity term is alpha (KL + ln(1/delta) + ln |grid|) / (eta n).

    Raises:
        ValidationError: If eta lies outside [grid.u, grid.v].
    """
    n = validate_sample_size(n)
    eta = validate_eta(eta)
    if not grid.u <= eta <= grid.v:
        raise ValidationError(
            ERROR_ETA_OUTSIDE_GRID.format(eta=eta, u=grid.u, v=grid.v),
            code='eta_outside_grid_range',
        )
    log_terms = validate_kl(kl) + _log_inverse(delta) + math.log(grid.cardinality)
    return BoundReport.compose(posterior_empirical_risk, 0.0, grid.alpha * log_terms / (eta * n), eta)


def eta_truncation_penalty(a_coef: float, b_coef: float, v: float) -> float:
    """Return 2B/v, the price of restricting eta to (0, v] in min(eta A + B / eta).

    Args:
        a_coef (float): The coefficient A > 0 of eta.
        b_coef (float): The coefficient B > 0 of 1 / eta.
        v (float): The cap on eta.

    Returns:
        float: The additive penalty 2B / v.
    """
    if not (a_coef > 0 and b_coef > 0):
        raise ValidationError(ERROR_INVALID_COEFFICIENTS.format(a=a_coef, b=b_coef), code='invalid_coefficients')
    return 2 * b_coef / validate_eta(v)


def hoeffding_grid_constants(n: int, loss_range: LossRange, alpha: float, v: float) -> GridConstants:
    """Return u, C and ln(log_alpha(n) / 2 + C) of the PAC-Hoeffding bound."""
    n = validate_sample_size(n)
    alpha = validate_alpha(alpha)
    v = validate_eta(v)
    width = loss_range.width
    if width == 0:
        c_const, u = math.e, v / math.sqrt(n)
    else:
        c_const = max(_log_base(v * width / math.sqrt(8 * alpha), alpha), 0.0) + math.e
        u = min(math.sqrt(8 * alpha) / width, v) / math.sqrt(n)
    return GridConstants(u=u, c=c_const, log_factor=math.log(_log_base(n, alpha) / 2 + c_const))


def variance_grid_constants(n: int, a: float, b: float, alpha: float, v: float) -> GridConstants:
    """Return u, C and ln(log_alpha(n) / 2 + C) of the PAC-Variance bound.

    C = max{log_alpha(v^2 max{a^2, b^2} phi(-av) / alpha) / 2, 0} + e, which is
    exactly what makes ceil(log_alpha(v / u)) <= log_alpha(n) / 2 + C.
    """
    n = validate_sample_size(n)
    alpha = validate_alpha(alpha)
    v = validate_eta(v)
    a = _validate_lower_end(a)
    validate_loss_range(a, b)
    scale = max(a * a, b * b) * phi_at_cap(a, v)
    if scale == 0:
        c_const, u = math.e, v / math.sqrt(n)
    else:
        c_const = max(_log_base(v * v * scale / alpha, alpha) / 2, 0.0) + math.e
        u = min(math.sqrt(alpha / scale), v) / math.sqrt(n)
    return GridConstants(u=u, c=c_const, log_factor=math.log(_log_base(n, alpha) / 2 + c_const))


def _grid_bound(empirical: float, kl: float, n: int, alpha: float, v: float, delta: float,
                coefficient: float, constants: GridConstants, eta: Optional[float]) -> BoundReport:
    log_terms = validate_kl(kl) + _log_inverse(delta) + constants.log_factor
    degenerate = coefficient == 0
    if eta is None:
        if degenerate:
            eta = v
        else:
            eta = _clamp(math.sqrt(alpha * log_terms / (n * coefficient)), constants.u, v)
    else:
        eta = _validate_eta_cap(eta, v)
    return BoundReport.compose(
        empirical,
        eta * coefficient,
        alpha * log_terms / (eta * n),
        eta,
        degenerate=degenerate,
        constants={'u': constants.u, 'C': constants.c, 'log_factor': constants.log_factor},
    )


def pac_hoeffding_bound(posterior_empirical_risk: float, kl: float, n: int, loss_range: LossRange,
                        alpha: float, v: float, delta: float, eta: Optional[float] = None) -> BoundReport:
    """PAC-Bayesian Hoeffding bound on E_post[R], uniform over eta in (0, v].

    When eta is omitted the closed-form minimizer
    sqrt(8 alpha (KL + ln(1/delta) + ln(log_alpha(n) / 2 + C)) / (n (b-a)^2))
    is used, clamped to [u, v].

    Args:
        posterior_empirical_risk (float): E_post[R_n].
        kl (float): KL(post || prior).
        n (int): Sample size.
        loss_range (LossRange): Range of the loss.
        alpha (float): Grid ratio.
        v (float): Cap on eta.
        delta (float): Confidence parameter.
        eta (Optional[float]): Explicit eta in (0, v].

    Returns:
        BoundReport: The decomposed bound with u and C in ``constants``.
    """
    constants = hoeffding_grid_constants(n, loss_range, alpha, v)
    if loss_range.is_degenerate:
        logger.warning(WARNING_DEGENERATE_RANGE, loss_range.a, loss_range.b)
    return _grid_bound(posterior_empirical_risk, kl, n, alpha, v, delta,
                       loss_range.width ** 2 / 8, constants, eta)


def pac_variance_bound(posterior_empirical_risk: float, kl: float, posterior_sec_moment: float, n: int,
                       a: float, b: float, alpha: float, v: float, delta: float,
                       eta: Optional[float] = None) -> BoundReport:
    """PAC-Bayesian variance-type bound on E_post[R], uniform over eta in (0, v].

    Args:
        posterior_empirical_risk (float): E_post[R_n].
        kl (float): KL(post || prior).
        posterior_sec_moment (float): E_post[E[loss^2]].
        n (int): Sample size.
        a (float): Lower loss bound, at most 0.
        b (float): Upper loss bound.
        alpha (float): Grid ratio.
        v (float): Finite cap on eta.
        delta (float): Confidence parameter.
        eta (Optional[float]): Explicit eta in (0, v]; closed form clamped to [u, v] when omitted.

    Returns:
        BoundReport: The decomposed bound with u and C in ``constants``.
    """
    if not math.isfinite(v):
        raise ValidationError(ERROR_INVALID_V.format(v=v), code='invalid_eta')
    constants = variance_grid_constants(n, a, b, alpha, v)
    coefficient = phi_at_cap(a, v) * validate_second_moment(posterior_sec_moment)
    return _grid_bound(posterior_empirical_risk, kl, n, alpha, v, delta, coefficient, constants, eta)


def excess_risk_bounds(posterior_empirical_risk: float, ref_empirical_risk: float, kl: float,
                       posterior_sec_moment_relative: float, n: int, b: float, alpha: float, v: float,
                       delta: float, flavor: str, eta: Optional[float] = None) -> BoundReport:
    """Bound the excess risk E_post[R] - R(h*) through the relative loss in [-b, b].

    The hoeffding flavor has slack eta b^2 / 2 (range width 2b); the variance
    flavor has slack eta phi(bv) E_post[E[loss'^2]].

    Args:
        posterior_empirical_risk (float): E_post[R_n].
        ref_empirical_risk (float): R_n(D, h*).
        kl (float): KL(post || prior).
        posterior_sec_moment_relative (float): E_post of the relative loss second moment.
        n (int): Sample size.
        b (float): Upper loss bound; losses lie in [0, b].
        alpha (float): Grid ratio.
        v (float): Cap on eta.
        delta (float): Confidence parameter.
        flavor (str): 'hoeffding' or 'variance'.
        eta (Optional[float]): Explicit eta in (0, v].

    Returns:
        BoundReport: The decomposed bound on the excess risk.
    """
    b = validate_positive_b(b)
    difference = posterior_empirical_risk - ref_empirical_risk
    if flavor == FLAVOR_HOEFFDING:
        return pac_hoeffding_bound(difference, kl, n, LossRange(-b, b), alpha, v, delta, eta)
    if flavor == FLAVOR_VARIANCE:
        return pac_variance_bound(difference, kl, posterior_sec_moment_relative, n, -b, b, alpha, v, delta, eta)
    raise ValidationError(ERROR_UNKNOWN_FLAVOR.format(flavor=flavor), code='unknown_flavor')
