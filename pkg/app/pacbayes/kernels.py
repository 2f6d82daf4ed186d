"""Scalar numerical primitives behind every bound: phi, M_eta, log-sum-exp and eta search."""
import logging
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np
from django.core.exceptions import ValidationError
from scipy.optimize import minimize_scalar
from scipy.special import logsumexp

from .config.messages import (ERROR_DISTRIBUTION_LENGTHS,
                              ERROR_DISTRIBUTION_NEGATIVE,
                              ERROR_DISTRIBUTION_SUM,
                              ERROR_DISTRIBUTION_SUPPORT, ERROR_EMPTY_INPUT,
                              ERROR_INVALID_INTERVAL)
from .config.numerics import (MINIMIZE_ETA_MAX_ITER,
                              MINIMIZE_ETA_RELATIVE_TOL, PHI_SERIES_SWITCH,
                              PROB_SUM_TOLERANCE)
from .validators.arguments import validate_eta, validate_loss_range

logger = logging.getLogger(__name__)

# 1 / (k + 2)! for k = 0..19, highest power first for Horner evaluation.
_PHI_COEFFICIENTS = tuple(1 / math.factorial(power + 2) for power in reversed(range(20)))


@dataclass(frozen=True)
class LossRange:
    """Closed interval [a, b] containing every loss value."""

    a: float
    b: float

    def __post_init__(self) -> None:
        """Validate the endpoints."""
        validate_loss_range(self.a, self.b)

    @property
    def width(self) -> float:
        """Return b - a."""
        return self.b - self.a

    @property
    def is_degenerate(self) -> bool:
        """Return True when the range is a single point."""
        return self.a == self.b

    def contains(self, values: Sequence[float]) -> bool:
        """Check that every value lies inside the range."""
        return all(self.a <= value <= self.b for value in values)


@dataclass(frozen=True)
class DiscreteLossDistribution:
    """Finite-support law of the per-example loss of one hypothesis.

    Probabilities are renormalized on construction so that downstream
    transforms see a law summing to one exactly.

    Attributes:
        support (tuple[float, ...]): Loss values z_i.
        probs (tuple[float, ...]): Probabilities p_i.
    """

    support: tuple[float, ...]
    probs: tuple[float, ...]

    def __post_init__(self) -> None:
        """Validate and normalize the law."""
        support = tuple(float(value) for value in self.support)
        probs = tuple(float(prob) for prob in self.probs)
        if not support or len(support) != len(probs):
            raise ValidationError(ERROR_DISTRIBUTION_LENGTHS, code='invalid_distribution')
        if not all(math.isfinite(value) for value in support):
            raise ValidationError(ERROR_DISTRIBUTION_SUPPORT, code='invalid_distribution')
        if any(prob < 0 or math.isnan(prob) for prob in probs):
            raise ValidationError(ERROR_DISTRIBUTION_NEGATIVE, code='invalid_distribution')
        total = math.fsum(probs)
        if abs(total - 1) > PROB_SUM_TOLERANCE:
            raise ValidationError(ERROR_DISTRIBUTION_SUM.format(total=total), code='invalid_distribution')
        object.__setattr__(self, 'support', support)
        object.__setattr__(self, 'probs', tuple(prob / total for prob in probs))

    @classmethod
    def point_mass(cls, value: float) -> 'DiscreteLossDistribution':
        """Return the law that always takes the given value."""
        return cls(support=(value,), probs=(1.0,))

    @classmethod
    def bernoulli(cls, p: float, low: float = 0.0, high: float = 1.0) -> 'DiscreteLossDistribution':
        """Return the law taking value high with probability p and low otherwise."""
        return cls(support=(low, high), probs=(1 - p, p))

    def mean(self) -> float:
        """Return the exact expected loss."""
        return math.fsum(prob * value for value, prob in zip(self.support, self.probs))

    def quantile(self, uniforms: np.ndarray) -> np.ndarray:
        """Map uniforms in [0, 1) through the inverse CDF.

        Args:
            uniforms (np.ndarray): Draws from the uniform distribution on [0, 1).

        Returns:
            np.ndarray: Loss values with this law.
        """
        order = np.argsort(self.support, kind='stable')
        values = np.asarray(self.support)[order]
        cumulative = np.cumsum(np.asarray(self.probs)[order])
        index = np.searchsorted(cumulative, uniforms, side='right')
        return values[np.minimum(index, len(values) - 1)]


def phi(x: float) -> float:
    """Return (e^x - x - 1) / x^2, with phi(0) = 1/2.

    Below the series switch the four-term Taylor expansion is used; between
    the switch and |x| = 1 the series is summed to double precision, which
    avoids the cancellation in e^x - x - 1.

    Args:
        x (float): A finite real.

    Returns:
        float: phi(x), nonnegative and nondecreasing in x.
    """
    magnitude = abs(x)
    if magnitude < PHI_SERIES_SWITCH:
        return 0.5 + x * (1 / 6 + x * (1 / 24 + x / 120))
    if magnitude < 1:
        total = 0.0
        for coefficient in _PHI_COEFFICIENTS:
            total = total * x + coefficient
        return total
    try:
        return (math.expm1(x) - x) / (x * x)
    except OverflowError:
        log_value = x - 2 * math.log(x)
        return math.exp(log_value) if log_value < 709 else math.inf


def log_sum_exp(terms: Sequence[float]) -> float:
    """Return ln sum(exp(t)) using max-subtraction.

    Args:
        terms (Sequence[float]): Finite reals or -inf.

    Returns:
        float: The log of the sum of exponentials.

    Raises:
        ValidationError: If terms is empty.
    """
    values = np.asarray(terms, dtype=float)
    if values.size == 0:
        raise ValidationError(ERROR_EMPTY_INPUT, code='empty_input')
    with np.errstate(divide='ignore'):
        return float(logsumexp(values))


def m_eta(dist: DiscreteLossDistribution, eta: float) -> float:
    """Return the Cramer-Chernoff surrogate M_eta = -(1/eta) ln E[exp(-eta * loss)].

    Zero-probability support points are dropped. When eta times the spread
    of the support is small the transform is evaluated as
    z_min - log1p(E[expm1(-eta (z - z_min))]) / eta, which keeps full
    relative precision as eta goes to zero.

    Args:
        dist (DiscreteLossDistribution): The loss law.
        eta (float): The learning rate.

    Returns:
        float: M_eta, never above the mean of dist.
    """
    validate_eta(eta)
    probs = np.asarray(dist.probs)
    support = np.asarray(dist.support)
    keep = probs > 0
    probs, support = probs[keep], support[keep]
    lowest = float(support.min())
    spread = float(support.max()) - lowest
    if eta * spread <= 1:
        shifted = np.expm1(-eta * (support - lowest))
        return lowest - math.log1p(math.fsum(probs * shifted)) / eta
    return -log_sum_exp(np.log(probs) - eta * support) / eta


def second_moment(dist: DiscreteLossDistribution) -> float:
    """Return E[loss^2]."""
    return math.fsum(prob * value * value for value, prob in zip(dist.support, dist.probs))


def minimize_eta(objective: Callable[[float], float], lo: float, hi: float) -> tuple[float, float]:
    """Minimize a unimodal objective over [lo, hi].

    Uses bounded Brent search (golden-section steps with parabolic
    acceleration), then compares against both endpoints so that boundary
    minima are returned exactly.

    Args:
        objective (Callable[[float], float]): Function of eta.
        lo (float): Lower end of the search interval.
        hi (float): Upper end of the search interval.

    Returns:
        tuple[float, float]: The minimizing eta and the objective there.

    Raises:
        ValidationError: If lo >= hi or lo is not a valid eta.
    """
    if not lo < hi:
        raise ValidationError(ERROR_INVALID_INTERVAL.format(lo=lo, hi=hi), code='invalid_interval')
    validate_eta(lo)
    result = minimize_scalar(
        objective,
        bounds=(lo, hi),
        method='bounded',
        options={'xatol': MINIMIZE_ETA_RELATIVE_TOL * (hi - lo), 'maxiter': MINIMIZE_ETA_MAX_ITER},
    )
    candidates = [(float(result.x), float(result.fun)), (lo, objective(lo)), (hi, objective(hi))]
    best = min(candidates, key=lambda candidate: candidate[1])
    logger.debug('minimize_eta on [%g, %g] -> eta=%.12g value=%.12g', lo, hi, *best)
    return best
