"""Argument validators shared by the numerical modules of the pacbayes app."""
import math

from django.core.exceptions import ValidationError

from pacbayes.config.messages import (ERROR_INDEX_OUT_OF_RANGE,
                                      ERROR_INVALID_ALPHA, ERROR_INVALID_B,
                                      ERROR_INVALID_DELTA, ERROR_INVALID_ETA,
                                      ERROR_INVALID_RANGE,
                                      ERROR_INVALID_SAMPLE_SIZE,
                                      ERROR_INVALID_V, ERROR_NEGATIVE_KL,
                                      ERROR_NEGATIVE_MOMENT)


def validate_eta(eta: float) -> float:
    """Validate a learning rate.

    Args:
        eta (float): The learning rate.

    Returns:
        float: The validated learning rate.

    Raises:
        ValidationError: If eta is not positive and finite.
    """
    if not math.isfinite(eta) or eta <= 0:
        raise ValidationError(ERROR_INVALID_ETA.format(eta=eta), code='invalid_eta')
    return float(eta)


def validate_delta(delta: float) -> float:
    """Validate a confidence level.

    Args:
        delta (float): The confidence parameter.

    Returns:
        float: The validated confidence parameter.

    Raises:
        ValidationError: If delta is outside (0, 1].
    """
    if not 0 < delta <= 1:
        raise ValidationError(ERROR_INVALID_DELTA.format(delta=delta), code='invalid_delta')
    return float(delta)


def validate_loss_range(a: float, b: float) -> tuple[float, float]:
    """Validate the endpoints of a loss range.

    Args:
        a (float): The lower endpoint.
        b (float): The upper endpoint.

    Returns:
        tuple[float, float]: The validated endpoints.

    Raises:
        ValidationError: If an endpoint is not finite or a > b.
    """
    if not (math.isfinite(a) and math.isfinite(b)) or a > b:
        raise ValidationError(ERROR_INVALID_RANGE.format(a=a, b=b), code='invalid_range')
    return float(a), float(b)


def validate_sample_size(n: int) -> int:
    """Validate a sample size.

    Args:
        n (int): Number of examples.

    Returns:
        int: The validated sample size.

    Raises:
        ValidationError: If n is not a positive integer.
    """
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValidationError(ERROR_INVALID_SAMPLE_SIZE.format(n=n), code='invalid_sample_size')
    return int(n)


def validate_alpha(alpha: float) -> float:
    """Validate a grid ratio, which must exceed one."""
    if not math.isfinite(alpha) or alpha <= 1:
        raise ValidationError(ERROR_INVALID_ALPHA.format(alpha=alpha), code='invalid_grid')
    return float(alpha)


def validate_cap(v: float) -> float:
    """Validate the upper cap v on eta; infinity is allowed here."""
    if math.isnan(v) or v <= 0:
        raise ValidationError(ERROR_INVALID_V.format(v=v), code='invalid_eta')
    return float(v)


def validate_kl(kl: float) -> float:
    """Validate a KL divergence value; +inf is allowed (vacuous bound)."""
    if math.isnan(kl) or kl < 0:
        raise ValidationError(ERROR_NEGATIVE_KL.format(kl=kl), code='invalid_kl')
    return float(kl)


def validate_second_moment(moment: float) -> float:
    """Validate a second moment."""
    if not math.isfinite(moment) or moment < 0:
        raise ValidationError(ERROR_NEGATIVE_MOMENT.format(moment=moment), code='invalid_moment')
    return float(moment)


def validate_positive_b(b: float) -> float:
    """Validate the upper loss bound of an excess-risk bound."""
    if not math.isfinite(b) or b <= 0:
        raise ValidationError(ERROR_INVALID_B.format(b=b), code='invalid_b')
    return float(b)


def validate_index(index: int, size: int) -> int:
    """Validate a hypothesis index.

    Args:
        index (int): The index to check.
        size (int): The number of hypotheses.

    Returns:
        int: The validated index.

    Raises:
        ValidationError: If the index is outside [0, size).
    """
    if isinstance(index, bool) or int(index) != index or not 0 <= index < size:
        raise ValidationError(
            ERROR_INDEX_OUT_OF_RANGE.format(index=index, size=size),
            code='index_out_of_range',
        )
    return int(index)
