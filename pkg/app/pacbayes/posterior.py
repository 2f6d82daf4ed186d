"""Distributions over finite hypothesis classes: KL, Gibbs posteriors and localized priors."""
import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Optional, Protocol

import numpy as np
from django.core.exceptions import ValidationError
from scipy.special import logsumexp, rel_entr

from .bounds import EtaGrid
from .config.messages import (ERROR_ALL_MASS_ZERO, ERROR_DIMENSION_MISMATCH,
                              ERROR_INVALID_ALPHA, ERROR_INVALID_ITERATIONS,
                              ERROR_INVALID_TRIALS, ERROR_NONFINITE_RISK,
                              ERROR_PROB_VECTOR, WARNING_NOT_CONVERGED)
from .config.numerics import DEFAULT_FIXPOINT_TOL, PROB_VECTOR_TOLERANCE
from .kernels import log_sum_exp
from .sim.environment import Dataset, Environment, erm, sample_dataset
from .sim.trials import map_trials, trial_seeds
from .validators.arguments import (validate_delta, validate_eta,
                                   validate_index, validate_sample_size)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ProbVector:
    """Probability vector over K hypotheses; used both as prior and as posterior."""

    weights: np.ndarray

    def __post_init__(self) -> None:
        """Validate the weights."""
        weights = np.array(self.weights, dtype=float)
        malformed = weights.ndim != 1 or weights.size == 0 or not np.all(np.isfinite(weights))
        total = math.nan if malformed else math.fsum(weights)
        if malformed or np.any(weights < 0) or abs(total - 1) > PROB_VECTOR_TOLERANCE:
            raise ValidationError(ERROR_PROB_VECTOR.format(total=total), code='invalid_prob_vector')
        weights.setflags(write=False)
        object.__setattr__(self, 'weights', weights)

    @classmethod
    def uniform(cls, size: int) -> 'ProbVector':
        """Return the uniform distribution over size hypotheses."""
        return cls(np.full(size, 1 / size))

    @classmethod
    def point_mass(cls, size: int, index: int) -> 'ProbVector':
        """Return the distribution putting all mass on one hypothesis."""
        weights = np.zeros(size)
        weights[validate_index(index, size)] = 1.0
        return cls(weights)

    @property
    def dimension(self) -> int:
        """Return K."""
        return self.weights.size

    def expectation(self, values: Sequence[float]) -> float:
        """Return the weighted mean of per-hypothesis values."""
        values = np.asarray(values, dtype=float)
        _check_dimensions(self.dimension, values.size)
        support = self.weights > 0
        return math.fsum(self.weights[support] * values[support])

    def mode(self) -> int:
        """Return the most probable hypothesis, ties broken by the lowest index."""
        return int(np.argmax(self.weights))


@dataclass(frozen=True)
class GibbsParams:
    """Parameters of the Gibbs transform exp(-(eta / alpha) n R) * prior."""

    eta: float
    alpha: float
    n: int

    def __post_init__(self) -> None:
        """Validate the parameters."""
        validate_eta(self.eta)
        validate_sample_size(self.n)
        if not self.alpha >= 1:
            raise ValidationError(ERROR_INVALID_ALPHA.format(alpha=self.alpha), code='invalid_alpha')

    @property
    def exponent(self) -> float:
        """Return (eta / alpha) n."""
        return self.eta / self.alpha * self.n


class PosteriorRule(Protocol):
    """A randomized estimator: maps a dataset to a posterior."""

    def __call__(self, data: Dataset) -> ProbVector:
        """Return the posterior for the dataset."""


@dataclass(frozen=True)
class ErmRule:
    """Point mass on the empirical risk minimizer."""

    def __call__(self, data: Dataset) -> ProbVector:
        """Return the point mass on erm(data)."""
        return ProbVector.point_mass(data.size, erm(data))


@dataclass(frozen=True)
class GibbsRule:
    """Gibbs posterior with a fixed prior; n is taken from the dataset."""

    prior: ProbVector
    eta: float
    alpha: float

    def __call__(self, data: Dataset) -> ProbVector:
        """Return the Gibbs posterior for the dataset."""
        return gibbs_posterior(self.prior, data.empirical_risks(), GibbsParams(self.eta, self.alpha, data.n))


@dataclass(frozen=True)
class ConstantRule:
    """Ignores the data and always returns the same distribution."""

    posterior: ProbVector

    def __call__(self, data: Dataset) -> ProbVector:
        """Return the fixed distribution."""
        return self.posterior


@dataclass(frozen=True)
class FixedPointStep:
    """One iteration of the prior/posterior alternation."""

    iteration: int
    prior: np.ndarray
    bound_value: float
    bound_stderr: float
    tv_distance: float


@dataclass(frozen=True)
class FixedPointResult:
    """Outcome of fixed_point_iteration."""

    prior: ProbVector
    converged: bool
    trace: list[FixedPointStep] = field(default_factory=list)


def _check_dimensions(left: int, right: int) -> None:
    if left != right:
        raise ValidationError(
            ERROR_DIMENSION_MISMATCH.format(left=left, right=right),
            code='dimension_mismatch',
        )


def kl_divergence(post: ProbVector, prior: ProbVector) -> float:
    """Return KL(post || prior) = sum post_i ln(post_i / prior_i).

    Terms with post_i = 0 contribute 0; mass of post where prior_i = 0 gives math.inf.

    Raises:
        ValidationError: If the dimensions differ.
    """
    _check_dimensions(post.dimension, prior.dimension)
    return max(math.fsum(rel_entr(post.weights, prior.weights)), 0.0)


def total_variation(first: ProbVector, second: ProbVector) -> float:
    """Return half the L1 distance between two distributions."""
    _check_dimensions(first.dimension, second.dimension)
    return 0.5 * math.fsum(np.abs(first.weights - second.weights))


def _gibbs_transform(prior: ProbVector, risks: Sequence[float], exponent: float) -> ProbVector:
    risks = np.asarray(risks, dtype=float)
    _check_dimensions(prior.dimension, risks.size)
    if not np.all(np.isfinite(risks)):
        raise ValidationError(ERROR_NONFINITE_RISK, code='invalid_risk')
    support = prior.weights > 0
    if not support.any():
        raise ValidationError(ERROR_ALL_MASS_ZERO, code='all_mass_zero')
    log_weights = np.full(prior.dimension, -np.inf)
    log_weights[support] = np.log(prior.weights[support]) - exponent * risks[support]
    return ProbVector(np.exp(log_weights - log_sum_exp(log_weights)))


def gibbs_posterior(prior: ProbVector, empirical_risks: Sequence[float], params: GibbsParams) -> ProbVector:
    """Return the Gibbs posterior proportional to prior * exp(-(eta / alpha) n R_n).

    Args:
        prior (ProbVector): The prior.
        empirical_risks (Sequence[float]): R_n(D, h) per hypothesis.
        params (GibbsParams): eta, alpha and n.

    Returns:
        ProbVector: The posterior; zero-prior entries stay zero.
    """
    return _gibbs_transform(prior, empirical_risks, params.exponent)


def localized_prior_true_risk(base_prior: ProbVector, true_risks: Sequence[float],
                              params: GibbsParams) -> ProbVector:
    """Return the localized prior proportional to base_prior * exp(-(eta / alpha) n R)."""
    return _gibbs_transform(base_prior, true_risks, params.exponent)


def pac_bayes_objective(post: ProbVector, prior: ProbVector, empirical_risks: Sequence[float],
                        eta: float, alpha: float, n: int) -> float:
    """Return E_post[R_n] + alpha KL(post || prior) / (eta n), which the Gibbs posterior minimizes."""
    return post.expectation(empirical_risks) + alpha * kl_divergence(post, prior) / (eta * n)


def optimal_prior_monte_carlo(env: Environment, estimator: PosteriorRule, n: int, trials: int,
                              seed: int, threads: int = 1) -> ProbVector:
    """Estimate the bound-optimal prior E_D[post(D)] by averaging over sampled datasets.

    Args:
        env (Environment): Source of the datasets.
        estimator (PosteriorRule): Maps a dataset to a posterior.
        n (int): Examples per dataset.
        trials (int): Number of datasets.
        seed (int): Root seed.
        threads (int): Worker count; results do not depend on it.

    Returns:
        ProbVector: The averaged posterior.
    """
    if trials < 1:
        raise ValidationError(ERROR_INVALID_TRIALS.format(minimum=1, trials=trials), code='invalid_trials')

    def posterior_weights(child: np.random.SeedSequence) -> np.ndarray:
        return estimator(sample_dataset(env, n, child)).weights

    stacked = np.stack(map_trials(posterior_weights, trial_seeds(seed, trials), threads))
    return ProbVector(stacked.mean(axis=0))


def _gibbs_rows(prior: ProbVector, risks: np.ndarray, exponent: float) -> np.ndarray:
    with np.errstate(divide='ignore'):
        log_weights = np.log(prior.weights)[np.newaxis, :] - exponent * risks
    log_weights[:, prior.weights == 0] = -np.inf
    return np.exp(log_weights - logsumexp(log_weights, axis=1, keepdims=True))


def _bound_values(posteriors: np.ndarray, prior: ProbVector, risks: np.ndarray, params: GibbsParams,
                  constant: float) -> np.ndarray:
    kl_rows = rel_entr(posteriors, prior.weights[np.newaxis, :]).sum(axis=1)
    expected_risk = (posteriors * risks).sum(axis=1)
    return expected_risk + params.alpha * (np.maximum(kl_rows, 0) + constant) / (params.eta * params.n)


def fixed_point_iteration(env: Environment, init_prior: ProbVector, params: GibbsParams, trials: int,
                          max_iters: int, seed: int, tol: float = DEFAULT_FIXPOINT_TOL, delta: float = 0.05,
                          grid: Optional[EtaGrid] = None, threads: int = 1) -> FixedPointResult:
    """Alternate Gibbs posteriors and averaged-posterior priors until the prior settles.

    Every iteration reuses the same ``trials`` datasets drawn from ``seed``, so
    both half-steps decrease the recorded average bound
    E_D[E_post R_n + alpha (KL + ln(1/delta) + ln |grid|) / (eta n)].

    Args:
        env (Environment): Source of the datasets.
        init_prior (ProbVector): Starting prior.
        params (GibbsParams): eta, alpha and n of the Gibbs posterior.
        trials (int): Datasets per iteration.
        max_iters (int): Iteration cap.
        seed (int): Root seed.
        tol (float): Stop once the total variation between successive priors is below tol.
        delta (float): Confidence parameter of the recorded bound.
        grid (Optional[EtaGrid]): Grid whose cardinality enters the recorded bound.
        threads (int): Worker count for sampling.

    Returns:
        FixedPointResult: Final prior, convergence flag and per-iteration trace.
    """
    if max_iters < 1 or not tol > 0:
        raise ValidationError(ERROR_INVALID_ITERATIONS, code='invalid_iterations')
    if trials < 1:
        raise ValidationError(ERROR_INVALID_TRIALS.format(minimum=1, trials=trials), code='invalid_trials')
    _check_dimensions(init_prior.dimension, env.size)
    constant = -math.log(validate_delta(delta)) + math.log(grid.cardinality if grid else 1)

    def risks_of(child: np.random.SeedSequence) -> np.ndarray:
        return sample_dataset(env, params.n, child).empirical_risks()

    risks = np.stack(map_trials(risks_of, trial_seeds(seed, trials), threads))
    prior, trace = init_prior, []
    for iteration in range(1, max_iters + 1):
        posteriors = _gibbs_rows(prior, risks, params.exponent)
        values = _bound_values(posteriors, prior, risks, params, constant)
        updated = ProbVector(posteriors.mean(axis=0))
        distance = total_variation(prior, updated)
        stderr = float(values.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
        trace.append(FixedPointStep(iteration, prior.weights, math.fsum(values) / trials, stderr, distance))
        logger.debug('Fixed-point iteration %d: bound=%.10g tv=%.3g', iteration, trace[-1].bound_value, distance)
        prior = updated
        if distance < tol:
            return FixedPointResult(prior=prior, converged=True, trace=trace)
    logger.warning(WARNING_NOT_CONVERGED, max_iters, trace[-1].tv_distance)
    return FixedPointResult(prior=prior, converged=False, trace=trace)
