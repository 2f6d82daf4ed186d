"""Synthetic environments with exactly known risks, and the datasets drawn from them."""
import functools
import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from django.core.exceptions import ValidationError

from ..config.messages import (ERROR_EMPTY_DATA, ERROR_EMPTY_ENVIRONMENT,
                               ERROR_LABELS_LENGTH, ERROR_LAW_OUTSIDE_RANGE,
                               ERROR_UNKNOWN_COUPLING, ERROR_UNKNOWN_PRESET)
from ..config.presets import ENVIRONMENT_PRESETS
from ..config.strings import COUPLING_INDEPENDENT, COUPLING_SHARED
from ..kernels import DiscreteLossDistribution, LossRange, m_eta, second_moment
from ..validators.arguments import validate_index, validate_sample_size

logger = logging.getLogger(__name__)

SeedLike = Union[int, np.random.SeedSequence]


@dataclass(frozen=True)
class Environment:
    """One loss law per hypothesis, with examples drawn i.i.d.

    Attributes:
        hypotheses (tuple[DiscreteLossDistribution, ...]): Loss law of each hypothesis.
        loss_range (LossRange): Global range containing every support point.
        labels (Optional[tuple[str, ...]]): Hypothesis names.
        coupling (str): 'shared' maps one uniform per example through every
            inverse CDF; 'independent' draws one uniform per hypothesis.
    """

    hypotheses: tuple[DiscreteLossDistribution, ...]
    loss_range: LossRange
    labels: Optional[tuple[str, ...]] = None
    coupling: str = COUPLING_SHARED

    def __post_init__(self) -> None:
        """Validate the environment."""
        object.__setattr__(self, 'hypotheses', tuple(self.hypotheses))
        if not self.hypotheses:
            raise ValidationError(ERROR_EMPTY_ENVIRONMENT, code='invalid_environment')
        for index, law in enumerate(self.hypotheses):
            if not self.loss_range.contains(law.support):
                raise ValidationError(
                    ERROR_LAW_OUTSIDE_RANGE.format(index=index, a=self.loss_range.a, b=self.loss_range.b),
                    code='invalid_environment',
                )
        if self.labels is not None:
            object.__setattr__(self, 'labels', tuple(self.labels))
            if len(self.labels) != self.size:
                raise ValidationError(
                    ERROR_LABELS_LENGTH.format(expected=self.size, got=len(self.labels)),
                    code='invalid_environment',
                )
        if self.coupling not in {COUPLING_SHARED, COUPLING_INDEPENDENT}:
            raise ValidationError(ERROR_UNKNOWN_COUPLING.format(coupling=self.coupling), code='invalid_environment')

    @property
    def size(self) -> int:
        """Return the number of hypotheses K."""
        return len(self.hypotheses)

    @functools.cached_property
    def true_risks(self) -> np.ndarray:
        """Return R(h) for every hypothesis."""
        return _frozen(np.array([law.mean() for law in self.hypotheses]))

    @functools.cached_property
    def second_moments(self) -> np.ndarray:
        """Return E[loss^2] for every hypothesis."""
        return _frozen(np.array([second_moment(law) for law in self.hypotheses]))

    @functools.cached_property
    def best(self) -> int:
        """Return h*, the lowest index among the minimizers of the true risk."""
        return int(np.argmin(self.true_risks))

    def m_eta(self, eta: float) -> np.ndarray:
        """Return M_eta(h) for every hypothesis (cached per eta)."""
        return _m_eta_vector(self, float(eta))


@dataclass(frozen=True, eq=False)
class Dataset:
    """Loss table of n examples (rows) by K hypotheses (columns)."""

    losses: np.ndarray

    @property
    def n(self) -> int:
        """Return the number of examples."""
        return self.losses.shape[0]

    @property
    def size(self) -> int:
        """Return the number of hypotheses."""
        return self.losses.shape[1]

    def empirical_risks(self) -> np.ndarray:
        """Return R_n(D, h) for every hypothesis."""
        if self.n == 0:
            raise ValidationError(ERROR_EMPTY_DATA, code='empty_input')
        return self.losses.mean(axis=0)


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@functools.lru_cache(maxsize=4096)
def _m_eta_vector(env: Environment, eta: float) -> np.ndarray:
    return _frozen(np.array([m_eta(law, eta) for law in env.hypotheses]))


def environment_from_spec(spec: Mapping) -> Environment:
    """Build an environment from a mapping with 'laws', 'range' and optional 'coupling'.

    Args:
        spec (Mapping): Laws as mappings with 'support', 'probs' and optional 'label'.

    Returns:
        Environment: The validated environment.
    """
    laws = spec['laws']
    labels = [law.get('label') for law in laws]
    return Environment(
        hypotheses=tuple(DiscreteLossDistribution(tuple(law['support']), tuple(law['probs'])) for law in laws),
        loss_range=LossRange(*spec['range']),
        labels=tuple(labels) if all(labels) else None,
        coupling=spec.get('coupling', COUPLING_SHARED),
    )


def environment_from_preset(name: str) -> Environment:
    """Return one of the named environments in config.presets."""
    try:
        spec = ENVIRONMENT_PRESETS[name]
    except KeyError:
        raise ValidationError(ERROR_UNKNOWN_PRESET.format(name=name), code='unknown_preset')
    return environment_from_spec(spec)


def sample_dataset(env: Environment, n: int, seed: SeedLike) -> Dataset:
    """Draw n i.i.d. examples and return their loss table.

    Args:
        env (Environment): The environment.
        n (int): Number of examples.
        seed (int | np.random.SeedSequence): Seed; equal seeds give equal datasets.

    Returns:
        Dataset: The n x K loss table.
    """
    n = validate_sample_size(n)
    rng = np.random.default_rng(seed)
    if env.coupling == COUPLING_SHARED:
        uniforms = rng.random(n)
        columns = [law.quantile(uniforms) for law in env.hypotheses]
    else:
        uniforms = rng.random((n, env.size))
        columns = [law.quantile(uniforms[:, index]) for index, law in enumerate(env.hypotheses)]
    return Dataset(losses=np.column_stack(columns))


def empirical_risk(data: Dataset, h: int) -> float:
    """Return R_n(D, h), the mean loss of column h."""
    h = validate_index(h, data.size)
    return float(data.empirical_risks()[h])


def true_risk(env: Environment, h: int) -> float:
    """Return R(h), the exact mean of hypothesis h's loss law."""
    return float(env.true_risks[validate_index(h, env.size)])


def erm(data: Dataset) -> int:
    """Return the empirical risk minimizer, ties broken by the lowest index."""
    return int(np.argmin(data.empirical_risks()))


def _shared_difference(law: DiscreteLossDistribution, reference: DiscreteLossDistribution):
    breaks = np.unique(np.concatenate([
        np.cumsum(np.asarray(law.probs)[np.argsort(law.support, kind='stable')]),
        np.cumsum(np.asarray(reference.probs)[np.argsort(reference.support, kind='stable')]),
        [0.0, 1.0],
    ]))
    breaks = breaks[(breaks >= 0) & (breaks <= 1)]
    lengths = np.diff(breaks)
    midpoints = (breaks[:-1] + breaks[1:]) / 2
    keep = lengths > 0
    differences = law.quantile(midpoints[keep]) - reference.quantile(midpoints[keep])
    return differences, lengths[keep]


def _independent_difference(law: DiscreteLossDistribution, reference: DiscreteLossDistribution):
    differences = np.subtract.outer(np.asarray(law.support), np.asarray(reference.support)).ravel()
    probs = np.multiply.outer(np.asarray(law.probs), np.asarray(reference.probs)).ravel()
    return differences, probs


def _merge(differences: np.ndarray, probs: np.ndarray) -> DiscreteLossDistribution:
    values, inverse = np.unique(differences, return_inverse=True)
    merged = np.zeros(len(values))
    np.add.at(merged, inverse, probs)
    return DiscreteLossDistribution(tuple(values), tuple(merged))


def relative_loss_env(env: Environment) -> Environment:
    """Return the environment of relative losses loss(h) - loss(h*) under env's coupling.

    h* is the lowest-index minimizer of the true risk. Each returned law is the
    exact joint-law difference, so its mean equals R(h) - R(h*).

    Args:
        env (Environment): The original environment with losses in [a, b].

    Returns:
        Environment: Laws of the relative loss, supported in [a - b, b - a].
    """
    reference = env.hypotheses[env.best]
    laws = []
    for index, law in enumerate(env.hypotheses):
        if index == env.best:
            laws.append(DiscreteLossDistribution.point_mass(0.0))
            continue
        if env.coupling == COUPLING_SHARED:
            differences, probs = _shared_difference(law, reference)
        else:
            differences, probs = _independent_difference(law, reference)
        laws.append(_merge(differences, probs))
    width = env.loss_range.width
    logger.debug('Relative-loss environment built against h*=%d', env.best)
    return Environment(
        hypotheses=tuple(laws),
        loss_range=LossRange(-width, width),
        labels=env.labels,
        coupling=env.coupling,
    )


def hypothesis_labels(env: Environment) -> Sequence[str]:
    """Return the hypothesis labels, defaulting to h0, h1, ..."""
    return env.labels or tuple(f'h{index}' for index in range(env.size))
