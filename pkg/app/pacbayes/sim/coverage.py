"""Monte Carlo harness checking each bound's 1 - delta guarantee against exact risks."""
import functools
import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import ClassVar, Optional

import numpy as np
from django.core.exceptions import ValidationError

from ..bounds import (BoundReport, HoeffdingSlack, VarianceSlack,
                      build_eta_grid, chernoff_bound, excess_risk_bounds,
                      hoeffding_bound, hoeffding_grid_constants,
                      pac_bayes_bound, pac_bayes_expectation_bound,
                      pac_bayes_grid_bound, pac_hoeffding_bound,
                      pac_variance_bound, union_bound, union_bound_eta_opt,
                      variance_bound, variance_grid_constants)
from ..config import strings
from ..config.messages import (ERROR_INVALID_TRIALS, ERROR_UNKNOWN_BOUND_KIND,
                               ERROR_UNKNOWN_SLACK)
from ..config.numerics import (DEFAULT_ALPHA, DEFAULT_CHECK_POINTS,
                               MIN_COVERAGE_TRIALS, SIGMA_BUFFER,
                               VIOLATION_TOLERANCE)
from ..kernels import LossRange
from ..posterior import ErmRule, PosteriorRule, ProbVector, kl_divergence
from ..validators.arguments import (validate_alpha, validate_cap,
                                    validate_delta, validate_eta,
                                    validate_index, validate_sample_size)
from .environment import Dataset, Environment, relative_loss_env, sample_dataset
from .trials import map_trials, trial_seeds

logger = logging.getLogger(__name__)

EtaCheck = Optional[float]


@dataclass(frozen=True)
class EtaPolicy:
    """How the learning rate is chosen for each bound kind.

    Attributes:
        eta (float): Fixed eta of the single-eta kinds.
        u (float): Lower end of the grid for pac_bayes_grid.
        v (float): Upper end of every grid and cap of the variance-type kinds.
        alpha (float): Grid ratio.
        check_points (int): Size of the geometric check grid of the uniform-in-eta kinds.
        slack (str): Slack model of union_eta, 'hoeffding' or 'variance'.
        hypothesis (int): Hypothesis of the fixed-hypothesis kinds.
    """

    eta: float = 1.0
    u: float = 0.01
    v: float = 1.0
    alpha: float = DEFAULT_ALPHA
    check_points: int = DEFAULT_CHECK_POINTS
    slack: str = strings.FLAVOR_HOEFFDING
    hypothesis: int = 0

    def __post_init__(self) -> None:
        """Validate the policy."""
        validate_eta(self.eta)
        validate_eta(self.u)
        validate_cap(self.v)
        validate_alpha(self.alpha)
        validate_sample_size(self.check_points)
        if self.slack not in {strings.FLAVOR_HOEFFDING, strings.FLAVOR_VARIANCE}:
            raise ValidationError(ERROR_UNKNOWN_SLACK.format(slack=self.slack), code='unknown_slack')


@dataclass(frozen=True, eq=False)
class CoverageSetting:
    """Everything a trial needs apart from its dataset."""

    env: Environment
    n: int
    delta: float
    policy: EtaPolicy
    prior: ProbVector
    relative: Optional[Environment] = None


@dataclass(frozen=True, eq=False)
class TrialContext:
    """One sampled dataset together with the estimator's posterior."""

    setting: CoverageSetting
    data: Dataset
    posterior: ProbVector

    @functools.cached_property
    def empirical_risks(self) -> np.ndarray:
        """Return R_n for every hypothesis."""
        return self.data.empirical_risks()

    @functools.cached_property
    def posterior_empirical_risk(self) -> float:
        """Return E_post[R_n]."""
        return self.posterior.expectation(self.empirical_risks)

    @functools.cached_property
    def kl(self) -> float:
        """Return KL(post || prior)."""
        return kl_divergence(self.posterior, self.setting.prior)

    @property
    def selected(self) -> int:
        """Return the hypothesis a union-type bound is applied to."""
        return self.posterior.mode()

    def posterior_mean(self, values: Sequence[float]) -> float:
        """Return E_post of per-hypothesis values."""
        return self.posterior.expectation(values)


@dataclass(frozen=True)
class CoverageStats:
    """Violation counts of one bound kind over Monte Carlo trials.

    Attributes:
        kind (str): The bound kind.
        trials (int): Number of trials.
        violations (int): Trials where the left side exceeded the bound.
        delta (float): The promised failure probability.
        violation_rate (float): violations / trials.
        pass_threshold (float): delta plus three binomial standard errors.
        mean_margin (float): Trial mean of left side minus bound.
        margin_stderr (float): Standard error of mean_margin.
        in_expectation (bool): True for kinds whose guarantee is on the mean.
        passed (bool): Whether the guarantee is consistent with the trials.
    """

    kind: str
    trials: int
    violations: int
    delta: float
    violation_rate: float
    pass_threshold: float
    mean_margin: float
    margin_stderr: float
    in_expectation: bool
    passed: bool


@dataclass(frozen=True)
class SweepRow:
    """Monte Carlo means of one bound kind at one sample size."""

    kind: str
    n: int
    mean_total: float
    mean_left: float
    mean_gap: float


class BoundKind:
    """A bound together with the exact quantity it controls."""

    name: ClassVar[str] = ''
    in_expectation: ClassVar[bool] = False
    relative_loss: ClassVar[bool] = False

    def check_etas(self, setting: CoverageSetting) -> Sequence[EtaCheck]:
        """Return the etas at which one trial is checked."""
        return (setting.policy.eta,)

    def evaluate(self, ctx: TrialContext, eta: EtaCheck) -> tuple[float, BoundReport]:
        """Return the exact left side and the bound at eta."""
        raise NotImplementedError


def _fixed_hypothesis(setting: CoverageSetting) -> int:
    return validate_index(setting.policy.hypothesis, setting.env.size)


def _geometric(lower: float, upper: float, points: int) -> list[EtaCheck]:
    return [float(eta) for eta in np.geomspace(lower, upper, points)]


class ChernoffKind(BoundKind):
    """M_eta of a fixed hypothesis at the policy eta."""

    name = strings.KIND_CHERNOFF

    def evaluate(self, ctx, eta):
        """Return the exact left side and the bound."""
        h = _fixed_hypothesis(ctx.setting)
        setting = ctx.setting
        report = chernoff_bound(float(ctx.empirical_risks[h]), setting.n, eta, setting.delta)
        return float(setting.env.m_eta(eta)[h]), report


class HoeffdingKind(BoundKind):
    """True risk of a fixed hypothesis, eta optimized in closed form."""

    name = strings.KIND_HOEFFDING

    def check_etas(self, setting):
        """Return the etas checked per trial."""
        return (None,)

    def evaluate(self, ctx, eta):
        """Return the exact left side and the bound."""
        h = _fixed_hypothesis(ctx.setting)
        setting = ctx.setting
        report = hoeffding_bound(float(ctx.empirical_risks[h]), setting.n, setting.env.loss_range, setting.delta)
        return float(setting.env.true_risks[h]), report


class VarianceKind(BoundKind):
    """True risk of a fixed hypothesis through the phi-weighted second moment."""

    name = strings.KIND_VARIANCE

    def evaluate(self, ctx, eta):
        """Return the exact left side and the bound."""
        h = _fixed_hypothesis(ctx.setting)
        setting = ctx.setting
        env = setting.env
        report = variance_bound(float(ctx.empirical_risks[h]), float(env.second_moments[h]), setting.n,
                                env.loss_range.a, setting.policy.v, eta, setting.delta)
        return float(env.true_risks[h]), report


class UnionKind(BoundKind):
    """M_eta of the selected hypothesis, uniformly over the class."""

    name = strings.KIND_UNION

    def evaluate(self, ctx, eta):
        """Return the exact left side and the bound."""
        setting = ctx.setting
        h = ctx.selected
        report = union_bound(ctx.empirical_risks, setting.prior, h, setting.n, eta, setting.delta)
        return float(setting.env.m_eta(eta)[h]), report


class UnionEtaKind(BoundKind):
    """True risk of the selected hypothesis with eta chosen per hypothesis."""

    name = strings.KIND_UNION_ETA

    def check_etas(self, setting):
        """Return the etas checked per trial."""
        return (None,)

    def evaluate(self, ctx, eta):
        """Return the exact left side and the bound."""
        setting = ctx.setting
        env = setting.env
        h = ctx.selected
        if setting.policy.slack == strings.FLAVOR_HOEFFDING:
            slack_model = HoeffdingSlack(env.loss_range)
        else:
            slack_model = VarianceSlack(float(env.second_moments[h]), env.loss_range.a, setting.policy.v)
        report = union_bound_eta_opt(ctx.empirical_risks, setting.prior, h, setting.n, setting.delta, slack_model)
        return float(env.true_risks[h]), report


class PacBayesKind(BoundKind):
    """Posterior mean of M_eta, in probability."""

    name = strings.KIND_PAC_BAYES

    def evaluate(self, ctx, eta):
        """Return the exact left side and the bound."""
        setting = ctx.setting
        report = pac_bayes_bound(ctx.posterior_empirical_risk, ctx.kl, setting.n, eta, setting.delta)
        return ctx.posterior_mean(setting.env.m_eta(eta)), report


class PacBayesExpectationKind(BoundKind):
    """Posterior mean of M_eta, in expectation over the sample."""

    name = strings.KIND_PAC_BAYES_EXPECTATION
    in_expectation = True

    def evaluate(self, ctx, eta):
        """Return the exact left side and the bound."""
        report = pac_bayes_expectation_bound(ctx.posterior_empirical_risk, ctx.kl, ctx.setting.n, eta)
        return ctx.posterior_mean(ctx.setting.env.m_eta(eta)), report


class PacBayesGridKind(BoundKind):
    """Posterior mean of M_eta, checked across the eta grid."""

    name = strings.KIND_PAC_BAYES_GRID

    def check_etas(self, setting):
        """Return the etas checked per trial."""
        policy = setting.policy
        return _geometric(policy.u, policy.v, policy.check_points)

    def evaluate(self, ctx, eta):
        """Return the exact left side and the bound."""
        setting = ctx.setting
        policy = setting.policy
        grid = build_eta_grid(policy.u, policy.v, policy.alpha)
        report = pac_bayes_grid_bound(ctx.posterior_empirical_risk, ctx.kl, setting.n, eta, grid, setting.delta)
        return ctx.posterior_mean(setting.env.m_eta(eta)), report


class PacHoeffdingKind(BoundKind):
    """Posterior true risk under the Hoeffding slack, at the optimized and at fixed etas."""

    name = strings.KIND_PAC_HOEFFDING

    def check_etas(self, setting):
        """Return the etas checked per trial."""
        policy = setting.policy
        lower = hoeffding_grid_constants(setting.n, setting.env.loss_range, policy.alpha, policy.v).u
        return [None, *_geometric(lower, policy.v, policy.check_points)]

    def evaluate(self, ctx, eta):
        """Return the exact left side and the bound."""
        setting = ctx.setting
        policy = setting.policy
        report = pac_hoeffding_bound(ctx.posterior_empirical_risk, ctx.kl, setting.n, setting.env.loss_range,
                                     policy.alpha, policy.v, setting.delta, eta)
        return ctx.posterior_mean(setting.env.true_risks), report


class PacVarianceKind(BoundKind):
    """Posterior true risk under the variance slack, at the optimized and at fixed etas."""

    name = strings.KIND_PAC_VARIANCE

    def check_etas(self, setting):
        """Return the etas checked per trial."""
        policy = setting.policy
        loss_range = setting.env.loss_range
        lower = variance_grid_constants(setting.n, loss_range.a, loss_range.b, policy.alpha, policy.v).u
        return [None, *_geometric(lower, policy.v, policy.check_points)]

    def evaluate(self, ctx, eta):
        """Return the exact left side and the bound."""
        setting = ctx.setting
        policy = setting.policy
        env = setting.env
        report = pac_variance_bound(ctx.posterior_empirical_risk, ctx.kl, ctx.posterior_mean(env.second_moments),
                                    setting.n, env.loss_range.a, env.loss_range.b, policy.alpha, policy.v,
                                    setting.delta, eta)
        return ctx.posterior_mean(env.true_risks), report


class ExcessKind(BoundKind):
    """Posterior excess risk over the best hypothesis, bounded through the relative loss."""

    flavor: ClassVar[str] = ''
    relative_loss = True

    def check_etas(self, setting):
        """Return the etas checked per trial."""
        policy = setting.policy
        width = setting.env.loss_range.width
        if self.flavor == strings.FLAVOR_HOEFFDING:
            constants = hoeffding_grid_constants(setting.n, LossRange(-width, width), policy.alpha, policy.v)
        else:
            constants = variance_grid_constants(setting.n, -width, width, policy.alpha, policy.v)
        return [None, *_geometric(constants.u, policy.v, policy.check_points)]

    def evaluate(self, ctx, eta):
        """Return the exact left side and the bound."""
        setting = ctx.setting
        policy = setting.policy
        env = setting.env
        best = env.best
        report = excess_risk_bounds(
            ctx.posterior_empirical_risk,
            float(ctx.empirical_risks[best]),
            ctx.kl,
            ctx.posterior_mean(setting.relative.second_moments),
            setting.n,
            env.loss_range.width,
            policy.alpha,
            policy.v,
            setting.delta,
            self.flavor,
            eta,
        )
        return ctx.posterior_mean(env.true_risks) - float(env.true_risks[best]), report


class ExcessHoeffdingKind(ExcessKind):
    """Excess risk with the Hoeffding slack."""

    name = strings.KIND_EXCESS_HOEFFDING
    flavor = strings.FLAVOR_HOEFFDING


class ExcessVarianceKind(ExcessKind):
    """Excess risk with the variance slack."""

    name = strings.KIND_EXCESS_VARIANCE
    flavor = strings.FLAVOR_VARIANCE


BOUND_KINDS: dict[str, BoundKind] = {
    kind.name: kind for kind in (
        ChernoffKind(),
        HoeffdingKind(),
        VarianceKind(),
        UnionKind(),
        UnionEtaKind(),
        PacBayesKind(),
        PacBayesExpectationKind(),
        PacBayesGridKind(),
        PacHoeffdingKind(),
        PacVarianceKind(),
        ExcessHoeffdingKind(),
        ExcessVarianceKind(),
    )
}


def get_bound_kind(name: str) -> BoundKind:
    """Look up a bound kind by name.

    Raises:
        ValidationError: If the name is not registered.
    """
    try:
        return BOUND_KINDS[name]
    except KeyError:
        raise ValidationError(ERROR_UNKNOWN_BOUND_KIND.format(kind=name), code='unknown_bound_kind')


def _setting(env: Environment, n: int, delta: float, policy: EtaPolicy, prior: Optional[ProbVector],
             kinds: Sequence[BoundKind]) -> CoverageSetting:
    relative = relative_loss_env(env) if any(kind.relative_loss for kind in kinds) else None
    return CoverageSetting(
        env=env,
        n=validate_sample_size(n),
        delta=validate_delta(delta),
        policy=policy,
        prior=prior or ProbVector.uniform(env.size),
        relative=relative,
    )


def _tightest(kind: BoundKind, ctx: TrialContext, etas: Sequence[EtaCheck]) -> tuple[float, float]:
    left, report = min((kind.evaluate(ctx, eta) for eta in etas), key=lambda pair: pair[1].total)
    return left, report.total


def _margin_summary(margins: np.ndarray) -> tuple[float, float]:
    mean = math.fsum(margins) / margins.size
    if margins.size < 2 or not np.all(np.isfinite(margins)):
        return mean, (math.inf if margins.size > 1 else 0.0)
    return mean, float(margins.std(ddof=1) / math.sqrt(margins.size))


def run_coverage(env: Environment, n: int, delta: float, eta_policy: EtaPolicy, bound_kind: str,
                 estimator_rule: PosteriorRule, trials: int, seed: int, prior: Optional[ProbVector] = None,
                 threads: int = 1) -> CoverageStats:
    """Count how often a bound is violated on datasets drawn from env.

    Each trial samples a dataset, forms the estimator's posterior and
    compares the exact left side against the bound. Kinds that hold
    uniformly in eta count a violation when any checked eta fails.

    Args:
        env (Environment): The environment.
        n (int): Sample size.
        delta (float): Confidence parameter.
        eta_policy (EtaPolicy): Learning-rate choices.
        bound_kind (str): A key of BOUND_KINDS.
        estimator_rule (PosteriorRule): Maps a dataset to a posterior.
        trials (int): Number of trials, at least 100.
        seed (int): Root seed.
        prior (Optional[ProbVector]): Data-independent prior; uniform when omitted.
        threads (int): Worker count; results do not depend on it.

    Returns:
        CoverageStats: The violation statistics.
    """
    kind = get_bound_kind(bound_kind)
    if trials < MIN_COVERAGE_TRIALS:
        raise ValidationError(
            ERROR_INVALID_TRIALS.format(minimum=MIN_COVERAGE_TRIALS, trials=trials),
            code='invalid_trials',
        )
    setting = _setting(env, n, delta, eta_policy, prior, (kind,))
    etas = kind.check_etas(setting)
    logger.info('Coverage run: kind=%s n=%d delta=%g trials=%d', kind.name, setting.n, setting.delta, trials)

    def trial_margin(child: np.random.SeedSequence) -> float:
        data = sample_dataset(env, setting.n, child)
        ctx = TrialContext(setting, data, estimator_rule(data))
        return max(left - report.total for left, report in (kind.evaluate(ctx, eta) for eta in etas))

    margins = np.array(map_trials(trial_margin, trial_seeds(seed, trials), threads))
    violations = int(np.count_nonzero(margins > VIOLATION_TOLERANCE))
    mean_margin, margin_stderr = _margin_summary(margins)
    threshold = setting.delta + SIGMA_BUFFER * math.sqrt(setting.delta * (1 - setting.delta) / trials)
    rate = violations / trials
    if kind.in_expectation:
        passed = mean_margin <= SIGMA_BUFFER * margin_stderr
    else:
        passed = rate <= threshold
    stats = CoverageStats(
        kind=kind.name,
        trials=trials,
        violations=violations,
        delta=setting.delta,
        violation_rate=rate,
        pass_threshold=threshold,
        mean_margin=mean_margin,
        margin_stderr=margin_stderr,
        in_expectation=kind.in_expectation,
        passed=passed,
    )
    logger.info('Coverage %s: %d/%d violations, passed=%s', kind.name, violations, trials, passed)
    return stats


def tightness_sweep(env: Environment, n_list: Sequence[int], delta: float, bound_kinds: Sequence[str],
                    trials: int, seed: int, eta_policy: Optional[EtaPolicy] = None,
                    estimator_rule: Optional[PosteriorRule] = None, prior: Optional[ProbVector] = None,
                    threads: int = 1) -> list[SweepRow]:
    """Tabulate mean bound, mean left side and mean gap per kind and sample size.

    Each trial keeps the tightest of the checked etas. Every n reuses the
    same trial seeds, so rows at different n share their leading examples.

    Returns:
        list[SweepRow]: One row per (kind, n), kinds in the given order.
    """
    kinds = [get_bound_kind(name) for name in bound_kinds]
    if trials < 1:
        raise ValidationError(ERROR_INVALID_TRIALS.format(minimum=1, trials=trials), code='invalid_trials')
    policy = eta_policy or EtaPolicy()
    rule = estimator_rule or ErmRule()
    seeds = trial_seeds(seed, trials)
    rows = []
    for n in n_list:
        setting = _setting(env, n, delta, policy, prior, kinds)
        etas = [kind.check_etas(setting) for kind in kinds]

        def trial_values(child: np.random.SeedSequence) -> np.ndarray:
            data = sample_dataset(env, setting.n, child)
            ctx = TrialContext(setting, data, rule(data))
            return np.array([_tightest(kind, ctx, checks) for kind, checks in zip(kinds, etas)])

        values = np.stack(map_trials(trial_values, seeds, threads))
        for index, kind in enumerate(kinds):
            mean_left = math.fsum(values[:, index, 0]) / trials
            mean_total = math.fsum(values[:, index, 1]) / trials
            rows.append(SweepRow(kind.name, setting.n, mean_total, mean_left, mean_total - mean_left))
        logger.debug('Sweep finished n=%d', setting.n)
    return rows
