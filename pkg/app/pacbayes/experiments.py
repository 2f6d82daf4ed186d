"""Turn a validated experiment config into domain objects and run it."""
import logging
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Optional

import yaml
from django.conf import settings
from django.core.exceptions import ValidationError

from . import bounds
from .config import fields, strings
from .config.messages import (ERROR_CONFIG_NOT_MAPPING,
                              ERROR_CONFIG_UNREADABLE, ERROR_NONFINITE_BOUND,
                              ERROR_NONFINITE_VALUE)
from .exceptions import NumericalError
from .kernels import LossRange
from .posterior import (ErmRule, GibbsParams, GibbsRule, PosteriorRule,
                        ProbVector, fixed_point_iteration)
from .serializers import ExperimentSerializer
from .sim.coverage import EtaPolicy, run_coverage, tightness_sweep
from .sim.environment import Environment

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OutputSpec:
    """Output location and format; no path means print only."""

    path: Optional[Path] = None
    format: str = strings.FORMAT_CSV  # noqa: WPS125
    summary: bool = True


@dataclass(frozen=True, eq=False)
class ExperimentConfig:
    """A validated experiment.

    Attributes:
        command (str): bound, coverage, sweep or fixpoint.
        seed (Optional[int]): Root seed of stochastic commands.
        threads (int): Worker count, 0 for one per CPU.
        environment (Optional[Environment]): The environment of stochastic commands.
        n (Optional[int]): Sample size.
        n_list (tuple[int, ...]): Sample sizes of a sweep.
        delta (Optional[float]): Confidence parameter.
        bound_kind (Optional[str]): Kind of the bound and coverage commands.
        bound_kinds (tuple[str, ...]): Kinds of a sweep.
        policy (EtaPolicy): Learning-rate choices.
        estimator (dict): Estimator rule with its eta and alpha.
        prior (Optional[ProbVector]): Data-independent prior; uniform when omitted.
        trials (Optional[int]): Monte Carlo trials.
        bound_inputs (dict): Numeric inputs of the bound command.
        fixpoint (dict): max_iters, tol and init_prior of the fixpoint command.
        output (OutputSpec): Where results go.
    """

    command: str
    seed: Optional[int] = None
    threads: int = 0
    environment: Optional[Environment] = None
    n: Optional[int] = None
    n_list: tuple[int, ...] = ()
    delta: Optional[float] = None
    bound_kind: Optional[str] = None
    bound_kinds: tuple[str, ...] = ()
    policy: EtaPolicy = field(default_factory=EtaPolicy)
    estimator: dict = field(default_factory=dict)
    prior: Optional[ProbVector] = None
    trials: Optional[int] = None
    bound_inputs: dict = field(default_factory=dict)
    fixpoint: dict = field(default_factory=dict)
    output: OutputSpec = field(default_factory=OutputSpec)


@dataclass
class ExperimentResult:
    """Rows and summary produced by one command."""

    command: str
    columns: tuple[str, ...]
    rows: list[dict[str, Any]]
    summary: dict[str, Any] = field(default_factory=dict)


def load_config(path: Path) -> dict:
    """Read a YAML config file into a mapping.

    Raises:
        ValidationError: If the file is unreadable, not YAML, or not a mapping.
    """
    try:
        with open(path, encoding=strings.STR_ENCODING) as handle:
            raw = yaml.safe_load(handle)
    except (OSError, yaml.YAMLError) as exc:
        raise ValidationError(ERROR_CONFIG_UNREADABLE.format(path=path, reason=exc), code='invalid_config')
    if not isinstance(raw, dict):
        raise ValidationError(ERROR_CONFIG_NOT_MAPPING, code='invalid_config')
    return raw


def build_config(raw: dict) -> ExperimentConfig:
    """Validate a raw mapping and return the experiment it describes.

    Args:
        raw (dict): The parsed config file with command-line overrides applied.

    Returns:
        ExperimentConfig: The validated experiment.

    Raises:
        rest_framework.exceptions.ValidationError: With errors keyed by field.
    """
    serializer = ExperimentSerializer(data=raw)
    serializer.is_valid(raise_exception=True)
    data = serializer.validated_data
    defaults = settings.PACBAYES
    output = dict(data.get('output', {}))
    estimator = dict(data.get('estimator', {}))
    estimator.setdefault('rule', strings.RULE_ERM)
    estimator.setdefault('eta', 1.0)
    estimator.setdefault('alpha', defaults['DEFAULT_ALPHA'])
    fixpoint = dict(data.get('fixpoint', {}))
    fixpoint.setdefault('tol', defaults['FIXPOINT_TOL'])
    prior = data.get('prior')
    return ExperimentConfig(
        command=data['command'],
        seed=data.get('seed'),
        threads=data.get('threads', defaults['THREADS']),
        environment=data.get('environment'),
        n=data.get('n'),
        n_list=tuple(data.get('n_list', ())),
        delta=data.get('delta'),
        bound_kind=data.get('bound_kind'),
        bound_kinds=tuple(data.get('bound_kinds', ())),
        policy=data.get('eta') or EtaPolicy(alpha=defaults['DEFAULT_ALPHA']),
        estimator=estimator,
        prior=ProbVector(prior) if prior is not None else None,
        trials=data.get('trials'),
        bound_inputs=dict(data.get('bound', {})),
        fixpoint=fixpoint,
        output=OutputSpec(
            path=Path(output['path']) if output.get('path') else None,
            format=output.get('format', strings.FORMAT_CSV),
            summary=output.get('summary', True),
        ),
    )


def _require_finite(value: float, what: str) -> float:
    if not math.isfinite(value):
        raise NumericalError(ERROR_NONFINITE_VALUE.format(what=what))
    return value


def _report_row(kind: str, report: bounds.BoundReport) -> dict[str, Any]:
    return {
        'kind': kind,
        'empirical_term': report.empirical_term,
        'slack_term': report.slack_term,
        'complexity_term': report.complexity_term,
        'total': report.total,
        'eta_used': report.eta_used,
        'degenerate': report.degenerate,
        'u': report.constants.get('u'),
        'C': report.constants.get('C'),
        'log_factor': report.constants.get('log_factor'),
    }


def compute_bound(config: ExperimentConfig) -> bounds.BoundReport:  # noqa: WPS212, C901
    """Evaluate the requested bound on the config's numeric inputs."""
    inputs = config.bound_inputs
    policy = config.policy
    kind = config.bound_kind
    n, delta = config.n, config.delta
    eta = inputs.get('eta', policy.eta)
    loss_range = LossRange(*inputs['range']) if 'range' in inputs else None
    if kind == strings.KIND_CHERNOFF:
        return bounds.chernoff_bound(inputs['empirical_risk'], n, eta, delta)
    if kind == strings.KIND_HOEFFDING:
        return bounds.hoeffding_bound(inputs['empirical_risk'], n, loss_range, delta)
    if kind == strings.KIND_VARIANCE:
        return bounds.variance_bound(inputs['empirical_risk'], inputs['sec_moment'], n, loss_range.a, policy.v,
                                     eta, delta)
    risks = inputs.get('empirical_risks', ())
    prior = config.prior or (ProbVector.uniform(len(risks)) if risks else None)
    if kind == strings.KIND_UNION:
        return bounds.union_bound(risks, prior, inputs['selected'], n, eta, delta)
    if kind == strings.KIND_UNION_ETA:
        if policy.slack == strings.FLAVOR_VARIANCE:
            slack_model = bounds.VarianceSlack(inputs.get('sec_moment', 0.0), loss_range.a, policy.v)
        else:
            slack_model = bounds.HoeffdingSlack(loss_range)
        return bounds.union_bound_eta_opt(risks, prior, inputs['selected'], n, delta, slack_model)
    empirical, kl = inputs['empirical_risk'], inputs['kl']
    if kind == strings.KIND_PAC_BAYES:
        return bounds.pac_bayes_bound(empirical, kl, n, eta, delta)
    if kind == strings.KIND_PAC_BAYES_EXPECTATION:
        return bounds.pac_bayes_expectation_bound(empirical, kl, n, eta)
    if kind == strings.KIND_PAC_BAYES_GRID:
        grid = bounds.build_eta_grid(policy.u, policy.v, policy.alpha)
        return bounds.pac_bayes_grid_bound(empirical, kl, n, eta, grid, delta)
    explicit_eta = inputs.get('eta')
    if kind == strings.KIND_PAC_HOEFFDING:
        return bounds.pac_hoeffding_bound(empirical, kl, n, loss_range, policy.alpha, policy.v, delta, explicit_eta)
    if kind == strings.KIND_PAC_VARIANCE:
        return bounds.pac_variance_bound(empirical, kl, inputs['sec_moment'], n, loss_range.a, loss_range.b,
                                         policy.alpha, policy.v, delta, explicit_eta)
    flavor = strings.FLAVOR_HOEFFDING if kind == strings.KIND_EXCESS_HOEFFDING else strings.FLAVOR_VARIANCE
    return bounds.excess_risk_bounds(empirical, inputs['ref_empirical_risk'], kl, inputs.get('sec_moment', 0.0),
                                     n, inputs['b'], policy.alpha, policy.v, delta, flavor, explicit_eta)


def estimator_rule(config: ExperimentConfig) -> PosteriorRule:
    """Return the estimator named by the config."""
    if config.estimator['rule'] == strings.RULE_GIBBS:
        prior = config.prior or ProbVector.uniform(config.environment.size)
        return GibbsRule(prior, config.estimator['eta'], config.estimator['alpha'])
    return ErmRule()


def _run_bound(config: ExperimentConfig) -> ExperimentResult:
    report = compute_bound(config)
    if not math.isfinite(report.total):
        raise NumericalError(ERROR_NONFINITE_BOUND.format(total=report.total))
    summary = {'bound_kind': config.bound_kind, 'n': config.n, 'delta': config.delta}
    return ExperimentResult(strings.COMMAND_BOUND, fields.BOUND_COLUMNS,
                            [_report_row(config.bound_kind, report)], summary)


def _run_coverage(config: ExperimentConfig) -> ExperimentResult:
    stats = run_coverage(
        config.environment,
        config.n,
        config.delta,
        config.policy,
        config.bound_kind,
        estimator_rule(config),
        config.trials,
        config.seed,
        prior=config.prior,
        threads=config.threads,
    )
    summary = {'n': config.n, 'seed': config.seed, 'estimator': config.estimator['rule']}
    return ExperimentResult(strings.COMMAND_COVERAGE, fields.COVERAGE_COLUMNS, [asdict(stats)], summary)


def _run_sweep(config: ExperimentConfig) -> ExperimentResult:
    rows = tightness_sweep(
        config.environment,
        config.n_list,
        config.delta,
        config.bound_kinds,
        config.trials,
        config.seed,
        eta_policy=config.policy,
        estimator_rule=estimator_rule(config),
        prior=config.prior,
        threads=config.threads,
    )
    summary = {'delta': config.delta, 'trials': config.trials, 'seed': config.seed}
    return ExperimentResult(strings.COMMAND_SWEEP, fields.SWEEP_COLUMNS, [asdict(row) for row in rows], summary)


def _run_fixpoint(config: ExperimentConfig) -> ExperimentResult:
    env = config.environment
    options = config.fixpoint
    init = options.get('init_prior')
    init_prior = ProbVector(init) if init is not None else (config.prior or ProbVector.uniform(env.size))
    params = GibbsParams(config.estimator['eta'], config.estimator['alpha'], config.n)
    policy = config.policy
    grid = bounds.build_eta_grid(policy.u, policy.v, policy.alpha)
    result = fixed_point_iteration(
        env,
        init_prior,
        params,
        config.trials,
        options['max_iters'],
        config.seed,
        tol=options['tol'],
        delta=config.delta,
        grid=grid,
        threads=config.threads,
    )
    prior_columns = tuple(fields.PRIOR_COLUMN.format(index=index) for index in range(env.size))
    rows = []
    for step in result.trace:
        row = {
            'iteration': step.iteration,
            'bound_value': _require_finite(step.bound_value, 'fixed-point bound value'),
            'bound_stderr': step.bound_stderr,
            'tv_distance': step.tv_distance,
        }
        row.update(zip(prior_columns, (float(weight) for weight in step.prior)))
        rows.append(row)
    summary = {
        'converged': result.converged,
        'iterations': len(result.trace),
        'final_prior': [float(weight) for weight in result.prior.weights],
        'seed': config.seed,
    }
    return ExperimentResult(strings.COMMAND_FIXPOINT, fields.FIXPOINT_COLUMNS + prior_columns, rows, summary)


RUNNERS = {
    strings.COMMAND_BOUND: _run_bound,
    strings.COMMAND_COVERAGE: _run_coverage,
    strings.COMMAND_SWEEP: _run_sweep,
    strings.COMMAND_FIXPOINT: _run_fixpoint,
}


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Run the config's command.

    Raises:
        ValidationError: On invalid domain inputs.
        NumericalError: When a requested value is not finite.
    """
    logger.info('Running %s', config.command)
    result = RUNNERS[config.command](config)
    logger.info('Finished %s with %d rows', config.command, len(result.rows))
    return result
