from .strings import (COMMAND_BOUND, COMMAND_COVERAGE, COMMAND_FIXPOINT,
                      COMMAND_SWEEP, KIND_CHERNOFF, KIND_EXCESS_HOEFFDING,
                      KIND_EXCESS_VARIANCE, KIND_HOEFFDING, KIND_PAC_BAYES,
                      KIND_PAC_BAYES_EXPECTATION, KIND_PAC_BAYES_GRID,
                      KIND_PAC_HOEFFDING, KIND_PAC_VARIANCE, KIND_UNION,
                      KIND_UNION_ETA, KIND_VARIANCE)

FIELD_SEED = 'seed'
FIELD_TRIALS = 'trials'
FIELD_BOUND = 'bound'

COMMAND_REQUIRED_FIELDS = {
    COMMAND_BOUND: ('n', 'delta', 'bound_kind', 'bound'),
    COMMAND_COVERAGE: ('environment', 'n', 'delta', 'bound_kind', 'trials'),
    COMMAND_SWEEP: ('environment', 'n_list', 'delta', 'bound_kinds', 'trials'),
    COMMAND_FIXPOINT: ('environment', 'n', 'delta', 'trials', 'fixpoint'),
}

STOCHASTIC_COMMANDS = (COMMAND_COVERAGE, COMMAND_SWEEP, COMMAND_FIXPOINT)

# Inputs of the bound command; eta is optional everywhere.
BOUND_REQUIRED_INPUTS = {
    KIND_CHERNOFF: ('empirical_risk',),
    KIND_HOEFFDING: ('empirical_risk', 'range'),
    KIND_VARIANCE: ('empirical_risk', 'sec_moment', 'range'),
    KIND_UNION: ('empirical_risks', 'selected'),
    KIND_UNION_ETA: ('empirical_risks', 'selected', 'range'),
    KIND_PAC_BAYES: ('empirical_risk', 'kl'),
    KIND_PAC_BAYES_EXPECTATION: ('empirical_risk', 'kl'),
    KIND_PAC_BAYES_GRID: ('empirical_risk', 'kl'),
    KIND_PAC_HOEFFDING: ('empirical_risk', 'kl', 'range'),
    KIND_PAC_VARIANCE: ('empirical_risk', 'kl', 'sec_moment', 'range'),
    KIND_EXCESS_HOEFFDING: ('empirical_risk', 'ref_empirical_risk', 'kl', 'b'),
    KIND_EXCESS_VARIANCE: ('empirical_risk', 'ref_empirical_risk', 'kl', 'sec_moment', 'b'),
}

BOUND_COLUMNS = ('kind', 'empirical_term', 'slack_term', 'complexity_term', 'total', 'eta_used', 'degenerate',
                 'u', 'C', 'log_factor')
COVERAGE_COLUMNS = ('kind', 'trials', 'violations', 'delta', 'violation_rate', 'pass_threshold', 'mean_margin',
                    'margin_stderr', 'in_expectation', 'passed')
SWEEP_COLUMNS = ('kind', 'n', 'mean_total', 'mean_left', 'mean_gap')
FIXPOINT_COLUMNS = ('iteration', 'bound_value', 'bound_stderr', 'tv_distance')
PRIOR_COLUMN = 'prior_{index}'
