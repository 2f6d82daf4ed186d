ERROR_INVALID_ETA = 'eta must be a positive finite number, got {eta}.'
ERROR_INVALID_DELTA = 'delta must lie in (0, 1], got {delta}.'
ERROR_INVALID_RANGE = 'Loss range must satisfy a <= b with finite endpoints, got [{a}, {b}].'
ERROR_INVALID_SAMPLE_SIZE = 'Sample size n must be a positive integer, got {n}.'
ERROR_DISTRIBUTION_LENGTHS = 'Support and probabilities must be nonempty lists of equal length.'
ERROR_DISTRIBUTION_NEGATIVE = 'Probabilities must be nonnegative.'
ERROR_DISTRIBUTION_SUM = 'Probabilities must sum to one, got {total}.'
ERROR_DISTRIBUTION_SUPPORT = 'Support values must be finite.'
ERROR_EMPTY_INPUT = 'log_sum_exp needs at least one term.'
ERROR_INVALID_INTERVAL = 'Search interval must satisfy lo < hi, got [{lo}, {hi}].'
ERROR_ETA_OUT_OF_RANGE = 'eta = {eta} exceeds the cap v = {v}.'
ERROR_ETA_OUTSIDE_GRID = 'eta = {eta} lies outside the grid range [{u}, {v}].'
ERROR_INVALID_GRID = 'Grid needs 0 < u < v and alpha > 1, got u={u}, v={v}, alpha={alpha}.'
ERROR_INVALID_ALPHA = 'alpha must be greater than one, got {alpha}.'
ERROR_INVALID_V = 'v must be positive, got {v}.'
ERROR_UNBOUNDED_V = 'An unbounded v is only allowed when a = 0.'
ERROR_POSITIVE_LOWER_END = 'The variance-type bound needs a <= 0, got a = {a}.'
ERROR_NEGATIVE_MOMENT = 'Second moment must be nonnegative, got {moment}.'
ERROR_NEGATIVE_KL = 'KL divergence must be nonnegative, got {kl}.'
ERROR_ZERO_PRIOR_MASS = 'Prior gives zero mass to the selected hypothesis {index}.'
ERROR_INDEX_OUT_OF_RANGE = 'Hypothesis index {index} is out of range for {size} hypotheses.'
ERROR_DIMENSION_MISMATCH = 'Dimension mismatch: {left} versus {right}.'
ERROR_PROB_VECTOR = 'Weights must be nonnegative and sum to one, got sum {total}.'
ERROR_ALL_MASS_ZERO = 'Every prior entry is zero.'
ERROR_NONFINITE_RISK = 'Risks must be finite.'
ERROR_INVALID_B = 'Loss bound b must be positive, got {b}.'
ERROR_UNKNOWN_SLACK = 'Unknown slack model {slack!r}.'
ERROR_UNKNOWN_FLAVOR = 'Unknown flavor {flavor!r}.'
ERROR_UNKNOWN_BOUND_KIND = 'Unknown bound kind {kind!r}.'
ERROR_UNKNOWN_PRESET = 'Unknown environment preset {name!r}.'
ERROR_UNKNOWN_COUPLING = 'Unknown coupling {coupling!r}.'
ERROR_INVALID_TRIALS = 'trials must be at least {minimum}, got {trials}.'
ERROR_INVALID_ITERATIONS = 'max_iters must be at least 1 and tol positive.'
ERROR_EMPTY_ENVIRONMENT = 'An environment needs at least one hypothesis.'
ERROR_LAW_OUTSIDE_RANGE = 'Hypothesis {index} has support outside the loss range [{a}, {b}].'
ERROR_LABELS_LENGTH = 'Expected {expected} labels, got {got}.'
ERROR_EMPTY_DATA = 'Dataset has no rows.'

ERROR_UNKNOWN_FIELD = 'Unknown field.'
ERROR_SEED_REQUIRED = 'A seed is required for stochastic commands.'
ERROR_FIELD_REQUIRED_FOR = 'This field is required for {what}.'
ERROR_ENVIRONMENT_SOURCE = 'Give exactly one of "preset" or "laws".'
ERROR_RANGE_PAIR = 'Expected a pair [a, b].'
ERROR_CONFIG_UNREADABLE = 'Cannot read config {path}: {reason}'
ERROR_CONFIG_NOT_MAPPING = 'Config root must be a mapping.'
ERROR_OUTPUT_UNWRITABLE = 'Cannot write results to {path}: {reason}'

ERROR_NONFINITE_BOUND = 'Bound total is not finite ({total}); check the KL term and the prior support.'
ERROR_NONFINITE_VALUE = 'Numerical failure: {what} is not finite.'

WARNING_DEGENERATE_RANGE = 'Degenerate loss range [%s, %s]: returning the limiting bound.'
WARNING_ETA_CLAMPED = 'Closed-form eta %.6g clamped to [%.6g, %.6g].'
WARNING_NOT_CONVERGED = 'Fixed-point iteration stopped after %d iterations with TV distance %.3g.'
ERROR_INVALID_COEFFICIENTS = 'Coefficients A and B must be positive, got A={a}, B={b}.'
