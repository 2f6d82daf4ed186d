PHI_SERIES_SWITCH = 1e-4
PROB_SUM_TOLERANCE = 1e-12
PROB_VECTOR_TOLERANCE = 1e-10
GRID_COVER_TOLERANCE = 1e-14
MINIMIZE_ETA_RELATIVE_TOL = 1e-9
MINIMIZE_ETA_MAX_ITER = 1000

DEFAULT_ALPHA = 2.0
DEFAULT_FIXPOINT_TOL = 1e-4
DEFAULT_CHECK_POINTS = 50

VIOLATION_TOLERANCE = 1e-12
SIGMA_BUFFER = 3.0
MIN_COVERAGE_TRIALS = 100
