KIND_CHERNOFF = 'chernoff'
KIND_HOEFFDING = 'hoeffding'
KIND_VARIANCE = 'variance'
KIND_UNION = 'union'
KIND_UNION_ETA = 'union_eta'
KIND_PAC_BAYES = 'pac_bayes'
KIND_PAC_BAYES_EXPECTATION = 'pac_bayes_expectation'
KIND_PAC_BAYES_GRID = 'pac_bayes_grid'
KIND_PAC_HOEFFDING = 'pac_hoeffding'
KIND_PAC_VARIANCE = 'pac_variance'
KIND_EXCESS_HOEFFDING = 'excess_hoeffding'
KIND_EXCESS_VARIANCE = 'excess_variance'

FLAVOR_HOEFFDING = 'hoeffding'
FLAVOR_VARIANCE = 'variance'

RULE_ERM = 'erm'
RULE_GIBBS = 'gibbs'

COUPLING_SHARED = 'shared'
COUPLING_INDEPENDENT = 'independent'

COMMAND_BOUND = 'bound'
COMMAND_COVERAGE = 'coverage'
COMMAND_SWEEP = 'sweep'
COMMAND_FIXPOINT = 'fixpoint'

FORMAT_CSV = 'csv'
FORMAT_TEXT = 'text'

STR_SUMMARY_SUFFIX = '.yaml'
STR_CSV_SUFFIX = '.csv'
STR_ENCODING = 'utf-8'
STR_TEXT_SUFFIX = '.txt'

SLACK_CHOICES = (FLAVOR_HOEFFDING, FLAVOR_VARIANCE)
RULE_CHOICES = (RULE_ERM, RULE_GIBBS)
COUPLING_CHOICES = (COUPLING_SHARED, COUPLING_INDEPENDENT)
COMMAND_CHOICES = (COMMAND_BOUND, COMMAND_COVERAGE, COMMAND_SWEEP, COMMAND_FIXPOINT)
FORMAT_CHOICES = (FORMAT_CSV, FORMAT_TEXT)
