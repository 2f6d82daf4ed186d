import math

SEED = 20240917
RANDOM_CASES = 1000
GIBBS_CASES = 100

EXACT = 1e-12
LOOSE = 1e-10

LN_20 = math.log(20)
LN_10 = math.log(10)
LN_4 = math.log(4)

HOEFFDING_TOTAL = 0.2 + math.sqrt(LN_20 / 200)
UNION_ETA_TOTAL = 0.2 + math.sqrt((LN_4 + LN_20) / 200)
M_ETA_FAIR_COIN = -math.log((1 + math.exp(-1)) / 2)

COVERAGE_TRIALS = 2000
ACCEPTANCE_N = 100
ACCEPTANCE_DELTA = 0.05

PRESET_SUITE = ('bernoulli_single', 'bernoulli_grid10', 'asymmetric3')
