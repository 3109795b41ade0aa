import math

# solver
SOLVER_TOLERANCE = 1e-10
ACCEPT_TOLERANCE = 1e-8
MAX_ITERATIONS = 200
LAMBDA_CAP = 40.0
PRUNE_THRESHOLD = 1e-12
INTERIOR_FLOOR = 1e-8
ARMIJO_SLOPE = 1e-4
ARMIJO_FACTOR = 0.5
MAX_BACKTRACKS = 40
RANK_RTOL = 1e-9
INFEASIBILITY_SLACK = 1e-10

# moment vectors sharing this many decimals share one fit
MOMENT_KEY_DECIMALS = 12

# enumeration
ENUM_CAP = 10**6
TYPE_CLASS_CAP = 10**8
GROUPED_CAP = 10**7
CHUNK_SIZE = 20_000
MIN_MC_DRAWS = 100
DEFAULT_MC_DRAWS = 20_000

TIE_TOLERANCE = 1e-9

# gene pipeline
CLAMP_FLOOR = 100.0
CLAMP_CEILING = 16000.0
MIN_FOLD_CHANGE = 5.0
MIN_ABS_RANGE = 500.0
DEFAULT_LEVELS = 5
DEFAULT_M_RANGE = (1, 2, 3, 4, 5, 6, 7)
SMOOTHING_FLOOR = 1e-6

NATS_PER_BIT = math.log(2.0)
