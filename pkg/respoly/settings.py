# Exchange solver
DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITERATIONS = 200
DEFAULT_STALL_PATIENCE = 6
DEFAULT_DEGREE_THRESHOLD = 1e-10
DEFAULT_ALTERNATION_RTOL = 1e-6
# Levelling below ROUNDING_FACTOR * (n + 1) * eps * sum|c| / r is rounding noise
DEFAULT_ROUNDING_FACTOR = 100.0

# Root isolation
DEFAULT_ROOT_RTOL = 1e-13
DEFAULT_IMAG_TOL = 1e-7
DEFAULT_MAX_POLISH_STEPS = 200

# Quadrature: composite Gauss-Legendre panels graded geometrically
# toward singular endpoints
DEFAULT_QUAD_ORDER = 16
DEFAULT_QUAD_LEVELS = 40
DEFAULT_QUAD_RTOL = 1e-11
DEFAULT_QUAD_MAX_ORDER = 128

# Touching-band and endpoint tolerances, relative to the diameter
DEFAULT_TOUCH_RTOL = 1e-9
DEFAULT_SET_TOL = 0.0

# Oracle
DEFAULT_GRID = 2000
DEFAULT_ORACLE_TOL = 5e-4
DEFAULT_SIMPLEX_EPS = 1e-12
DEFAULT_MAX_PIVOTS = 20000

# Sweeps and orbits
DEFAULT_JOBS = 1
DEFAULT_EPS = 0.05
DEFAULT_RETURN_THRESHOLD = 0.1

# Output
FLOAT_DIGITS = 17
CSV_SCHEMA_VERSION = 1
LOG_ENV_VAR = "RESPOLY_LOG"
