# Paths
DEFAULT_OUTPUT_DIR = "womac_out"
LOG_DIR_ENV = "WOMAC_LOG_DIR"
THREADS_ENV = "WOMAC_THREADS"

# Output files
LEADERBOARD_CSV = "leaderboard.csv"
RESULT_JSON = "result.json"
CONFIG_JSON = "config.json"
SIMULATION_JSON = "simulation.json"
SIMULATION_CSV = "simulation.csv"
REPORT_JSON = "report.json"
REPORT_CSV = "report.csv"
OPTIMAL_K_CSV = "optimal_k.csv"

# Seeds
DEFAULT_SEED = 0

# Meta-learner defaults
DEFAULT_K = 0.05
DEFAULT_K_GRID = (0.01, 0.02, 0.05, 0.10, 0.20, 0.30, 0.50, 1.00)
DEFAULT_SCREEN_SIZE = 5
DEFAULT_RIDGE = 0.0

# Experiment protocol
DEFAULT_M_TRAIN_GRID = (5, 10, 15, 20, 25, 30, 35, 40)
DEFAULT_N_SUBSAMPLES = 150
DEFAULT_M_TEST = 10

# Data filters
HFC_MIN_TASK_RESPONSES = 250
HFC_MIN_EXPERT_COMPLETION = 0.5

# Simulation
DEFAULT_REPLICATES = 10_000
CI_LEVEL = 0.95
OUTFLANK_OFFSET_SDS = 2.0

# Exit codes
EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_IO = 3
EXIT_INTERNAL = 4

# Logging
LOG_MAX_BYTES = 10 * 1024 * 1024  # 10MB
LOG_BACKUP_COUNT = 5
