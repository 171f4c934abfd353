"""
Environment configuration
- worker count, enumeration budgets
- numeric tolerances, sampling precision
"""
import os
from dotenv import load_dotenv

# Load .env if present
load_dotenv()

# ============================================================
# Workers
# ============================================================

THREADS = int(os.getenv('WEYL_CONES_THREADS', 1))

# ============================================================
# Enumeration budgets
# ============================================================

# Largest n enumerated by default (A: n! orderings, B: 2^n n! orderings)
MAX_N_A = int(os.getenv('WEYL_CONES_MAX_N_A', 8))
MAX_N_B = int(os.getenv('WEYL_CONES_MAX_N_B', 6))

# Refuse anything beyond this many candidate cones, even with an override
HARD_CAP = int(os.getenv('WEYL_CONES_HARD_CAP', 10_000_000))

# ============================================================
# Numerics
# ============================================================

# Floats are frozen onto the dyadic grid 2^-RATIONAL_BITS
RATIONAL_BITS = int(os.getenv('WEYL_CONES_RATIONAL_BITS', 24))

KKT_TOL = float(os.getenv('WEYL_CONES_KKT_TOL', 1e-9))
Z_LIMIT = float(os.getenv('WEYL_CONES_Z_LIMIT', 4.0))
GP_ATTEMPTS = int(os.getenv('WEYL_CONES_GP_ATTEMPTS', 5))
# Tied Gaussian projections redrawn per estimate before giving up
TIE_REDRAWS = int(os.getenv('WEYL_CONES_TIE_REDRAWS', 1000))
SIGNIFICANT_DIGITS = int(os.getenv('WEYL_CONES_SIGNIFICANT_DIGITS', 12))

# ============================================================
# Output / logging
# ============================================================

SCHEMA_VERSION = int(os.getenv('WEYL_CONES_SCHEMA', 1))
LOG_LEVEL = os.getenv('WEYL_CONES_LOG_LEVEL', 'INFO').upper()

BUDGET_CONFIG = {
    'A': MAX_N_A,
    'B': MAX_N_B,
    'hard_cap': HARD_CAP,
}
