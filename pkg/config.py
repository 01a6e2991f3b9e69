# config.py - defaults for the coverage engine
import os

from dotenv import load_dotenv

load_dotenv()

# Deployment defaults (the baseline simulation setup)
NETWORK_DEFAULTS = {
    "lambda_c_raw": 10.0,
    "lambda_s_raw": 50.0,
    "lambda_u_raw": 50.0,
    "P_c": 10.0,
    "P_s": 2.0,
    "beta": 4.0,
    "xi_db": 120.0,
    "M": 500,
    "S_max": 50,
    "R_th": 1.0,
    "q": 0.5,
    "shadow_mu": 1.0,
    "shadow_sigma": 2.0,
    "k_user": 2.0,
    "k_sbs": 0.5,
    "N0": 0.0,
    "mode_selection_raw_intensities": True,
}

# Numerical integration
QUADRATURE_SETTINGS = {
    "rtol": 1e-6,
    "atol": 1e-9,
    "max_subdivisions": 2000,
    "order": 15,
    "tail_panels": 3,
    "max_panels": 160,
}

# Outer distance integrals stop where the Rayleigh tail mass drops below this
DISTANCE_TAIL_MASS = 1e-8

# Load PMF
LOAD_SETTINGS = {
    "shape_b": 3.575,
    "tail_mass": 1e-6,
    "cap_factor": 64,
}

# Monte Carlo
SIMULATION_SETTINGS = {
    "drops": int(os.getenv("COVERAGE_DROPS", "20000")),
    "seed": int(os.getenv("COVERAGE_SEED", "2024")),
    "region_factor": 5.0,
    "max_resamples": 1000,
    "workers": int(os.getenv("COVERAGE_WORKERS", "1")),
    "bia_margin": 1e-9,
    "sinr_gating": False,
}

# Runner / CLI
RUN_SETTINGS = {
    "method": "analytic",
    "format": "csv",
    "workers": int(os.getenv("COVERAGE_WORKERS", "1")),
    "sweep_parameters": (
        "q", "lambda_s_raw", "lambda_c_raw", "xi_db", "P_c", "P_s", "tau", "M", "R_th",
    ),
}

LOGGING_SETTINGS = {
    "level": os.getenv("COVERAGE_LOG_LEVEL", "INFO"),
    "file": os.getenv("COVERAGE_LOG_FILE", "coverage.log"),
}
