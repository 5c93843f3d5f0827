"""Environment configuration for Bifurcato.
Loads values from environment variables and .env file.
"""
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    DEBUG: bool = False  # Forces DEBUG logging regardless of LOG_LEVEL
    LOG_LEVEL: str = "INFO"

    # Parallel parameter sweeps and cycle scans
    THREADS: int = 1  # 1 = sequential; >1 caps the worker pool

    model_config = SettingsConfigDict(env_file=".env", env_prefix="BIFURCATO_", extra="ignore")


class ToleranceConfig(BaseSettings):
    """Tolerances for root classification, critical loci and focal values."""

    # Discriminant
    DISCRIMINANT_ZERO_REL: float = 1e-8  # |D| below this times max(|p/3|^3, (q/2)^2) counts as zero
    SIX_DIGIT_ZERO_REL: float = 1e-4  # Same band for parameter sets published to six digits
    POSITIVE_ROOT_MIN: float = 1e-12  # Roots above this count as positive

    # Linear classification
    CLASSIFY_TOL: float = 1e-7  # On |trace|, |det| scaled by the Frobenius norm
    CRITICAL_TOL: float = 1e-7  # trace/det/eta at critical loci

    # Focal values
    FOCUS_VANISHING_TOL: float = 1e-6  # |B| < tol * max(1, |B_next|) counts as vanishing
    SIX_DIGIT_FOCUS_TOL: float = 1e-3  # Same rule for parameter sets published to six digits
    UNFOLD_STEPS: int = 10  # Continuation steps when steering focal values to targets
    UNFOLD_ITERATIONS: int = 8  # Newton iterations per continuation step
    JET_ORDER: int = 9  # Highest power kept in Taylor jets
    CODIM_REL_STEP: float = 1e-5  # Relative finite-difference step for codim Jacobians

    # Dulac sufficient condition
    DULAC_GRID: int = 4096
    DULAC_MARGIN: float = 1e-3  # Refine intervals whose minimum falls below this

    model_config = SettingsConfigDict(env_file=".env", env_prefix="BIFURCATO_", extra="ignore")


class IntegratorConfig(BaseSettings):
    """ODE integration and return-map settings."""

    METHOD: str = "RK45"  # Embedded 5(4) pair; DOP853 is accepted for tight scans
    RTOL: float = 1e-10
    ATOL: float = 1e-12
    T_MAX_RETURN: float = 1e6  # Time budget for a single section return

    # Limit-cycle scan
    SECTION_OFFSET_REL: float = 1e-3  # Inner scan offset, relative to x2
    SCAN_POINTS: int = 40
    SEMISTABLE_SLOPE_TOL: float = 1e-3
    MERGE_TOL: float = 1e-6
    RESIDUAL_TOL: float = 1e-8
    LOOP_SAMPLES: int = 400

    model_config = SettingsConfigDict(
        env_file=".env", env_prefix="BIFURCATO_INTEGRATOR_", extra="ignore"
    )


class UnfoldingConfig(BaseSettings):
    """Grids and brackets for unfolding curves and surfaces."""

    EPS_BRACKET: float = 0.5  # epsilon2 search interval is [-EPS_BRACKET, EPS_BRACKET]
    SCAN_STEP: float = 1e-3  # Sign-scan resolution
    BISECT_WIDTH: float = 1e-12
    EPS1_RANGE: float = 0.1  # Default (eps1, eps2) window is [-range, range]^2
    MESH: int = 200  # Surface mesh density per axis

    model_config = SettingsConfigDict(
        env_file=".env", env_prefix="BIFURCATO_UNFOLDING_", extra="ignore"
    )

