from .settings import Settings, settings


def validate_configuration(
    settings_obj: Settings | None = None,
) -> dict[str, list[str] | bool]:
    """Validate configuration and return validation results."""
    cfg = settings_obj or settings
    errors = []
    warnings = []

    for name in (
        "tol",
        "trim_tol",
        "rank_tol",
        "bezout_tol",
        "unit_tol",
        "block_tol",
        "pd_tol",
        "fact_tol",
        "bauer_conv_tol",
    ):
        if getattr(cfg, name) <= 0:
            errors.append(f"MCWAVE_{name.upper()} must be positive")

    if cfg.bezout_clean_tol < 0:
        errors.append("MCWAVE_BEZOUT_CLEAN_TOL must be non-negative")

    if cfg.bauer_n < 2:
        errors.append("MCWAVE_BAUER_N must be at least 2")

    if cfg.bauer_max_doublings < 0:
        errors.append("MCWAVE_BAUER_MAX_DOUBLINGS must be non-negative")

    if cfg.samples < 8:
        errors.append("MCWAVE_SAMPLES must be at least 8")

    if cfg.cascade_iters < 1:
        errors.append("MCWAVE_CASCADE_ITERS must be at least 1")

    if cfg.trim_tol > cfg.tol:
        warnings.append(
            "MCWAVE_TRIM_TOL is larger than MCWAVE_TOL; trimming may dominate "
            "verification residuals"
        )

    return {
        "valid": len(errors) == 0,
        "errors": errors,
        "warnings": warnings,
    }


def get_config_summary(settings_obj: Settings | None = None) -> dict[str, str | int | float]:
    """Get a summary of current configuration for logging/debugging."""
    cfg = settings_obj or settings
    return {
        "app_name": cfg.app_name,
        "version": cfg.app_version,
        "tol": cfg.tol,
        "trim_tol": cfg.trim_tol,
        "rank_tol": cfg.rank_tol,
        "bauer_n": cfg.bauer_n,
        "bauer_max_doublings": cfg.bauer_max_doublings,
        "samples": cfg.samples,
        "log_level": cfg.log_level,
    }
