from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_prefix="MCWAVE_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    app_name: str = "mcwave"
    app_version: str = "1.0.0"

    tol: float = Field(
        default=1e-8,
        description="Verification tolerance for QMF and perfect reconstruction",
    )
    trim_tol: float = Field(
        default=1e-10, description="Coefficients at the ends below this are dropped"
    )
    rank_tol: float = Field(
        default=1e-8,
        description="Relative singular value threshold for rank decisions",
    )
    bezout_tol: float = Field(
        default=1e-9, description="Relative residual gate for Bezout solutions"
    )
    bezout_clean_tol: float = Field(
        default=1e-6,
        description="Relative size of end coefficients a singular Bezout system may drop",
    )
    unit_tol: float = Field(
        default=1e-8, description="Tolerance for unit-monomial determinants"
    )
    block_tol: float = Field(
        default=1e-8, description="Tolerance for the completion block structure"
    )
    pd_tol: float = Field(
        default=1e-9, description="Smallest admissible unit-circle eigenvalue"
    )
    fact_tol: float = Field(
        default=1e-8, description="Spectral factorization residual gate"
    )

    bauer_n: int = Field(default=64, description="Initial Bauer block row count")
    bauer_conv_tol: float = Field(
        default=1e-12, description="Bauer successive-row convergence threshold"
    )
    bauer_max_doublings: int = Field(
        default=6, description="How many times the Bauer horizon may double"
    )

    samples: int = Field(
        default=128, description="Number of unit-circle samples for checks"
    )
    cascade_iters: int = Field(default=8, description="Default cascade depth")

    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = "WARNING"
    log_format: Literal["json", "console"] = "console"


settings = Settings()
