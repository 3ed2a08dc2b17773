from pydantic_settings import BaseSettings, SettingsConfigDict
from pydantic import model_validator


class Settings(BaseSettings):
    # --- КВАДРАТУРА ---
    QUAD_ABS_TOL: float = 1e-10
    QUAD_REL_TOL: float = 1e-10
    QUAD_MAX_DEPTH: int = 40
    QUAD_MIN_DEPTH: int = 2

    # --- ВЫБОРКА И ДОПУСКИ ---
    DEFAULT_SAMPLES: int = 512
    CONSTANCY_TOL: float = 1e-6
    FIT_TOL: float = 1e-5
    FIT_MIN_KAPPA: float = 1e-3

    # --- РЕГУЛЯРНЫЕ ТОЧКИ ---
    SPEED_EPS: float = 1e-9
    INFLECTION_EPS: float = 1e-12
    DEGENERATE_EPS: float = 1e-12

    # --- ШАГИ КОНЕЧНЫХ РАЗНОСТЕЙ (доли длины области) ---
    FD_STEP: float = 1e-5
    PSI_STEP: float = 1e-3
    CONSTRUCT_STEP: float = 1e-3
    DOMAIN_PADDING: float = 1e-2

    LOG_LEVEL: str = "WARNING"

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore"
    )

    @model_validator(mode='after')
    def check_consistency(self):
        for name in ("QUAD_ABS_TOL", "QUAD_REL_TOL", "CONSTANCY_TOL", "FIT_TOL",
                     "FD_STEP", "PSI_STEP", "CONSTRUCT_STEP"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.QUAD_MAX_DEPTH < 1 or self.QUAD_MIN_DEPTH < 0:
            raise ValueError("QUAD_MAX_DEPTH must be >= 1 and QUAD_MIN_DEPTH >= 0")
        if self.QUAD_MIN_DEPTH >= self.QUAD_MAX_DEPTH:
            raise ValueError("QUAD_MIN_DEPTH must stay below QUAD_MAX_DEPTH")
        if self.DEFAULT_SAMPLES < 8:
            raise ValueError("DEFAULT_SAMPLES must be at least 8")

        # Шаблоны построенной кривой вычисляют шаблоны psi в своих узлах,
        # оба вылета должны уместиться в запас области
        reach = 2 * (self.CONSTRUCT_STEP + self.PSI_STEP + self.FD_STEP)
        if self.DOMAIN_PADDING < reach:
            raise ValueError(f"DOMAIN_PADDING must be at least {reach:g}")
        return self


settings = Settings()
