from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_file=".env", env_prefix="DENDRIFY_")

    # HTTP surface  (env: DENDRIFY_HOST / DENDRIFY_PORT)
    host: str = "127.0.0.1"
    port: int = 8080
    log_level: str = "INFO"

    # Refinement
    cell_budget: int = 1_000_000            # Max cells per refinement / arc chain
    tolerance: float = 1e-12                # Point equality for non-rational input

    # Certificate
    beta_depth: int = 6                     # Search depth for the incident-side angle

    # Verification
    seed: int = 0
    samples: int = 1000
    verify_depth: int = 8
    lemma_trials: int = 10_000
    lemma_max_len: int = 10
    workers: int = 1                        # Threads used to evaluate sampled pairs

    # Rendering
    svg_digits: int = 9                     # Significant digits per coordinate


settings = Settings()
