from pydantic import AliasChoices, Field, PositiveInt
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(extra="ignore", env_file=".env", env_file_encoding="utf-8")

    # Logging
    log_level: str = "INFO"                 # root level
    protocol_log_level: str = "WARNING"     # logger "mcproof.protocol" (DEBUG = per-round trace)

    # Structures: dense arrays hold n^arity cells per relation
    arity_cap: PositiveInt = 4

    # Field setup: random Rabin candidates before the exhaustive scan
    irreducible_attempts: PositiveInt = 64

    # Field kernel: log/antilog tables are built when q^4 is at most this
    field_table_limit: PositiveInt = 65_536

    # Arithmetization memo bound (entries, per protocol run)
    chain_cache_size: PositiveInt = 200_000

    # Soundness experiments
    experiment_workers: PositiveInt = 1

    # Results store (accepts env RESULTS_DB_URL or SQLITE_URL), e.g. "sqlite+aiosqlite:///./experiments.db"
    results_db_url: str | None = Field(
        default=None,
        validation_alias=AliasChoices("RESULTS_DB_URL", "SQLITE_URL"),
    )


settings = Settings()
