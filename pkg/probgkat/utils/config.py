import os
from dataclasses import dataclass
from dotenv import load_dotenv

# Load environment variables from .env if present
load_dotenv()


@dataclass
class Settings:
    # Alphabet: atoms are enumerated eagerly, so 2**max_tests bounds every pass over At
    max_tests: int = int(os.getenv("PROBGKAT_MAX_TESTS", "16"))

    # Semantics
    derivative_cache: int = int(os.getenv("PROBGKAT_DERIVATIVE_CACHE", "65536"))

    # Simulation
    max_steps: int = int(os.getenv("PROBGKAT_MAX_STEPS", "10000"))
    sim_workers: int = int(os.getenv("PROBGKAT_SIM_WORKERS", "1"))
    sim_tolerance_sigmas: int = int(os.getenv("PROBGKAT_SIM_TOLERANCE_SIGMAS", "4"))

    # Logging
    log_level: str = os.getenv("LOG_LEVEL", "WARNING")
    log_dir: str | None = os.getenv("LOG_DIR")


settings = Settings()
