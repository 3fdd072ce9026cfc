"""Run configuration: every randomized computation is determined by it."""

import os
from dataclasses import dataclass

DEFAULT_PRIME = 2**31 - 1
DEFAULT_TRIALS = 40


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    prime: int = DEFAULT_PRIME
    trials: int = DEFAULT_TRIALS
    jobs: int = 1

    @staticmethod
    def from_env(seed=0, jobs=1):
        """Environment overrides: FLAGINST_PRIME, FLAGINST_TRIALS."""
        prime = int(os.environ.get("FLAGINST_PRIME", DEFAULT_PRIME))
        trials = int(os.environ.get("FLAGINST_TRIALS", DEFAULT_TRIALS))
        return RunConfig(seed=seed, prime=prime, trials=trials, jobs=jobs)
