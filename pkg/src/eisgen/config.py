"""Run configuration shared by the library and the CLI."""
from __future__ import annotations

import os
from dataclasses import dataclass, field, replace

DEFAULT_BUDGET = 10 ** 8


def env_budget():
    v = os.environ.get("EISGEN_BUDGET")
    return int(float(v)) if v else DEFAULT_BUDGET


@dataclass(frozen=True)
class Config:
    budget: int = field(default_factory=env_budget)
    jobs: int = 1
    q: int = 2
    genus: int = 1
    depth: int = 3
    expand: int = 8
    output: str = "json"
    seed: int = 0
    restrict_q: bool = False  # run q-parametrized suites at `q` only

    def with_(self, **kw):
        return replace(self, **{k: v for k, v in kw.items() if v is not None})
