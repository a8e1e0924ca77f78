"""Run configuration shared by the library and the command line."""
from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass

from .localring import DEFAULT_TRUNC_CAP
from .poly import DEFAULT_CHARACTERISTIC


@dataclass(frozen=True)
class Config:
    characteristic: int = DEFAULT_CHARACTERISTIC
    seed: int = 0
    trunc_cap: int = DEFAULT_TRUNC_CAP
    red_cap: int = 12
    n_max: int = 12
    n_max_extended: int = 24
    retries: int = 5
    # reductions sampled when estimating r(I) as a minimum over r_Q(I)
    samples: int = 3

    def as_dict(self) -> dict:
        return asdict(self)

    def digest(self) -> str:
        text = json.dumps(self.as_dict(), sort_keys=True)
        return hashlib.sha256(text.encode()).hexdigest()[:16]

    def replace(self, **changes) -> "Config":
        data = self.as_dict()
        data.update({k: v for k, v in changes.items() if v is not None})
        return Config(**data)


DEFAULT_CONFIG = Config()
