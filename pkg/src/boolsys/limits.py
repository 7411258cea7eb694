from __future__ import annotations

import os

ENV_VAR = "BDS_BOUND"


def resolve_bound(explicit: int | None, default: int) -> int:
    """Pick an iteration cap: explicit argument, then $BDS_BOUND, then the default."""
    if explicit is not None:
        if explicit < 1:
            raise ValueError("bounds must be positive")
        return explicit
    raw = os.environ.get(ENV_VAR)
    if raw:
        value = int(raw)
        if value < 1:
            raise ValueError(f"{ENV_VAR} must be a positive integer")
        return value
    return default
