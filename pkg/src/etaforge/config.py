"""Size guards shared by the library entry points and the CLI."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

ENV_VAR = "ETAFORGE_GUARDS"


@dataclass(frozen=True)
class Guards:
    max_divisors: int = 16
    max_det: int = 10**7
    max_k: int = 64
    max_matrix_divisors: int = 64

    def with_overrides(self, **kw) -> "Guards":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})

    def to_dict(self) -> dict:
        return asdict(self)


DEFAULT_GUARDS = Guards()


def load_guards(path: str | os.PathLike | None = None) -> Guards:
    """Read guards from a JSON file; ``$ETAFORGE_GUARDS`` names the default path.

    Unknown keys are rejected so that a typo never silently keeps a default.
    """
    if path is None:
        path = os.environ.get(ENV_VAR)
    if not path:
        return DEFAULT_GUARDS
    data = json.loads(Path(path).read_text())
    known = {f.name for f in fields(Guards)}
    extra = set(data) - known
    if extra:
        raise ValueError(f"unknown guard keys in {path}: {sorted(extra)}")
    return replace(DEFAULT_GUARDS, **{k: int(v) for k, v in data.items()})
