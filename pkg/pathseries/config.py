from __future__ import annotations

from pathlib import Path
from typing import Any, Dict

import yaml

from .models import ConfigModel


def _coerce_legacy_keys(raw: Dict[str, Any]) -> Dict[str, Any]:
    """Accept ``defaults: {id: N}`` as an alias of ``truncations`` and a top-level ``workers`` for ``threads``."""
    out = dict(raw)
    if "defaults" in out and "truncations" not in out:
        out["truncations"] = out.pop("defaults")
    if "workers" in out and "threads" not in out:
        out["threads"] = out.pop("workers")
    return out


def load_config(path: str | Path) -> ConfigModel:
    """Load a YAML config file into a ConfigModel."""
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(f"Config not found: {p}")

    with p.open("r", encoding="utf-8") as f:
        raw: Dict[str, Any] = yaml.safe_load(f) or {}

    return ConfigModel(**_coerce_legacy_keys(raw))


def default_config() -> ConfigModel:
    return ConfigModel()
