from __future__ import annotations

import logging
import os
from typing import Any, Optional

try:
    import yaml  # type: ignore
except Exception:
    yaml = None  # type: ignore

log = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = ".euler.yaml"
CONFIG_ENV = "EULER_FPT_CONFIG"

DEFAULTS = {
    "budgets": {"brute_vertices": 20, "cycle_edges": 25, "path_nodes": 1_000_000},
    "solver": {"seed": 0, "epsilon": 0.01, "max_trials": None, "workers": 1, "exhaustive_max_edges": 16},
}


def _opt_int(value: Any) -> Optional[int]:
    return None if value is None else int(value)


def resolve_config_path(path: Optional[str] = None) -> str:
    return path or os.environ.get(CONFIG_ENV) or DEFAULT_CONFIG_PATH


def load_config(path: Optional[str] = None) -> dict:
    path = resolve_config_path(path)
    if not os.path.exists(path) or yaml is None:
        if yaml is None and os.path.exists(path):
            log.warning("PyYAML is not installed; ignoring %s", path)
        return {section: dict(values) for section, values in DEFAULTS.items()}
    with open(path, "r", encoding="utf-8") as f:
        data = yaml.safe_load(f) or {}
    if not isinstance(data, dict):
        raise ValueError(f"{path}: top level must be a mapping")
    b = data.get("budgets", {}) or {}
    s = data.get("solver", {}) or {}
    db, ds = DEFAULTS["budgets"], DEFAULTS["solver"]
    log.info("loaded config from %s", path)
    return {
        "budgets": {
            "brute_vertices": int(b.get("brute_vertices", db["brute_vertices"])),
            "cycle_edges": int(b.get("cycle_edges", db["cycle_edges"])),
            "path_nodes": int(b.get("path_nodes", db["path_nodes"])),
        },
        "solver": {
            "seed": int(s.get("seed", ds["seed"])),
            "epsilon": float(s.get("epsilon", ds["epsilon"])),
            "max_trials": _opt_int(s.get("max_trials", ds["max_trials"])),
            "workers": int(s.get("workers", ds["workers"])),
            "exhaustive_max_edges": int(s.get("exhaustive_max_edges", ds["exhaustive_max_edges"])),
        },
    }
