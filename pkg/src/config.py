"""
Runtime settings for etalg.

Defaults come from config/defaults.json; a .env file and ETALG_* environment
variables override them.
"""

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import load_dotenv

DEFAULTS_PATH = Path(__file__).parent.parent / 'config' / 'defaults.json'


def load_defaults(path: Optional[Path] = None) -> Dict[str, Any]:
    """Load the defaults JSON file."""
    config_path = path or DEFAULTS_PATH
    with open(config_path, 'r', encoding='utf-8') as f:
        return json.load(f)


def _env_bool(name: str, default: bool) -> bool:
    raw = os.getenv(name)
    if raw is None:
        return default
    return raw.strip().lower() in ('1', 'true', 'yes', 'on')


@dataclass(frozen=True)
class Settings:
    """
    Resolved settings.

    Features:
    - Enumeration budget (ETALG_MAX_BUDGET)
    - Float tolerance and bound-chain slack for the numerical bridge
    - Delta-search halving cap for the injectivity rewriter
    - Logging and certificate-store locations
    """

    max_budget: int = 10000
    float_tolerance: float = 1e-8
    bound_slack: float = 2.0
    delta_halvings: int = 20
    bridge_samples: int = 32
    bridge_max_n: int = 8
    restriction_samples: int = 10
    log_level: str = "WARNING"
    log_dir: str = "logs"
    json_logs: bool = False
    database_path: str = "data/etalg.db"
    selftest: Dict[str, int] = field(default_factory=dict)


def load_settings(env_file: Optional[str] = None, defaults_path: Optional[Path] = None) -> Settings:
    """
    Build Settings from defaults, .env and the environment.

    Args:
        env_file: Optional explicit .env path (python-dotenv searches upwards otherwise)
        defaults_path: Optional alternative defaults JSON

    Returns:
        Settings instance
    """
    load_dotenv(env_file) if env_file else load_dotenv()
    defaults = load_defaults(defaults_path)

    return Settings(
        max_budget=int(os.getenv('ETALG_MAX_BUDGET', defaults['max_budget'])),
        float_tolerance=float(os.getenv('ETALG_FLOAT_TOLERANCE', defaults['float_tolerance'])),
        bound_slack=float(defaults['bound_slack']),
        delta_halvings=int(os.getenv('ETALG_DELTA_HALVINGS', defaults['delta_halvings'])),
        bridge_samples=int(defaults['bridge_samples']),
        bridge_max_n=int(defaults['bridge_max_n']),
        restriction_samples=int(defaults['restriction_samples']),
        log_level=os.getenv('ETALG_LOG_LEVEL', defaults['log_level']),
        log_dir=os.getenv('ETALG_LOG_DIR', defaults['log_dir']),
        json_logs=_env_bool('ETALG_JSON_LOGS', bool(defaults['json_logs'])),
        database_path=os.getenv('ETALG_DATABASE_PATH', defaults['database_path']),
        selftest=dict(defaults.get('selftest', {})),
    )
