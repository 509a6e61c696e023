"""Configuration and constants for PO-QA."""
import copy
import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

logger = logging.getLogger(__name__)

# Column order of the sample price file
SAMPLE_TICKERS = ['TSLA', 'AMZN', 'GOOG', 'AAPL', 'FSLR', 'SPWR', 'ARRY', 'ENPH']

# Risk factors of the design grid
DEFAULT_RISKS = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]

# Default configuration
DEFAULT_CONFIG = {
    'app': {
        'name': 'PO-QA',
        'version': '1.0.0',
    },
    'data': {
        'seed': 42,
        'assets': 8,
        'days': 126,
        'start_date': '2016-07-01',
        'drift': 0.0005,
        'vol': 0.02,
        'initial_price': 100.0,
        'tickers': SAMPLE_TICKERS,
    },
    'optimizer': {
        'method': 'nelder-mead',
        'max_evals': 2000,
        'f_tol': 1e-6,
        'starts': 3,
        'spsa_a': 0.2,
        'spsa_c': 0.1,
    },
    'sweep': {
        'risks': DEFAULT_RISKS,
        'configs': list('BCDEFGHIJKLM'),
        'algorithms': ['vqe', 'qaoa'],
        'base_seed': 42,
        'workers': None,  # None = available cores
    },
    'report': {
        'float_format': '.16e',
    },
}


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """Recursively merge ``override`` into a copy of ``base``."""
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


class Config:
    """Configuration manager for the application."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(Config, cls).__new__(cls)
            cls._instance._config = {}
            cls._instance._initialized = False
        return cls._instance

    def __init__(self):
        if not self._initialized:
            self._config = self._load_config()
            self._initialized = True

    def _load_config(self) -> Dict[str, Any]:
        """Load the override file on top of the defaults."""
        config_path = self.get_config_path()

        if not config_path.exists():
            return copy.deepcopy(DEFAULT_CONFIG)

        try:
            with open(config_path, 'r', encoding='utf-8') as f:
                return _merge(DEFAULT_CONFIG, json.load(f))
        except (json.JSONDecodeError, OSError) as e:
            logger.warning("Error loading config %s: %s. Using defaults.", config_path, e)
            return copy.deepcopy(DEFAULT_CONFIG)

    def reload(self) -> None:
        """Re-read the configuration file."""
        self._config = self._load_config()

    def get_config_path(self) -> Path:
        """Get the path to the configuration file."""
        config_dir = os.environ.get('POQA_CONFIG_DIR')
        if config_dir:
            return Path(config_dir) / 'config.json'
        return Path.home() / '.poqa' / 'config.json'

    def get(self, key: str, default: Any = None) -> Any:
        """Get a configuration value by dot notation."""
        keys = key.split('.')
        value = self._config

        try:
            for k in keys:
                value = value[k]
            return value
        except (KeyError, TypeError):
            return default

    def set(self, key: str, value: Any) -> bool:
        """Set a configuration value by dot notation."""
        keys = key.split('.')
        config = self._config

        try:
            for k in keys[:-1]:
                if k not in config:
                    config[k] = {}
                config = config[k]
            config[keys[-1]] = value
            return True
        except (KeyError, TypeError):
            return False

    def save(self) -> bool:
        """Save the current configuration to file."""
        config_path = self.get_config_path()
        config_path.parent.mkdir(parents=True, exist_ok=True)

        try:
            with open(config_path, 'w', encoding='utf-8') as f:
                json.dump(self._config, f, indent=2)
            return True
        except OSError as e:
            logger.error("Error saving config: %s", e)
            return False


def worker_count(requested: Optional[int] = None) -> int:
    """Resolve the sweep pool size; POQA_THREADS caps whatever was requested."""
    workers = requested or config.get('sweep.workers') or os.cpu_count() or 1
    workers = max(1, int(workers))

    env = os.environ.get('POQA_THREADS')
    if env:
        try:
            workers = min(workers, max(1, int(env)))
        except ValueError:
            logger.warning("Ignoring non-integer POQA_THREADS=%r", env)
    return workers


# Global config instance
config = Config()
