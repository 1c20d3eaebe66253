"""
Settings from src/config.json, with CHANNEL_DISC_* environment overrides
(a .env file is honoured) and temporary in-process overrides.
"""
import json
import os
from contextlib import contextmanager
from typing import Any, Callable, Dict, Optional, Tuple

from dotenv import load_dotenv

CONFIG_PATH = os.path.join(os.path.dirname(os.path.dirname(os.path.dirname(__file__))), 'config.json')

# Environment variable -> (config keys, parser)
ENV_OVERRIDES: Dict[str, Tuple[Tuple[str, ...], Callable[[str], Any]]] = {
    'CHANNEL_DISC_MAX_ITER': (('solver', 'max_iter'), int),
    'CHANNEL_DISC_SOLVER': (('solver', 'method'), str.upper),
    'CHANNEL_DISC_LOG_LEVEL': (('logging', 'level'), str.upper),
    'CHANNEL_DISC_WORKERS': (('parallel', 'workers'), int),
}


class ConfigLoader:
    """Process-wide settings; read once, then served from memory."""

    _instance: Optional["ConfigLoader"] = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance._overrides = {}
            cls._instance._load()
        return cls._instance

    def _load(self) -> None:
        if not os.path.exists(CONFIG_PATH):
            raise FileNotFoundError(f"Configuration file not found: {CONFIG_PATH}")
        with open(CONFIG_PATH, 'r', encoding='utf-8') as handle:
            self._config: Dict[str, Any] = json.load(handle)
        load_dotenv()
        for env_name, (keys, parse) in ENV_OVERRIDES.items():
            raw = os.environ.get(env_name)
            if not raw:
                continue
            try:
                value = parse(raw)
            except ValueError as e:
                raise ValueError(f"Invalid value for {env_name}: {raw!r}") from e
            section = self._config
            for key in keys[:-1]:
                section = section.setdefault(key, {})
            section[keys[-1]] = value

    def get(self, *keys: str, default: Any = None) -> Any:
        """
        Look up a nested value, e.g. get('solver', 'method').
        Overrides win over the file; a missing or null value yields the default.
        """
        dotted = '.'.join(keys)
        if dotted in self._overrides:
            return self._overrides[dotted]
        value: Any = self._config
        for key in keys:
            if not isinstance(value, dict) or value.get(key) is None:
                return default
            value = value[key]
        return value

    def set_override(self, *keys: str, value: Any) -> None:
        self._overrides['.'.join(keys)] = value

    def clear_override(self, *keys: str) -> None:
        self._overrides.pop('.'.join(keys), None)

    def clear_all_overrides(self) -> None:
        self._overrides.clear()

    def reload(self) -> None:
        self._load()


def get_config() -> ConfigLoader:
    return ConfigLoader()


def get_config_value(*keys: str, default: Any = None) -> Any:
    return get_config().get(*keys, default=default)


@contextmanager
def config_override(*keys: str, value: Any):
    """
    Temporarily replace a setting:

        with config_override('solver', 'method', value='SCS'):
            solve(program)
    """
    config = get_config()
    config.set_override(*keys, value=value)
    try:
        yield
    finally:
        config.clear_override(*keys)
