"""
Structured logging for solver runs. Records carry WHO/WHAT/WHEN/WHERE context
and go to stderr, since stdout holds command results.
"""
import logging
import os
import sys
from datetime import datetime, timezone
from logging.handlers import RotatingFileHandler
from typing import Any, Dict, Optional


def _config(*keys: str, default: Any = None) -> Any:
    # config_loader imports this module
    from src.main.config.config_loader import get_config_value
    return get_config_value(*keys, default=default)


class ContextFormatter(logging.Formatter):
    """Fills in missing context fields so every record renders the same way."""

    FORMAT = ('%(asctime)s - %(name)s - %(levelname)s - '
              '[WHO: %(user)s] [WHAT: %(action)s] [WHEN: %(timestamp)s] [WHERE: %(location)s] - %(message)s')
    DATE_FORMAT = '%Y-%m-%d %H:%M:%S'

    def __init__(self):
        super().__init__(self.FORMAT, self.DATE_FORMAT)

    def format(self, record: logging.LogRecord) -> str:
        record.user = getattr(record, 'user', 'cli')
        record.action = getattr(record, 'action', record.funcName or 'unknown')
        record.timestamp = getattr(record, 'timestamp', datetime.now(timezone.utc).isoformat())
        record.location = getattr(record, 'location', f'{record.module}.{record.funcName}')
        return super().format(record)


class LoggerConfig:

    DEFAULT_LEVEL = logging.WARNING

    _loggers: Dict[str, logging.Logger] = {}
    _level_override: Optional[int] = None

    @classmethod
    def configured_level(cls) -> int:
        if cls._level_override is not None:
            return cls._level_override
        name = str(_config('logging', 'level', default='WARNING')).upper()
        return getattr(logging, name, cls.DEFAULT_LEVEL)

    @classmethod
    def _file_handler(cls) -> Optional[logging.Handler]:
        if not _config('logging', 'file_enabled', default=False):
            return None
        log_dir = _config('logging', 'dir', default='logs')
        try:
            os.makedirs(log_dir, exist_ok=True)
            return RotatingFileHandler(os.path.join(log_dir, _config('logging', 'file', default='channel_disc.log')),
                                       maxBytes=int(_config('logging', 'max_bytes', default=10 * 1024 * 1024)),
                                       backupCount=int(_config('logging', 'backup_count', default=5)))
        except OSError as e:
            print(f"File logging disabled: {e}", file=sys.stderr)
            return None

    @classmethod
    def get_logger(cls, name: str) -> logging.Logger:
        if name in cls._loggers:
            return cls._loggers[name]

        logger = logging.getLogger(name)
        level = cls.configured_level()
        logger.setLevel(level)
        logger.handlers.clear()
        formatter = ContextFormatter()
        for handler in filter(None, (logging.StreamHandler(sys.stderr), cls._file_handler())):
            handler.setLevel(level)
            handler.setFormatter(formatter)
            logger.addHandler(handler)
        logger.propagate = False

        cls._loggers[name] = logger
        return logger

    @classmethod
    def set_level(cls, level: int) -> None:
        """Change the level of every logger handed out so far, and of later ones."""
        cls._level_override = level
        for logger in cls._loggers.values():
            logger.setLevel(level)
            for handler in logger.handlers:
                handler.setLevel(level)


def get_logger(name: str) -> logging.Logger:
    return LoggerConfig.get_logger(name)


def create_log_context(action: str = 'unknown', location: Optional[str] = None,
                       user: str = 'cli') -> Dict[str, Any]:
    return {
        'user': user,
        'action': action,
        'timestamp': datetime.now(timezone.utc).isoformat(),
        'location': location or 'unknown',
    }
