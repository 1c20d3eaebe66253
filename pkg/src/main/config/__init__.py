from src.main.config.command_config import COMMANDS

__all__ = ["COMMANDS"]
