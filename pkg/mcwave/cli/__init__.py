from .commands import add_commands, emit

__all__ = ["add_commands", "emit"]
