"""CLI command handlers."""

from src.handlers.command_handler import Command, CommandHandler, CommandResult

__all__ = ["Command", "CommandHandler", "CommandResult"]
