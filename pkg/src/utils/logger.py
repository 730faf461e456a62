import logging
import sys
from pathlib import Path
from typing import Optional

COMMAND_LOGGER = "src.commands"


class RunContext(logging.Filter):
    """Stamps every record with the run it belongs to, e.g. 'verify-b/gamma0 n=2 depth=8'"""

    def __init__(self):
        super().__init__()
        self.label = "-"

    def bind(self, command: Optional[str] = None, boundary: Optional[str] = None,
             n: Optional[int] = None, depth: Optional[int] = None) -> str:
        parts = []
        if command:
            parts.append(command if boundary is None else f"{command}/{boundary}")
        if n is not None:
            parts.append(f"n={n}")
        if depth is not None:
            parts.append(f"depth={depth}")
        self.label = " ".join(parts) or "-"
        return self.label

    def filter(self, record: logging.LogRecord) -> bool:
        record.run = self.label
        return True


run_context = RunContext()


def bind_run(command: Optional[str] = None, boundary: Optional[str] = None,
             n: Optional[int] = None, depth: Optional[int] = None) -> str:
    """Set the run label shown in every log line; no arguments resets it"""
    return run_context.bind(command, boundary, n, depth)


def command_logger(command: str) -> logging.Logger:
    """Per-command logger, e.g. src.commands.verify-b"""
    return logging.getLogger(f"{COMMAND_LOGGER}.{command}")


def setup_logger(name: str = "src", log_file: str = None, level: str = "INFO") -> logging.Logger:
    """
    Setup logger with console (stderr) and optional file handlers

    Reports go to stdout, so the console handler writes to stderr. Both
    handlers prefix messages with the current run label (see bind_run).

    Args:
        name: Logger name (the package root configures every module logger)
        log_file: Log file path
        level: Logging level

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger(name)
    logger.setLevel(getattr(logging, level.upper()))

    # Avoid duplicate handlers
    if logger.handlers:
        return logger

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(getattr(logging, level.upper()))
    console_handler.addFilter(run_context)
    console_handler.setFormatter(logging.Formatter(
        '%(asctime)s - [%(run)s] %(name)s - %(levelname)s - %(message)s',
        datefmt='%H:%M:%S'
    ))
    logger.addHandler(console_handler)

    if log_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)

        file_handler = logging.FileHandler(log_file, encoding='utf-8')
        file_handler.setLevel(logging.DEBUG)
        file_handler.addFilter(run_context)
        file_handler.setFormatter(logging.Formatter(
            '%(asctime)s - [%(run)s] %(name)s - %(levelname)s - %(funcName)s:%(lineno)d - %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        ))
        logger.addHandler(file_handler)
        # enumeration statistics are logged at DEBUG
        logger.setLevel(logging.DEBUG)

    return logger
