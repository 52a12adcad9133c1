"""Terminal log panel: tagged, colored log lines with a bounded history."""
import logging
import sys
from collections import deque
from typing import Optional, TextIO

SUCCESS = 25
logging.addLevelName(SUCCESS, "SUCCESS")

ROOT_LOGGER = "contagion"

_COLORS = {
    logging.DEBUG: "\033[90m",
    logging.INFO: "\033[38;5;117m",
    SUCCESS: "\033[38;5;114m",
    logging.WARNING: "\033[38;5;221m",
    logging.ERROR: "\033[38;5;203m",
    logging.CRITICAL: "\033[38;5;203m",
}
_RESET = "\033[0m"


class LogPanel(logging.Handler):
    """Handler writing ``[LEVEL] message`` lines and keeping the most recent ones."""

    MAX_LINES = 1000  # Maximum number of lines to keep

    def __init__(self, stream: Optional[TextIO] = None, color: Optional[bool] = None):
        """Initialize the log panel.

        Args:
            stream: Output stream, stderr by default.
            color: Force ANSI colors on or off; auto-detected from the stream when None.
        """
        super().__init__()
        self.stream = stream if stream is not None else sys.stderr
        if color is None:
            color = hasattr(self.stream, "isatty") and self.stream.isatty()
        self._color = color
        self._lines: deque[str] = deque(maxlen=self.MAX_LINES)

    def emit(self, record: logging.LogRecord) -> None:
        try:
            text = f"[{record.levelname}] {record.getMessage()}"
            if record.exc_info and record.levelno >= logging.ERROR:
                text = f"{text}\n{logging.Formatter().formatException(record.exc_info)}"
            self._lines.append(text)
            if self._color:
                text = f"{_COLORS.get(record.levelno, '')}{text}{_RESET}"
            self.stream.write(text + "\n")
            self.stream.flush()
        except Exception:
            self.handleError(record)

    @property
    def lines(self) -> list[str]:
        """Get the retained log lines (oldest first)."""
        return list(self._lines)

    def clear(self) -> None:
        """Clear all retained lines."""
        self._lines.clear()


def log_success(logger: logging.Logger, message: str, *args) -> None:
    """Log a message at the SUCCESS level."""
    logger.log(SUCCESS, message, *args)


def setup_logging(verbosity: int = 0, stream: Optional[TextIO] = None) -> LogPanel:
    """Install a fresh LogPanel on the package logger.

    Args:
        verbosity: -1 for warnings only, 0 for info, 1 or more for debug.
        stream: Output stream for the panel.

    Returns:
        The installed panel.
    """
    logger = logging.getLogger(ROOT_LOGGER)
    for handler in list(logger.handlers):
        if isinstance(handler, LogPanel):
            logger.removeHandler(handler)
    panel = LogPanel(stream)
    logger.addHandler(panel)
    if verbosity < 0:
        logger.setLevel(logging.WARNING)
    elif verbosity == 0:
        logger.setLevel(logging.INFO)
    else:
        logger.setLevel(logging.DEBUG)
    logger.propagate = False
    return panel
