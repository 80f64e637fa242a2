"""Central logger factory for qkmech."""
import logging
from datetime import datetime
from typing import Optional

from rich.console import Console
from rich.logging import RichHandler

from config.settings import LOGS_DIR, LOG_FILE_NAME, LOG_LEVEL


def configure_logging(level: Optional[str] = None) -> None:
    """Configure the root 'qkmech' logger. Idempotent.

    A file handler always records DEBUG and above. When a console level is
    given (or QKMECH_LOG is set) a rich handler on stderr is added as well.

    Args:
        level: Console verbosity name such as "INFO". Defaults to QKMECH_LOG.
    """
    root = logging.getLogger("qkmech")
    if root.handlers:
        return
    root.setLevel(logging.DEBUG)

    LOGS_DIR.mkdir(parents=True, exist_ok=True)
    handler = logging.FileHandler(LOGS_DIR / LOG_FILE_NAME, encoding="utf-8")
    now = datetime.now().strftime("%Y-%m-%d %H:%M:%S")
    handler.stream.write(f"\n{'x' * 22} {now} {'x' * 22}\n")
    handler.setFormatter(logging.Formatter(
        "%(asctime)s %(levelname)-8s %(name)-28s %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    ))
    root.addHandler(handler)

    console_level = (level if level is not None else LOG_LEVEL).strip().upper()
    if console_level:
        numeric = logging.getLevelName(console_level)
        if not isinstance(numeric, int):
            numeric = logging.WARNING
        console = RichHandler(
            console=Console(stderr=True),
            show_path=False,
            rich_tracebacks=False,
        )
        console.setLevel(numeric)
        root.addHandler(console)

    root.propagate = False


def get_logger(name: str) -> logging.Logger:
    """Return a child logger under the 'qkmech' hierarchy.

    Example: get_logger('flow') → logger named 'qkmech.flow'
    """
    return logging.getLogger(f"qkmech.{name}")
