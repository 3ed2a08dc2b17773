import logging

from rich.console import Console
from rich.logging import RichHandler

from app.core.config import settings


def setup_logging(level: str | None = None) -> None:
    # stdout занят CSV и JSON, логи пишем в stderr
    handler = RichHandler(console=Console(stderr=True), show_path=False)
    handler.setFormatter(logging.Formatter("[%(name)s] %(message)s"))

    root = logging.getLogger()
    root.handlers.clear()
    root.addHandler(handler)
    root.setLevel((level or settings.LOG_LEVEL).upper())
