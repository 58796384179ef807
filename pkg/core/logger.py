"""
Configuración de logging para relkit.
Todo va a stderr para que stdout quede determinista.
"""

import logging
import sys
from typing import Optional

from core.config import settings

ROOT_LOGGER = "relkit"

_handler: Optional[logging.StreamHandler] = None


def configure_logging(level: Optional[str] = None) -> logging.Logger:
    """Instala un único handler en stderr; llamadas siguientes solo ajustan nivel y stream"""
    global _handler

    root = logging.getLogger(ROOT_LOGGER)
    if level is None:
        level = "DEBUG" if settings.DEBUG else settings.LOG_LEVEL
    root.setLevel(level.upper())

    if _handler is None:
        _handler = logging.StreamHandler(sys.stderr)
        _handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
        root.addHandler(_handler)
        root.propagate = False
    else:
        # el stream pudo cambiar (CliRunner lo reemplaza en cada invocación)
        _handler.setStream(sys.stderr)
    return root


def get_logger(name: str) -> logging.Logger:
    """Logger hijo del espacio `relkit`"""
    if name.startswith(ROOT_LOGGER):
        return logging.getLogger(name)
    return logging.getLogger(f"{ROOT_LOGGER}.{name}")
