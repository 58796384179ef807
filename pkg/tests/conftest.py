# tests/conftest.py
import os
os.environ.setdefault("RELKIT_LOG_LEVEL", "WARNING")
os.environ.setdefault("RELKIT_VERIFY_CONSTRUCTIONS", "true")

import json
from pathlib import Path

import pytest
from click.testing import CliRunner
from hypothesis import strategies as st

from main import cli

# ======================================================
# Datos de prueba: archivos de gramáticas y autómatas
# ======================================================

DATA_DIR = Path(os.getenv("TEST_DATA_DIR", Path(__file__).parent / "data"))

_EXPECTED_JSON = DATA_DIR / "expected_samples.json"


def _load_expected():
    try:
        with open(_EXPECTED_JSON, "r", encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError:
        return {}


EXPECTED = _load_expected()

# ==========================================
# Estrategias de hypothesis
# ==========================================

def words_over(letters, max_size=6):
    return st.lists(st.sampled_from(tuple(letters)), max_size=max_size).map(tuple)


# ==========================================
# Fixtures
# ==========================================

@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def data_path():
    def _path(name: str) -> str:
        return str(DATA_DIR / name)
    return _path


@pytest.fixture
def expected():
    return EXPECTED


@pytest.fixture
def invoke(runner):
    """Invoca el CLI y devuelve el resultado de click"""
    def _invoke(*args):
        return runner.invoke(cli, [str(a) for a in args], catch_exceptions=False)
    return _invoke


@pytest.fixture
def write_file(tmp_path):
    """Escribe un archivo temporal con el contenido dado"""
    def _write(name: str, text: str) -> str:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)
    return _write
