import random
from pathlib import Path

import pytest

from probgkat.semantics.derivative import clear_cache
from probgkat.syntax import Alphabet

from .generators import ALPHABET

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)


@pytest.fixture
def alphabet() -> Alphabet:
    return ALPHABET


@pytest.fixture
def data_dir() -> Path:
    return DATA


@pytest.fixture(autouse=True)
def _fresh_derivative_cache():
    yield
    clear_cache()
