from pathlib import Path

import pytest

from algebra import superalg

CORPUS_DIR = Path(__file__).resolve().parents[1] / "corpus"


@pytest.fixture(scope="session")
def sl21():
    return superalg.build_sl(2, 1)


@pytest.fixture(scope="session")
def sl31():
    return superalg.build_sl(3, 1)


@pytest.fixture(scope="session")
def c3():
    return superalg.build_c(3)


@pytest.fixture
def corpus_dir():
    return CORPUS_DIR
