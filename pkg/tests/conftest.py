import os
from itertools import product

import pytest

from src.analogy.analogy import builtin_models
from src.boolfun.boolfun import TruthTable

MODEL_NAMES = ("R1", "R2", "R3", "R4", "R5")
ALL_PAIRS = list(product(MODEL_NAMES, repeat=2))


def all_functions(arity):
    return [TruthTable(arity, code) for code in range(1 << (1 << arity))]


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    """Keep ANALOGY_* settings from the developer's shell out of the tests."""
    for name in list(os.environ):
        if name.startswith("ANALOGY_"):
            monkeypatch.delenv(name)


@pytest.fixture(scope="session")
def models():
    return {m.name: m for m in builtin_models()}


@pytest.fixture(scope="session")
def relations(models):
    return {name: m.relation for name, m in models.items()}
