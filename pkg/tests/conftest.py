import sys

import pytest

sys.setrecursionlimit(120_000)


@pytest.fixture(scope="session")
def corpus():
    from clx.cli import corpus_paths, load
    return load(corpus_paths(), seed=0)


@pytest.fixture(scope="session")
def interp(corpus):
    from clx.clausal import Interpreter
    return Interpreter(corpus.space, budget=500_000_000)
