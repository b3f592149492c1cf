from functools import lru_cache
from pathlib import Path

import pytest

from mmbrg.io import parse_plant
from mmbrg.oracle import GenConfig, random_corpus

FIXTURES = Path(__file__).parent / "fixtures"

# Default generator settings plus a slice of token-conserving nets with
# extra explicit transitions, which produces livelocks far more often.
CORPUS_PLAN = [
    (20240601, 220, GenConfig()),
    (20240602, 100, GenConfig(sink_bias=0.0, explicit_bias=0.3, conserve_bias=1.0, max_weight=1)),
]


def load(name):
    return parse_plant((FIXTURES / f"{name}.pnet").read_text())


@lru_cache(maxsize=None)
def corpus():
    out = []
    for seed, count, config in CORPUS_PLAN:
        out.extend(random_corpus(seed, count, config))
    return tuple(out)


@pytest.fixture
def fix_a():
    return load("fix-a")


@pytest.fixture
def fix_b():
    return load("fix-b")


@pytest.fixture
def fix_t():
    return load("fix-t")
