import numpy as np
import pytest

from pathweave.tensor import ingest_triples

# Scholarly fixture used throughout: two humans, three articles, one
# journal, one subject; 9 input triples (one duplicate) over 4 labels.
FIXTURE1_TRIPLES = [
    ("h1", "authored", "a1"),
    ("h1", "authored", "a1"),
    ("h1", "authored", "a2"),
    ("h2", "authored", "a2"),
    ("h2", "authored", "a3"),
    ("a1", "cites", "a3"),
    ("j1", "contains", "a1"),
    ("j1", "contains", "a3"),
    ("j1", "category", "s1"),
]

FIXTURE1_SIGNATURES = {
    "authored": ("H", "A"),
    "cites": ("A", "A"),
    "contains": ("J", "A"),
    "category": ("J", "S"),
}


@pytest.fixture(scope="session")
def fixture1():
    return ingest_triples(FIXTURE1_TRIPLES)


@pytest.fixture(scope="session")
def fixture1_signed():
    return ingest_triples(FIXTURE1_TRIPLES).with_signatures(FIXTURE1_SIGNATURES)


@pytest.fixture
def rng():
    return np.random.default_rng(20312)
