import functools
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from omegacomm import corpus  # noqa: E402


@functools.lru_cache(maxsize=None)
def built(entry_id):
    return corpus.get(entry_id)


def small_entries(limit, kinds=None):
    out = []
    for e in corpus.build_corpus():
        A, _ = built(e.id)
        if A.n <= limit and (kinds is None or e.kind in kinds):
            out.append(e.id)
    return out


@pytest.fixture
def get():
    return built
