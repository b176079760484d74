import math

import pytest

from medianlab.harness import INSTANCE_KINDS, generate_instance


def corpus(sizes, kinds=INSTANCE_KINDS, seeds=(0,)):
    """Deterministic list of (kind, n, seed, table) tuples."""
    out = []
    for kind in kinds:
        for n in sizes:
            for seed in seeds:
                out.append((kind, n, seed, generate_instance(kind, n, seed)))
    return out


def subset_size_grid(n):
    """The four subset sizes every transfer-style check sweeps."""
    return sorted({1, math.isqrt(n - 1) + 1 if n > 1 else 1, -(-n // 2), n})


@pytest.fixture(scope="session")
def small_corpus():
    return corpus(sizes=(4, 5, 7, 9, 12, 16), seeds=(0, 1))
