"""Shared test oracles, independent of the library's own algorithms."""

import itertools

import numpy as np
import pytest

from subqubo import NppInstance, qubo_energy


def enumerate_min_delta(values):
    """Minimum delta by doubling enumeration of all subset sums."""
    sums = np.zeros(1, dtype=np.int64)
    for a in values:
        sums = np.concatenate((sums, sums + a))
    total = int(sum(values))
    return int(np.min(np.abs(total - 2 * sums)))


def enumerate_deltas(values):
    """Delta of every one of the 2**n partitions, via itertools."""
    total = sum(values)
    out = []
    for bits in itertools.product((0, 1), repeat=len(values)):
        side = sum(v for v, b in zip(values, bits) if b)
        out.append(abs(2 * side - total))
    return out


def enumerate_qubo_min(qubo):
    """Exact QUBO minimum by evaluating every assignment one by one.

    Assignments are ordered with variable 0 as the least significant bit,
    matching the library's documented tie rule.
    """
    best_e = None
    best_x = None
    for m in range(2 ** qubo.n):
        x = np.array([(m >> i) & 1 for i in range(qubo.n)])
        e = qubo_energy(qubo, x)
        if best_e is None or e < best_e:
            best_e = e
            best_x = x
    return best_x, best_e


def random_instance(rng, n=None, max_value=50):
    """Arbitrary (not necessarily perfect) instance for oracle checks."""
    if n is None:
        n = int(rng.integers(2, 13))
    values = tuple(int(v) for v in rng.integers(1, max_value + 1, size=n))
    return NppInstance(values=values, seed=0, size_class=n)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
