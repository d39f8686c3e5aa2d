"""Number partitioning instances: generation, evaluation, exact oracle.

An instance is a multiset of positive integers to split into two subsets
minimizing the absolute difference of subset sums (the delta). Instances
built by :func:`generate_perfect` admit a zero-delta partition by
construction, which gives every experiment a known ground truth.
"""

import json
from dataclasses import dataclass

import numpy as np

from .errors import ResourceLimitError

# sum of values such that total**2 still fits in a signed 64-bit integer
_MAX_TOTAL = 3_037_000_499

DEFAULT_ORACLE_CAP = 10_000_000


@dataclass(frozen=True)
class NppInstance:
    """A number partitioning problem: positive integer values plus metadata."""

    values: tuple
    seed: int
    size_class: int

    def __post_init__(self):
        values = tuple(int(v) for v in self.values)
        object.__setattr__(self, "values", values)
        if len(values) == 0:
            raise ValueError("instance needs at least one value")
        if len(values) != self.size_class:
            raise ValueError(
                f"size_class {self.size_class} != number of values {len(values)}")
        if any(v < 1 for v in values):
            raise ValueError("all values must be >= 1")
        if sum(values) > _MAX_TOTAL:
            raise ValueError(
                f"sum of values exceeds {_MAX_TOTAL}; squared total must fit in int64")

    @property
    def n(self):
        return len(self.values)

    @property
    def total(self):
        """Sum of all values, the constant c of the QUBO construction."""
        return sum(self.values)

    def as_array(self):
        return np.asarray(self.values, dtype=np.int64)

    def to_json(self):
        return json.dumps(
            {"values": list(self.values), "seed": int(self.seed),
             "size_class": int(self.size_class)},
            sort_keys=True)

    @classmethod
    def from_json(cls, text):
        obj = json.loads(text)
        try:
            return cls(values=tuple(obj["values"]), seed=int(obj["seed"]),
                       size_class=int(obj["size_class"]))
        except KeyError as exc:
            raise ValueError(f"instance file missing key: {exc}") from exc

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(self.to_json())
            fh.write("\n")

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_json(fh.read())


def generate_perfect(n, max_value, seed):
    """Build an instance that is guaranteed to admit a zero-delta partition.

    Half the values (the larger half for odd n) are drawn uniformly from
    [1, max_value]; the remaining values are a random composition of the same
    total into positive parts, so the two halves balance exactly. The
    combined list is shuffled. Deterministic in (n, max_value, seed).

    Values in the composed half may exceed max_value.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if max_value < 1:
        raise ValueError("max_value must be >= 1")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    k_drawn = (n + 1) // 2
    k_composed = n - k_drawn
    drawn = rng.integers(1, max_value + 1, size=k_drawn)
    total = int(drawn.sum())
    if total < k_composed:
        # cannot happen for k_drawn >= k_composed with values >= 1
        raise ValueError("drawn half too small to compose the other half")
    if k_composed == 1:
        parts = np.array([total], dtype=np.int64)
    else:
        cuts = np.sort(rng.choice(total - 1, size=k_composed - 1, replace=False) + 1)
        parts = np.diff(np.concatenate(([0], cuts, [total])))
    values = np.concatenate((drawn, parts))
    values = values[rng.permutation(n)]
    return NppInstance(values=tuple(int(v) for v in values), seed=int(seed),
                       size_class=n)


def _as_partition(instance, membership):
    x = np.asarray(membership)
    if x.shape != (instance.n,):
        raise ValueError(
            f"partition length {x.shape} does not match instance size {instance.n}")
    if not np.isin(x, (0, 1)).all():
        raise ValueError("partition entries must be 0 or 1")
    return x.astype(np.int64)


def delta(instance, membership):
    """Absolute difference of the two subset sums under the given partition.

    membership[i] = 1 places value i in subset A.
    """
    x = _as_partition(instance, membership)
    a = instance.as_array()
    side_a = int(a @ x)
    return abs(2 * side_a - instance.total)


def complement(membership):
    """The partition with every element moved to the other subset."""
    x = np.asarray(membership, dtype=np.int64)
    return 1 - x


def optimal_delta(instance, cap=DEFAULT_ORACLE_CAP):
    """Exact minimum delta over all 2**n partitions.

    Pseudo-polynomial subset-sum reachability: a boolean table over sums
    0..total marks every achievable subset sum s, and the answer is
    min |total - 2s|. Requires total <= cap (default 10**7).
    """
    total = instance.total
    if total > cap:
        raise ResourceLimitError(
            f"sum of values {total} exceeds oracle cap {cap}")
    reach = np.zeros(total + 1, dtype=bool)
    reach[0] = True
    for a in instance.values:
        # rhs is evaluated before assignment, so each value is used once
        reach[a:] = reach[a:] | reach[:-a]
    sums = np.flatnonzero(reach)
    return int(np.min(np.abs(total - 2 * sums)))


def histogram(instance, bins):
    """Equal-width histogram of the instance values.

    Returns a list of (bin_lower_edge, count) pairs; counts sum to n. A
    degenerate range (all values equal) is widened upward by one so the
    first bin still starts at the minimum.
    """
    if bins < 1:
        raise ValueError("bins must be >= 1")
    values = instance.as_array()
    lo, hi = int(values.min()), int(values.max())
    if lo == hi:
        hi = lo + 1
    counts, edges = np.histogram(values, bins=bins, range=(lo, hi))
    return [(float(edges[i]), int(counts[i])) for i in range(bins)]
