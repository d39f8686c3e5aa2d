"""QUBO and Ising representations of the partitioning problem.

The central identity: for an instance with values a_i and total c, the QUBO
with Q_ii = 4*a_i*(a_i - c), Q_ij = 8*a_i*a_j (i < j) and constant offset
c**2 satisfies energy(x) == delta(x)**2 for every binary assignment x.
NPP-derived matrices are kept in exact int64 arithmetic; the general types
accept floats (needed for embedded models with fractional chain strengths).
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ResourceLimitError

_INT64_MAX = np.iinfo(np.int64).max


@dataclass(frozen=True)
class QuboMatrix:
    """Upper-triangular coefficient matrix plus a constant energy offset."""

    q: np.ndarray
    offset: float = 0

    def __post_init__(self):
        q = np.asarray(self.q)
        if q.ndim != 2 or q.shape[0] != q.shape[1]:
            raise ValueError("q must be a square matrix")
        if np.any(np.tril(q, k=-1) != 0):
            raise ValueError("q must have a zero lower triangle")
        q = q.copy()
        q.setflags(write=False)
        object.__setattr__(self, "q", q)

    @property
    def n(self):
        return self.q.shape[0]

    def entries(self):
        """Nonzero (i, j, value) triples with i <= j."""
        ii, jj = np.nonzero(self.q)
        return [(int(i), int(j), self.q[i, j].item()) for i, j in zip(ii, jj)]

    def symmetric_offdiag(self):
        """Dense symmetric matrix of the off-diagonal couplings."""
        w = self.q + self.q.T
        np.fill_diagonal(w, 0)
        return w

    def to_json(self):
        offset = self.offset.item() if isinstance(self.offset, np.generic) else self.offset
        return json.dumps({"n": self.n, "entries": self.entries(),
                           "offset": offset}, sort_keys=True)

    @classmethod
    def from_json(cls, text):
        obj = json.loads(text)
        n = int(obj["n"])
        entries = obj["entries"]
        values = [v for _, _, v in entries]
        integral = all(isinstance(v, int) for v in values) and \
            isinstance(obj["offset"], int)
        q = np.zeros((n, n), dtype=np.int64 if integral else np.float64)
        for i, j, v in entries:
            if i > j:
                raise ValueError(f"entry ({i}, {j}) below the diagonal")
            q[i, j] = v
        return cls(q=q, offset=obj["offset"])

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(self.to_json())
            fh.write("\n")

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_json(fh.read())


@dataclass(frozen=True)
class IsingModel:
    """Per-spin weights h and couplers over an arbitrary interaction graph."""

    h: np.ndarray
    couplers: dict = field(default_factory=dict)
    offset: float = 0

    def __post_init__(self):
        h = np.asarray(self.h, dtype=np.float64).copy()
        h.setflags(write=False)
        object.__setattr__(self, "h", h)
        couplers = {}
        for (i, j), v in self.couplers.items():
            i, j = int(i), int(j)
            if i >= j:
                raise ValueError(f"coupler key ({i}, {j}) must satisfy i < j")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"coupler key ({i}, {j}) out of range")
            couplers[(i, j)] = float(v)
        object.__setattr__(self, "couplers", couplers)

    @property
    def n(self):
        return self.h.shape[0]

    def coupler_matrix(self):
        """Dense symmetric coupler matrix with zero diagonal."""
        j = np.zeros((self.n, self.n))
        for (a, b), v in self.couplers.items():
            j[a, b] = v
            j[b, a] = v
        return j

    def max_abs_coefficient(self):
        hmax = float(np.max(np.abs(self.h))) if self.n else 0.0
        cmax = max((abs(v) for v in self.couplers.values()), default=0.0)
        return max(hmax, cmax)


def as_binary_vector(x, n=None):
    x = np.asarray(x)
    if x.ndim != 1 or (n is not None and x.shape[0] != n):
        raise ValueError(f"expected a length-{n} vector, got shape {x.shape}")
    if not np.isin(x, (0, 1)).all():
        raise ValueError("binary assignment entries must be 0 or 1")
    return x.astype(np.int64)


def as_spin_vector(s, n=None):
    s = np.asarray(s)
    if s.ndim != 1 or (n is not None and s.shape[0] != n):
        raise ValueError(f"expected a length-{n} vector, got shape {s.shape}")
    if not np.isin(s, (-1, 1)).all():
        raise ValueError("spin assignment entries must be -1 or +1")
    return s.astype(np.int64)


def spins_to_binary(s):
    """Elementwise map -1 -> 0, +1 -> 1."""
    s = as_spin_vector(s)
    return (s + 1) // 2


def binary_to_spins(x):
    """Elementwise map 0 -> -1, 1 -> +1."""
    x = as_binary_vector(x)
    return 2 * x - 1


def build_qubo(instance):
    """QUBO of an NPP instance, with energy(x) == delta(x)**2 exactly.

    The offset c**2 is kept so the identity holds without normalization.
    """
    a = instance.as_array()
    c = instance.total
    if c > 3_037_000_499 or 8 * int(a.max()) ** 2 > _INT64_MAX:
        raise ResourceLimitError("QUBO coefficients would overflow int64")
    q = 8 * np.triu(np.outer(a, a), k=1)
    np.fill_diagonal(q, 4 * a * (a - c))
    return QuboMatrix(q=q, offset=c * c)


def qubo_energy(qubo, x):
    """sum_{i<=j} Q_ij x_i x_j + offset; exact for integer matrices."""
    x = as_binary_vector(x, qubo.n)
    e = x @ (qubo.q @ x) + qubo.offset
    return e.item() if isinstance(e, np.generic) else e


def ising_energy(model, s):
    """sum_i h_i s_i + sum_{i<j} c_ij s_i s_j + offset."""
    s = as_spin_vector(s, model.n)
    e = float(model.h @ s)
    for (i, j), v in model.couplers.items():
        e += v * s[i] * s[j]
    return float(e + model.offset)


def ising_from_qubo(qubo):
    """Energy-preserving Ising form under x = (s + 1) / 2."""
    q = qubo.q.astype(np.float64)
    diag = np.diag(q)
    w = q + q.T
    np.fill_diagonal(w, 0)
    h = diag / 2 + w.sum(axis=1) / 4
    couplers = {}
    ii, jj = np.nonzero(np.triu(q, k=1))
    for i, j in zip(ii, jj):
        couplers[(int(i), int(j))] = q[i, j] / 4
    offset = qubo.offset + diag.sum() / 2 + np.triu(q, k=1).sum() / 4
    return IsingModel(h=h, couplers=couplers, offset=offset)


def qubo_from_ising(model):
    """Energy-preserving QUBO form under s = 2x - 1."""
    n = model.n
    q = np.zeros((n, n))
    lin = 2 * model.h.copy()
    offset = model.offset - model.h.sum()
    for (i, j), v in model.couplers.items():
        q[i, j] += 4 * v
        lin[i] -= 2 * v
        lin[j] -= 2 * v
        offset += v
    np.fill_diagonal(q, lin)
    return QuboMatrix(q=q, offset=offset)


def assignment_from_spins(s):
    """Partition membership vector corresponding to a spin assignment."""
    return spins_to_binary(s)


def brute_force_minimum(qubo, max_n=26):
    """Exact minimizer by vectorized enumeration of all 2**n assignments.

    Ties resolve to the lowest assignment index (x enumerated with variable 0
    as the least significant bit). Enumeration runs in blocks of 2**16
    assignments to bound memory; refuses n beyond max_n.
    """
    n = qubo.n
    if n > max_n:
        raise ResourceLimitError(f"enumeration over 2**{n} assignments refused")
    total = 1 << n
    block = min(total, 1 << 16)
    bits = np.arange(max(n, 1))
    best_e = None
    best_index = 0
    for start in range(0, total, block):
        idx = np.arange(start, min(start + block, total), dtype=np.uint32)
        x = ((idx[:, None] >> bits[:n]) & 1).astype(qubo.q.dtype)
        energies = ((x @ qubo.q) * x).sum(axis=1) + qubo.offset
        k = int(np.argmin(energies))
        if best_e is None or energies[k] < best_e:
            best_e = energies[k]
            best_index = start + k
    x_best = np.array([(best_index >> i) & 1 for i in range(n)], dtype=np.int64)
    return x_best, best_e.item() if isinstance(best_e, np.generic) else best_e
