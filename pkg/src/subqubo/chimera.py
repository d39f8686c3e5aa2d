"""Chimera target topology, deterministic clique embedding, chain decoding.

A Chimera graph C_m is an m x m grid of K_{4,4} unit cells. Qubit ids are
linear: id = 8 * (m * row + col) + 4 * side + k with side 0 the vertical
shore (couples to vertically adjacent cells) and side 1 the horizontal
shore. The clique embedder uses the classic triangle layout: variable 4c+k
bends an L-shaped chain at diagonal cell (c, c), giving chains of at most
m+1 qubits and native couplings between every pair of chains. Validity is
checked by the validator rather than asserted analytically.
"""

import csv
import json
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError
from .model import IsingModel, as_spin_vector


@dataclass(frozen=True)
class ChimeraGraph:
    """C_m topology: 8*m*m qubits, K_{4,4} cells, grid couplers."""

    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be >= 1")

    @property
    def n_nodes(self):
        return 8 * self.m * self.m

    def node_id(self, row, col, side, k):
        return 8 * (self.m * row + col) + 4 * side + k

    def edges(self):
        """All couplers as sorted (u, v) pairs."""
        m = self.m
        out = []
        for row in range(m):
            for col in range(m):
                for k1 in range(4):
                    v = self.node_id(row, col, 0, k1)
                    for k2 in range(4):
                        out.append((v, self.node_id(row, col, 1, k2)))
                if col + 1 < m:
                    for k in range(4):
                        out.append((self.node_id(row, col, 1, k),
                                    self.node_id(row, col + 1, 1, k)))
                if row + 1 < m:
                    for k in range(4):
                        out.append((self.node_id(row, col, 0, k),
                                    self.node_id(row + 1, col, 0, k)))
        return [(min(u, v), max(u, v)) for u, v in out]

    def edge_set(self):
        return set(self.edges())

    def adjacency(self):
        adj = {v: set() for v in range(self.n_nodes)}
        for u, v in self.edges():
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def save_edges_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["u", "v"])
            writer.writerows(self.edges())


def chimera_graph(m):
    return ChimeraGraph(m=int(m))


@dataclass(frozen=True)
class Embedding:
    """Map from logical variable to a chain of physical qubits."""

    chains: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "chains",
            tuple(frozenset(int(q) for q in chain) for chain in self.chains))

    @property
    def n_logical(self):
        return len(self.chains)

    def all_qubits(self):
        out = set()
        for chain in self.chains:
            out |= chain
        return out

    def to_json(self):
        return json.dumps({"chains": [sorted(c) for c in self.chains]})

    @classmethod
    def from_json(cls, text):
        obj = json.loads(text)
        return cls(chains=tuple(obj["chains"]))

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(self.to_json())
            fh.write("\n")

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_json(fh.read())


def clique_embedding(n_logical, target):
    """Deterministic embedding of the complete graph K_n into C_m.

    Capacity is 4m variables. Variable 4c+k occupies the horizontal qubits
    of row c up to the diagonal and the vertical qubits of column c below
    it, truncated to the blocks actually in use, so chains have at most
    min(m, ceil(n/4)) + 1 qubits.
    """
    if n_logical < 1:
        raise ValueError("n_logical must be >= 1")
    cap = 4 * target.m
    if n_logical > cap:
        raise CapacityError(
            f"triangle scheme embeds at most {cap} logical variables in "
            f"C_{target.m}; got {n_logical}", max_supported=cap)
    if n_logical == 1:
        return Embedding(chains=((target.node_id(0, 0, 0, 0),),))
    blocks = (n_logical + 3) // 4
    chains = []
    for v in range(n_logical):
        c, k = divmod(v, 4)
        chain = [target.node_id(c, col, 1, k) for col in range(c + 1)]
        chain += [target.node_id(row, c, 0, k) for row in range(c, blocks)]
        chains.append(chain)
    return Embedding(chains=tuple(chains))


@dataclass
class ValidationReport:
    """Outcome of the embedding checks, one violation string per failure."""

    disjoint: bool
    connected: bool
    covers_edges: bool
    violations: list

    @property
    def ok(self):
        return self.disjoint and self.connected and self.covers_edges


def validate_embedding(embedding, logical_edges, target):
    """Check disjointness, per-chain connectivity and logical-edge coverage."""
    violations = []
    adj = target.adjacency()

    seen = {}
    disjoint = True
    for var, chain in enumerate(embedding.chains):
        if not chain:
            disjoint = False
            violations.append(f"chain {var} is empty")
        for q in chain:
            if q not in adj:
                disjoint = False
                violations.append(f"chain {var} uses unknown qubit {q}")
            elif q in seen:
                disjoint = False
                violations.append(
                    f"qubit {q} shared by chains {seen[q]} and {var}")
            else:
                seen[q] = var

    connected = True
    for var, chain in enumerate(embedding.chains):
        if not chain or not chain <= set(adj):
            continue
        stack = [next(iter(chain))]
        reached = {stack[0]}
        while stack:
            q = stack.pop()
            for nb in adj[q]:
                if nb in chain and nb not in reached:
                    reached.add(nb)
                    stack.append(nb)
        if reached != chain:
            connected = False
            violations.append(f"chain {var} is not connected: {sorted(chain)}")

    covers = True
    edge_set = target.edge_set()
    for i, j in logical_edges:
        if i == j or not (0 <= i < embedding.n_logical and
                          0 <= j < embedding.n_logical):
            covers = False
            violations.append(f"logical edge ({i}, {j}) out of range")
            continue
        found = any((min(p, q), max(p, q)) in edge_set
                    for p in embedding.chains[i] for q in embedding.chains[j])
        if not found:
            covers = False
            violations.append(f"no physical edge between chains {i} and {j}")

    return ValidationReport(disjoint=disjoint, connected=connected,
                            covers_edges=covers, violations=violations)


def _chain_edges(chain, adj):
    return [(u, v) for u in chain for v in adj[u] if v in chain and u < v]


def embed_ising(model, embedding, chain_strength, target):
    """Physical Ising model over the target graph realizing the logical one.

    Logical weights split evenly across chain qubits; each logical coupler
    sits on the single lowest-id physical edge between the two chains; every
    intra-chain edge gets the ferromagnetic coupler -chain_strength. For a
    chain-consistent state the physical energy equals the logical energy
    minus chain_strength times the total number of intra-chain edges.
    """
    if chain_strength < 0:
        raise ValueError("chain_strength must be >= 0")
    if chain_strength == 0:
        warnings.warn("chain_strength 0 leaves chains unconstrained")
    logical_edges = list(model.couplers)
    report = validate_embedding(embedding, logical_edges, target)
    if not report.ok:
        raise ValueError(
            "invalid embedding: " + "; ".join(report.violations))

    n_phys = target.n_nodes
    h = np.zeros(n_phys)
    couplers = {}
    adj = target.adjacency()
    edge_set = target.edge_set()

    for var, chain in enumerate(embedding.chains):
        share = model.h[var] / len(chain)
        for q in chain:
            h[q] += share
        if chain_strength > 0:
            for u, v in _chain_edges(chain, adj):
                couplers[(u, v)] = couplers.get((u, v), 0.0) - chain_strength

    for (i, j), value in model.couplers.items():
        pairs = sorted((min(p, q), max(p, q))
                       for p in embedding.chains[i] for q in embedding.chains[j]
                       if (min(p, q), max(p, q)) in edge_set)
        u, v = pairs[0]
        couplers[(u, v)] = couplers.get((u, v), 0.0) + value

    return IsingModel(h=h, couplers=couplers, offset=model.offset)


def chain_edge_count(embedding, target):
    """Total number of intra-chain physical edges across all chains."""
    adj = target.adjacency()
    return sum(len(_chain_edges(chain, adj)) for chain in embedding.chains)


def unembed(physical, embedding):
    """Majority-vote decoding of a physical spin assignment.

    Ties resolve to the spin of the lowest-id qubit in the chain.
    """
    s = as_spin_vector(physical)
    needed = embedding.all_qubits()
    if needed and max(needed) >= s.shape[0]:
        raise ValueError("physical assignment does not cover all chained qubits")
    logical = np.empty(embedding.n_logical, dtype=np.int64)
    for var, chain in enumerate(embedding.chains):
        members = sorted(chain)
        vote = int(s[members].sum())
        if vote > 0:
            logical[var] = 1
        elif vote < 0:
            logical[var] = -1
        else:
            logical[var] = s[members[0]]
    return logical


def broken_chain_fraction(physical, embedding):
    """Fraction of chains whose qubits disagree in the given sample."""
    s = as_spin_vector(physical)
    if embedding.n_logical == 0:
        return 0.0
    broken = sum(1 for chain in embedding.chains
                 if len({int(s[q]) for q in chain}) > 1)
    return broken / embedding.n_logical


def encode_logical(logical, embedding, n_phys):
    """Replicate each logical spin across its chain (chain-consistent state).

    Unchained qubits are set to +1.
    """
    logical = as_spin_vector(logical, embedding.n_logical)
    s = np.ones(n_phys, dtype=np.int64)
    for var, chain in enumerate(embedding.chains):
        for q in chain:
            s[q] = logical[var]
    return s
