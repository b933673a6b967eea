import json
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from logging import getLogger
from typing import Any, Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from .errors import (
    DimensionError,
    InvalidOrientation,
    InvalidParameters,
    SearchSpaceTooLarge,
    TooManyVertices,
)
from .flow import FlowNetwork

MAX_PARTITION_VERTICES = 12
MAX_ORIENTATION_EDGES = 24
MAX_GZP_MULTIPLICITY = 20

logger = getLogger("rs_list_decoding.hypergraph")


@dataclass(frozen=True)
class Hypergraph:
    """Labeled hyperedges ``e_1..e_n`` over the vertex set ``{1..t}``; empty edges allowed."""

    t: int
    edges: Tuple[FrozenSet[int], ...]

    def __post_init__(self) -> None:
        edges = tuple(frozenset(int(v) for v in e) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        if self.t < 1:
            raise InvalidParameters(f"a hypergraph needs at least one vertex, got t={self.t}")
        for i, e in enumerate(edges, start=1):
            if any(v < 1 or v > self.t for v in e):
                raise InvalidParameters(f"edge {i} = {sorted(e)} is not a subset of [1..{self.t}]")

    @property
    def n(self) -> int:
        return len(self.edges)

    def edge(self, i: int) -> FrozenSet[int]:
        """Edge by its 1-based label."""
        return self.edges[i - 1]

    def restrict(self, vertices: Iterable[int]) -> "Hypergraph":
        """Intersect every edge with ``vertices`` and relabel them 1..|J| in increasing order."""
        kept = sorted(set(vertices))
        relabel = {v: i for i, v in enumerate(kept, start=1)}
        return Hypergraph(len(kept), tuple(frozenset(relabel[v] for v in e if v in relabel) for e in self.edges))

    def without_edges(self, labels: Iterable[int]) -> "Hypergraph":
        removed = set(labels)
        return Hypergraph(self.t, tuple(e for i, e in enumerate(self.edges, start=1) if i not in removed))

    def to_dict(self) -> Dict[str, Any]:
        return {"t": self.t, "edges": [sorted(e) for e in self.edges]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, obj: Dict[str, Any]) -> "Hypergraph":
        try:
            return cls(int(obj["t"]), tuple(frozenset(e) for e in obj["edges"]))
        except (KeyError, TypeError) as e:
            raise InvalidParameters(f"malformed hypergraph JSON, reason: {e.__class__.__name__} {e}")

    @classmethod
    def from_json(cls, text: str) -> "Hypergraph":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class Partition:
    t: int
    blocks: Tuple[FrozenSet[int], ...]

    def __post_init__(self) -> None:
        blocks = tuple(frozenset(b) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        seen: set = set()
        for b in blocks:
            if not b:
                raise InvalidParameters("partition blocks must be nonempty")
            if seen & b:
                raise InvalidParameters("partition blocks must be disjoint")
            seen |= b
        if seen != set(range(1, self.t + 1)):
            raise InvalidParameters(f"partition blocks must cover [1..{self.t}]")

    def __len__(self) -> int:
        return len(self.blocks)

    def block_count(self, edge: FrozenSet[int]) -> int:
        """|P(e)|: number of blocks that ``edge`` meets."""
        return sum(1 for b in self.blocks if b & edge)

    def to_dict(self) -> Dict[str, Any]:
        return {"t": self.t, "blocks": [sorted(b) for b in self.blocks]}


@dataclass(frozen=True)
class Orientation:
    """``heads[i-1]`` is the head of edge i (None exactly for empty edges)."""

    heads: Tuple[Optional[int], ...]
    root: int

    def head(self, i: int) -> Optional[int]:
        return self.heads[i - 1]

    def in_degree(self, vertex: int) -> int:
        return sum(1 for h in self.heads if h == vertex)

    def to_dict(self) -> Dict[str, Any]:
        return {"root": self.root, "heads": list(self.heads)}


@dataclass(frozen=True)
class ZeroPattern:
    """Multiset of subsets of ``{1..n}`` given as (set, multiplicity) pairs."""

    n: int
    k: int
    sets: Tuple[Tuple[FrozenSet[int], int], ...]

    def __post_init__(self) -> None:
        sets = tuple((frozenset(s), int(m)) for s, m in self.sets)
        object.__setattr__(self, "sets", sets)
        for s, m in sets:
            if m < 0:
                raise InvalidParameters(f"negative multiplicity {m}")
            if any(i < 1 or i > self.n for i in s):
                raise InvalidParameters(f"zero set {sorted(s)} is not a subset of [1..{self.n}]")

    @property
    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.sets)

    def expanded(self) -> List[FrozenSet[int]]:
        """One entry per copy, in pair order."""
        return [s for s, m in self.sets for _ in range(m)]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "k": self.k,
            "sets": [{"set": sorted(s), "multiplicity": m} for s, m in self.sets],
        }

    @classmethod
    def from_dict(cls, obj: Dict[str, Any]) -> "ZeroPattern":
        try:
            return cls(int(obj["n"]), int(obj["k"]), tuple((frozenset(e["set"]), int(e["multiplicity"])) for e in obj["sets"]))
        except (KeyError, TypeError) as e:
            raise InvalidParameters(f"malformed zero pattern JSON, reason: {e.__class__.__name__} {e}")


@dataclass(frozen=True)
class ConnectivityResult:
    connected: bool
    witness: Optional[Partition] = None

    def __bool__(self) -> bool:
        return self.connected


def agreement_hypergraph(y: Sequence[int], codewords: Sequence[Sequence[int]]) -> Hypergraph:
    """Edge i collects the codewords (1-based) that agree with ``y`` at coordinate i."""
    n = len(y)
    for j, c in enumerate(codewords, start=1):
        if len(c) != n:
            raise DimensionError(f"codeword {j} has length {len(c)}, received word has length {n}")
    edges = tuple(frozenset(j for j, c in enumerate(codewords, start=1) if c[i] == y[i]) for i in range(n))
    return Hypergraph(max(len(codewords), 1), edges)


def edge_weight(H: Hypergraph) -> Tuple[List[int], int]:
    weights = [max(0, len(e) - 1) for e in H.edges]
    return weights, sum(weights)


def restricted_growth_strings(t: int) -> Iterator[Tuple[int, ...]]:
    """Every set partition of t items as a restricted-growth string, a[0] = 0."""
    a = [0] * t

    def extend(i: int, top: int) -> Iterator[Tuple[int, ...]]:
        if i == t:
            yield tuple(a)
            return
        for v in range(top + 2):
            a[i] = v
            yield from extend(i + 1, max(top, v))

    if t == 0:
        yield ()
        return
    yield from extend(1, 0)


def _partition_from_rgs(rgs: Sequence[int]) -> Partition:
    blocks: Dict[int, set] = {}
    for v, b in enumerate(rgs, start=1):
        blocks.setdefault(b, set()).add(v)
    return Partition(len(rgs), tuple(frozenset(blocks[b]) for b in sorted(blocks)))


def is_weakly_partition_connected(H: Hypergraph, k: int) -> ConnectivityResult:
    """Check ``sum_e max(|P(e)| - 1, 0) >= k(|P| - 1)`` over every partition P of [t].

    Args:
        H (Hypergraph): The hypergraph.
        k (int): Connectivity parameter.

    Returns:
        ConnectivityResult: truthy when H is k-wpc; otherwise carries a violating partition.
    """
    t = H.t
    if t > MAX_PARTITION_VERTICES:
        raise TooManyVertices(f"{t=} exceeds the partition enumeration cap {MAX_PARTITION_VERTICES}")
    if k <= 0 or t == 1:
        return ConnectivityResult(True)
    types = Counter(e for e in H.edges if len(e) >= 2)
    grouped = [(tuple(v - 1 for v in e), m) for e, m in types.items()]
    for rgs in restricted_growth_strings(t):
        parts = max(rgs) + 1
        if parts == 1:
            continue
        total = sum(m * (len({rgs[v] for v in members}) - 1) for members, m in grouped)
        if total < k * (parts - 1):
            return ConnectivityResult(False, _partition_from_rgs(rgs))
    return ConnectivityResult(True)


def dense_subset(H: Hypergraph, k: int) -> Optional[Tuple[int, ...]]:
    """Smallest (then lexicographically first) J, |J| >= 2, with ``sum_e wt(e & J) >= (|J|-1)k``.

    A smallest such J is inclusion-minimal, so the restriction of H to J is k-wpc.
    """
    for size in range(2, H.t + 1):
        need = (size - 1) * k
        for J in combinations(range(1, H.t + 1), size):
            chosen = frozenset(J)
            if sum(max(0, len(e & chosen) - 1) for e in H.edges) >= need:
                return J
    return None


def extract_minimal_subset(
    y: Sequence[int], codewords: Sequence[Sequence[int]], k: int
) -> Optional[Tuple[int, ...]]:
    """Inclusion-minimal J of codeword positions whose agreement hypergraph is k-wpc.

    Args:
        y (Sequence[int]): Received word.
        codewords (Sequence[Sequence[int]]): Pairwise-distinct codewords of one code.
        k (int): Code dimension.

    Returns:
        Tuple[int, ...] | None: J as sorted 1-based positions, or None when no subset passes the weight test.
    """
    if len({tuple(c) for c in codewords}) != len(codewords):
        raise InvalidParameters("codewords must be pairwise distinct")
    return dense_subset(agreement_hypergraph(y, codewords), k)


def _incidence_network(H: Hypergraph, heads: Sequence[Optional[int]]) -> FlowNetwork:
    """Vertices 0..t-1; each hyperedge becomes an in/out node pair joined by a unit arc.

    An edge with ``heads[i] is None`` is left undirected: every member may enter and leave
    it, which relaxes every possible choice of its head.
    """
    network = FlowNetwork(H.t)
    for e, head in zip(H.edges, heads):
        if len(e) < 2:
            continue
        e_in, e_out = network.add_vertex(), network.add_vertex()
        network.add_edge(e_in, e_out, 1)
        if head is None:
            for v in e:
                network.add_edge(v - 1, e_in, 1)
                network.add_edge(e_out, v - 1, 1)
        else:
            for v in e:
                if v != head:
                    network.add_edge(v - 1, e_in, 1)
            network.add_edge(e_out, head - 1, 1)
    return network


def _rooted_connected(H: Hypergraph, heads: Sequence[Optional[int]], root: int, k: int) -> bool:
    network = _incidence_network(H, heads)
    return all(network.max_flow(u - 1, root - 1, limit=k) >= k for u in range(1, H.t + 1) if u != root)


def verify_orientation(H: Hypergraph, o: Orientation, k: int) -> bool:
    """True iff every u != root sends k edge-disjoint directed hyperpaths to the root."""
    if not 1 <= o.root <= H.t or len(o.heads) != H.n:
        return False
    for e, head in zip(H.edges, o.heads):
        if (head is None) != (not e) or (head is not None and head not in e):
            return False
    if k <= 0:
        return True
    return _rooted_connected(H, o.heads, o.root, k)


def find_orientation(H: Hypergraph, k: int) -> Optional[Orientation]:
    """Search head assignments, pruning with the relaxed flow bound; try every root.

    Args:
        H (Hypergraph): The hypergraph, at most 24 edges.
        k (int): Required number of edge-disjoint paths to the root.

    Returns:
        Orientation | None: An orientation that passes :func:`verify_orientation`, or None.
    """
    if H.n > MAX_ORIENTATION_EDGES:
        raise SearchSpaceTooLarge(f"{H.n} edges exceed the orientation search bound {MAX_ORIENTATION_EDGES}")
    logger.debug(f"find_orientation(t={H.t}, n={H.n}, {k=})")
    base: List[Optional[int]] = [min(e) if len(e) == 1 else None for e in H.edges]
    branch = [i for i, e in enumerate(H.edges) if len(e) >= 2]
    if k <= 0 or H.t == 1:
        return Orientation(tuple(min(e) if e else None for e in H.edges), 1)
    if H.t <= MAX_PARTITION_VERTICES and not is_weakly_partition_connected(H, k):
        # rooted k-connected orientations exist exactly for k-wpc hypergraphs
        return None

    def search(heads: List[Optional[int]], root: int, depth: int) -> bool:
        if not _rooted_connected(H, heads, root, k):
            return False
        if depth == len(branch):
            return True
        i = branch[depth]
        for h in sorted(H.edges[i], key=lambda v: (v != root, v)):
            heads[i] = h
            if search(heads, root, depth + 1):
                return True
        heads[i] = None
        return False

    for root in range(1, H.t + 1):
        heads = list(base)
        if search(heads, root, 0):
            return Orientation(tuple(heads), root)
    return None


def gzp_from_orientation(H: Hypergraph, o: Orientation, k: int) -> ZeroPattern:
    """Zero pattern with S_j = {i : j not in e_i} taken delta_j times.

    delta_j is the in-degree of j, minus k at the root. Empty edges lie in every S_j; they
    are accounted for by one copy of the empty set each, so the total stays n - k.
    A root with in-degree below k, possible only for t = 1, raises InvalidOrientation.
    """
    if not verify_orientation(H, o, k):
        raise InvalidOrientation(f"orientation rooted at {o.root} is not rooted {k}-connected")
    sets = []
    for j in range(1, H.t + 1):
        delta = o.in_degree(j) - (k if j == o.root else 0)
        if delta < 0:
            raise InvalidOrientation(f"root {j} has in-degree {o.in_degree(j)}, fewer than k={k}")
        if delta > 0:
            sets.append((frozenset(i for i, e in enumerate(H.edges, start=1) if j not in e), delta))
    empty = sum(1 for e in H.edges if not e)
    if empty:
        sets.append((frozenset(), empty))
    return ZeroPattern(H.n, k, tuple(sets))


def verify_gzp(zp: ZeroPattern) -> bool:
    """Check ``|intersection of S_l over K| <= n - k - |K|`` for every nonempty sub-multiset K.

    For a fixed support of distinct sets, the tightest K takes every copy, so it suffices
    to range over supports with their full multiplicities.
    """
    total = zp.total_multiplicity
    if total > MAX_GZP_MULTIPLICITY:
        raise SearchSpaceTooLarge(f"total multiplicity {total} exceeds {MAX_GZP_MULTIPLICITY}")
    if total > zp.n - zp.k:
        return False
    merged: Counter = Counter()
    for s, m in zp.sets:
        if m:
            merged[sum(1 << (i - 1) for i in s)] += m
    distinct = list(merged.items())
    full = (1 << zp.n) - 1
    for mask in range(1, 1 << len(distinct)):
        inter, size = full, 0
        for b, (bits, m) in enumerate(distinct):
            if mask >> b & 1:
                inter &= bits
                size += m
        if bin(inter).count("1") > zp.n - zp.k - size:
            return False
    return True


__all__ = [
    "MAX_PARTITION_VERTICES",
    "MAX_ORIENTATION_EDGES",
    "MAX_GZP_MULTIPLICITY",
    "Hypergraph",
    "Partition",
    "Orientation",
    "ZeroPattern",
    "ConnectivityResult",
    "agreement_hypergraph",
    "edge_weight",
    "restricted_growth_strings",
    "is_weakly_partition_connected",
    "dense_subset",
    "extract_minimal_subset",
    "verify_orientation",
    "find_orientation",
    "gzp_from_orientation",
    "verify_gzp",
]
