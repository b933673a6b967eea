import math
from dataclasses import dataclass
from logging import getLogger
from math import comb
from typing import Any, Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

from . import linalg, polynomials
from .errors import DegenerateHypergraph, DimensionError, NoSubmatrix
from .finite_field import (
    PIT_SECURITY_BITS,
    FieldSpec,
    GaloisField,
    get_extension,
    get_field,
    make_rng,
    pit_extension_degree,
)
from .hypergraph import Hypergraph

EXACT_DETERMINANT_COLUMNS = 6


class RimRow(NamedTuple):
    """One row of a reduced intersection matrix.

    The row carries the Vandermonde row of ``X_edge_index`` in the block of
    ``plus_vertex`` and its negation in the block of ``minus_vertex`` (no block for t).
    """

    edge_index: int
    plus_vertex: int
    minus_vertex: Optional[int]


class SymbolicEntry(NamedTuple):
    """Unevaluated matrix entry ``(-1 if negated) * X_var ** power``."""

    var: int
    power: int
    negated: bool


Entry = Union[int, SymbolicEntry]


@dataclass(frozen=True)
class PartialAssignment:
    """Values for X_1..X_prefix; later variables stay symbolic."""

    values: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))

    @property
    def prefix(self) -> int:
        return len(self.values)

    def truncate(self, prefix: int) -> "PartialAssignment":
        return PartialAssignment(self.values[:prefix])

    def value(self, i: int) -> Optional[int]:
        return self.values[i - 1] if i <= self.prefix else None


@dataclass(frozen=True)
class SymbolicRIM:
    """Rows of a reduced intersection matrix over F_q(X_1..X_n) with (t-1)k columns.

    Also used for row subsets of such a matrix, possibly after same-type variable
    substitutions.
    """

    t: int
    k: int
    n: int
    rows: Tuple[RimRow, ...]

    @property
    def columns(self) -> int:
        return (self.t - 1) * self.k

    def __len__(self) -> int:
        return len(self.rows)

    def variables(self) -> List[int]:
        return sorted({row.edge_index for row in self.rows})

    def select(self, positions: Iterable[int]) -> "SymbolicRIM":
        """Rows at the given 0-based positions, in that order."""
        return SymbolicRIM(self.t, self.k, self.n, tuple(self.rows[p] for p in positions))

    def substitute(self, old: int, new: int) -> "SymbolicRIM":
        """Replace every copy of X_old by X_new."""
        rows = tuple(row._replace(edge_index=new) if row.edge_index == old else row for row in self.rows)
        return SymbolicRIM(self.t, self.k, self.n, rows)

    def entry(self, position: int, column: int) -> Optional[SymbolicEntry]:
        """Symbolic entry at (position, column), or None for a structural zero."""
        row = self.rows[position]
        block, power = divmod(column, self.k)
        if block + 1 == row.plus_vertex:
            return SymbolicEntry(row.edge_index, power, False)
        if row.minus_vertex is not None and block + 1 == row.minus_vertex:
            return SymbolicEntry(row.edge_index, power, True)
        return None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "t": self.t,
            "k": self.k,
            "n": self.n,
            "columns": self.columns,
            "rows": [list(row) for row in self.rows],
        }


@dataclass(frozen=True)
class TypeMap:
    """Types of the edges of a hypergraph and the indices of each type (ascending)."""

    t: int
    types: Tuple[int, ...]
    indices: Dict[int, Tuple[int, ...]]

    def type_of(self, i: int) -> int:
        return self.types[i - 1]

    def of_type(self, tau: int) -> Tuple[int, ...]:
        return self.indices.get(tau, ())


def type_key(edge: Iterable[int]) -> Tuple[int, Tuple[int, ...]]:
    members = tuple(sorted(edge))
    return len(members), members


def type_id(edge: Iterable[int], t: int) -> int:
    """tau(edge) in 1..2^t: subsets ordered by size, then lexicographically."""
    members = sorted(edge)
    size = len(members)
    rank = sum(comb(t, s) for s in range(size))
    previous = 0
    for pos, c in enumerate(members, start=1):
        for v in range(previous + 1, c):
            rank += comb(t - v, size - pos)
        previous = c
    return rank + 1


def build_type_map(H: Hypergraph) -> TypeMap:
    types = tuple(type_id(e, H.t) for e in H.edges)
    indices: Dict[int, List[int]] = {}
    for i, tau in enumerate(types, start=1):
        indices.setdefault(tau, []).append(i)
    return TypeMap(H.t, types, {tau: tuple(v) for tau, v in indices.items()})


def is_type_ordered(H: Hypergraph) -> bool:
    keys = [type_key(e) for e in H.edges]
    return all(a <= b for a, b in zip(keys, keys[1:]))


def type_order(H: Hypergraph) -> Tuple[Hypergraph, TypeMap, Tuple[int, ...]]:
    """Stable sort of the edges by type.

    Returns:
        Tuple[Hypergraph, TypeMap, Tuple[int, ...]]: The relabeled hypergraph, its type map and
        the permutation, where ``permutation[old - 1]`` is the new label of edge ``old``.
    """
    order = sorted(range(H.n), key=lambda i: type_key(H.edges[i]))
    permutation = [0] * H.n
    for new, old in enumerate(order, start=1):
        permutation[old] = new
    ordered = Hypergraph(H.t, tuple(H.edges[i] for i in order))
    return ordered, build_type_map(ordered), tuple(permutation)


def build_rim(H: Hypergraph, k: int) -> SymbolicRIM:
    """Reduced intersection matrix of H: rows r_{i,u} for u = 2..|e_i|, in edge order then u order.

    Args:
        H (Hypergraph): Hypergraph with t >= 2.
        k (int): Block width (code dimension).

    Returns:
        SymbolicRIM: (total weight) x (t-1)k symbolic matrix.
    """
    if H.t < 2:
        raise DegenerateHypergraph(f"the intersection matrix needs t >= 2, got t={H.t}")
    rows = []
    for i, e in enumerate(H.edges, start=1):
        members = sorted(e)
        for j in members[1:]:
            rows.append(RimRow(i, members[0], None if j == H.t else j))
    return SymbolicRIM(H.t, k, H.n, tuple(rows))


def delete_rows(M: SymbolicRIM, B: Iterable[int]) -> SymbolicRIM:
    """Drop every row whose variable X_i has i in B; order preserved."""
    removed = set(B)
    return SymbolicRIM(M.t, M.k, M.n, tuple(row for row in M.rows if row.edge_index not in removed))


def row_vector(row: RimRow, x: Any, field, k: int, columns: int) -> List[Any]:
    """The row with X set to ``x``, over any field object."""
    v = [field.zero] * columns
    plus = (row.plus_vertex - 1) * k
    minus = None if row.minus_vertex is None else (row.minus_vertex - 1) * k
    power = field.one
    for p in range(k):
        v[plus + p] = power
        if minus is not None:
            v[minus + p] = field.neg(power)
        power = field.mul(power, x)
    return v


def _check_prefix(M: SymbolicRIM, a: PartialAssignment) -> None:
    if a.prefix > M.n:
        raise DimensionError(f"assignment prefix {a.prefix} exceeds n={M.n}")


def evaluate(M: SymbolicRIM, a: PartialAssignment, spec: FieldSpec) -> List[List[Entry]]:
    """Set X_{<=prefix} to the assigned values; other rows keep :class:`SymbolicEntry` markers."""
    _check_prefix(M, a)
    field = get_field(spec)
    out: List[List[Entry]] = []
    for position, row in enumerate(M.rows):
        x = a.value(row.edge_index)
        if x is not None:
            out.append(row_vector(row, field.element(x), field, M.k, M.columns))
        else:
            out.append([M.entry(position, c) or 0 for c in range(M.columns)])
    return out


def rank_concrete(matrix: Sequence[Sequence[int]], spec: FieldSpec) -> int:
    """Exact rank over F_q."""
    field = get_field(spec)
    for r in matrix:
        for x in r:
            if isinstance(x, SymbolicEntry):
                raise DimensionError("matrix still has symbolic entries")
    return linalg.rank(matrix, field)


def symbolic_determinant(
    M: SymbolicRIM, spec: FieldSpec, a: Optional[PartialAssignment] = None
) -> polynomials.MPoly:
    """Exact determinant of a square M as a sparse polynomial in the unassigned variables.

    Subset dynamic programming over columns, row by row; exponential in the column count.
    """
    if len(M) != M.columns:
        raise DimensionError(f"determinant of a {len(M)}x{M.columns} matrix")
    a = a or PartialAssignment()
    _check_prefix(M, a)
    field = get_field(spec)
    size = M.columns
    entries: List[List[polynomials.MPoly]] = []
    for position, row in enumerate(M.rows):
        x = a.value(row.edge_index)
        line: List[polynomials.MPoly] = []
        if x is not None:
            for value in row_vector(row, field.element(x), field, M.k, size):
                line.append({(): value} if value else {})
        else:
            for c in range(size):
                sym = M.entry(position, c)
                if sym is None:
                    line.append({})
                else:
                    coeff = field.neg(1) if sym.negated else 1
                    line.append({((sym.var, sym.power),) if sym.power else (): coeff})
        entries.append(line)
    dp: Dict[int, polynomials.MPoly] = {0: {(): field.one}}
    for r in range(size):
        nxt: Dict[int, polynomials.MPoly] = {}
        for mask, acc in dp.items():
            for c in range(size):
                if mask >> c & 1 or not entries[r][c]:
                    continue
                term = polynomials.mpoly_mul(acc, entries[r][c], field)
                if bin(mask >> (c + 1)).count("1") % 2:
                    term = polynomials.mpoly_scale(term, field.neg(1), field)
                key = mask | 1 << c
                nxt[key] = polynomials.mpoly_add(nxt.get(key, {}), term, field)
        dp = {m: p for m, p in nxt.items() if p}
    return dp.get((1 << size) - 1, {})


class SymbolicRankTester:
    """Rank queries over F_q(X_1..X_n) by random evaluation of the unassigned variables.

    A query with total degree bound D either repeats s independent trials over F_q, with
    (D/q)^s <= 2^-bits, or runs one trial over an extension of size >= 2^bits * D,
    whichever is cheaper. A full-rank evaluation is a proof; the error is one-sided.
    """

    logger = getLogger("SymbolicRankTester")

    def __init__(
        self,
        spec: FieldSpec,
        seed: int = 0,
        stream: Sequence[int] = (),
        bits: int = PIT_SECURITY_BITS,
    ) -> None:
        self.spec = spec
        self.field: GaloisField = get_field(spec)
        self.bits = bits
        self.rng = make_rng(seed, *stream)
        self.evaluations = 0

    def degree_bound(self, M: SymbolicRIM, a: PartialAssignment) -> int:
        symbolic = sum(1 for row in M.rows if a.value(row.edge_index) is None)
        return min(symbolic, M.columns) * (M.k - 1)

    def plan(self, degree_bound: int) -> Tuple[int, int]:
        """(extension degree, trial count); degree 1 means the base field."""
        q = self.spec.order
        if degree_bound <= 0:
            return 1, 1
        d = pit_extension_degree(q, degree_bound, self.bits)
        if q > degree_bound:
            trials = math.ceil(self.bits / math.log2(q / degree_bound))
            if trials <= 4 * d * d:
                return 1, trials
        return d, 1

    def _domain(self, degree: int):
        if degree == 1:
            return self.field, lambda x: x
        extension = get_extension(self.spec, degree)
        return extension, extension.embed

    def _points(self, M: SymbolicRIM, a: PartialAssignment, domain, embed) -> Dict[int, Any]:
        values = {}
        for i in M.variables():
            x = a.value(i)
            values[i] = embed(self.field.element(x)) if x is not None else domain.random_element(self.rng)
        return values

    def _trials(self, M: SymbolicRIM, a: PartialAssignment):
        degree, trials = self.plan(self.degree_bound(M, a))
        domain, embed = self._domain(degree)
        for _ in range(trials):
            self.evaluations += 1
            values = self._points(M, a, domain, embed)
            yield domain, [row_vector(row, values[row.edge_index], domain, M.k, M.columns) for row in M.rows]

    def symbolic_rank(self, M: SymbolicRIM, a: Optional[PartialAssignment] = None) -> int:
        """Rank over the residual function field (a lower bound; exact with probability >= 1 - 2^-bits)."""
        a = a or PartialAssignment()
        _check_prefix(M, a)
        cap = min(len(M), M.columns)
        best = 0
        for domain, matrix in self._trials(M, a):
            best = max(best, linalg.rank(matrix, domain))
            if best == cap:
                break
        return best

    def full_column_rank(self, M: SymbolicRIM, a: Optional[PartialAssignment] = None) -> bool:
        a = a or PartialAssignment()
        if len(M) < M.columns:
            return False
        if len(M) == M.columns and M.columns <= EXACT_DETERMINANT_COLUMNS:
            return bool(symbolic_determinant(M, self.spec, a))
        return self.symbolic_rank(M, a) == M.columns

    def is_singular(self, M: SymbolicRIM, a: Optional[PartialAssignment] = None) -> bool:
        return not self.full_column_rank(M, a)

    def smallest_nonsingular_submatrix(
        self, M: SymbolicRIM, a: Optional[PartialAssignment] = None
    ) -> Tuple[int, ...]:
        """Greedy row scan keeping a row iff it raises the symbolic rank of the kept rows.

        Returns:
            Tuple[int, ...]: 0-based positions of the first (t-1)k kept rows.
        """
        a = a or PartialAssignment()
        _check_prefix(M, a)
        columns = M.columns
        degree, trials = self.plan(self.degree_bound(M, a))
        domain, embed = self._domain(degree)
        points = [self._points(M, a, domain, embed) for _ in range(trials)]
        self.evaluations += trials
        bases = [linalg.EchelonBasis(domain) for _ in points]
        kept: List[int] = []
        for position, row in enumerate(M.rows):
            if len(kept) == columns:
                break
            vectors = [row_vector(row, values[row.edge_index], domain, M.k, columns) for values in points]
            raises = any(
                len(basis) == len(kept) and any(x != domain.zero for x in basis.reduce(v))
                for basis, v in zip(bases, vectors)
            )
            if raises:
                kept.append(position)
                for basis, v in zip(bases, vectors):
                    basis.add(v)
        if len(kept) < columns:
            self.logger.debug(f"smallest_nonsingular_submatrix: rank {len(kept)} < {columns}")
            raise NoSubmatrix(f"matrix with {len(M)} rows has symbolic rank {len(kept)} < {columns}")
        return tuple(kept)


def is_full_column_rank_symbolic(
    M: SymbolicRIM,
    spec: FieldSpec,
    a: Optional[PartialAssignment] = None,
    seed: int = 0,
    stream: Sequence[int] = (),
) -> bool:
    return SymbolicRankTester(spec, seed, stream).full_column_rank(M, a)


def smallest_nonsingular_submatrix(
    M: SymbolicRIM, spec: FieldSpec, seed: int = 0, stream: Sequence[int] = ()
) -> Tuple[int, ...]:
    return SymbolicRankTester(spec, seed, stream).smallest_nonsingular_submatrix(M)


__all__ = [
    "EXACT_DETERMINANT_COLUMNS",
    "RimRow",
    "SymbolicEntry",
    "Entry",
    "PartialAssignment",
    "SymbolicRIM",
    "TypeMap",
    "type_key",
    "type_id",
    "build_type_map",
    "is_type_ordered",
    "type_order",
    "build_rim",
    "delete_rows",
    "row_vector",
    "evaluate",
    "rank_concrete",
    "symbolic_determinant",
    "SymbolicRankTester",
    "is_full_column_rank_symbolic",
    "smallest_nonsingular_submatrix",
]
