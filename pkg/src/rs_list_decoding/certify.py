"""
Certificates of rank collapse for randomly evaluated intersection matrices.

:class:`CertificateEngine` runs the matrix-sequence construction (with its per-type
bank of fresh variables) and the certificate scan over a fixed type-ordered hypergraph;
the module functions below wrap it for one-off calls and compute the counting bounds.
"""

import math
from dataclasses import dataclass, field as dataclass_field
from enum import Enum
from fractions import Fraction
from logging import getLogger
from math import comb
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

from .errors import DimensionError, InvalidParameters, InvariantViolation, NoSubmatrix
from .finite_field import FieldSpec
from .hypergraph import Hypergraph
from .rim import (
    PartialAssignment,
    SymbolicRankTester,
    SymbolicRIM,
    TypeMap,
    build_rim,
    build_type_map,
    delete_rows,
    is_type_ordered,
)


class Bottom(Enum):
    bottom = 0


@dataclass(frozen=True)
class Certificate:
    indices: Tuple[int, ...]

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def is_distinct(self) -> bool:
        return len(set(self.indices)) == len(self.indices)


@dataclass(frozen=True)
class Bank:
    """Reserved indices per type, each tuple ascending."""

    quota: int
    reserved: Dict[int, Tuple[int, ...]]

    def indices(self) -> FrozenSet[int]:
        return frozenset(i for v in self.reserved.values() for i in v)

    def nth(self, tau: int, s: int) -> Optional[int]:
        """The s-th smallest (1-based) reserved index of type tau."""
        members = self.reserved.get(tau, ())
        return members[s - 1] if 1 <= s <= len(members) else None

    def to_dict(self) -> Dict[str, Any]:
        return {"quota": self.quota, "reserved": {str(tau): list(v) for tau, v in sorted(self.reserved.items())}}


@dataclass(frozen=True)
class TraceStep:
    matrix: SymbolicRIM
    refresh: bool
    bank: Bank
    substitution: Optional[Tuple[int, int]] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rows": [list(row) for row in self.matrix.rows],
            "refresh": self.refresh,
            "bank": self.bank.to_dict(),
            "substitution": list(self.substitution) if self.substitution else None,
        }


@dataclass(frozen=True)
class MatrixTrace:
    steps: Tuple[TraceStep, ...]

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def matrices(self) -> List[SymbolicRIM]:
        return [s.matrix for s in self.steps]

    @property
    def refresh_indices(self) -> List[int]:
        """1-based step numbers at which the bank was refreshed."""
        return [ell for ell, s in enumerate(self.steps, start=1) if s.refresh]

    def to_dict(self) -> Dict[str, Any]:
        return {"steps": [s.to_dict() for s in self.steps]}


@dataclass
class CertificateRun:
    outcome: Union[Certificate, Bottom]
    trace: MatrixTrace
    probe_count: int = 0
    exposures: List[int] = dataclass_field(default_factory=list)
    failures: List[int] = dataclass_field(default_factory=list)

    @property
    def is_bottom(self) -> bool:
        return self.outcome is Bottom.bottom

    @property
    def descents(self) -> int:
        return 0 if isinstance(self.outcome, Bottom) else descent_count(self.outcome)

    @property
    def refreshes(self) -> List[int]:
        return self.trace.refresh_indices

    def to_dict(self) -> Dict[str, Any]:
        return {
            "certificate": "bottom" if isinstance(self.outcome, Bottom) else list(self.outcome.indices),
            "descents": self.descents,
            "refreshes": self.refreshes,
            "probe_count": self.probe_count,
        }


@dataclass(frozen=True)
class CertificateBudget:
    count_bound: int
    per_cert_bound: Fraction
    union_bound: Fraction
    log2_union_bound: Optional[float]

    @property
    def vacuous(self) -> bool:
        return self.union_bound > 1

    def to_dict(self) -> Dict[str, Any]:
        return {
            "count_bound": str(self.count_bound),
            "per_cert_bound": str(self.per_cert_bound),
            "union_bound": str(self.union_bound),
            "log2_union_bound": self.log2_union_bound,
            "vacuous": self.vacuous,
        }


class CertificateEngine:
    """Matrix sequences and certificates for one type-ordered hypergraph.

    Refresh results depend only on the consumed indices and are cached, so every trace is a
    deterministic function of its index prefix.
    """

    logger = getLogger("CertificateEngine")

    def __init__(self, H: Hypergraph, k: int, r: int, spec: FieldSpec, seed: int = 0) -> None:
        if r < 1:
            raise InvalidParameters(f"certificate length must be positive, got {r=}")
        if not is_type_ordered(H):
            raise InvalidParameters("hypergraph must be type-ordered, see rim.type_order")
        self.H = H
        self.k = k
        self.r = r
        self.spec = spec
        self.rim: SymbolicRIM = build_rim(H, k)
        self.types: TypeMap = build_type_map(H)
        self.quota = r // 2**H.t
        self.tester = SymbolicRankTester(spec, seed, stream=(0,))
        self._refreshes: Dict[FrozenSet[int], Tuple[Bank, SymbolicRIM]] = {}

    def dump(self) -> Dict[str, Any]:
        return {"hypergraph": self.H.to_dict(), "k": self.k, "r": self.r, "field": str(self.spec)}

    def refresh(self, consumed: Sequence[int]) -> Tuple[Bank, SymbolicRIM]:
        """New bank from the largest unconsumed indices per type, and the smallest nonsingular
        submatrix of the intersection matrix without the bank and consumed variables."""
        key = frozenset(consumed)
        if key in self._refreshes:
            return self._refreshes[key]
        reserved = {}
        if self.quota:
            for tau, members in self.types.indices.items():
                available = [i for i in members if i not in key]
                if available:
                    reserved[tau] = tuple(available[-self.quota :])
        bank = Bank(self.quota, reserved)
        remaining = delete_rows(self.rim, bank.indices() | key)
        try:
            positions = self.tester.smallest_nonsingular_submatrix(remaining)
        except NoSubmatrix as e:
            self.logger.error(f"refresh failed, reason: {e.__class__.__name__} {e}")
            raise InvariantViolation(
                "no nonsingular submatrix at refresh; the hypergraph is not connected enough",
                {**self.dump(), "consumed": sorted(key), "bank": bank.to_dict()},
            )
        matrix = remaining.select(positions)
        self.logger.debug(f"refresh(consumed={sorted(key)}, bank={sorted(bank.indices())})")
        self._refreshes[key] = (bank, matrix)
        return bank, matrix

    def get_matrix_sequence(self, prior: Sequence[int]) -> MatrixTrace:
        """M_1..M_j for the indices i_1..i_{j-1} in ``prior``."""
        prior = [int(i) for i in prior]
        for i in prior:
            if not 1 <= i <= self.H.n:
                raise DimensionError(f"index {i} is outside [1..{self.H.n}]")
        steps: List[TraceStep] = []
        bank: Optional[Bank] = None
        start = 1
        for ell in range(1, len(prior) + 2):
            if ell > 1 and bank is not None:
                previous = prior[ell - 2]
                tau = self.types.type_of(previous)
                s = sum(1 for i in prior[start - 1 : ell - 1] if self.types.type_of(i) == tau)
                fresh = bank.nth(tau, s)
                if fresh is not None:
                    for step in steps[start - 1 :]:
                        if fresh in step.matrix.variables():
                            raise InvariantViolation(
                                f"substituted variable X_{fresh} already occurs in the current run",
                                {**self.dump(), "prior": prior, "step": ell},
                            )
                    matrix = steps[-1].matrix.substitute(previous, fresh)
                    steps.append(TraceStep(matrix, False, bank, (previous, fresh)))
                    continue
            bank, matrix = self.refresh(prior[: ell - 1])
            start = ell
            steps.append(TraceStep(matrix, True, bank))
        return MatrixTrace(tuple(steps))

    def first_singular_index(
        self, M: SymbolicRIM, alphas: Sequence[int], stats: Optional[List[int]] = None
    ) -> Optional[int]:
        """Smallest i with M(X_{<=i} = alpha_{<=i}) singular, or None.

        Singularity only changes when a variable of M is revealed and, once reached, persists,
        so the scan visits the variables of M in increasing order. ``stats`` collects
        [probes, exposures, failures].
        """
        for i in M.variables():
            singular = self.tester.is_singular(M, PartialAssignment(tuple(alphas[:i])))
            if stats is not None:
                stats[0] += 1
                stats[1] += 1
                stats[2] += int(singular)
            if singular:
                return i
        return None

    def run(self, alphas: Sequence[int]) -> CertificateRun:
        """Certificate scan for a full assignment, keeping the trace and probe statistics."""
        if len(alphas) != self.H.n:
            raise DimensionError(f"need {self.H.n} evaluation points, got {len(alphas)}")
        prior: List[int] = []
        exposures: List[int] = []
        failures: List[int] = []
        probes = 0
        trace = MatrixTrace(())
        for _ in range(self.r):
            trace = self.get_matrix_sequence(prior)
            stats = [0, 0, 0]
            index = self.first_singular_index(trace.steps[-1].matrix, alphas, stats)
            probes += stats[0]
            exposures.append(stats[1])
            failures.append(stats[2])
            if index is None:
                return CertificateRun(Bottom.bottom, trace, probes, exposures, failures)
            prior.append(index)
        certificate = Certificate(tuple(prior))
        if not certificate.is_distinct():
            raise InvariantViolation(
                f"certificate {prior} repeats an index", {**self.dump(), "alphas": list(alphas)}
            )
        return CertificateRun(certificate, trace, probes, exposures, failures)


def get_matrix_sequence(
    H: Hypergraph, k: int, r: int, prior: Sequence[int], spec: FieldSpec, seed: int = 0
) -> MatrixTrace:
    return CertificateEngine(H, k, r, spec, seed).get_matrix_sequence(prior)


def run_certificate(
    H: Hypergraph, k: int, r: int, alphas: Sequence[int], spec: FieldSpec, seed: int = 0
) -> CertificateRun:
    return CertificateEngine(H, k, r, spec, seed).run(alphas)


def get_certificate(
    H: Hypergraph, k: int, r: int, alphas: Sequence[int], spec: FieldSpec, seed: int = 0
) -> Union[Certificate, Bottom]:
    """Certificate of r pairwise-distinct indices for ``alphas``, or ``Bottom.bottom``.

    Args:
        H (Hypergraph): Type-ordered hypergraph.
        k (int): Code dimension.
        r (int): Certificate length, at least 1.
        alphas (Sequence[int]): Pairwise-distinct evaluation points, one per edge.
        spec (FieldSpec): The field of the points.
        seed (int, optional): Seed of the identity-testing stream. Defaults to 0.

    Returns:
        Certificate | Bottom: Bottom only when some matrix stays nonsingular under every prefix.
    """
    return run_certificate(H, k, r, alphas, spec, seed).outcome


def descent_count(c: Union[Certificate, Sequence[int]]) -> int:
    indices = list(c)
    return sum(1 for a, b in zip(indices, indices[1:]) if a > b)


def certificate_budget(t: int, k: int, q: int, n: int, r: int, L: int) -> CertificateBudget:
    """Certificate count, single-certificate probability and the union bound, exactly.

    The union bound ranges over agreement hypergraphs with at most L+1 vertices.
    """
    if q <= n:
        raise InvalidParameters(f"need q > n, got {q=} and {n=}")
    if r < 0:
        raise InvalidParameters(f"negative certificate length {r}")
    count_bound = comb(n, r) * 2 ** (t * r)
    per_cert_bound = Fraction((t - 1) * k, q - n) ** r
    step = Fraction(L * k, q - n)
    union_bound = 2 ** ((L + 2) * n) * comb(n, r) * 2 ** ((L + 1) * r) * step**r
    if union_bound == 0:
        log2_union = None
    else:
        log2_union = (L + 2) * n + math.log2(comb(n, r)) + (L + 1) * r + r * (math.log2(step) if r else 0.0)
    return CertificateBudget(count_bound, per_cert_bound, union_bound, log2_union)


def _as_fraction(value: Union[int, float, str, Fraction]) -> Fraction:
    if isinstance(value, float):
        return Fraction(value).limit_denominator(10**6)
    return Fraction(value)


def theorem_field_size(n: int, k: int, L: int, eps: Union[float, str, Fraction]) -> int:
    """n + k * 2^(10L/eps); the exponent must be an integer."""
    exponent = Fraction(10 * L) / _as_fraction(eps)
    if exponent.denominator != 1:
        raise InvalidParameters(f"10L/eps = {exponent} is not an integer")
    return n + k * 2 ** int(exponent)


def hypergraph_count_bound(n: int, L: int) -> Tuple[int, int]:
    """(number of agreement hypergraphs with 2..L+1 vertices and n labeled edges, 2^((L+2)n))."""
    count = sum(2 ** (t * n) for t in range(2, L + 2))
    return count, 2 ** ((L + 2) * n)


__all__ = [
    "Bottom",
    "Certificate",
    "Bank",
    "TraceStep",
    "MatrixTrace",
    "CertificateRun",
    "CertificateBudget",
    "CertificateEngine",
    "get_matrix_sequence",
    "run_certificate",
    "get_certificate",
    "descent_count",
    "certificate_budget",
    "theorem_field_size",
    "hypergraph_count_bound",
]
