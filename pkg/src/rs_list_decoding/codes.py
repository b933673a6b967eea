from dataclasses import dataclass, field as dataclass_field
from functools import cached_property
from logging import getLogger
from typing import Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import linalg
from .errors import DimensionError, InvalidParameters, InvariantViolation, MessageTooLong, SearchSpaceTooLarge
from .finite_field import FieldSpec, GaloisField, get_field, sample_distinct_points

CODEWORD_ENUMERATION_LIMIT = 2**20

logger = getLogger("rs_list_decoding.codes")


@dataclass(frozen=True)
class Polynomial:
    """Dense polynomial, ``coeffs[i]`` is the coefficient of X^i."""

    coeffs: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    @property
    def degree(self) -> int:
        for i in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[i] != 0:
                return i
        return -1

    def evaluate(self, field: GaloisField, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = field.add(field.mul(acc, x), c)
        return acc


@dataclass(frozen=True)
class Codeword:
    symbols: Tuple[int, ...]
    provenance: Optional[Polynomial] = dataclass_field(default=None, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "symbols", tuple(int(s) for s in self.symbols))

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self) -> Iterator[int]:
        return iter(self.symbols)

    def __getitem__(self, i: int) -> int:
        return self.symbols[i]


@dataclass(frozen=True)
class RSCode:
    """Reed–Solomon code of dimension k evaluated at the points ``alphas``."""

    spec: FieldSpec
    alphas: Tuple[int, ...]
    k: int

    def __post_init__(self) -> None:
        field = get_field(self.spec)
        alphas = tuple(field.element(a) for a in self.alphas)
        object.__setattr__(self, "alphas", alphas)
        n = len(alphas)
        if not 1 <= self.k <= n:
            raise InvalidParameters(f"need 1 <= k <= n, got {self.k=} and {n=}")
        if n > self.spec.order:
            raise InvalidParameters(f"block length {n} exceeds the field order {self.spec.order}")
        if len(set(alphas)) != n:
            raise InvalidParameters("evaluation points must be pairwise distinct")

    @classmethod
    def random(cls, spec: FieldSpec, n: int, k: int, seed: int, stream: Sequence[int] = ()) -> "RSCode":
        """Randomly punctured code: alphas uniform over distinct n-tuples."""
        return cls(spec=spec, alphas=tuple(sample_distinct_points(spec, n, seed, stream)), k=k)

    @classmethod
    def full_length(cls, spec: FieldSpec, k: int) -> "RSCode":
        return cls(spec=spec, alphas=tuple(range(spec.order)), k=k)

    @property
    def field(self) -> GaloisField:
        return get_field(self.spec)

    @property
    def n(self) -> int:
        return len(self.alphas)

    @property
    def q(self) -> int:
        return self.spec.order

    @property
    def rate(self) -> float:
        return self.k / self.n

    @property
    def message_count(self) -> int:
        return self.q**self.k

    def encode(self, f: Union[Polynomial, Sequence[int]]) -> Codeword:
        return encode(self, f)

    def message(self, index: int) -> Polynomial:
        """The message whose base-q digits (lowest first) are ``index``."""
        q = self.q
        return Polynomial(tuple((index // q**i) % q for i in range(self.k)))

    @cached_property
    def generator_matrix(self) -> List[List[int]]:
        return _generator_rows(self)

    @cached_property
    def parity_check_matrix(self) -> List[List[int]]:
        field = self.field
        n, k = self.n, self.k
        betas = []
        for i, a in enumerate(self.alphas):
            prod = 1
            for j, b in enumerate(self.alphas):
                if j != i:
                    prod = field.mul(prod, field.sub(a, b))
            betas.append(field.inv(prod))
        H = [[field.mul(betas[i], field.pow(a, row)) for i, a in enumerate(self.alphas)] for row in range(n - k)]
        if H:
            product = linalg.matmul(H, linalg.transpose(self.generator_matrix), field)
            if any(x != 0 for r in product for x in r):
                raise InvariantViolation(
                    "parity-check matrix does not annihilate the code",
                    {"field": str(self.spec), "alphas": list(self.alphas), "k": k},
                )
        return H

    def codeword_matrix(self) -> np.ndarray:
        """All q^k codewords as rows of an int64 array, in message-index order."""
        cached = self.__dict__.get("_codeword_matrix")
        if cached is not None:
            return cached
        count = self.message_count
        if count > CODEWORD_ENUMERATION_LIMIT:
            raise SearchSpaceTooLarge(f"{count} codewords exceed the enumeration limit {CODEWORD_ENUMERATION_LIMIT}")
        field, q = self.field, self.q
        index = np.arange(count, dtype=np.int64)
        points = np.array(self.alphas, dtype=np.int64)[None, :]
        words = np.zeros((count, self.n), dtype=np.int64)
        for power in range(self.k - 1, -1, -1):
            digit = ((index // q**power) % q)[:, None]
            words = field.add_array(field.mul_array(words, points), digit)
        self.__dict__["_codeword_matrix"] = words
        return words

    def to_dict(self) -> dict:
        return {"field": str(self.spec), "n": self.n, "k": self.k, "alphas": list(self.alphas)}


def _generator_rows(code: RSCode) -> List[List[int]]:
    field = code.field
    return [[field.pow(a, power) for a in code.alphas] for power in range(code.k)]


def encode(code: RSCode, f: Union[Polynomial, Sequence[int]]) -> Codeword:
    """Evaluate the message polynomial at every point of the code.

    Args:
        code (RSCode): The code.
        f (Polynomial | Sequence[int]): Message, coefficients lowest degree first.

    Returns:
        Codeword: ``(f(alpha_1), ..., f(alpha_n))`` with the message as provenance.
    """
    field = code.field
    poly = f if isinstance(f, Polynomial) else Polynomial(tuple(f))
    for c in poly.coeffs:
        field.element(c)
    if poly.degree >= code.k:
        raise MessageTooLong(f"message of degree {poly.degree} does not fit dimension {code.k}")
    return Codeword(tuple(poly.evaluate(field, a) for a in code.alphas), provenance=poly)


def hamming_distance(x: Union[Codeword, Sequence[int]], y: Union[Codeword, Sequence[int]]) -> int:
    if len(x) != len(y):
        raise DimensionError(f"length mismatch: {len(x)} != {len(y)}")
    return sum(1 for a, b in zip(x, y) if a != b)


def generator_matrix(code: RSCode) -> List[List[int]]:
    return [list(r) for r in code.generator_matrix]


def parity_check_matrix(code: RSCode) -> List[List[int]]:
    """GRS dual: ``H[l][i] = beta_i * alpha_i^l`` with ``beta_i = prod_{j != i} (alpha_i - alpha_j)^-1``."""
    return [list(r) for r in code.parity_check_matrix]


def vandermonde_row(spec: FieldSpec, alpha: int, k: int) -> List[int]:
    field = get_field(spec)
    alpha = field.element(alpha)
    row = [1]
    for _ in range(1, k):
        row.append(field.mul(row[-1], alpha))
    return row[:k]


__all__ = [
    "CODEWORD_ENUMERATION_LIMIT",
    "Polynomial",
    "Codeword",
    "RSCode",
    "encode",
    "hamming_distance",
    "generator_matrix",
    "parity_check_matrix",
    "vandermonde_row",
]
