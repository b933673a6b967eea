import math
import re
from enum import Enum
from functools import lru_cache
from logging import getLogger
from typing import Any, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

from . import polynomials
from .errors import DivisionByZero, InvalidElement, InvalidFieldSpec, NotEnoughPoints

MAX_ORDER = 2**32
TABLE_ORDER_LIMIT = 2**16
FISHER_YATES_LIMIT = 2**20
PIT_SECURITY_BITS = 40

FieldElement = int
ExtensionElement = Tuple[int, ...]


class FieldOp(Enum):
    add = 0
    sub = 1
    mul = 2
    inv = 3
    pow = 4


@lru_cache(maxsize=1024)
def is_prime(value: int) -> bool:
    if value < 2:
        return False
    if value % 2 == 0:
        return value == 2
    for d in range(3, math.isqrt(value) + 1, 2):
        if value % d == 0:
            return False
    return True


def prime_factors(value: int) -> List[int]:
    factors = []
    d = 2
    while d * d <= value:
        if value % d == 0:
            factors.append(d)
            while value % d == 0:
                value //= d
        d += 1
    if value > 1:
        factors.append(value)
    return factors


class FieldSpec(BaseModel):
    """Description of a finite field F_q, q = p^m.

    ``modulus`` lists the coefficients of a monic irreducible polynomial of degree m
    over F_p from the leading one down to the constant term; it is absent for prime
    fields. Elements of an extension field are encoded as integers whose base-p digits
    are the polynomial coefficients, lowest degree first.
    """

    model_config = ConfigDict(frozen=True)

    characteristic: int
    degree: int = 1
    modulus: Optional[Tuple[int, ...]] = None

    @model_validator(mode="after")
    def check_field(self) -> "FieldSpec":
        p, m = self.characteristic, self.degree
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if m < 1:
            raise ValueError(f"degree must be at least 1, got {m}")
        if m == 1:
            if self.modulus is not None:
                raise ValueError("prime fields take no modulus")
            if p > MAX_ORDER:
                raise ValueError(f"field order {p} exceeds the supported bound 2^32")
            return self
        if p**m > TABLE_ORDER_LIMIT:
            raise ValueError(f"extension field order {p}^{m} exceeds the table bound 2^16")
        if self.modulus is None:
            raise ValueError("extension fields need a modulus")
        if len(self.modulus) != m + 1 or self.modulus[0] != 1:
            raise ValueError(f"modulus must be monic of degree {m}, got {self.modulus}")
        if any(c < 0 or c >= p for c in self.modulus):
            raise ValueError(f"modulus coefficients must be base-{p} digits")
        if not polynomials.is_irreducible(list(reversed(self.modulus)), get_field(FieldSpec.prime(p))):
            raise ValueError(f"modulus {self.modulus} is reducible over F_{p}")
        return self

    @property
    def order(self) -> int:
        return self.characteristic**self.degree

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        try:
            return cls(characteristic=p)
        except ValidationError as e:
            raise InvalidFieldSpec(_first_error(e))

    @classmethod
    def extension(cls, p: int, m: int, modulus: Optional[Sequence[int]] = None) -> "FieldSpec":
        """Build F_{p^m}; without a modulus the smallest irreducible monic one is used."""
        if m == 1 and modulus is None:
            return cls.prime(p)
        try:
            if modulus is None:
                if not is_prime(p):
                    raise InvalidFieldSpec(f"characteristic {p} is not prime")
                if p**m > TABLE_ORDER_LIMIT:
                    raise InvalidFieldSpec(f"extension field order {p}^{m} exceeds the table bound 2^16")
                modulus = smallest_irreducible(p, m)
            return cls(characteristic=p, degree=m, modulus=tuple(modulus))
        except ValidationError as e:
            raise InvalidFieldSpec(_first_error(e))

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """Parse ``"p"``, ``"p^m"`` or ``"p^m/c_m..c_0"`` (digits, or comma-separated when p > 10)."""
        match = re.fullmatch(r"\s*(\d+)\s*(?:\^\s*(\d+)\s*(?:/\s*([0-9,]+))?)?\s*", text)
        if not match:
            raise InvalidFieldSpec(f"malformed field spec {text!r}")
        p = int(match.group(1))
        m = int(match.group(2)) if match.group(2) else 1
        digits = match.group(3)
        if digits is None:
            return cls.extension(p, m)
        if "," in digits:
            coefficients = tuple(int(c) for c in digits.split(",") if c)
        else:
            coefficients = tuple(int(c) for c in digits)
        return cls.extension(p, m, coefficients)

    def __str__(self) -> str:
        if self.degree == 1:
            return str(self.characteristic)
        sep = "" if self.characteristic <= 10 else ","
        return f"{self.characteristic}^{self.degree}/" + sep.join(str(c) for c in self.modulus or ())


def _first_error(e: ValidationError) -> str:
    errors = e.errors()
    return str(errors[0].get("msg", e)) if errors else str(e)


def smallest_irreducible(p: int, m: int) -> Tuple[int, ...]:
    """Smallest monic irreducible polynomial of degree m over F_p, high-to-low coefficients."""
    base = get_field(FieldSpec.prime(p))
    for value in range(p**m):
        low = [(value // p**i) % p for i in range(m)]
        if polynomials.is_irreducible(low + [1], base):
            return tuple(reversed(low + [1]))
    raise InvalidFieldSpec(f"no irreducible polynomial of degree {m} over F_{p}")


class GaloisField:
    """Exact arithmetic in F_q on canonical integer encodings.

    Prime fields reduce modulo p after every operation. Extension fields multiply through
    log/antilog tables built once per field from a primitive element; addition is XOR in
    characteristic 2 and digitwise otherwise.

    The arithmetic methods do not validate their inputs. Use :meth:`element` (or
    :func:`field_arith`) at API boundaries.
    """

    logger = getLogger("GaloisField")

    def __init__(self, spec: FieldSpec) -> None:
        self.spec = spec
        self.characteristic = spec.characteristic
        self.degree = spec.degree
        self.order = spec.order
        self.zero = 0
        self.one = 1
        self.is_prime_field = spec.degree == 1
        self.is_binary = spec.characteristic == 2
        if not self.is_prime_field:
            self._build_tables()

    def _digits(self, value: int) -> List[int]:
        p = self.characteristic
        return [(value // p**i) % p for i in range(self.degree)]

    def _from_digits(self, digits: Sequence[int]) -> int:
        p = self.characteristic
        return sum(int(d) * p**i for i, d in enumerate(digits))

    def _times_x(self, value: int) -> int:
        p, m = self.characteristic, self.degree
        if self.is_binary:
            value <<= 1
            if value >> m:
                value ^= self._modulus_int
            return value
        digits = [0] + self._digits(value)
        top = digits.pop()
        if top:
            digits = [(d - top * c) % p for d, c in zip(digits, self._modulus_low)]
        return self._from_digits(digits)

    def _build_tables(self) -> None:
        p, q = self.characteristic, self.order
        self._modulus_low = list(reversed(self.spec.modulus or ()))
        self._modulus_int = self._from_digits(self._modulus_low[:-1]) + (1 << self.degree if self.is_binary else 0)
        prime = get_field(FieldSpec.prime(p))
        generator = self._find_generator(prime)
        self.logger.debug(f"_build_tables({self.spec!s}, generator={generator})")
        exp = [0] * (2 * (q - 1))
        log = [0] * q
        value = 1
        generator_poly = self._digits(generator)
        for i in range(q - 1):
            exp[i] = exp[i + q - 1] = value
            log[value] = i
            if generator == p:
                value = self._times_x(value)
            else:
                product = polynomials.mulmod(
                    polynomials.trim(self._digits(value), prime), generator_poly, self._modulus_low, prime
                )
                value = self._from_digits(product)
        self._exp = exp
        self._log = log
        self.exp_table = np.array(exp, dtype=np.int64)
        self.log_table = np.array(log, dtype=np.int64)

    def _find_generator(self, prime: "GaloisField") -> int:
        q = self.order
        cofactors = [(q - 1) // r for r in prime_factors(q - 1)]
        candidates = [self.characteristic] + [g for g in range(2, q) if g != self.characteristic]
        for g in candidates:
            g_poly = polynomials.trim(self._digits(g), prime)
            if all(polynomials.powmod(g_poly, c, self._modulus_low, prime) != [1] for c in cofactors):
                return g
        raise InvalidFieldSpec(f"no primitive element found in {self.spec}")

    def element(self, value: Any) -> int:
        if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
            raise InvalidElement(f"{value!r} is not an integer encoding")
        value = int(value)
        if value < 0 or value >= self.order:
            raise InvalidElement(f"{value} is out of range for a field of order {self.order}")
        return value

    def elements(self) -> range:
        return range(self.order)

    def random_element(self, rng: np.random.Generator) -> int:
        return int(rng.integers(self.order))

    def add(self, a: int, b: int) -> int:
        if self.is_prime_field:
            return (a + b) % self.order
        if self.is_binary:
            return a ^ b
        p = self.characteristic
        return self._from_digits((x + y) % p for x, y in zip(self._digits(a), self._digits(b)))

    def sub(self, a: int, b: int) -> int:
        if self.is_prime_field:
            return (a - b) % self.order
        if self.is_binary:
            return a ^ b
        p = self.characteristic
        return self._from_digits((x - y) % p for x, y in zip(self._digits(a), self._digits(b)))

    def neg(self, a: int) -> int:
        return self.sub(0, a)

    def mul(self, a: int, b: int) -> int:
        if self.is_prime_field:
            return (a * b) % self.order
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        if self.is_prime_field:
            return pow(a, self.order - 2, self.order)
        return self._exp[(self.order - 1 - self._log[a]) % (self.order - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, exponent: int) -> int:
        if exponent < 0:
            a, exponent = self.inv(a), -exponent
        if exponent == 0:
            return 1
        if self.is_prime_field:
            return pow(a, exponent, self.order)
        if a == 0:
            return 0
        return self._exp[(self._log[a] * exponent) % (self.order - 1)]

    def add_array(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        if self.is_prime_field:
            return (a + b) % self.order
        if self.is_binary:
            return a ^ b
        p = self.characteristic
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for i in range(self.degree):
            w = p**i
            out += (((a // w) % p + (b // w) % p) % p) * w
        return out

    def mul_array(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        if self.is_prime_field:
            if self.order < 2**31:
                return (a * b) % self.order
            return np.asarray((a.astype(object) * b.astype(object)) % self.order, dtype=np.int64)
        product = self.exp_table[self.log_table[a] + self.log_table[b]]
        return np.where((a == 0) | (b == 0), 0, product)

    def __repr__(self) -> str:
        return f"GaloisField({self.spec!s})"


@lru_cache(maxsize=None)
def get_field(spec: FieldSpec) -> GaloisField:
    return GaloisField(spec)


def field_arith(
    spec: FieldSpec,
    op: Union[FieldOp, str],
    a: int,
    b: Optional[int] = None,
) -> int:
    """Apply one field operation to canonical encodings.

    Args:
        spec (FieldSpec): The field.
        op (FieldOp | str): add, sub, mul, inv or pow.
        a (int): First operand.
        b (int, optional): Second operand, or the integer exponent for pow. Ignored by inv.

    Returns:
        int: The canonical encoding of the result.
    """
    field = get_field(spec)
    op = op if isinstance(op, FieldOp) else FieldOp[op]
    a = field.element(a)
    if op is FieldOp.inv:
        return field.inv(a)
    if op is FieldOp.pow:
        if isinstance(b, bool) or not isinstance(b, (int, np.integer)):
            raise InvalidElement(f"exponent {b!r} is not an integer")
        return field.pow(a, int(b))
    b = field.element(b)
    if op is FieldOp.add:
        return field.add(a, b)
    if op is FieldOp.sub:
        return field.sub(a, b)
    return field.mul(a, b)


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Counter-based generator for the logical stream ``stream`` under ``seed``."""
    sequence = np.random.SeedSequence(int(seed), spawn_key=tuple(int(s) for s in stream))
    return np.random.Generator(np.random.Philox(sequence))


def sample_distinct_points(
    spec: FieldSpec,
    n: int,
    seed: Union[int, np.random.Generator],
    stream: Sequence[int] = (),
) -> List[int]:
    """Draw n pairwise-distinct field elements, uniformly over ordered distinct n-tuples.

    Args:
        spec (FieldSpec): The field.
        n (int): Number of points.
        seed (int | numpy.random.Generator): Seed of the stream, or a generator to consume.
        stream (Sequence[int], optional): Stream id under ``seed``. Defaults to ().

    Returns:
        List[int]: The points, in draw order.
    """
    q = spec.order
    if n < 0:
        raise NotEnoughPoints(f"cannot draw a negative number of points ({n=})")
    if n > q:
        raise NotEnoughPoints(f"cannot draw {n} distinct points from a field of order {q}")
    rng = seed if isinstance(seed, np.random.Generator) else make_rng(seed, *stream)
    if q <= FISHER_YATES_LIMIT:
        pool = np.arange(q, dtype=np.int64)
        for i in range(n):
            j = int(rng.integers(i, q))
            pool[i], pool[j] = pool[j], pool[i]
        return [int(x) for x in pool[:n]]
    chosen: List[int] = []
    seen = set()
    while len(chosen) < n:
        x = int(rng.integers(q))
        if x not in seen:
            seen.add(x)
            chosen.append(x)
    return chosen


class ExtensionField:
    """F_q[Y]/(g) for a random irreducible g of the given degree over a base GaloisField.

    Elements are tuples of ``degree`` base-field encodings, lowest power of Y first. The
    field serves as a large evaluation domain for identity testing; base-field values
    enter through :meth:`embed`.
    """

    logger = getLogger("ExtensionField")

    def __init__(self, base: GaloisField, degree: int, seed: int = 0) -> None:
        if degree < 1:
            raise InvalidFieldSpec(f"extension degree must be positive, got {degree}")
        self.base = base
        self.degree = degree
        self.order = base.order**degree
        rng = make_rng(seed, base.order, degree)
        self.modulus = polynomials.find_irreducible(base, degree, rng) if degree > 1 else [0, 1]
        self.zero: ExtensionElement = (0,) * degree
        self.one: ExtensionElement = (1,) + (0,) * (degree - 1)
        self.logger.debug(f"ExtensionField({base!r}, {degree=}, modulus={self.modulus})")

    def _pack(self, poly: Sequence[int]) -> ExtensionElement:
        return tuple(poly) + (0,) * (self.degree - len(poly))

    def embed(self, a: int) -> ExtensionElement:
        return (a,) + (0,) * (self.degree - 1)

    def random_element(self, rng: np.random.Generator) -> ExtensionElement:
        return tuple(int(v) for v in rng.integers(0, self.base.order, size=self.degree))

    def add(self, a: ExtensionElement, b: ExtensionElement) -> ExtensionElement:
        return tuple(self.base.add(x, y) for x, y in zip(a, b))

    def sub(self, a: ExtensionElement, b: ExtensionElement) -> ExtensionElement:
        return tuple(self.base.sub(x, y) for x, y in zip(a, b))

    def neg(self, a: ExtensionElement) -> ExtensionElement:
        return tuple(self.base.neg(x) for x in a)

    def mul(self, a: ExtensionElement, b: ExtensionElement) -> ExtensionElement:
        base = self.base
        product = polynomials.mulmod(polynomials.trim(a, base), polynomials.trim(b, base), self.modulus, base)
        return self._pack(product)

    def inv(self, a: ExtensionElement) -> ExtensionElement:
        if a == self.zero:
            raise DivisionByZero("inverse of zero")
        return self._pack(polynomials.inverse_mod(polynomials.trim(a, self.base), self.modulus, self.base))

    def __repr__(self) -> str:
        return f"ExtensionField({self.base!r}, degree={self.degree})"


def pit_extension_degree(q: int, degree_bound: int, bits: int = PIT_SECURITY_BITS) -> int:
    """Smallest d >= 2 with q^d >= 2^bits * max(degree_bound, 1)."""
    target = 2**bits * max(degree_bound, 1)
    d = 2
    while q**d < target:
        d += 1
    return d


@lru_cache(maxsize=64)
def get_extension(spec: FieldSpec, degree: int) -> ExtensionField:
    return ExtensionField(get_field(spec), degree)


__all__ = [
    "MAX_ORDER",
    "TABLE_ORDER_LIMIT",
    "FISHER_YATES_LIMIT",
    "PIT_SECURITY_BITS",
    "FieldElement",
    "ExtensionElement",
    "FieldOp",
    "FieldSpec",
    "GaloisField",
    "ExtensionField",
    "is_prime",
    "prime_factors",
    "smallest_irreducible",
    "get_field",
    "get_extension",
    "field_arith",
    "make_rng",
    "sample_distinct_points",
    "pit_extension_degree",
]
