"""Polynomial arithmetic over an arbitrary field object.

A field object exposes ``zero``, ``one``, ``order`` and the methods ``add``, ``sub``,
``mul``, ``inv`` and ``random_element``. Both :class:`GaloisField` and
:class:`ExtensionField` qualify.

Univariate polynomials are plain lists of coefficients, lowest degree first, without
trailing zeros (the zero polynomial is ``[]``). Multivariate polynomials are sparse
dicts mapping a monomial, a sorted tuple of ``(variable, exponent)`` pairs, to its
nonzero coefficient.
"""

from typing import Any, Dict, List, Sequence, Tuple

from .errors import DivisionByZero

Poly = List[Any]
Monomial = Tuple[Tuple[int, int], ...]
MPoly = Dict[Monomial, Any]


def trim(a: Sequence[Any], field) -> Poly:
    out = list(a)
    while out and out[-1] == field.zero:
        out.pop()
    return out


def add(a: Poly, b: Poly, field) -> Poly:
    size = max(len(a), len(b))
    out = []
    for i in range(size):
        x = a[i] if i < len(a) else field.zero
        y = b[i] if i < len(b) else field.zero
        out.append(field.add(x, y))
    return trim(out, field)


def sub(a: Poly, b: Poly, field) -> Poly:
    size = max(len(a), len(b))
    out = []
    for i in range(size):
        x = a[i] if i < len(a) else field.zero
        y = b[i] if i < len(b) else field.zero
        out.append(field.sub(x, y))
    return trim(out, field)


def mul(a: Poly, b: Poly, field) -> Poly:
    if not a or not b:
        return []
    out = [field.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == field.zero:
            continue
        for j, y in enumerate(b):
            out[i + j] = field.add(out[i + j], field.mul(x, y))
    return trim(out, field)


def scale(a: Poly, c: Any, field) -> Poly:
    return trim([field.mul(x, c) for x in a], field)


def divmod_poly(a: Poly, b: Poly, field) -> Tuple[Poly, Poly]:
    """Euclidean division ``a = quotient * b + remainder`` with ``deg(remainder) < deg(b)``."""
    if not b:
        raise DivisionByZero("polynomial division by the zero polynomial")
    remainder = trim(a, field)
    quotient = [field.zero] * max(len(remainder) - len(b) + 1, 0)
    lead_inv = field.inv(b[-1])
    while remainder and len(remainder) >= len(b):
        shift = len(remainder) - len(b)
        c = field.mul(remainder[-1], lead_inv)
        quotient[shift] = c
        for i, y in enumerate(b):
            remainder[shift + i] = field.sub(remainder[shift + i], field.mul(c, y))
        remainder = trim(remainder, field)
    return trim(quotient, field), remainder


def mod(a: Poly, m: Poly, field) -> Poly:
    return divmod_poly(a, m, field)[1]


def mulmod(a: Poly, b: Poly, m: Poly, field) -> Poly:
    return mod(mul(a, b, field), m, field)


def powmod(a: Poly, exponent: int, m: Poly, field) -> Poly:
    result: Poly = [field.one]
    base = mod(a, m, field)
    while exponent > 0:
        if exponent & 1:
            result = mulmod(result, base, m, field)
        base = mulmod(base, base, m, field)
        exponent >>= 1
    return mod(result, m, field)


def monic(a: Poly, field) -> Poly:
    if not a:
        return []
    return scale(a, field.inv(a[-1]), field)


def gcd(a: Poly, b: Poly, field) -> Poly:
    a, b = trim(a, field), trim(b, field)
    while b:
        a, b = b, mod(a, b, field)
    return monic(a, field)


def inverse_mod(a: Poly, m: Poly, field) -> Poly:
    """Return ``s`` with ``s * a == 1 (mod m)``; raises DivisionByZero when gcd(a, m) != 1."""
    r0, r1 = trim(m, field), mod(a, m, field)
    s0: Poly = []
    s1: Poly = [field.one]
    while r1:
        quotient, remainder = divmod_poly(r0, r1, field)
        r0, r1 = r1, remainder
        s0, s1 = s1, sub(s0, mul(quotient, s1, field), field)
    if len(r0) != 1:
        raise DivisionByZero("element is not invertible modulo the given polynomial")
    return scale(s0, field.inv(r0[0]), field)


def evaluate(a: Poly, x: Any, field) -> Any:
    acc = field.zero
    for c in reversed(a):
        acc = field.add(field.mul(acc, x), c)
    return acc


def is_irreducible(f: Poly, field) -> bool:
    """Ben-Or irreducibility test over a finite field of order ``field.order``."""
    f = trim(f, field)
    d = len(f) - 1
    if d < 1:
        return False
    if d == 1:
        return True
    x = [field.zero, field.one]
    h = x
    for _ in range(1, d // 2 + 1):
        h = powmod(h, field.order, f, field)
        if len(gcd(f, sub(h, x, field), field)) > 1:
            return False
    return True


def find_irreducible(field, degree: int, rng) -> Poly:
    """Draw random monic polynomials of the given degree until one is irreducible."""
    while True:
        candidate = [field.random_element(rng) for _ in range(degree)] + [field.one]
        if is_irreducible(candidate, field):
            return candidate


def mpoly_add(a: MPoly, b: MPoly, field) -> MPoly:
    out = dict(a)
    for m, c in b.items():
        total = field.add(out.get(m, field.zero), c)
        if total == field.zero:
            out.pop(m, None)
        else:
            out[m] = total
    return out


def mpoly_scale(a: MPoly, c: Any, field) -> MPoly:
    if c == field.zero:
        return {}
    return {m: field.mul(v, c) for m, v in a.items()}


def _merge_monomials(ma: Monomial, mb: Monomial) -> Monomial:
    powers = dict(ma)
    for var, e in mb:
        powers[var] = powers.get(var, 0) + e
    return tuple(sorted(powers.items()))


def mpoly_mul(a: MPoly, b: MPoly, field) -> MPoly:
    out: MPoly = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = _merge_monomials(ma, mb)
            total = field.add(out.get(m, field.zero), field.mul(ca, cb))
            if total == field.zero:
                out.pop(m, None)
            else:
                out[m] = total
    return out


__all__ = [
    "Poly",
    "Monomial",
    "MPoly",
    "trim",
    "add",
    "sub",
    "mul",
    "scale",
    "divmod_poly",
    "mod",
    "mulmod",
    "powmod",
    "monic",
    "gcd",
    "inverse_mod",
    "evaluate",
    "is_irreducible",
    "find_irreducible",
    "mpoly_add",
    "mpoly_scale",
    "mpoly_mul",
]
