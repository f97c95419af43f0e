"""Finite fields F_{p^e} and their extensions F_{q^m}.

Elements are plain integers: the polynomial-basis coordinates of an element,
packed base-p (or base-q for an extension).  ``FieldElement`` is a thin
operator-overloading wrapper for interactive use; the library internals pass
raw integers around and call the arithmetic methods on the field object.
"""

from __future__ import annotations

import functools
import itertools
from typing import Callable, Sequence

FIELD_CAP = 2**16
EXTENSION_CAP = 2**32

# multiplication tables are precomputed below this order
_TABLE_LIMIT = 4096


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Split ``q`` as ``(p, e)`` with ``q == p**e``; raise if q is not a prime power."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = next(f for f in itertools.count(2) if q % f == 0)
    e = 0
    r = q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, e


# ---------------------------------------------------------------------------
# polynomial helpers over an arbitrary scalar field
#
# A polynomial is a list of scalars, lowest degree first.  ``F`` is any object
# with add/sub/mul/inv methods on ints (FieldSpec or ExtensionField).


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(F, a: Sequence[int], b: Sequence[int]) -> list[int]:
    a = _trim(list(a))
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial modulo zero")
    lead_inv = F.inv(b[-1])
    db = len(b) - 1
    while len(a) - 1 >= db:
        c = F.mul(a[-1], lead_inv)
        shift = len(a) - 1 - db
        for i, bc in enumerate(b):
            a[shift + i] = F.sub(a[shift + i], F.mul(c, bc))
        _trim(a)
    return a


def _monic_polys(q: int, degree: int):
    """Monic polynomials of ``degree`` over a field of order q, in increasing integer order."""
    for low in range(q**degree):
        coeffs = []
        for _ in range(degree):
            low, c = divmod(low, q)
            coeffs.append(c)
        yield coeffs + [1]


def is_irreducible(F, poly: Sequence[int]) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    poly = _trim(list(poly))
    deg = len(poly) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for divisor in _monic_polys(F.q, d):
            if not _poly_mod(F, poly, divisor):
                return False
    return True


def smallest_irreducible(F, degree: int) -> tuple[int, ...]:
    for cand in _monic_polys(F.q, degree):
        if is_irreducible(F, cand):
            return tuple(cand)
    raise ArithmeticError(f"no irreducible polynomial of degree {degree}")  # unreachable


def _digits(x: int, base: int, length: int) -> list[int]:
    out = []
    for _ in range(length):
        x, r = divmod(x, base)
        out.append(r)
    return out


def _undigits(digits: Sequence[int], base: int) -> int:
    x = 0
    for d in reversed(digits):
        x = x * base + d
    return x


class _PolyQuotient:
    """Shared arithmetic for F[x]/(modulus) with elements packed base-|F|."""

    base: object
    degree: int
    modulus: tuple[int, ...]

    def _setup(self, base, degree: int, modulus: tuple[int, ...]) -> None:
        self._base = base
        self._bq = base.q
        self._deg = degree
        self._mod = modulus
        self._binary = getattr(base, "p", None) == 2 and getattr(base, "e", None) == 1
        if self._binary:
            self._mod_int = _undigits(modulus, 2)

    def coords(self, a: int) -> list[int]:
        """Polynomial-basis coordinates of ``a`` over the base field, lowest first."""
        return _digits(a, self._bq, self._deg)

    def from_coords(self, coords: Sequence[int]) -> int:
        if len(coords) != self._deg:
            raise ValueError(f"expected {self._deg} coordinates, got {len(coords)}")
        return _undigits(coords, self._bq)

    def _check(self, a: int) -> None:
        if not 0 <= a < self.q:
            raise ValueError(f"{a} is not an element of a field of order {self.q}")

    def add(self, a: int, b: int) -> int:
        if self._binary:
            return a ^ b
        F = self._base
        return _undigits([F.add(x, y) for x, y in zip(self.coords(a), self.coords(b))], self._bq)

    def sub(self, a: int, b: int) -> int:
        if self._binary:
            return a ^ b
        F = self._base
        return _undigits([F.sub(x, y) for x, y in zip(self.coords(a), self.coords(b))], self._bq)

    def neg(self, a: int) -> int:
        return self.sub(0, a)

    def _poly_mul(self, a: int, b: int) -> int:
        if self._binary:
            r = 0
            while b:
                if b & 1:
                    r ^= a
                b >>= 1
                a <<= 1
                if a >> self._deg & 1:
                    a ^= self._mod_int
            return r
        F = self._base
        ca, cb = self.coords(a), self.coords(b)
        prod = [0] * (2 * self._deg - 1)
        for i, x in enumerate(ca):
            if x == 0:
                continue
            for j, y in enumerate(cb):
                if y:
                    prod[i + j] = F.add(prod[i + j], F.mul(x, y))
        rem = _poly_mod(F, prod, self._mod)
        return _undigits(rem + [0] * (self._deg - len(rem)), self._bq)

    def mul(self, a: int, b: int) -> int:
        return self._poly_mul(a, b)

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            return self.pow(self.inv(a), -n)
        result = 1
        while n:
            if n & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            n >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def elements(self) -> range:
        return range(self.q)


class FieldSpec(_PolyQuotient):
    """The field F_q, q = p**e, in the polynomial basis modulo ``modulus``.

    Use :func:`field_create` rather than calling this directly; it picks the
    canonical modulus and caches instances.
    """

    def __init__(self, p: int, e: int, modulus: Sequence[int], cap: int = FIELD_CAP):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if e < 1:
            raise ValueError(f"exponent must be >= 1, got {e}")
        if p**e > cap:
            raise ValueError(f"field order {p}**{e} exceeds cap {cap}")
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != e + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree e")
        self.p = p
        self.e = e
        self.q = p**e
        self.modulus = modulus
        if e > 1:
            prime = field_create(p, 1)
            if not is_irreducible(prime, modulus):
                raise ValueError(f"modulus {modulus} is reducible over F_{p}")
            self._setup(prime, e, modulus)
            self._exp: list[int] | None = None
            self._log: list[int] | None = None
            if self.q <= _TABLE_LIMIT:
                self._build_tables()

    def _build_tables(self) -> None:
        order = self.q - 1
        for g in range(2, self.q):
            exp = [1]
            x = g
            while x != 1:
                exp.append(x)
                x = self._poly_mul(x, g)
            if len(exp) == order:
                break
        else:  # q - 1 == 1 cannot happen for e > 1
            raise ArithmeticError("no primitive element")
        log = [0] * self.q
        for i, x in enumerate(exp):
            log[x] = i
        self._exp = exp + exp
        self._log = log

    def __repr__(self) -> str:
        return f"FieldSpec(p={self.p}, e={self.e}, modulus={list(self.modulus)})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FieldSpec)
            and (self.p, self.e, self.modulus) == (other.p, other.e, other.modulus)
        )

    def __hash__(self) -> int:
        return hash(("FieldSpec", self.p, self.e, self.modulus))

    def __reduce__(self):
        return (field_create, (self.p, self.e))

    # e == 1 bypasses the polynomial machinery entirely

    def coords(self, a: int) -> list[int]:
        if self.e == 1:
            return [a]
        return super().coords(a)

    def from_coords(self, coords: Sequence[int]) -> int:
        if self.e == 1:
            (c,) = coords
            return c % self.p
        return super().from_coords(coords)

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        return super().add(a, b)

    def sub(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a - b) % self.p
        return super().sub(a, b)

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        if self._exp is not None:
            return self._exp[self._log[a] + self._log[b]]
        return self._poly_mul(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        if self._exp is not None:
            return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]
        return super().inv(a)

    def __call__(self, value: int) -> FieldElement:
        return FieldElement(self, value)


@functools.lru_cache(maxsize=None)
def _field_create(p: int, e: int, cap: int) -> FieldSpec:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if e < 1:
        raise ValueError(f"exponent must be >= 1, got {e}")
    if p**e > cap:
        raise ValueError(f"field order {p}**{e} exceeds cap {cap}")
    if e == 1:
        return FieldSpec(p, 1, (0, 1), cap)
    modulus = smallest_irreducible(_field_create(p, 1, cap), e)
    return FieldSpec(p, e, modulus, cap)


def field_create(p: int, e: int = 1, cap: int = FIELD_CAP) -> FieldSpec:
    """Return F_{p^e} with the smallest monic irreducible modulus.

    Polynomials are ordered by their base-p integer encoding, so for F_8 the
    modulus is x^3 + x + 1.  Calls with equal arguments return the same object.
    """
    return _field_create(p, e, cap)


def field_from_order(q: int, cap: int = FIELD_CAP) -> FieldSpec:
    p, e = prime_power(q)
    return field_create(p, e, cap)


class ExtensionField(_PolyQuotient):
    """F_{q^m} as polynomials of degree < m over a base field F_q."""

    def __init__(self, base: FieldSpec, m: int, cap: int = EXTENSION_CAP):
        if m < 1:
            raise ValueError(f"extension degree must be >= 1, got {m}")
        if base.q**m > cap:
            raise ValueError(f"extension order {base.q}**{m} exceeds cap {cap}")
        self.base = base
        self.m = m
        self.q = base.q**m
        self.modulus = smallest_irreducible(base, m) if m > 1 else (0, 1)
        self._setup(base, m, self.modulus)

    def __repr__(self) -> str:
        return f"ExtensionField(base={self.base!r}, m={self.m})"

    def frobenius(self, a: int, i: int = 1) -> int:
        """a ** (q ** i), q the base field order."""
        for _ in range(i):
            a = self.pow(a, self._bq)
        return a

    def basis(self) -> list[int]:
        """The polynomial basis 1, x, ..., x^(m-1) as packed elements."""
        return [self._bq**i for i in range(self.m)]


def extension_embed(
    base: FieldSpec, m: int, cap: int = EXTENSION_CAP
) -> tuple[ExtensionField, Callable[[int], list[int]]]:
    """Build F_{q^m} over ``base`` and return it with its coordinate map to F_q^m."""
    ext = ExtensionField(base, m, cap)
    return ext, ext.coords


@functools.total_ordering
class FieldElement:
    """A field element bound to its field, with arithmetic operators."""

    __slots__ = ("spec", "value")

    def __init__(self, spec: FieldSpec, value: int):
        value = int(value)
        if not 0 <= value < spec.q:
            raise ValueError(f"{value} out of range for F_{spec.q}")
        self.spec = spec
        self.value = value

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise ValueError("elements belong to different fields")
            return other.value
        if isinstance(other, int):
            return other % self.spec.p if self.spec.e == 1 else FieldElement(self.spec, other).value
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        return FieldElement(self.spec, self.spec.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        return FieldElement(self.spec, self.spec.sub(self.value, b))

    def __rsub__(self, other):
        b = self._other(other)
        return FieldElement(self.spec, self.spec.sub(b, self.value))

    def __mul__(self, other):
        b = self._other(other)
        return FieldElement(self.spec, self.spec.mul(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        return FieldElement(self.spec, self.spec.div(self.value, b))

    def __neg__(self):
        return FieldElement(self.spec, self.spec.neg(self.value))

    def __pow__(self, n: int):
        return FieldElement(self.spec, self.spec.pow(self.value, n))

    def inverse(self) -> FieldElement:
        return FieldElement(self.spec, self.spec.inv(self.value))

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.spec == other.spec and self.value == other.value
        if isinstance(other, int):
            return self.value == other
        return NotImplemented

    def __lt__(self, other) -> bool:
        return self.value < self._other(other)

    def __hash__(self) -> int:
        return hash((self.spec, self.value))

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"F{self.spec.q}({self.value})"


_OPS = {
    "add": lambda F, a, b: F.add(a, b),
    "sub": lambda F, a, b: F.sub(a, b),
    "mul": lambda F, a, b: F.mul(a, b),
    "inv": lambda F, a, b: F.inv(a),
    "neg": lambda F, a, b: F.neg(a),
}


def field_arith(op: str, a: FieldElement, b: FieldElement | None = None) -> FieldElement:
    """Apply one of add/sub/mul/inv/neg to field elements."""
    if op not in _OPS:
        raise ValueError(f"unknown operation {op!r}")
    binary = op in ("add", "sub", "mul")
    if binary:
        if b is None:
            raise ValueError(f"{op} needs two operands")
        if b.spec != a.spec:
            raise ValueError("elements belong to different fields")
    return FieldElement(a.spec, _OPS[op](a.spec, a.value, b.value if binary else None))
