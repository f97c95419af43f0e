"""Rank-metric codes: q-binomials, MRD rank distributions and Gabidulin codes.

All counts are exact Python integers.  Gabidulin codewords are m x n matrices
over F_q (m >= n): column j holds the coordinates of f(x^j) in F_{q^m}, where
f(z) = sum_i a_i z^(q^i) is a linearized polynomial with n - d + 1 message
coefficients a_i in F_{q^m}.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator

import numpy as np

from . import _gf2
from .field import ExtensionField, field_from_order, prime_power
from .matrix import MatrixOverFq

ENUMERATION_CAP = 2**24


class CapExceeded(ValueError):
    """Raised instead of silently truncating an enumeration."""


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of F_q^n (0 outside 0 <= k <= n)."""
    if k < 0 or k > n:
        return 0
    num = 1
    den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (k - i) - 1
    return num // den


@dataclass(frozen=True)
class MrdCodeSpec:
    """Parameters of an MRD code in the space of m x n matrices with rank distance d."""

    q: int
    m: int
    n: int
    d: int

    def __post_init__(self):
        prime_power(self.q)
        if self.m < 1 or self.n < 1:
            raise ValueError(f"matrix dimensions must be positive, got {self.m}x{self.n}")
        if not 1 <= self.d <= min(self.m, self.n):
            raise ValueError(f"rank distance {self.d} outside [1, {min(self.m, self.n)}]")

    @property
    def size(self) -> int:
        return mrd_size(self)

    def normalized(self) -> MrdCodeSpec:
        """The same code with m >= n (transposition keeps ranks)."""
        if self.m >= self.n:
            return self
        return MrdCodeSpec(self.q, self.n, self.m, self.d)

    def __str__(self) -> str:
        return f"Q_{self.q}({self.m},{self.n},{self.d})"


def mrd_size(spec: MrdCodeSpec) -> int:
    big, small = max(spec.m, spec.n), min(spec.m, spec.n)
    return spec.q ** (big * (small - spec.d + 1))


@dataclass(frozen=True)
class RankDistribution:
    spec: MrdCodeSpec
    counts: dict[int, int] = field(hash=False)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def __getitem__(self, r: int) -> int:
        return self.counts.get(r, 0)

    def restricted_count(self, u_max: int) -> int:
        """Codewords of rank <= u_max, the zero word included."""
        return sum(c for r, c in self.counts.items() if r <= u_max)


def delsarte_rank_distribution(spec: MrdCodeSpec) -> RankDistribution:
    """Codeword counts by rank for any MRD code with these parameters."""
    s = spec.normalized()
    q, m, n, d = s.q, s.m, s.n, s.d
    counts = {0: 1}
    for r in range(d, n + 1):
        acc = 0
        for i in range(r - d + 1):
            term = q ** (i * (i - 1) // 2) * gaussian_binomial(r, i, q) * (q ** (m * (r - d - i + 1)) - 1)
            acc += -term if i % 2 else term
        counts[r] = gaussian_binomial(n, r, q) * acc
    return RankDistribution(s, counts)


class GabidulinCode:
    """Explicit Gabidulin code for a normalized :class:`MrdCodeSpec`.

    The evaluation points are 1, x, ..., x^(n-1) in the polynomial basis of
    F_{q^m}.  Codewords are enumerated in lexicographic order of the message
    (a_0, ..., a_{k-1}), each a_i compared by its integer encoding.
    """

    def __init__(self, spec: MrdCodeSpec, cap: int = ENUMERATION_CAP):
        if spec.m < spec.n:
            raise ValueError(f"{spec} needs m >= n; transpose or use spec.normalized()")
        self.spec = spec
        self.cap = cap
        self.base = field_from_order(spec.q)
        self.ext = ExtensionField(self.base, spec.m)
        self.points = self.ext.basis()[: spec.n]
        self.message_length = spec.n - spec.d + 1

    @property
    def size(self) -> int:
        return mrd_size(self.spec)

    def _check_cap(self) -> None:
        if self.size > self.cap:
            raise CapExceeded(
                f"{self.spec} has {self.size} codewords, above the enumeration cap {self.cap}"
            )

    def evaluate(self, message: list[int]) -> MatrixOverFq:
        """Codeword of the linearized polynomial with coefficients ``message``."""
        if len(message) != self.message_length:
            raise ValueError(f"message must have {self.message_length} coefficients")
        ext = self.ext
        cols = []
        for alpha in self.points:
            val = 0
            for i, a in enumerate(message):
                val = ext.add(val, ext.mul(a, ext.frobenius(alpha, i)))
            cols.append(ext.coords(val))
        m, n = self.spec.m, self.spec.n
        return MatrixOverFq(self.base, m, n, tuple(cols[j][l] for l in range(m) for j in range(n)))

    @cached_property
    def _basis(self) -> list[MatrixOverFq]:
        # F_q-basis of the code, least significant message digit first
        out = []
        for i in reversed(range(self.message_length)):
            for l in range(self.spec.m):
                msg = [0] * self.message_length
                msg[i] = self.ext.basis()[l]
                out.append(self.evaluate(msg))
        return out

    def packed_words(self) -> np.ndarray:
        """All codewords (q = 2) packed column-major: entry (l, j) at bit j*m + l."""
        if self.spec.q != 2:
            raise ValueError("packed enumeration needs q = 2")
        m, n = self.spec.m, self.spec.n
        if m * n > 64:
            raise ValueError("codewords do not fit in 64 bits")
        self._check_cap()
        basis = [
            sum(B[l, j] << (j * m + l) for l in range(m) for j in range(n))
            for B in self._basis
        ]
        return _gf2.span_by_doubling(basis)

    def _matrix_from_packed(self, w: int) -> MatrixOverFq:
        m, n = self.spec.m, self.spec.n
        return MatrixOverFq(self.base, m, n, tuple((w >> (j * m + l)) & 1 for l in range(m) for j in range(n)))

    def _packable(self) -> bool:
        return self.spec.q == 2 and self.spec.m * self.spec.n <= 64

    def __iter__(self) -> Iterator[MatrixOverFq]:
        self._check_cap()
        if self._packable():
            for w in self.packed_words().tolist():
                yield self._matrix_from_packed(w)
            return
        F = self.base
        basis = self._basis[::-1]  # most significant digit first
        m, n = self.spec.m, self.spec.n
        for digits in itertools.product(range(F.q), repeat=len(basis)):
            acc = [0] * (m * n)
            for c, B in zip(digits, basis):
                if c:
                    acc = [F.add(x, F.mul(c, y)) for x, y in zip(acc, B.entries)]
            yield MatrixOverFq(F, m, n, tuple(acc))

    def rank_histogram(self) -> dict[int, int]:
        """Brute-force count of codewords by rank."""
        if self._packable():
            ranks = _gf2.batch_rank(
                _gf2.unpack_columns(self.packed_words(), self.spec.m, self.spec.n)
            )
            values, counts = np.unique(ranks, return_counts=True)
            return {int(r): int(c) for r, c in zip(values, counts)}
        hist: dict[int, int] = {}
        for M in self:
            r = M.rank()
            hist[r] = hist.get(r, 0) + 1
        return hist

    def restricted(self, u_max: int) -> list[MatrixOverFq]:
        """Codewords of rank at most ``u_max``, in enumeration order."""
        if self._packable():
            words = self.packed_words()
            ranks = _gf2.batch_rank(_gf2.unpack_columns(words, self.spec.m, self.spec.n))
            return [self._matrix_from_packed(w) for w in words[ranks <= u_max].tolist()]
        return [M for M in self if M.rank() <= u_max]


def gabidulin_enumerate(spec: MrdCodeSpec, cap: int = ENUMERATION_CAP) -> Iterator[MatrixOverFq]:
    """Stream the m x n codewords of the Gabidulin code for ``spec`` (m >= n)."""
    return iter(GabidulinCode(spec, cap))


def restricted_subcode(spec: MrdCodeSpec, u_max: int, cap: int = ENUMERATION_CAP) -> list[MatrixOverFq]:
    """Gabidulin codewords of rank <= u_max; always contains the zero matrix."""
    if u_max < 0:
        raise ValueError("u_max must be non-negative")
    return GabidulinCode(spec, cap).restricted(u_max)


def _orient(spec: MrdCodeSpec, words: list[MatrixOverFq], rows: int) -> list[MatrixOverFq]:
    if spec.m == rows:
        return words
    return [w.T for w in words]


def mrd_matrices(q: int, rows: int, cols: int, d: int, cap: int = ENUMERATION_CAP) -> list[MatrixOverFq]:
    """A full MRD code of ``rows x cols`` matrices with rank distance d."""
    spec = MrdCodeSpec(q, rows, cols, d).normalized()
    return _orient(spec, list(gabidulin_enumerate(spec, cap)), rows)


def restricted_matrices(
    q: int, rows: int, cols: int, d: int, u_max: int, cap: int = ENUMERATION_CAP
) -> list[MatrixOverFq]:
    """Rank-restricted MRD subcode of ``rows x cols`` matrices (rank <= u_max)."""
    spec = MrdCodeSpec(q, rows, cols, d).normalized()
    return _orient(spec, restricted_subcode(spec, u_max, cap), rows)


def min_rank_distance(words: list[MatrixOverFq]) -> int | None:
    """Exhaustive minimum of rank(A - B) over all pairs of distinct positions."""
    if len(words) < 2:
        return None
    m, n = words[0].shape
    if words[0].field.q == 2 and m * n <= 64:
        packed = np.array(
            [sum(b << i for i, b in enumerate(W.entries)) for W in words], dtype=np.uint64
        )
        row_mask = np.uint64((1 << n) - 1)
        best = None
        for i in range(len(words) - 1):
            diff = packed[i + 1 :] ^ packed[i]
            rows = np.stack([(diff >> np.uint64(r * n)) & row_mask for r in range(m)], axis=1)
            low = int(_gf2.batch_rank(rows).min())
            best = low if best is None else min(best, low)
        return best
    return min((A - B).rank() for A, B in itertools.combinations(words, 2))
