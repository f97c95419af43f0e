"""Explicit constant dimension codes: lifted MRD, linkage and parallel linkage.

Block layout of the parallel constructions (length n1 + n2, dimension k)::

    first half:   Im(U | Q1)   U over n1 (base CDC),  Q1 k x n2 (MRD, distance d/2)
    second half:  Im(Q2 | V)   Q2 k x (n1 + t) with rank <= k - d/2,  V over n2 - t

Any W1 in the first half and W2 in the second meet in a space of dimension
at most rank(Q2) <= k - d/2, so their distance is at least d.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .field import field_from_order
from .matrix import MatrixOverFq, hconcat
from .rankmetric import ENUMERATION_CAP, mrd_matrices, restricted_matrices
from .subspace import ConstantDimensionCode, Subspace


@dataclass(frozen=True)
class ScRepresentation:
    """One full-rank generator per codeword of a constant dimension code."""

    code: ConstantDimensionCode

    @property
    def matrices(self) -> list[MatrixOverFq]:
        return [c.generator for c in self.code]

    @property
    def n(self) -> int:
        return self.code.n

    @property
    def k(self) -> int:
        return self.code.k

    def __len__(self) -> int:
        return len(self.code)


@dataclass(frozen=True)
class ParallelLinkageParams:
    q: int
    k: int
    d: int
    n1: int
    n2: int
    t: int = 0

    def validate(self) -> None:
        if self.d % 2 or self.d <= 0:
            raise ValueError(f"d must be a positive even integer, got {self.d}")
        if self.k < self.d:
            raise ValueError(f"parallel linkage needs k >= d (k={self.k}, d={self.d})")
        if self.n1 < self.k or self.n2 < self.k:
            raise ValueError(f"segments must have length >= k (n1={self.n1}, n2={self.n2}, k={self.k})")
        if not 0 <= self.t <= self.n2 - self.k:
            raise ValueError(f"t={self.t} outside [0, n2 - k] = [0, {self.n2 - self.k}]")


def singleton(q: int, n: int, k: int) -> ScRepresentation:
    """The one-word code {Im(I_k | 0)} in F_q^n."""
    F = field_from_order(q)
    gen = hconcat(MatrixOverFq.identity(F, k), MatrixOverFq.zeros(F, k, n - k))
    return ScRepresentation(ConstantDimensionCode(F, n, k, [Subspace(gen)]))


def _lift(prefix: MatrixOverFq, suffix: MatrixOverFq) -> Subspace:
    return Subspace.from_matrix(hconcat(prefix, suffix))


def lifted_mrd(q: int, n: int, k: int, d: int, cap: int = ENUMERATION_CAP) -> ConstantDimensionCode:
    """{rowspan(I_k | A) : A in Q_q(k, n - k, d/2)}."""
    if d % 2 or d <= 0:
        raise ValueError(f"d must be a positive even integer, got {d}")
    if not n >= k >= d // 2:
        raise ValueError(f"need n >= k >= d/2, got n={n}, k={k}, d={d}")
    F = field_from_order(q)
    I = MatrixOverFq.identity(F, k)
    if n == k:
        return ConstantDimensionCode(F, n, k, [Subspace(I)], d)
    # (I_k | A) is already reduced
    words = [Subspace(hconcat(I, A)) for A in mrd_matrices(q, k, n - k, d // 2, cap)]
    return ConstantDimensionCode(F, n, k, words, d)


def _check_matrices(mats: Sequence[MatrixOverFq], rows: int, name: str) -> int:
    if not mats:
        raise ValueError(f"{name} is empty")
    cols = mats[0].cols
    for M in mats:
        if M.rows != rows or M.cols != cols:
            raise ValueError(f"{name} mixes shapes: {M.shape} vs {(rows, cols)}")
    return cols


def linkage(
    U: ScRepresentation,
    Q: Sequence[MatrixOverFq],
    d2: int | None = None,
) -> ConstantDimensionCode:
    """{Im(U_i | Q_j)}: an (n1 + n2, N1 N2, min(d1, 2 d2), k) code.

    ``d2`` is the rank distance of ``Q``; when omitted the claimed distance of
    the result is the claimed distance of ``U``.
    """
    k = U.k
    n2 = _check_matrices(Q, k, "Q")
    if Q[0].field != U.code.field:
        raise ValueError("U and Q are over different fields")
    claims = [x for x in (U.code.claimed_min_distance, None if d2 is None else 2 * d2) if x is not None]
    words = [_lift(A, B) for A in U.matrices for B in Q]
    return ConstantDimensionCode(U.code.field, U.n + n2, k, words, min(claims) if claims else None)


def _check_restricted(Q2: Sequence[MatrixOverFq], k: int, d: int) -> None:
    u = k - d // 2
    for i, M in enumerate(Q2):
        r = M.rank()
        if r > u:
            raise ValueError(f"Q2[{i}] has rank {r} > k - d/2 = {u}")


def generalized_parallel_linkage(
    params: ParallelLinkageParams,
    U: ScRepresentation,
    V: ScRepresentation,
    Q1: Sequence[MatrixOverFq],
    Q2: Sequence[MatrixOverFq],
) -> ConstantDimensionCode:
    """Union of Im(U | Q1) and Im(Q2 | V) with the shift ``params.t``.

    U lives in F_q^n1, V in F_q^(n2 - t), Q1 is k x n2 and Q2 is k x (n1 + t)
    with every rank <= k - d/2 (checked here).
    """
    params.validate()
    k, d, n1, n2, t = params.k, params.d, params.n1, params.n2, params.t
    if U.k != k or V.k != k:
        raise ValueError("base codes must have dimension k")
    if U.n != n1:
        raise ValueError(f"U lives in F_q^{U.n}, expected n1 = {n1}")
    if V.n != n2 - t:
        raise ValueError(f"V lives in F_q^{V.n}, expected n2 - t = {n2 - t}")
    if _check_matrices(Q1, k, "Q1") != n2:
        raise ValueError(f"Q1 must be k x {n2}")
    if _check_matrices(Q2, k, "Q2") != n1 + t:
        raise ValueError(f"Q2 must be k x {n1 + t}")
    for base in (U, V):
        dist = base.code.claimed_min_distance
        if len(base) > 1 and dist is not None and dist < d:
            raise ValueError(f"base code has distance {dist} < {d}")
    _check_restricted(Q2, k, d)

    field = U.code.field
    first = [_lift(A, B) for A in U.matrices for B in Q1]
    second = [_lift(B, A) for A in V.matrices for B in Q2]
    return ConstantDimensionCode(field, n1 + n2, k, first + second, d)


def parallel_linkage(
    params: ParallelLinkageParams,
    U: ScRepresentation,
    V: ScRepresentation,
    Q1: Sequence[MatrixOverFq],
    Q2: Sequence[MatrixOverFq],
) -> ConstantDimensionCode:
    """The t = 0 case: U over n1, V over n2, Q1 k x n2, Q2 k x n1."""
    if params.t != 0:
        raise ValueError("parallel_linkage has t = 0; use generalized_parallel_linkage")
    return generalized_parallel_linkage(params, U, V, Q1, Q2)


def default_rank_codes(
    params: ParallelLinkageParams, cap: int = ENUMERATION_CAP
) -> tuple[list[MatrixOverFq], list[MatrixOverFq]]:
    """Gabidulin Q1 (k x n2) and its rank-restricted companion Q2 (k x (n1 + t))."""
    q, k, d = params.q, params.k, params.d
    Q1 = mrd_matrices(q, k, params.n2, d // 2, cap)
    Q2 = restricted_matrices(q, k, params.n1 + params.t, d // 2, k - d // 2, cap)
    return Q1, Q2


def build_parallel(
    params: ParallelLinkageParams,
    U: ScRepresentation | None = None,
    V: ScRepresentation | None = None,
    cap: int = ENUMERATION_CAP,
) -> ConstantDimensionCode:
    """Parallel linkage with Gabidulin rank codes; base codes default to singletons."""
    params.validate()
    U = U or singleton(params.q, params.n1, params.k)
    V = V or singleton(params.q, params.n2 - params.t, params.k)
    Q1, Q2 = default_rank_codes(params, cap)
    return generalized_parallel_linkage(params, U, V, Q1, Q2)
