"""Subspaces of F_q^n, the subspace distance, and constant dimension codes."""

from __future__ import annotations

import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _gf2
from .field import FieldSpec, field_from_order
from .matrix import MatrixOverFq, vstack

log = logging.getLogger(__name__)

# codes above this size are not checked pairwise unless asked explicitly
FULL_VERIFY_LIMIT = 10_000


@dataclass(frozen=True)
class Subspace:
    """A k-dimensional subspace of F_q^n, identified by its rref generator."""

    generator: MatrixOverFq

    @classmethod
    def from_matrix(cls, M: MatrixOverFq) -> Subspace:
        R, rank, _ = M.rref()
        if rank != M.rows:
            raise ValueError(f"generator has rank {rank} but {M.rows} rows")
        return cls(R)

    @property
    def field(self) -> FieldSpec:
        return self.generator.field

    @property
    def n(self) -> int:
        return self.generator.cols

    @property
    def k(self) -> int:
        return self.generator.rows

    def key(self) -> bytes:
        return self.generator.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __eq__(self, other) -> bool:
        return isinstance(other, Subspace) and self.key() == other.key()


def subspace_from_matrix(M: MatrixOverFq) -> Subspace:
    return Subspace.from_matrix(M)


def subspace_distance(U: Subspace, W: Subspace) -> int:
    """dim(U + W) - dim(U ∩ W), via the rank of the stacked generators."""
    if U.field != W.field or U.n != W.n:
        raise ValueError("subspaces live in different ambient spaces")
    return 2 * vstack(U.generator, W.generator).rank() - U.k - W.k


class ConstantDimensionCode:
    """An ordered collection of k-subspaces of F_q^n.

    Duplicates are rejected unless ``allow_duplicates`` is set; that escape
    hatch exists so that a faulty code read from disk can still be verified
    and reported on.
    """

    def __init__(
        self,
        field: FieldSpec,
        n: int,
        k: int,
        codewords: Iterable[Subspace],
        claimed_min_distance: int | None = None,
        allow_duplicates: bool = False,
    ):
        self.field = field
        self.n = n
        self.k = k
        self.codewords = list(codewords)
        self.claimed_min_distance = claimed_min_distance
        if claimed_min_distance is not None and claimed_min_distance % 2:
            raise ValueError("claimed minimum distance must be even")
        for i, c in enumerate(self.codewords):
            if c.field != field or c.n != n or c.k != k:
                raise ValueError(f"codeword {i} is not a {k}-subspace of F_{field.q}^{n}")
        if not allow_duplicates:
            seen: dict[bytes, int] = {}
            for i, c in enumerate(self.codewords):
                j = seen.setdefault(c.key(), i)
                if j != i:
                    raise ValueError(f"codewords {j} and {i} span the same subspace")

    @property
    def q(self) -> int:
        return self.field.q

    def __len__(self) -> int:
        return len(self.codewords)

    def __iter__(self):
        return iter(self.codewords)

    def keys(self) -> set[bytes]:
        return {c.key() for c in self.codewords}

    def __repr__(self) -> str:
        return (
            f"ConstantDimensionCode(q={self.q}, n={self.n}, k={self.k}, "
            f"M={len(self)}, d={self.claimed_min_distance})"
        )

    # -- file format ---------------------------------------------------------

    def to_text(self) -> str:
        d = "-" if self.claimed_min_distance is None else str(self.claimed_min_distance)
        parts = [f"cdc q={self.q} n={self.n} k={self.k} d={d} M={len(self)}"]
        parts.extend(c.generator.to_text() for c in self.codewords)
        return "\n\n".join(parts) + "\n"

    def write(self, path) -> None:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(self.to_text())

    @classmethod
    def from_text(cls, text: str, allow_duplicates: bool = True) -> ConstantDimensionCode:
        return parse_code(text, allow_duplicates=allow_duplicates)

    @classmethod
    def read(cls, path, allow_duplicates: bool = True) -> ConstantDimensionCode:
        with open(path, encoding="ascii") as fh:
            return parse_code(fh.read(), allow_duplicates=allow_duplicates)


class CodeFormatError(ValueError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


def parse_code(text: str, allow_duplicates: bool = True) -> ConstantDimensionCode:
    lines = text.splitlines()
    if not lines:
        raise CodeFormatError(1, "empty file")
    head = lines[0].split()
    if not head or head[0] != "cdc":
        raise CodeFormatError(1, "expected header 'cdc q=.. n=.. k=.. d=.. M=..'")
    try:
        fields = dict(tok.split("=", 1) for tok in head[1:])
        q, n, k, M = (int(fields[key]) for key in ("q", "n", "k", "M"))
        d = None if fields["d"] == "-" else int(fields["d"])
        F = field_from_order(q)
    except (KeyError, ValueError) as exc:
        raise CodeFormatError(1, f"bad header: {exc}") from None

    blocks: list[tuple[int, list[list[int]]]] = []
    current: list[list[int]] = []
    start = 0
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            if current:
                blocks.append((start, current))
                current = []
            continue
        if not current:
            start = lineno
        try:
            row = [int(tok) for tok in line.split()]
        except ValueError:
            raise CodeFormatError(lineno, "non-integer entry") from None
        if len(row) != n:
            raise CodeFormatError(lineno, f"expected {n} entries, got {len(row)}")
        if any(not 0 <= x < q for x in row):
            raise CodeFormatError(lineno, f"entry outside [0, {q})")
        current.append(row)
    if current:
        blocks.append((start, current))

    if len(blocks) != M:
        raise CodeFormatError(len(lines), f"header says M={M} but found {len(blocks)} blocks")
    words = []
    for start, rows in blocks:
        if len(rows) != k:
            raise CodeFormatError(start, f"block has {len(rows)} rows, expected {k}")
        mat = MatrixOverFq.from_rows(F, rows, n)
        try:
            words.append(Subspace.from_matrix(mat))
        except ValueError as exc:
            raise CodeFormatError(start, str(exc)) from None
    try:
        return ConstantDimensionCode(F, n, k, words, d, allow_duplicates=allow_duplicates)
    except ValueError as exc:
        raise CodeFormatError(1, str(exc)) from None


# ---------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class Sample:
    """Seeded random pair sampling; can refute a distance claim but never certify it."""

    count: int
    seed: int = 0


@dataclass(frozen=True)
class VerifyReport:
    ok: bool
    violating_pair: tuple[int, int] | None
    violating_distance: int | None
    observed_min_distance: int | None
    pairs_checked: int
    certified: bool

    def summary(self) -> str:
        if self.ok:
            md = "none" if self.observed_min_distance is None else self.observed_min_distance
            return f"ok min_distance={md}"
        i, j = self.violating_pair
        return f"FAIL pair={i},{j} distance={self.violating_distance}"


# worker state for the process pool
_STATE: dict = {}


def _init_worker(state: dict) -> None:
    _STATE.clear()
    _STATE.update(state)


def _pack(code: ConstantDimensionCode) -> dict:
    if code.q == 2 and code.n <= 64:
        rows = np.array([c.generator.row_masks() for c in code], dtype=np.uint64).reshape(len(code), code.k)
        # generators are in rref: each row's pivot is its lowest set bit
        pivots = [[(m & -m).bit_length() - 1 for m in r] for r in rows.tolist()]
        return {"mode": "gf2", "rows": rows, "pivots": pivots, "d": None}
    return {"mode": "generic", "words": [c.generator for c in code], "d": None}


def _scan_rows(lo: int, hi: int) -> tuple[int | None, tuple[int, int, int] | None]:
    """Exact min distance over pairs (i, j), lo <= i < hi, i < j.

    Also returns the lexicographically first pair closer than the target.
    """
    d = _STATE["d"]
    best: int | None = None
    first_bad = None
    if _STATE["mode"] == "gf2":
        rows = _STATE["rows"]
        pivots = _STATE["pivots"]
        for i in range(lo, hi):
            rest = rows[i + 1 :]
            if not len(rest):
                continue
            reduced = _gf2.reduce_against(rest, [int(x) for x in rows[i]], pivots[i])
            dist = 2 * _gf2.batch_rank(reduced)
            m = int(dist.min())
            best = m if best is None else min(best, m)
            if first_bad is None and m < d:
                j = int(np.argmax(dist < d))
                first_bad = (i, i + 1 + j, int(dist[j]))
    else:
        words = _STATE["words"]
        for i in range(lo, hi):
            Ui = words[i]
            for j in range(i + 1, len(words)):
                Wj = words[j]
                dist = 2 * vstack(Ui, Wj).rank() - Ui.rows - Wj.rows
                if best is None or dist < best:
                    best = dist
                if first_bad is None and dist < d:
                    first_bad = (i, j, dist)
    return best, first_bad


def _chunks(M: int, parts: int) -> list[tuple[int, int]]:
    # row i carries M - 1 - i pairs; split so every chunk has roughly equal work
    total = M * (M - 1) // 2
    bounds = [0]
    acc = 0
    target = total / max(parts, 1)
    for i in range(M):
        acc += M - 1 - i
        if acc >= target * len(bounds) and len(bounds) < parts:
            bounds.append(i + 1)
    bounds.append(M)
    return [(a, b) for a, b in zip(bounds, bounds[1:]) if a < b]


def verify_cdc(
    code: ConstantDimensionCode,
    d: int | None = None,
    sampling: Sample | None = None,
    workers: int = 1,
    force: bool = False,
) -> VerifyReport:
    """Check that all codewords of ``code`` are at subspace distance >= d.

    Without ``sampling`` every pair is examined and the exact minimum distance
    is reported; codes above FULL_VERIFY_LIMIT need ``force=True`` for that.
    With a :class:`Sample` only a seeded pseudorandom set of pairs is examined.
    The report does not depend on ``workers``.
    """
    if d is None:
        d = code.claimed_min_distance
    if d is None:
        raise ValueError("no target distance given and none claimed by the code")
    M = len(code)
    state = _pack(code)
    state["d"] = d

    if sampling is not None:
        return _verify_sampled(code, d, sampling, state)

    if M > FULL_VERIFY_LIMIT and not force:
        raise ValueError(
            f"code has {M} codewords (> {FULL_VERIFY_LIMIT}); pass force=True or use sampling"
        )
    if M < 2:
        return VerifyReport(True, None, None, None, 0, True)

    if workers <= 1:
        _init_worker(state)
        results = [_scan_rows(0, M)]
    else:
        with ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(state,)) as pool:
            futures = [pool.submit(_scan_rows, a, b) for a, b in _chunks(M, 4 * workers)]
            results = [f.result() for f in futures]

    best = min(r[0] for r in results if r[0] is not None)
    bad = [r[1] for r in results if r[1] is not None]
    first = min(bad) if bad else None
    return VerifyReport(
        ok=first is None,
        violating_pair=None if first is None else first[:2],
        violating_distance=None if first is None else first[2],
        observed_min_distance=best,
        pairs_checked=M * (M - 1) // 2,
        certified=True,
    )


def _verify_sampled(code, d: int, sampling: Sample, state: dict) -> VerifyReport:
    M = len(code)
    if M < 2:
        return VerifyReport(True, None, None, None, 0, False)
    rng = random.Random(sampling.seed)
    pairs = sorted({tuple(sorted(rng.sample(range(M), 2))) for _ in range(sampling.count)})
    best = None
    first = None
    for i, j in pairs:
        dist = subspace_distance(code.codewords[i], code.codewords[j])
        if best is None or dist < best:
            best = dist
        if first is None and dist < d:
            first = (i, j, dist)
    return VerifyReport(
        ok=first is None,
        violating_pair=None if first is None else first[:2],
        violating_distance=None if first is None else first[2],
        observed_min_distance=best,
        pairs_checked=len(pairs),
        certified=False,
    )


def random_subspace(field: FieldSpec, n: int, k: int, rng: random.Random) -> Subspace:
    """Uniformly random k-subspace (rejection sampling on full-rank matrices)."""
    while True:
        M = MatrixOverFq(field, k, n, tuple(rng.randrange(field.q) for _ in range(k * n)))
        if M.rank() == k:
            return Subspace.from_matrix(M)


def code_from_matrices(
    field: FieldSpec, mats: Sequence[MatrixOverFq], d: int | None = None, **kwargs
) -> ConstantDimensionCode:
    words = [Subspace.from_matrix(M) for M in mats]
    return ConstantDimensionCode(field, mats[0].cols, mats[0].rows, words, d, **kwargs)
