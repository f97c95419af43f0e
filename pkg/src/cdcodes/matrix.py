"""Dense matrices over F_q with reduced row echelon form and block operations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .field import FieldSpec


class RrefResult(NamedTuple):
    R: "MatrixOverFq"
    rank: int
    pivots: list[int]


def _rref_rows_gf2(masks: list[int], cols: int) -> tuple[list[int], list[int]]:
    # bit j of a mask is column j
    rows = list(masks)
    pivots = []
    r = 0
    for c in range(cols):
        bit = 1 << c
        for i in range(r, len(rows)):
            if rows[i] & bit:
                break
        else:
            continue
        rows[r], rows[i] = rows[i], rows[r]
        pr = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] & bit:
                rows[i] ^= pr
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


@dataclass(frozen=True)
class MatrixOverFq:
    """An immutable ``rows x cols`` matrix with entries stored row-major as ints."""

    field: FieldSpec
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative shape")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix"
            )
        q = self.field.q
        if any(not 0 <= x < q for x in self.entries):
            raise ValueError(f"entry out of range for F_{q}")

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[Sequence[int]], cols: int | None = None):
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(field, len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> MatrixOverFq:
        return cls(field, rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> MatrixOverFq:
        return cls(field, n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def from_row_masks(cls, field: FieldSpec, masks: Iterable[int], cols: int) -> MatrixOverFq:
        """Inverse of :meth:`row_masks` (q = 2 only)."""
        masks = list(masks)
        return cls(field, len(masks), cols, tuple((m >> j) & 1 for m in masks for j in range(cols)))

    # -- access --------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, idx: tuple[int, int]) -> int:
        i, j = idx
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def row_masks(self) -> list[int]:
        """Rows packed as bit masks, column j at bit j.  Binary field only."""
        if self.field.q != 2:
            raise ValueError("row masks need q = 2")
        return [
            sum(b << j for j, b in enumerate(self.row(i)))
            for i in range(self.rows)
        ]

    def key(self) -> bytes:
        """Byte serialisation used for hashing and set membership."""
        width = (self.field.q - 1).bit_length() + 7 >> 3
        head = self.rows.to_bytes(4, "big") + self.cols.to_bytes(4, "big")
        return head + b"".join(x.to_bytes(width, "big") for x in self.entries)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def __repr__(self) -> str:
        return f"MatrixOverFq(q={self.field.q}, {self.rows}x{self.cols}, {self.to_rows()})"

    # -- arithmetic ----------------------------------------------------------

    def _same_field(self, other: MatrixOverFq) -> None:
        if self.field != other.field:
            raise ValueError("matrices over different fields")

    def __add__(self, other: MatrixOverFq) -> MatrixOverFq:
        self._same_field(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        F = self.field
        return MatrixOverFq(F, self.rows, self.cols, tuple(map(F.add, self.entries, other.entries)))

    def __sub__(self, other: MatrixOverFq) -> MatrixOverFq:
        self._same_field(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        F = self.field
        return MatrixOverFq(F, self.rows, self.cols, tuple(map(F.sub, self.entries, other.entries)))

    def scale(self, c: int) -> MatrixOverFq:
        F = self.field
        return MatrixOverFq(F, self.rows, self.cols, tuple(F.mul(c, x) for x in self.entries))

    def __matmul__(self, other: MatrixOverFq) -> MatrixOverFq:
        self._same_field(other)
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        F = self.field
        out = []
        for i in range(self.rows):
            a = self.row(i)
            for j in range(other.cols):
                s = 0
                for t in range(self.cols):
                    if a[t]:
                        s = F.add(s, F.mul(a[t], other.entries[t * other.cols + j]))
                out.append(s)
        return MatrixOverFq(F, self.rows, other.cols, tuple(out))

    @property
    def T(self) -> MatrixOverFq:
        return MatrixOverFq(
            self.field,
            self.cols,
            self.rows,
            tuple(self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)),
        )

    # -- echelon forms -------------------------------------------------------

    def rref(self) -> RrefResult:
        """Reduced row echelon form, rank and pivot columns."""
        if self.field.q == 2:
            masks, pivots = _rref_rows_gf2(self.row_masks(), self.cols)
            return RrefResult(MatrixOverFq.from_row_masks(self.field, masks, self.cols), len(pivots), pivots)
        F = self.field
        m = self.to_rows()
        pivots = []
        r = 0
        for c in range(self.cols):
            if r == self.rows:
                break
            piv = next((i for i in range(r, self.rows) if m[i][c]), None)
            if piv is None:
                continue
            m[r], m[piv] = m[piv], m[r]
            inv = F.inv(m[r][c])
            m[r] = [F.mul(inv, x) for x in m[r]]
            for i in range(self.rows):
                f = m[i][c]
                if i != r and f:
                    m[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
        return RrefResult(MatrixOverFq.from_rows(F, m, self.cols), r, pivots)

    def rank(self) -> int:
        if self.field.q == 2:
            return len(_rref_rows_gf2(self.row_masks(), self.cols)[1])
        return self.rref().rank

    # -- text form -----------------------------------------------------------

    def to_text(self) -> str:
        return "\n".join(" ".join(str(x) for x in self.row(i)) for i in range(self.rows))

    @classmethod
    def from_text(cls, field: FieldSpec, text: str) -> MatrixOverFq:
        lines = [ln for ln in text.splitlines() if ln.strip()]
        return cls.from_rows(field, [[int(tok) for tok in ln.split()] for ln in lines])


def rref(M: MatrixOverFq) -> RrefResult:
    return M.rref()


def rank(M: MatrixOverFq) -> int:
    return M.rank()


def hconcat(A: MatrixOverFq, B: MatrixOverFq) -> MatrixOverFq:
    """Horizontal concatenation ``(A | B)``."""
    A._same_field(B)
    if A.rows != B.rows:
        raise ValueError(f"row counts differ: {A.rows} vs {B.rows}")
    entries = []
    for i in range(A.rows):
        entries.extend(A.row(i))
        entries.extend(B.row(i))
    return MatrixOverFq(A.field, A.rows, A.cols + B.cols, tuple(entries))


def vstack(A: MatrixOverFq, B: MatrixOverFq) -> MatrixOverFq:
    A._same_field(B)
    if A.cols != B.cols:
        raise ValueError(f"column counts differ: {A.cols} vs {B.cols}")
    return MatrixOverFq(A.field, A.rows + B.rows, A.cols, A.entries + B.entries)


def sub(A: MatrixOverFq, B: MatrixOverFq) -> MatrixOverFq:
    return A - B


def matmul(A: MatrixOverFq, B: MatrixOverFq) -> MatrixOverFq:
    return A @ B
