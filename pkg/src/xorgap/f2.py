"""Exact linear algebra over GF(2) with rows packed into Python ints.

Bit ``j`` of a packed integer is coordinate ``j``.  Elimination always pivots
on the lowest column index first, so every basis returned here is in reduced
echelon form and independent of input row order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from .errors import BudgetExceeded, DimensionError


@dataclass(frozen=True)
class BitVec:
    """Fixed-length vector over GF(2)."""

    bits: int
    length: int

    def __post_init__(self) -> None:
        if self.length < 0:
            raise DimensionError("negative length")
        if self.bits < 0 or self.bits >> self.length:
            raise DimensionError(f"bits do not fit in length {self.length}")

    @classmethod
    def zeros(cls, length: int) -> "BitVec":
        return cls(0, length)

    @classmethod
    def from_list(cls, values: Sequence[int]) -> "BitVec":
        bits = 0
        for j, v in enumerate(values):
            if v & 1:
                bits |= 1 << j
        return cls(bits, len(values))

    @classmethod
    def from_string(cls, text: str) -> "BitVec":
        """Parse ``"101"`` with the leftmost character as coordinate 0."""
        return cls.from_list([int(c) for c in text])

    @classmethod
    def from_support(cls, support: Iterable[int], length: int) -> "BitVec":
        bits = 0
        for j in support:
            if not 0 <= j < length:
                raise DimensionError(f"index {j} out of range for length {length}")
            bits ^= 1 << j
        return cls(bits, length)

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, j: int) -> int:
        if not 0 <= j < self.length:
            raise IndexError(j)
        return (self.bits >> j) & 1

    def __iter__(self) -> Iterator[int]:
        for j in range(self.length):
            yield (self.bits >> j) & 1

    def __add__(self, other: "BitVec") -> "BitVec":
        if other.length != self.length:
            raise DimensionError(f"length mismatch: {self.length} vs {other.length}")
        return BitVec(self.bits ^ other.bits, self.length)

    __xor__ = __add__

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def support(self) -> List[int]:
        return [j for j in range(self.length) if (self.bits >> j) & 1]

    def dot(self, other: "BitVec") -> int:
        if other.length != self.length:
            raise DimensionError(f"length mismatch: {self.length} vs {other.length}")
        return (self.bits & other.bits).bit_count() & 1

    def to_list(self) -> List[int]:
        return list(self)

    def __str__(self) -> str:
        return "".join(str(b) for b in self)


@dataclass(frozen=True)
class BitMatrix:
    """Dense GF(2) matrix stored as one packed int per row."""

    rows: Tuple[int, ...]
    n_rows: int
    n_cols: int

    def __post_init__(self) -> None:
        if len(self.rows) != self.n_rows:
            raise DimensionError("row count does not match n_rows")
        for r in self.rows:
            if r < 0 or r >> self.n_cols:
                raise DimensionError(f"row does not fit in {self.n_cols} columns")

    @classmethod
    def from_rows(cls, rows: Sequence[BitVec], n_cols: Optional[int] = None) -> "BitMatrix":
        if n_cols is None:
            if not rows:
                raise DimensionError("cannot infer column count from zero rows")
            n_cols = rows[0].length
        for r in rows:
            if r.length != n_cols:
                raise DimensionError("ragged rows")
        return cls(tuple(r.bits for r in rows), len(rows), n_cols)

    @classmethod
    def from_lists(cls, rows: Sequence[Sequence[int]], n_cols: Optional[int] = None) -> "BitMatrix":
        if n_cols is None:
            n_cols = len(rows[0]) if rows else 0
        return cls.from_rows([BitVec.from_list(r) for r in rows], n_cols)

    @classmethod
    def from_columns(cls, cols: Sequence[BitVec], n_rows: Optional[int] = None) -> "BitMatrix":
        return cls.from_rows(cols, n_rows).T

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int) -> "BitMatrix":
        return cls((0,) * n_rows, n_rows, n_cols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(tuple(1 << i for i in range(n)), n, n)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.n_rows, self.n_cols

    def __getitem__(self, idx: Tuple[int, int]) -> int:
        i, j = idx
        return (self.rows[i] >> j) & 1

    def row(self, i: int) -> BitVec:
        return BitVec(self.rows[i], self.n_cols)

    def column(self, j: int) -> BitVec:
        bits = 0
        for i, r in enumerate(self.rows):
            if (r >> j) & 1:
                bits |= 1 << i
        return BitVec(bits, self.n_rows)

    @property
    def T(self) -> "BitMatrix":
        cols = [0] * self.n_cols
        for i, r in enumerate(self.rows):
            bit = 1 << i
            while r:
                low = r & -r
                cols[low.bit_length() - 1] |= bit
                r ^= low
        return BitMatrix(tuple(cols), self.n_cols, self.n_rows)

    def __matmul__(self, other):
        if isinstance(other, BitVec):
            if other.length != self.n_cols:
                raise DimensionError(f"matrix has {self.n_cols} columns, vector has length {other.length}")
            bits = 0
            for i, r in enumerate(self.rows):
                if (r & other.bits).bit_count() & 1:
                    bits |= 1 << i
            return BitVec(bits, self.n_rows)
        if isinstance(other, BitMatrix):
            if other.n_rows != self.n_cols:
                raise DimensionError(f"inner dimensions differ: {self.n_cols} vs {other.n_rows}")
            out = []
            for r in self.rows:
                acc = 0
                while r:
                    low = r & -r
                    acc ^= other.rows[low.bit_length() - 1]
                    r ^= low
                out.append(acc)
            return BitMatrix(tuple(out), self.n_rows, other.n_cols)
        return NotImplemented

    def is_zero(self) -> bool:
        return not any(self.rows)

    def to_lists(self) -> List[List[int]]:
        return [[(r >> j) & 1 for j in range(self.n_cols)] for r in self.rows]


def _rref(rows: Iterable[int]) -> Tuple[List[int], List[int]]:
    """Reduced row echelon form, lowest column pivots first.

    Returns the nonzero reduced rows ordered by pivot column, and those pivots.
    """
    basis: List[int] = []
    pivots: List[int] = []
    for r in rows:
        for b, p in zip(basis, pivots):
            if (r >> p) & 1:
                r ^= b
        if not r:
            continue
        p = (r & -r).bit_length() - 1
        for k in range(len(basis)):
            if (basis[k] >> p) & 1:
                basis[k] ^= r
        basis.append(r)
        pivots.append(p)
    order = sorted(range(len(basis)), key=pivots.__getitem__)
    return [basis[k] for k in order], [pivots[k] for k in order]


def rank(m: BitMatrix) -> int:
    """Dimension of the row space of ``m``."""
    return len(_rref(m.rows)[0])


def row_space_basis(m: BitMatrix) -> List[BitVec]:
    basis, _ = _rref(m.rows)
    return [BitVec(b, m.n_cols) for b in basis]


def image_basis(m: BitMatrix) -> List[BitVec]:
    """Basis of the column space ``{m x}``, in reduced echelon form."""
    return row_space_basis(m.T)


def reduce_basis(vectors: Sequence[BitVec]) -> List[BitVec]:
    """Reduced echelon basis of the span of ``vectors``."""
    if not vectors:
        return []
    n = vectors[0].length
    for v in vectors:
        if v.length != n:
            raise DimensionError("vectors of different lengths")
    basis, _ = _rref(v.bits for v in vectors)
    return [BitVec(b, n) for b in basis]


def kernel_basis(m: BitMatrix) -> List[BitVec]:
    """Basis of ``{x : m x = 0}``, one vector per free column in ascending order."""
    basis, pivots = _rref(m.rows)
    pivot_set = set(pivots)
    out = []
    for free in range(m.n_cols):
        if free in pivot_set:
            continue
        x = 1 << free
        for b, p in zip(basis, pivots):
            if (b >> free) & 1:
                x |= 1 << p
        out.append(BitVec(x, m.n_cols))
    return out


def solve(m: BitMatrix, b: BitVec) -> Optional[BitVec]:
    """Return some ``x`` with ``m x = b`` (free variables zero), or ``None``."""
    if b.length != m.n_rows:
        raise DimensionError(f"rhs length {b.length} != matrix rows {m.n_rows}")
    n = m.n_cols
    # augment each row with its rhs bit in column n
    aug = [r | (((b.bits >> i) & 1) << n) for i, r in enumerate(m.rows)]
    basis, pivots = _rref(aug)
    x = 0
    for row, p in zip(basis, pivots):
        if p == n:
            return None
        if (row >> n) & 1:
            x |= 1 << p
    return BitVec(x, n)


def in_span(basis: Sequence[BitVec], target: BitVec) -> bool:
    reduced = reduce_basis(basis)
    r = target.bits
    for v in reduced:
        p = (v.bits & -v.bits).bit_length() - 1
        if (r >> p) & 1:
            r ^= v.bits
    return r == 0


def coset_min_weight(span_basis: Sequence[BitVec], target: BitVec,
                     budget: int = 1 << 20) -> Tuple[int, BitVec]:
    """Exact minimum weight over the coset ``target + span(span_basis)``.

    Enumerates all ``2**k`` span members in Gray-code order, ``k`` being the
    dimension of the span.  Raises :class:`BudgetExceeded` if ``2**k > budget``.
    The witness is the first minimiser met in that order.
    """
    for v in span_basis:
        if v.length != target.length:
            raise DimensionError("span vector and target lengths differ")
    basis = [v.bits for v in reduce_basis(span_basis)]
    k = len(basis)
    if (1 << k) > budget:
        raise BudgetExceeded(f"coset enumeration needs 2^{k} members, budget is {budget}")
    cur = target.bits
    best, best_vec = cur.bit_count(), cur
    for i in range(1, 1 << k):
        # flip the basis vector at the lowest set bit of i (Gray code step)
        cur ^= basis[(i & -i).bit_length() - 1]
        w = cur.bit_count()
        if w < best:
            best, best_vec = w, cur
    return best, BitVec(best_vec, target.length)


def span_members(basis: Sequence[BitVec], budget: int = 1 << 20) -> Iterator[int]:
    """Yield every member of the span as a packed int (Gray-code order)."""
    red = [v.bits for v in reduce_basis(basis)]
    if (1 << len(red)) > budget:
        raise BudgetExceeded(f"span has 2^{len(red)} members, budget is {budget}")
    cur = 0
    yield cur
    for i in range(1, 1 << len(red)):
        cur ^= red[(i & -i).bit_length() - 1]
        yield cur
