"""(Co)homology dimensions, cocycle selection, cosystoles, kappa, and exact fillings."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .complex import Chain, SimplicialComplex
from .errors import BudgetExceeded, DimensionError, ParseError, TrivialCohomology
from .f2 import BitVec, coset_min_weight, image_basis, in_span, kernel_basis, rank, solve

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 1 << 20


@dataclass(frozen=True)
class DimensionRow:
    i: int
    c: int
    z_co: int  # dim Z^i
    b_co: int  # dim B^i
    h_co: int  # dim H^i
    z: int     # dim Z_i
    b: int     # dim B_i
    h: int     # dim H_i


@dataclass(frozen=True)
class CohomologyReport:
    rows: Tuple[DimensionRow, ...]
    duality_ok: bool

    def __getitem__(self, i: int) -> DimensionRow:
        return self.rows[i]

    def betti(self) -> Tuple[int, ...]:
        return tuple(r.h_co for r in self.rows)

    def format(self) -> str:
        lines = ["i dimC dimZ^i dimB^i dimH^i dimZ_i dimB_i dimH_i"]
        for r in self.rows:
            lines.append(f"{r.i} {r.c} {r.z_co} {r.b_co} {r.h_co} {r.z} {r.b} {r.h}")
        lines.append(f"duality {'ok' if self.duality_ok else 'FAILED'}")
        return "\n".join(lines)


def _coboundary_rank(X: SimplicialComplex, i: int) -> int:
    return rank(X.coboundary_matrix(i)) if 0 <= i < X.dim else 0


def _boundary_rank(X: SimplicialComplex, i: int) -> int:
    return rank(X.boundary_matrix(i)) if 1 <= i <= X.dim else 0


def report(X: SimplicialComplex) -> CohomologyReport:
    """All chain-space dimensions, computed independently for the two sides.

    Cochain data uses only coboundary matrices and chain data only boundary
    matrices, so the duality identities checked here are not circular.
    """
    rows = []
    ok = True
    for i in range(X.dim + 1):
        c = X.count(i)
        z_co = c - _coboundary_rank(X, i)
        b_co = _coboundary_rank(X, i - 1)
        z = c - _boundary_rank(X, i)
        b = _boundary_rank(X, i + 1)
        row = DimensionRow(i, c, z_co, b_co, z_co - b_co, z, b, z - b)
        ok &= row.z + row.b_co == c and row.z_co + row.b == c and row.h == row.h_co
        rows.append(row)
    if not ok:
        log.error("duality identities failed on %r", X)
    return CohomologyReport(tuple(rows), ok)


@dataclass(frozen=True)
class Cocycle:
    chain: Chain
    nontrivial: bool

    @property
    def dim(self) -> int:
        return self.chain.dim

    @property
    def cls(self) -> str:
        return "nontrivial" if self.nontrivial else "trivial"


def coboundary_basis(X: SimplicialComplex, i: int) -> List[BitVec]:
    """Echelon basis of B^i = im delta_{i-1} (empty for i = 0)."""
    if i == 0:
        return []
    return image_basis(X.coboundary_matrix(i - 1))


def cocycle_basis(X: SimplicialComplex, i: int) -> List[BitVec]:
    """Echelon basis of Z^i = ker delta_i (all of C^i in the top dimension)."""
    if i >= X.dim:
        n = X.count(i)
        return [BitVec(1 << j, n) for j in range(n)]
    return kernel_basis(X.coboundary_matrix(i))


def boundary_basis(X: SimplicialComplex, i: int) -> List[BitVec]:
    """Echelon basis of B_i = im boundary_{i+1}."""
    if i >= X.dim:
        return []
    return image_basis(X.boundary_matrix(i + 1))


def is_coboundary(X: SimplicialComplex, c: Chain) -> bool:
    if c.dim == 0:
        return c.weight == 0
    return solve(X.coboundary_matrix(c.dim - 1), c.coeffs) is not None


def classify(X: SimplicialComplex, c: Chain) -> Cocycle:
    """Wrap a cocycle with its class; raises if ``c`` is not closed."""
    if c.dim < X.dim and X.coboundary(c).weight:
        raise DimensionError("chain is not a cocycle")
    return Cocycle(c, not is_coboundary(X, c))


def pick_nontrivial_cocycle(X: SimplicialComplex, i: int) -> Cocycle:
    """First echelon kernel-basis vector of delta_i that is not a coboundary."""
    if not 0 <= i <= X.dim:
        raise DimensionError(f"dimension {i} out of range")
    for z in cocycle_basis(X, i):
        c = Chain(X, i, z)
        if not is_coboundary(X, c):
            return Cocycle(c, True)
    raise TrivialCohomology(f"H^{i} is zero")


def pick_trivial_cocycle(X: SimplicialComplex, i: int) -> Cocycle:
    """Coboundary of the first (i-1)-face: a deterministic control in B^i."""
    if i == 0:
        return Cocycle(Chain.zero(X, 0), False)
    f = Chain(X, i - 1, BitVec(1, X.count(i - 1)))
    return Cocycle(X.coboundary(f), False)


def cosystole(X: SimplicialComplex, i: int, budget: int = DEFAULT_BUDGET) -> Tuple[Fraction, Chain]:
    """Exact minimum of |f| / |X(i)| over cocycles f outside B^i.

    Every non-trivial class is ``h + B^i`` for a non-zero combination ``h``
    of complement vectors; each coset is searched exhaustively.
    """
    bco = coboundary_basis(X, i)
    z = cocycle_basis(X, i)
    n = X.count(i)
    complement: List[BitVec] = []
    span = list(bco)
    for v in z:
        if not in_span(span, v):
            complement.append(v)
            span.append(v)
    k = len(complement)
    if k == 0:
        raise TrivialCohomology(f"H^{i} is zero")
    cost = (1 << len(bco)) * ((1 << k) - 1)
    if cost > budget:
        raise BudgetExceeded(f"cosystole enumeration needs {cost} chains, budget is {budget}")
    best: Optional[Tuple[int, BitVec]] = None
    for mask in range(1, 1 << k):
        h = 0
        for j in range(k):
            if (mask >> j) & 1:
                h ^= complement[j].bits
        w, vec = coset_min_weight(bco, BitVec(h, n), budget)
        if best is None or w < best[0]:
            best = (w, vec)
    return Fraction(best[0], n), Chain(X, i, best[1])


def kappa(X: SimplicialComplex, h: Chain, budget: int = DEFAULT_BUDGET) -> int:
    """Distance from a 2-chain to B_2 = im boundary_3."""
    if h.dim != 2:
        raise DimensionError("kappa is defined on 2-chains")
    if X.dim < 3:
        return h.weight
    w, _ = coset_min_weight(boundary_basis(X, 2), h.coeffs, budget)
    return w


class KappaOracle:
    """Memoised kappa for many chains of one complex."""

    def __init__(self, X: SimplicialComplex, budget: int = DEFAULT_BUDGET):
        self.X = X
        self.budget = budget
        self._basis = boundary_basis(X, 2) if X.dim >= 3 else []
        self._memo: Dict[int, int] = {}

    def __call__(self, h: Chain) -> int:
        key = h.coeffs.bits
        if key not in self._memo:
            if not self._basis:
                self._memo[key] = h.weight
            else:
                self._memo[key] = coset_min_weight(self._basis, h.coeffs, self.budget)[0]
        return self._memo[key]


def min_filling(X: SimplicialComplex, f: Chain,
                budget: int = DEFAULT_BUDGET) -> Optional[Tuple[Chain, int]]:
    """Minimum-weight 2-chain g with boundary(g) = f, or None if f is not a boundary."""
    if f.dim != 1:
        raise DimensionError("min_filling takes a 1-chain")
    if X.boundary(f).weight:
        raise DimensionError("f is not a cycle")
    if X.dim < 2:
        return (Chain.zero(X, 2), 0) if f.weight == 0 else None
    d2 = X.boundary_matrix(2)
    g0 = solve(d2, f.coeffs)
    if g0 is None:
        return None
    w, g = coset_min_weight(kernel_basis(d2), g0, budget)
    if f.weight:
        log.debug("filling ratio |g|/|f|^2 = %d/%d", w, f.weight ** 2)
    return Chain(X, 2, g), w


# -- chain file format --------------------------------------------------------

def dumps_chain(c: Chain) -> str:
    support = c.support()
    return "\n".join([f"chain {c.dim} {len(support)}"] + [str(k) for k in support]) + "\n"


def save_chain(c: Chain, path) -> None:
    Path(path).write_text(dumps_chain(c))


def loads_chain(text: str, X: SimplicialComplex) -> Chain:
    """Parse ``chain <dim> <count>`` then one face index per line."""
    header = None
    idx: List[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 3 or parts[0] != "chain":
                raise ParseError("expected header 'chain <dim> <count>'", lineno)
            try:
                header = (int(parts[1]), int(parts[2]))
            except ValueError:
                raise ParseError("header values must be integers", lineno) from None
            if not 0 <= header[0] <= X.dim:
                raise ParseError(f"chain dimension {header[0]} exceeds complex dimension {X.dim}", lineno)
            continue
        if len(parts) != 1:
            raise ParseError("expected one face index per line", lineno)
        try:
            k = int(parts[0])
        except ValueError:
            raise ParseError(f"bad face index {parts[0]!r}", lineno) from None
        if not 0 <= k < X.count(header[0]):
            raise ParseError(f"face index {k} out of range", lineno)
        if idx and k <= idx[-1]:
            raise ParseError("face indices must be strictly ascending", lineno)
        idx.append(k)
    if header is None:
        raise ParseError("empty chain file")
    if len(idx) != header[1]:
        raise ParseError(f"header promises {header[1]} faces, found {len(idx)}")
    return Chain(X, header[0], BitVec.from_support(idx, X.count(header[0])))


def load_chain(path, X: SimplicialComplex) -> Chain:
    return loads_chain(Path(path).read_text(), X)
