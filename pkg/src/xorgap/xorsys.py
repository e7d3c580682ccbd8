"""3XOR systems built from a complex and a 2-cochain, evaluation, exact optima, file IO."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .cohomology import Cocycle, DEFAULT_BUDGET, coboundary_basis
from .complex import Chain, SimplicialComplex
from .errors import BudgetExceeded, DimensionError, ParseError
from .f2 import BitVec, coset_min_weight

MODES = ("edge", "vertex")


@dataclass(frozen=True)
class XorSystem:
    """Linear equations over GF(2).  Each equation is (sorted variable tuple, rhs bit)."""

    n_vars: int
    equations: Tuple[Tuple[Tuple[int, ...], int], ...]
    metadata: Dict[str, str] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        for vars_, rhs in self.equations:
            if rhs not in (0, 1):
                raise DimensionError(f"rhs must be 0 or 1, got {rhs}")
            if list(vars_) != sorted(set(vars_)):
                raise DimensionError(f"equation variables {vars_} must be distinct and ascending")
            if vars_ and (vars_[0] < 0 or vars_[-1] >= self.n_vars):
                raise DimensionError(f"variable out of range in {vars_}")

    @classmethod
    def from_equations(cls, n_vars: int, equations, metadata=None) -> "XorSystem":
        eqs = tuple((tuple(sorted(v)), int(b)) for v, b in equations)
        return cls(n_vars, eqs, dict(metadata or {}))

    @property
    def m(self) -> int:
        return len(self.equations)

    @property
    def mode(self) -> Optional[str]:
        return self.metadata.get("mode")

    def masks(self) -> List[int]:
        return [sum(1 << v for v in vars_) for vars_, _ in self.equations]

    def rhs(self) -> List[int]:
        return [b for _, b in self.equations]

    def max_width(self) -> int:
        return max((len(v) for v, _ in self.equations), default=0)


def make_instance(X: SimplicialComplex, beta: Cocycle | Chain, mode: str = "edge") -> XorSystem:
    """One equation per triangle: over its edge variables (edge mode) or vertex variables."""
    chain = beta.chain if isinstance(beta, Cocycle) else beta
    if mode not in MODES:
        raise DimensionError(f"mode must be one of {MODES}")
    if X.dim < 2:
        raise DimensionError("the complex has no triangles")
    if chain.dim != 2 or chain.coeffs.length != X.count(2):
        raise DimensionError(f"beta must be a 2-chain of length {X.count(2)}")
    eqs = []
    for k, (a, b, c) in enumerate(X.faces[2]):
        rhs = chain.coeffs[k]
        if mode == "edge":
            vars_ = sorted((X.index((a, b)), X.index((b, c)), X.index((a, c))))
        else:
            vars_ = [a, b, c]
        eqs.append((tuple(vars_), rhs))
    n = X.count(1) if mode == "edge" else X.n_vertices
    meta = {"mode": mode, "complex": complex_id(X), "beta": chain_id(chain)}
    if isinstance(beta, Cocycle):
        meta["beta_class"] = beta.cls
    return XorSystem(n, tuple(eqs), meta)


def complex_id(X: SimplicialComplex) -> str:
    import hashlib
    from .zoo import dumps

    return hashlib.sha256(dumps(X).encode()).hexdigest()[:16]


def chain_id(c: Chain) -> str:
    return f"{c.dim}:{c.coeffs.bits:x}"


def violated_fraction(sys: XorSystem, a: BitVec | Sequence[int]) -> Fraction:
    """Fraction of equations whose parity disagrees with the assignment."""
    if not isinstance(a, BitVec):
        a = BitVec.from_list(list(a))
    if a.length != sys.n_vars:
        raise DimensionError(f"assignment has length {a.length}, system has {sys.n_vars} variables")
    if sys.m == 0:
        raise DimensionError("violated fraction is undefined for an empty system")
    bad = 0
    for vars_, rhs in sys.equations:
        parity = 0
        for v in vars_:
            parity ^= a[v]
        bad += parity != rhs
    return Fraction(bad, sys.m)


def _full_enumeration(sys: XorSystem, budget: int) -> Tuple[int, int]:
    n = sys.n_vars
    if (1 << n) > budget:
        raise BudgetExceeded(f"full enumeration needs 2^{n} assignments, budget is {budget}")
    best, arg = sys.m + 1, 0
    chunk = 1 << min(n, 16)
    masks = np.array(sys.masks(), dtype=np.int64)
    rhs = np.array(sys.rhs(), dtype=np.int64)
    for start in range(0, 1 << n, chunk):
        a = np.arange(start, start + chunk, dtype=np.int64)
        viol = np.zeros(chunk, dtype=np.int64)
        for mk, b in zip(masks, rhs):
            x = a & mk
            par = np.zeros(chunk, dtype=np.int64)
            while mk:
                low = mk & -mk
                par ^= (x & low) != 0
                mk ^= low
            viol += par != b
        j = int(np.argmin(viol))  # first index wins ties
        if viol[j] < best:
            best, arg = int(viol[j]), start + j
    return best, arg


def exhaustive_optimum(sys: XorSystem, budget: int = DEFAULT_BUDGET, method: str = "auto",
                       X: Optional[SimplicialComplex] = None) -> Tuple[Fraction, BitVec]:
    """Exact minimum violated fraction and a minimising assignment.

    ``method`` is ``"full"`` (all 2^n assignments), ``"coset"`` (edge mode only:
    search the coset beta + B^2, which needs the host complex ``X``) or
    ``"auto"`` (coset when possible, else full).
    """
    if sys.m == 0:
        raise DimensionError("optimum is undefined for an empty system")
    if method == "auto":
        method = "coset" if (X is not None and sys.mode == "edge") else "full"
    if method == "full":
        best, arg = _full_enumeration(sys, budget)
        return Fraction(best, sys.m), BitVec(arg, sys.n_vars)
    if method != "coset":
        raise ValueError(f"unknown method {method!r}")
    if X is None or sys.mode != "edge":
        raise DimensionError("the coset shortcut needs an edge-mode system and its complex")
    if sys.n_vars != X.count(1) or sys.m != X.count(2):
        raise DimensionError("system does not match the complex")
    beta = BitVec.from_list(sys.rhs())
    w, vec = coset_min_weight(coboundary_basis(X, 2), beta, budget)
    # recover an assignment f with delta f = beta + vec
    from .f2 import solve

    f = solve(X.coboundary_matrix(1), beta + vec)
    return Fraction(w, sys.m), f


# -- XOR text format ----------------------------------------------------------

def dumps(sys: XorSystem) -> str:
    lines = [f"c {k} {v}" for k, v in sorted(sys.metadata.items())]
    lines.append(f"p xor {sys.n_vars} {sys.m}")
    for vars_, rhs in sys.equations:
        lines.append(" ".join(map(str, vars_)) + f" {rhs}")
    return "\n".join(lines) + "\n"


def write(sys: XorSystem, path) -> None:
    Path(path).write_text(dumps(sys))


def loads(text: str) -> XorSystem:
    """Parse the ``p xor <n_vars> <m>`` format; ``c key value`` comments carry metadata."""
    header = None
    eqs = []
    meta: Dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "c":
            if len(parts) >= 3:
                meta[parts[1]] = " ".join(parts[2:])
            continue
        if header is None:
            if len(parts) != 4 or parts[:2] != ["p", "xor"]:
                raise ParseError("expected header 'p xor <n_vars> <m>'", lineno)
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise ParseError("header counts must be integers", lineno) from None
            continue
        try:
            nums = [int(x) for x in parts]
        except ValueError:
            raise ParseError(f"non-integer token in {line!r}", lineno) from None
        vars_, rhs = nums[:-1], nums[-1]
        if rhs not in (0, 1):
            raise ParseError(f"rhs must be 0 or 1, got {rhs}", lineno)
        if len(set(vars_)) != len(vars_):
            raise ParseError(f"repeated variable in {vars_}", lineno)
        if vars_ != sorted(vars_):
            raise ParseError(f"variables {vars_} are not ascending", lineno)
        if any(v < 0 or v >= header[0] for v in vars_):
            raise ParseError(f"variable out of range 0..{header[0] - 1}", lineno)
        eqs.append((tuple(vars_), rhs))
    if header is None:
        raise ParseError("missing 'p xor' header")
    if len(eqs) != header[1]:
        raise ParseError(f"header promises {header[1]} equations, found {len(eqs)}")
    return XorSystem(header[0], tuple(eqs), meta)


def read(path) -> XorSystem:
    return loads(Path(path).read_text())
