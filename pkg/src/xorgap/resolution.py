"""Width-bounded XOR-resolution: closure, refutation width, derivation DAGs and their audit.

Equations are kept as ``(mask, rhs)`` with variable ``v`` at bit ``v``.  The
closure at width ``w`` is the least set containing the axioms (and ``0 = 0``)
that is closed under adding two equations whenever the sum has at most ``w``
variables.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from math import comb
from typing import Dict, List, Optional, Tuple

import numpy as np

from .cohomology import KappaOracle
from .complex import Chain, SimplicialComplex
from .errors import AuditFailure, BudgetExceeded, DimensionError, NotRefuted, ParseError
from .f2 import BitVec
from .xorsys import XorSystem

log = logging.getLogger(__name__)

DEFAULT_CLOSURE_BUDGET = 10 ** 6

Key = Tuple[int, int]  # (variable mask, rhs)


def mask_vars(mask: int) -> List[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@dataclass(frozen=True)
class Equation:
    vars: Tuple[int, ...]
    rhs: int

    @classmethod
    def from_key(cls, key: Key) -> "Equation":
        return cls(tuple(mask_vars(key[0])), key[1])

    @property
    def mask(self) -> int:
        return sum(1 << v for v in self.vars)

    @property
    def width(self) -> int:
        return len(self.vars)

    def __add__(self, other: "Equation") -> "Equation":
        return Equation.from_key((self.mask ^ other.mask, self.rhs ^ other.rhs))

    def __str__(self) -> str:
        lhs = " + ".join(f"x{v}" for v in self.vars) or "0"
        return f"{lhs} = {self.rhs}"


@dataclass
class ResolutionClosure:
    """All equations of width at most ``width`` derivable from ``axioms``.

    ``parents[key]`` is ``None`` for axioms and for ``0 = 0``, otherwise the
    pair of keys it was first derived from; ``depth`` is the derivation depth.
    """

    width: int
    n_vars: int
    axioms: Tuple[Key, ...]
    order: List[Key]
    parents: Dict[Key, Optional[Tuple[Key, Key]]]
    depth: Dict[Key, int]
    axiom_index: Dict[Key, int]
    by_mask: Dict[int, Tuple[int, ...]] = field(default_factory=dict)

    @property
    def refuted(self) -> bool:
        return (0, 1) in self.parents

    def __contains__(self, item) -> bool:
        if isinstance(item, Equation):
            item = (item.mask, item.rhs)
        return item in self.parents

    def __len__(self) -> int:
        return len(self.order)

    def equations(self) -> List[Equation]:
        return [Equation.from_key(k) for k in self.order]

    def keys(self) -> frozenset:
        return frozenset(self.parents)

    def rhs_for(self, mask: int) -> Tuple[int, ...]:
        """Right-hand sides present for a variable set (empty, one, or both)."""
        return self.by_mask.get(mask, ())


def closure_bound(n_vars: int, width: int) -> int:
    """Number of possible equations of width <= w: 2 * sum_k C(n, k)."""
    return 2 * sum(comb(n_vars, k) for k in range(min(width, n_vars) + 1))


DENSE_MAX_VARS = 22  # above this the seen-table would be too large


def _popcount(a: np.ndarray) -> np.ndarray:
    if hasattr(np, "bitwise_count"):
        return np.bitwise_count(a)
    out = np.zeros(a.shape, dtype=np.int64)
    x = a.copy()
    while x.any():
        out += (x & 1).astype(np.int64)
        x >>= 1
    return out


def close(sys: XorSystem, w: int, budget: int = DEFAULT_CLOSURE_BUDGET,
          stop_on_refutation: bool = False, vectorize: Optional[bool] = None) -> ResolutionClosure:
    """Width-``w`` closure, built level by level so first derivations have minimal depth.

    In round ``k`` every equation found in round ``k-1`` is combined with every
    equation known so far, in discovery order.  The resulting set is the
    unique fixpoint; the recorded parents depend only on axiom order.
    For at most ``DENSE_MAX_VARS`` variables the inner loop runs in numpy
    against a dense seen-table; the result, parents included, is the same.
    """
    axioms: List[Key] = []
    for vars_, rhs in sys.equations:
        if len(vars_) > w:
            raise DimensionError(f"axiom {vars_} has width {len(vars_)} > {w}")
        axioms.append((sum(1 << v for v in vars_), rhs))
    if vectorize is None:
        vectorize = sys.n_vars <= DENSE_MAX_VARS

    order: List[Key] = []
    parents: Dict[Key, Optional[Tuple[Key, Key]]] = {}
    depth: Dict[Key, int] = {}
    axiom_index: Dict[Key, int] = {}
    by_mask: Dict[int, Tuple[int, ...]] = {}
    seen = np.zeros(2 << sys.n_vars, dtype=bool) if vectorize else None

    def add(key: Key, par, d: int) -> bool:
        if key in parents:
            return False
        if len(order) >= budget:
            raise BudgetExceeded(f"closure exceeds {budget} equations at width {w}")
        parents[key] = par
        depth[key] = d
        order.append(key)
        by_mask[key[0]] = by_mask.get(key[0], ()) + (key[1],)
        if seen is not None:
            seen[2 * key[0] + key[1]] = True
        return True

    add((0, 0), None, 0)
    for k, ax in enumerate(axioms):
        if ax not in axiom_index:
            axiom_index[ax] = k
        add(ax, None, 0)

    frontier = list(order)
    level = 0
    while frontier and not (stop_on_refutation and (0, 1) in parents):
        level += 1
        new: List[Key] = []
        known = order[:len(order)]  # equations found before this round
        if seen is not None:
            km = np.fromiter((m for m, _ in known), dtype=np.int64, count=len(known))
            kr = np.fromiter((r for _, r in known), dtype=np.int64, count=len(known))
        for a in frontier:
            am, ar = a
            if seen is None:
                for b in known:
                    m = am ^ b[0]
                    if m.bit_count() > w:
                        continue
                    key = (m, ar ^ b[1])
                    if key in parents:
                        continue
                    add(key, (a, b), level)
                    new.append(key)
            else:
                cm = km ^ am
                cr = kr ^ ar
                hit = np.nonzero((_popcount(cm) <= w) & ~seen[2 * cm + cr])[0]
                # distinct b give distinct sums, so no duplicates within one batch
                for j in hit.tolist():
                    key = (int(cm[j]), int(cr[j]))
                    add(key, (a, known[j]), level)
                    new.append(key)
            if stop_on_refutation and (0, 1) in parents:
                break
        frontier = new
    return ResolutionClosure(w, sys.n_vars, tuple(axioms), order, parents, depth, axiom_index, by_mask)


def subsystem(sys: XorSystem, w: int) -> XorSystem:
    eqs = tuple(e for e in sys.equations if len(e[0]) <= w)
    return XorSystem(sys.n_vars, eqs, sys.metadata)


def refutation_width(sys: XorSystem, w_max: int, budget: int = DEFAULT_CLOSURE_BUDGET,
                     w_min: int = 0) -> Optional[int]:
    """Smallest ``w <= w_max`` such that the width-``w`` closure contains ``0 = 1``.

    A width-``w`` refutation can only use axioms of width at most ``w``, so
    each step closes the subsystem of those axioms.
    """
    for w in range(w_min, w_max + 1):
        if close(subsystem(sys, w), w, budget, stop_on_refutation=True).refuted:
            return w
    return None


# -- derivation DAGs ------------------------------------------------------------

@dataclass(frozen=True)
class DagNode:
    id: int
    equation: Equation
    parents: Optional[Tuple[int, int]]
    axiom: Optional[int]  # index into the system's equations for leaves


@dataclass
class DerivationDag:
    nodes: List[DagNode]

    @property
    def root(self) -> DagNode:
        return self.nodes[-1]

    @property
    def leaves(self) -> List[DagNode]:
        return [n for n in self.nodes if n.parents is None]

    def width(self) -> int:
        return max(n.equation.width for n in self.nodes)

    def check(self) -> None:
        """Re-derive every inner node from its parents."""
        for n in self.nodes:
            if n.parents is None:
                continue
            p, q = n.parents
            if not (p < n.id and q < n.id):
                raise AuditFailure(f"node {n.id} refers forward")
            if self.nodes[p].equation + self.nodes[q].equation != n.equation:
                raise AuditFailure(f"node {n.id} is not the sum of its parents")


def extract_dag(closure: ResolutionClosure) -> DerivationDag:
    """Derivation of ``0 = 1`` from the recorded parent pairs, leaves first."""
    if not closure.refuted:
        raise NotRefuted("closure does not contain 0 = 1")
    ids: Dict[Key, int] = {}
    nodes: List[DagNode] = []

    # iterative post-order so deep derivations do not hit the recursion limit
    stack: List[Tuple[Key, bool]] = [((0, 1), False)]
    while stack:
        key, expanded = stack.pop()
        if key in ids:
            continue
        par = closure.parents[key]
        if par is None or expanded:
            pid = None if par is None else (ids[par[0]], ids[par[1]])
            axiom = closure.axiom_index.get(key) if par is None else None
            nid = len(nodes)
            ids[key] = nid
            nodes.append(DagNode(nid, Equation.from_key(key), pid, axiom))
        else:
            stack.append((key, True))
            stack.append((par[1], False))
            stack.append((par[0], False))
    dag = DerivationDag(nodes)
    dag.check()
    return dag


def dumps_dag(dag: DerivationDag) -> str:
    lines = []
    for n in dag.nodes:
        p1, p2 = ("-", "-") if n.parents is None else map(str, n.parents)
        lines.append(f"node {n.id} {p1} {p2} {n.equation.rhs} : {' '.join(map(str, n.equation.vars))}".rstrip())
    return "\n".join(lines) + "\n"


def loads_dag(text: str, sys: Optional[XorSystem] = None) -> DerivationDag:
    """Parse ``node <id> <p1|-> <p2|-> <rhs> : <vars>``; leaves are matched to axioms of ``sys``."""
    lookup = {}
    if sys is not None:
        for k, (vars_, rhs) in enumerate(sys.equations):
            lookup.setdefault((tuple(vars_), rhs), k)
    nodes = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, _, tail = line.partition(":")
        parts = head.split()
        if len(parts) != 5 or parts[0] != "node" or not _:
            raise ParseError("expected 'node <id> <p1|-> <p2|-> <rhs> : <vars>'", lineno)
        try:
            nid = int(parts[1])
            rhs = int(parts[4])
            vars_ = tuple(int(x) for x in tail.split())
            if parts[2] == "-" and parts[3] == "-":
                par = None
            else:
                par = (int(parts[2]), int(parts[3]))
        except ValueError:
            raise ParseError("non-integer field", lineno) from None
        if nid != len(nodes):
            raise ParseError(f"node ids must be consecutive from 0, got {nid}", lineno)
        if list(vars_) != sorted(set(vars_)) or rhs not in (0, 1):
            raise ParseError("variables must be ascending and distinct, rhs 0 or 1", lineno)
        axiom = lookup.get((vars_, rhs)) if par is None else None
        if par is None and sys is not None and axiom is None:
            raise ParseError(f"leaf {nid} is not an axiom of the system", lineno)
        nodes.append(DagNode(nid, Equation(vars_, rhs), par, axiom))
    dag = DerivationDag(nodes)
    dag.check()
    return dag


@dataclass
class AuditReport:
    n_nodes: int
    realized_width: int
    max_kappa: int
    root_kappa: int
    kappa: List[int]
    walk: List[int]  # kappa values from the root, always stepping to the harder parent
    violations: List[str]

    @property
    def ok(self) -> bool:
        return not self.violations

    def format(self) -> str:
        lines = [
            f"nodes {self.n_nodes}",
            f"realized_width {self.realized_width}",
            f"max_kappa {self.max_kappa}",
            f"root_kappa {self.root_kappa}",
            f"kappa_walk {' '.join(map(str, self.walk))}",
            f"violations {len(self.violations)}",
        ]
        lines += [f"violation {v}" for v in self.violations]
        return "\n".join(lines) + "\n"


def audit_dag(dag: DerivationDag, X: SimplicialComplex, beta: Chain,
              sys: Optional[XorSystem] = None, budget: int = 1 << 20,
              strict: bool = True) -> AuditReport:
    """Check the triangle-chain identities at every node of an edge-mode derivation.

    Leaves carry the indicator of their triangle (matched through the axiom
    index, so ``sys`` must be the edge-mode instance of ``(X, beta)``); inner
    nodes carry the sum of their parents' chains.  At every node ``b`` must
    equal ``<beta, h>``, the variables must be the support of ``boundary(h)``,
    kappa must be subadditive, and kappa 0 must force ``b = 0``.
    """
    if beta.dim != 2:
        raise DimensionError("beta must be a 2-chain")
    n_tri = X.count(2)
    kap = KappaOracle(X, budget)
    h: List[Chain] = []
    b: List[int] = []
    k: List[int] = []
    bad: List[str] = []
    for node in dag.nodes:
        if node.parents is None:
            if node.equation.width == 0 and node.equation.rhs == 0:
                hv = Chain.zero(X, 2)
            else:
                if node.axiom is None or not 0 <= node.axiom < n_tri:
                    raise DimensionError(f"leaf {node.id} is not tied to a triangle")
                hv = Chain(X, 2, BitVec(1 << node.axiom, n_tri))
                if sys is not None and tuple(sys.equations[node.axiom][0]) != node.equation.vars:
                    bad.append(f"{node.id}: leaf equation differs from axiom {node.axiom}")
            bv = node.equation.rhs if hv.weight == 0 else beta.coeffs[node.axiom]
        else:
            p, q = node.parents
            hv = h[p] + h[q]
            bv = b[p] ^ b[q]
        kv = kap(hv)
        h.append(hv)
        b.append(bv)
        k.append(kv)
        if bv != node.equation.rhs:
            bad.append(f"{node.id}: b = {bv} but equation rhs = {node.equation.rhs}")
        if bv != hv.dot(beta):
            bad.append(f"{node.id}: b = {bv} but <beta, h> = {hv.dot(beta)}")
        f = X.boundary(hv)
        if tuple(f.support()) != node.equation.vars:
            bad.append(f"{node.id}: vars != support of boundary(h)")
        if node.parents is not None and kv > k[node.parents[0]] + k[node.parents[1]]:
            bad.append(f"{node.id}: kappa {kv} exceeds parents' sum")
        if kv == 0 and bv != 0:
            bad.append(f"{node.id}: kappa 0 with b = 1")
    walk = []
    cur = dag.nodes[-1]
    while True:
        walk.append(k[cur.id])
        if cur.parents is None:
            break
        p, q = cur.parents
        cur = dag.nodes[p if k[p] >= k[q] else q]
    rep = AuditReport(len(dag.nodes), dag.width(), max(k), k[-1], k, walk, bad)
    log.info("audit: width %d, root kappa %d, walk %s", rep.realized_width, rep.root_kappa, walk)
    if strict and bad:
        raise AuditFailure("; ".join(bad[:5]))
    return rep
