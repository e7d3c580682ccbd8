"""Vector solutions of the level-t SoS relaxation from a refutation-free closure.

Sets ``S`` of at most ``t`` variables are grouped into classes: ``S ~ T`` when
the closure holds an equation on ``S ^ T``.  Each class gets an abstract
orthonormal direction and ``u_S = (-1)^{b_S} u_{R(S)}`` where ``R(S)`` is the
class representative and ``b_S`` the rhs of the closure equation on
``S ^ R(S)``.  Vectors are never materialised; a (class, sign) pair is the
vector and inner products are exact integers in {-1, 0, 1}.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import AuditFailure, BudgetExceeded, DimensionError, ParseError, Refuted
from .resolution import DEFAULT_CLOSURE_BUDGET, ResolutionClosure, close, mask_vars
from .xorsys import XorSystem

log = logging.getLogger(__name__)

DEFAULT_SET_BUDGET = 200_000


def graded_sets(n: int, t: int) -> List[int]:
    """All subsets of ``range(n)`` with at most ``t`` elements as masks, graded-lex order."""
    out = []
    for k in range(min(t, n) + 1):
        for c in combinations(range(n), k):
            out.append(sum(1 << v for v in c))
    return out


def set_count(n: int, t: int) -> int:
    return sum(comb(n, k) for k in range(min(t, n) + 1))


def fmt_set(mask: int) -> str:
    return "{" + ",".join(map(str, mask_vars(mask))) + "}"


def parse_set(text: str) -> int:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise ValueError(f"bad set {text!r}")
    body = text[1:-1].strip()
    if not body:
        return 0
    vs = [int(x) for x in body.split(",")]
    if vs != sorted(set(vs)):
        raise ValueError(f"set {text!r} is not ascending")
    return sum(1 << v for v in vs)


@dataclass
class SosCertificate:
    t: int
    n_vars: int
    width: int                 # closure width used to build the classes
    sets: List[int]            # graded-lex order
    class_of: Dict[int, int]   # set mask -> class id
    sign: Dict[int, int]       # set mask -> b_S
    reps: List[int]            # class id -> representative mask
    closure: Optional[ResolutionClosure] = field(default=None, repr=False, compare=False)

    def moment(self, s1: int | Sequence[int], s2: int | Sequence[int]) -> int:
        """Inner product <u_S1, u_S2> in {-1, 0, 1}."""
        a, b = _as_mask(s1), _as_mask(s2)
        for m in (a, b):
            if m.bit_count() > self.t or m >> self.n_vars:
                raise DimensionError(f"set {fmt_set(m)} is outside the level-{self.t} index set")
        if self.class_of[a] != self.class_of[b]:
            return 0
        return -1 if self.sign[a] ^ self.sign[b] else 1

    def rep(self, s: int | Sequence[int]) -> int:
        return self.reps[self.class_of[_as_mask(s)]]

    @property
    def n_classes(self) -> int:
        return len(self.reps)


def _as_mask(s) -> int:
    if isinstance(s, int):
        return s
    return sum(1 << v for v in set(s))


def closure_width(sys: XorSystem, t: int) -> int:
    """Width used for the closure: 2t, raised to the widest axiom if that is larger.

    Closing at a width above 2t is still closed under width-2t steps, so the
    classes it induces on sets of size at most t satisfy the same argument.
    """
    return max(2 * t, sys.max_width())


def build_certificate(sys: XorSystem, t: int, budget: int = DEFAULT_SET_BUDGET,
                      closure_budget: int = DEFAULT_CLOSURE_BUDGET,
                      closure: Optional[ResolutionClosure] = None) -> SosCertificate:
    if t < 0:
        raise DimensionError("t must be non-negative")
    w = closure_width(sys, t)
    if closure is None:
        closure = close(sys, w, closure_budget)
    elif closure.width < 2 * t:
        raise DimensionError(f"closure width {closure.width} is below 2t = {2 * t}")
    if closure.refuted:
        raise Refuted(f"0 = 1 is derivable at width {closure.width}; no level-{t} certificate")
    if set_count(sys.n_vars, t) > budget:
        raise BudgetExceeded(f"{set_count(sys.n_vars, t)} sets of size <= {t} exceed budget {budget}")

    sets = graded_sets(sys.n_vars, t)
    class_of: Dict[int, int] = {}
    sign: Dict[int, int] = {}
    reps: List[int] = []
    for s in sets:
        found = None
        for cid, r in enumerate(reps):
            rhs = closure.rhs_for(s ^ r)
            if rhs:
                if len(rhs) != 1:
                    raise AuditFailure(f"two equations on {fmt_set(s ^ r)} in a refutation-free closure")
                found = (cid, rhs[0])
                break
        if found is None:
            class_of[s] = len(reps)
            sign[s] = 0
            reps.append(s)
        else:
            class_of[s], sign[s] = found
    cert = SosCertificate(t, sys.n_vars, closure.width, sets, class_of, sign, reps, closure)
    log.info("level-%d certificate: %d sets in %d classes", t, len(sets), len(reps))
    return cert


@dataclass
class VerifyReport:
    t: int
    n_sets: int
    n_classes: int
    consistency_mode: str      # "exhaustive" or "sampled"
    consistency_checked: int   # pairs (exhaustive) or quadruples (sampled)
    consistency_violations: List[Tuple[int, int, int, int]]
    norms_ok: bool
    objective: Optional[Fraction]
    objective_terms_via_closure: int
    psd_min_eig_half: Optional[float]
    psd_min_eig_full: Optional[float]
    psd_ok: bool
    notes: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.consistency_violations and self.norms_ok and self.psd_ok

    def format(self) -> str:
        obj = "undefined (m = 0)" if self.objective is None else str(self.objective)
        lines = [
            f"t {self.t}",
            f"sets {self.n_sets}",
            f"classes {self.n_classes}",
            f"consistency {self.consistency_mode} checked {self.consistency_checked} "
            f"violations {len(self.consistency_violations)}",
            f"norms {'ok' if self.norms_ok else 'FAILED'}",
            f"objective {obj}",
            f"objective_terms_via_closure {self.objective_terms_via_closure}",
            f"psd_min_eig_half {self.psd_min_eig_half}",
            f"psd_min_eig_full {self.psd_min_eig_full}",
            f"psd {'ok' if self.psd_ok else 'FAILED'}",
        ]
        for q in self.consistency_violations[:5]:
            lines.append("counterexample " + " ".join(fmt_set(s) for s in q))
        lines += [f"note {n}" for n in self.notes]
        return "\n".join(lines) + "\n"


def gram_matrix(cert: SosCertificate, max_size: int) -> np.ndarray:
    idx = [s for s in cert.sets if s.bit_count() <= max_size]
    G = np.empty((len(idx), len(idx)))
    for i, a in enumerate(idx):
        for j, b in enumerate(idx):
            G[i, j] = cert.moment(a, b)
    return G


def _min_eig(G: np.ndarray) -> float:
    if G.size == 0:
        return 0.0
    return float(np.linalg.eigvalsh(G).min())


def pseudo_expectation(cert: SosCertificate, T: int,
                       closure: Optional[ResolutionClosure] = None) -> Tuple[int, bool]:
    """Value assigned to the character of ``T`` and whether the closure was consulted.

    For ``|T| <= t`` this is ``<u_T, u_empty>``; for ``|T| <= 2t`` it is
    ``<u_A, u_B>`` with ``A ^ B = T`` split as first ``t`` variables / rest.
    Wider sets (levels too low to index a constraint) read the closure
    directly: ``(-1)^b`` if it holds ``T = b``, else 0.
    """
    k = T.bit_count()
    if k <= cert.t:
        return cert.moment(T, 0), False
    if k <= 2 * cert.t:
        vs = mask_vars(T)
        a = sum(1 << v for v in vs[:cert.t])
        return cert.moment(a, T ^ a), False
    closure = closure or cert.closure
    if closure is None:
        raise DimensionError("set wider than 2t and no closure available")
    rhs = closure.rhs_for(T)
    if not rhs:
        return 0, True
    if len(rhs) != 1:
        raise AuditFailure(f"closure holds both parities on {fmt_set(T)}")
    return (-1 if rhs[0] else 1), True


def verify_certificate(cert: SosCertificate, sys: XorSystem, seed: int = 0,
                       samples: int = 100_000, exhaustive_limit: int = 4_000_000,
                       psd: bool = True, closure_budget: int = DEFAULT_CLOSURE_BUDGET) -> VerifyReport:
    """Check symmetric-difference consistency, unit norms, the objective, and PSD-ness.

    Consistency is exhaustive (all pairs bucketed by symmetric difference) when
    the number of pairs is at most ``exhaustive_limit``, else ``samples`` seeded
    random quadruples are drawn.
    """
    if cert.n_vars != sys.n_vars:
        raise DimensionError("certificate and system disagree on the number of variables")
    notes = []
    sets = cert.sets
    npairs = len(sets) ** 2
    violations: List[Tuple[int, int, int, int]] = []
    if npairs <= exhaustive_limit:
        mode = "exhaustive"
        seen: Dict[int, Tuple[int, int, int]] = {}
        for a in sets:
            for b in sets:
                d = a ^ b
                v = cert.moment(a, b)
                first = seen.get(d)
                if first is None:
                    seen[d] = (a, b, v)
                elif first[2] != v:
                    violations.append((first[0], first[1], a, b))
        checked = npairs
    else:
        mode = "sampled"
        rng = random.Random(seed)
        checked = 0
        by_size: Dict[int, List[int]] = {}
        for s in sets:
            by_size.setdefault(s.bit_count(), []).append(s)
        while checked < samples:
            a, b, c = rng.choice(sets), rng.choice(sets), rng.choice(sets)
            d = a ^ b ^ c
            if d.bit_count() > cert.t:
                continue
            checked += 1
            if cert.moment(a, b) != cert.moment(c, d):
                violations.append((a, b, c, d))

    norms_ok = all(cert.moment(s, s) == 1 for s in sets) and cert.class_of.get(0) == 0 and cert.reps[0] == 0

    objective = None
    via_closure = 0
    if sys.m == 0:
        notes.append("objective undefined for an empty system")
    else:
        closure = cert.closure
        if closure is None and any(len(v) > 2 * cert.t for v, _ in sys.equations):
            closure = close(sys, cert.width, closure_budget)
        total = 0
        for vars_, beta in sys.equations:
            T = sum(1 << v for v in vars_)
            val, used = pseudo_expectation(cert, T, closure)
            via_closure += used
            total += -val if beta else val
        objective = Fraction(1, 2) + Fraction(total, 2 * sys.m)
        if via_closure:
            notes.append(f"{via_closure} constraint terms exceed 2t and were read from the closure")

    eig_half = eig_full = None
    psd_ok = True
    if psd:
        for size in (cert.t // 2, cert.t):
            G = gram_matrix(cert, size)
            e = _min_eig(G)
            if size == cert.t // 2:
                eig_half = e
            if size == cert.t:
                eig_full = e
            if e < -1e-8 * max(1, G.shape[0]):
                psd_ok = False
    rep = VerifyReport(cert.t, len(sets), cert.n_classes, mode, checked, violations, norms_ok,
                       objective, via_closure, eig_half, eig_full, psd_ok, notes)
    return rep


# -- certificate file ------------------------------------------------------------

def dumps(cert: SosCertificate) -> str:
    lines = [f"t {cert.t}", f"n {cert.n_vars}", f"width {cert.width}"]
    lines += [f"class {fmt_set(r)}" for r in cert.reps]
    lines += [f"set {fmt_set(s)} class {cert.class_of[s]} sign {cert.sign[s]}" for s in cert.sets]
    return "\n".join(lines) + "\n"


def save(cert: SosCertificate, path) -> None:
    Path(path).write_text(dumps(cert))


def loads(text: str) -> SosCertificate:
    t = n = width = None
    reps: List[int] = []
    sets: List[int] = []
    class_of: Dict[int, int] = {}
    sign: Dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            if parts[0] == "t" and len(parts) == 2:
                t = int(parts[1])
            elif parts[0] == "n" and len(parts) == 2:
                n = int(parts[1])
            elif parts[0] == "width" and len(parts) == 2:
                width = int(parts[1])
            elif parts[0] == "class" and len(parts) == 2:
                reps.append(parse_set(parts[1]))
            elif parts[0] == "set" and len(parts) == 6 and parts[2] == "class" and parts[4] == "sign":
                s = parse_set(parts[1])
                cid, b = int(parts[3]), int(parts[5])
                if not 0 <= cid < len(reps) or b not in (0, 1):
                    raise ParseError("class id or sign out of range", lineno)
                if s in class_of:
                    raise ParseError(f"set {parts[1]} listed twice", lineno)
                sets.append(s)
                class_of[s] = cid
                sign[s] = b
            else:
                raise ParseError(f"unrecognised line {line!r}", lineno)
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(str(exc), lineno) from None
    if t is None or n is None:
        raise ParseError("certificate must declare 't' and 'n'")
    if sets != graded_sets(n, t):
        raise ParseError("certificate does not list every set of size <= t in graded order")
    for cid, r in enumerate(reps):
        if class_of.get(r) != cid or sign.get(r) != 0:
            raise ParseError(f"representative {fmt_set(r)} is not in its own class with sign 0")
    return SosCertificate(t, n, width if width is not None else 2 * t, sets, class_of, sign, reps)


def load(path) -> SosCertificate:
    return loads(Path(path).read_text())
