"""Brute-force reference computations used only by the tests.

Nothing here calls the elimination or enumeration code under test; chains
are plain ints over explicit face lists and spans are materialised as sets.
"""

from itertools import combinations

import numpy as np


def span_set(vectors):
    """All XOR combinations of ``vectors`` (ints), by full subset enumeration."""
    out = {0}
    for v in vectors:
        out |= {x ^ v for x in out}
    return out


def brute_rank(rows):
    return len(span_set(rows)).bit_length() - 1


def brute_kernel(rows, n_cols):
    return [x for x in range(1 << n_cols) if all(((r & x).bit_count() & 1) == 0 for r in rows)]


def brute_coset_min(span, target):
    return min((target ^ s).bit_count() for s in span_set(span))


def faces_of(facets):
    by_dim = {}
    for f in facets:
        for k in range(1, len(f) + 1):
            for c in combinations(sorted(f), k):
                by_dim.setdefault(k - 1, set()).add(c)
    return {i: sorted(s) for i, s in by_dim.items()}


def brute_boundary(faces, i, chain_faces):
    """Boundary of a set of i-faces as a set of (i-1)-faces, by counting incidences."""
    counts = {}
    for t in chain_faces:
        for s in combinations(t, i):
            counts[s] = counts.get(s, 0) ^ 1
    return {s for s, c in counts.items() if c}


def brute_coboundary(faces, i, chain_faces):
    """delta f(t) = sum over i-faces s of t of f(s), straight from the definition."""
    f = set(chain_faces)
    out = set()
    for t in faces.get(i + 1, []):
        if sum(1 for s in combinations(t, i + 1) if s in f) % 2:
            out.add(t)
    return out


def all_fillings_min(n_tri, d2_columns, f_bits):
    """Minimum weight over all 2^n_tri 2-chains whose boundary is ``f_bits``.

    Boundaries of every chain are built by doubling (numpy), not by elimination.
    """
    if n_tri > 24:
        raise ValueError("too many triangles for brute force")
    bnd = np.zeros(1, dtype=object if max(d2_columns, default=0).bit_length() > 62 else np.int64)
    for col in d2_columns:
        bnd = np.concatenate([bnd, bnd ^ col])
    idx = np.nonzero(bnd == f_bits)[0]
    if idx.size == 0:
        return None
    weights = np.array([int(i).bit_count() for i in idx])
    return int(weights.min())


def brute_max_sat_violations(n_vars, equations):
    """Minimum number of violated equations over all assignments (plain loops)."""
    best = len(equations)
    for a in range(1 << n_vars):
        bad = 0
        for vars_, rhs in equations:
            par = 0
            for v in vars_:
                par ^= (a >> v) & 1
            bad += par != rhs
        best = min(best, bad)
    return best


def dense_closure(n_vars, equations, w):
    """Width-w closure as a boolean table over all (mask, rhs) pairs.

    Iterates ``present |= present[idx ^ e]`` for every present ``e`` until no
    change: a different route to the same fixpoint as the queue-based engine.
    """
    size = 1 << n_vars
    idx = np.arange(size)
    pop = np.array([i.bit_count() for i in range(size)])
    ok = pop <= w
    present = np.zeros((size, 2), dtype=bool)
    present[0, 0] = True
    for vars_, rhs in equations:
        if len(vars_) <= w:
            present[sum(1 << v for v in vars_), rhs] = True
    while True:
        before = present.sum()
        masks, rhss = np.nonzero(present)
        for m, r in zip(masks, rhss):
            shifted = present[idx ^ m]
            if r:
                shifted = shifted[:, ::-1]
            present |= shifted & ok[:, None]
        if present.sum() == before:
            return present


def dense_refutation_width(n_vars, equations, w_max):
    for w in range(w_max + 1):
        if dense_closure(n_vars, equations, w)[0, 1]:
            return w
    return None


def gauss_satisfiable(n_vars, equations):
    """Unbounded-width check: consistent iff 0 = 1 is not in the span."""
    rows = [(sum(1 << v for v in vars_) | (rhs << n_vars)) for vars_, rhs in equations]
    return (1 << n_vars) not in span_set(rows)
