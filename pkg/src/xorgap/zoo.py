"""Small complexes with known GF(2) (co)homology, and a Cayley clique-complex builder."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Sequence, Tuple

import networkx as nx
import numpy as np

from .complex import SimplicialComplex, involution_quotient
from .errors import InvalidComplex, ParseError

KINDS = ("projective_plane_6", "torus_7", "klein_bottle", "icosahedron",
         "clique_complex", "cayley_clique")

# Minimal 6-vertex triangulation of RP^2 (the hemi-icosahedron), see
# Kuehnel, "Triangulations of manifolds with few vertices" (1986).
PROJECTIVE_PLANE_6 = [
    (0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5),
    (1, 2, 4), (2, 3, 5), (1, 3, 4), (2, 4, 5), (1, 3, 5),
]

# Moebius-Kantor / Csaszar 7-vertex torus: triangles {i, i+1, i+3} and
# {i, i+2, i+3} modulo 7 (Moebius 1886, Csaszar 1949).
TORUS_7 = sorted({tuple(sorted(((i + a) % 7, (i + b) % 7, (i + c) % 7)))
                  for i in range(7) for a, b, c in ((0, 1, 3), (0, 2, 3))})

# Expected Euler characteristics, checked on every build.
EULER = {"projective_plane_6": 1, "torus_7": 0, "klein_bottle": 0, "icosahedron": 2}


@dataclass(frozen=True)
class ZooSpec:
    kind: str
    params: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise InvalidComplex(f"unknown zoo kind {self.kind!r}; expected one of {', '.join(KINDS)}")


def build(spec: ZooSpec | str, **params) -> SimplicialComplex:
    """Construct a zoo complex from a spec or a kind name plus keyword parameters."""
    if isinstance(spec, str):
        spec = ZooSpec(spec, params)
    p = spec.params
    if spec.kind == "projective_plane_6":
        X = SimplicialComplex.from_facets(PROJECTIVE_PLANE_6, 6)
    elif spec.kind == "torus_7":
        X = SimplicialComplex.from_facets(TORUS_7, 7)
    elif spec.kind == "klein_bottle":
        X = klein_bottle(int(p.get("rows", 3)), int(p.get("cols", 4)))
    elif spec.kind == "icosahedron":
        X = icosahedron()[0]
    elif spec.kind == "clique_complex":
        X = clique_complex(int(p["n_vertices"]), p["edges"], int(p.get("max_dim", 2)))
    else:
        if "table" in p:
            table = p["table"]
        elif "permutations" in p:
            table = permutation_group_table(p["permutations"])
        else:
            raise InvalidComplex("cayley_clique needs a multiplication table or permutation generators")
        X = cayley_clique(table, p["generators"], int(p.get("max_dim", 2)))
    expected = EULER.get(spec.kind)
    if expected is not None and X.euler_characteristic() != expected:
        raise InvalidComplex(f"{spec.kind}: Euler characteristic {X.euler_characteristic()} != {expected}")
    return X


def icosahedron() -> Tuple[SimplicialComplex, List[int]]:
    """Boundary of the icosahedron and its antipodal vertex involution.

    Vertices are the twelve cyclic permutations of ``(0, +-1, +-phi)``;
    edges join points at the minimal distance 2.
    """
    phi = (1 + 5 ** 0.5) / 2
    pts = []
    for s1 in (1, -1):
        for s2 in (phi, -phi):
            base = (0.0, float(s1), s2)
            for shift in range(3):
                pts.append(base[shift:] + base[:shift])
    P = np.array(sorted(pts))
    d = np.linalg.norm(P[:, None, :] - P[None, :, :], axis=-1)
    edges = [(a, b) for a in range(12) for b in range(a + 1, 12) if abs(d[a, b] - 2.0) < 1e-9]
    adj = {(a, b) for a, b in edges}
    tris = [t for t in itertools.combinations(range(12), 3)
            if {(t[0], t[1]), (t[0], t[2]), (t[1], t[2])} <= adj]
    antipode = [int(np.argmin(np.linalg.norm(P + P[v], axis=1))) for v in range(12)]
    return SimplicialComplex.from_facets(tris, 12), antipode


def projective_plane_from_icosahedron() -> SimplicialComplex:
    X, antipode = icosahedron()
    return involution_quotient(X, antipode)


def klein_bottle(rows: int = 3, cols: int = 4) -> SimplicialComplex:
    """Diagonally triangulated ``rows x cols`` grid glued into a Klein bottle.

    Horizontal sides are glued straight, vertical sides with a reflection of
    the row coordinate.  Sizes too small to give a simplicial complex raise.
    """
    if rows < 3 or cols < 3:
        raise InvalidComplex("klein_bottle needs rows >= 3 and cols >= 3")

    def vid(i: int, j: int) -> int:
        # wrapping across the column seam reflects the row coordinate
        if j == cols:
            i, j = -i, 0
        return (i % rows) * cols + j

    tris = []
    for i in range(rows):
        for j in range(cols):
            a, b, c, d = vid(i, j), vid(i + 1, j), vid(i, j + 1), vid(i + 1, j + 1)
            tris.append((a, b, d))
            tris.append((a, c, d))
    for t in tris:
        if len(set(t)) != 3:
            raise InvalidComplex(f"klein_bottle({rows}, {cols}) degenerates")
    if len({tuple(sorted(t)) for t in tris}) != len(tris):
        raise InvalidComplex(f"klein_bottle({rows}, {cols}) repeats a triangle")
    X = SimplicialComplex.from_facets(tris, rows * cols)
    if X.count(1) * 2 != 3 * X.count(2):
        raise InvalidComplex(f"klein_bottle({rows}, {cols}) is not a closed surface")
    return X


def clique_complex(n_vertices: int, edges: Sequence[Sequence[int]], max_dim: int) -> SimplicialComplex:
    """Flag complex of a graph, truncated at ``max_dim`` (mandatory cap)."""
    if max_dim < 0:
        raise InvalidComplex("max_dim must be non-negative")
    g = nx.Graph()
    g.add_nodes_from(range(n_vertices))
    for e in edges:
        a, b = int(e[0]), int(e[1])
        if a == b:
            raise InvalidComplex(f"self-loop at {a}")
        g.add_edge(a, b)
    if g.number_of_nodes() != n_vertices:
        raise InvalidComplex("edge uses a vertex outside 0..n-1")
    faces = []
    for clique in nx.enumerate_all_cliques(g):
        if len(clique) > max_dim + 1:
            break
        faces.append(tuple(sorted(clique)))
    return SimplicialComplex.from_facets(faces, n_vertices)


def validate_table(table: Sequence[Sequence[int]]) -> int:
    """Check a group multiplication table; return the index of the identity."""
    n = len(table)
    if n == 0 or any(len(r) != n for r in table):
        raise InvalidComplex("multiplication table must be square and non-empty")
    T = np.asarray(table, dtype=int)
    if T.min() < 0 or T.max() >= n:
        raise InvalidComplex("multiplication table entries out of range")
    for r in range(n):
        if len(set(T[r])) != n or len(set(T[:, r])) != n:
            raise InvalidComplex("multiplication table is not a Latin square")
    ids = [e for e in range(n) if all(T[e, g] == g and T[g, e] == g for g in range(n))]
    if not ids:
        raise InvalidComplex("multiplication table has no identity")
    ar = np.arange(n)
    # (a*b)*c versus a*(b*c) over all triples
    if not np.array_equal(T[T[:, :, None], ar[None, None, :]], T[ar[:, None, None], T[None, :, :]]):
        raise InvalidComplex("multiplication table is not associative")
    return ids[0]


def cayley_clique(table: Sequence[Sequence[int]], generators: Sequence[int],
                  max_dim: int = 2) -> SimplicialComplex:
    """Clique complex of the Cayley graph ``g -- g*s`` for ``s`` in ``generators``."""
    e = validate_table(table)
    n = len(table)
    gens = sorted({int(s) for s in generators})
    if e in gens:
        raise InvalidComplex("generator set contains the identity")
    for s in gens:
        if not 0 <= s < n:
            raise InvalidComplex(f"generator {s} out of range")
        inv = next(x for x in range(n) if table[s][x] == e)
        if inv not in gens:
            raise InvalidComplex(f"generator set is not symmetric: inverse of {s} missing")
    edges = {tuple(sorted((g, table[g][s]))) for g in range(n) for s in gens}
    return clique_complex(n, sorted(edges), max_dim)


def cyclic_table(n: int) -> List[List[int]]:
    return [[(a + b) % n for b in range(n)] for a in range(n)]


def permutation_group_table(perms: Sequence[Sequence[int]]) -> List[List[int]]:
    """Multiplication table of the group generated by permutations.

    Elements are numbered in breadth-first order from the identity, and the
    given generators are elements ``1..k`` when distinct and non-identity.
    Product ``a*b`` means apply ``a`` then ``b``.
    """
    if not perms:
        raise InvalidComplex("need at least one permutation")
    deg = len(perms[0])
    gens = []
    for p in perms:
        p = tuple(int(x) for x in p)
        if len(p) != deg or sorted(p) != list(range(deg)):
            raise InvalidComplex(f"{p} is not a permutation of 0..{deg - 1}")
        gens.append(p)
    ident = tuple(range(deg))
    elems = [ident]
    index = {ident: 0}
    for g in gens:
        if g not in index:
            index[g] = len(elems)
            elems.append(g)
    k = 0
    while k < len(elems):
        a = elems[k]
        for g in gens:
            prod = tuple(g[a[x]] for x in range(deg))
            if prod not in index:
                index[prod] = len(elems)
                elems.append(prod)
        k += 1
    return [[index[tuple(b[a[x]] for x in range(deg))] for b in elems] for a in elems]


# -- text formats ------------------------------------------------------------

def save(X: SimplicialComplex, path) -> None:
    Path(path).write_text(dumps(X))


def dumps(X: SimplicialComplex) -> str:
    lines = [f"complex {X.n_vertices} {X.dim}"]
    lines += [" ".join(map(str, f)) for f in X.facets()]
    return "\n".join(lines) + "\n"


def load(path) -> SimplicialComplex:
    return loads(Path(path).read_text())


def loads(text: str) -> SimplicialComplex:
    """Parse ``complex <n> <dim>`` followed by one facet per line."""
    header = None
    facets = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            parts = line.split()
            if len(parts) != 3 or parts[0] != "complex":
                raise ParseError("expected header 'complex <n_vertices> <dim>'", lineno)
            try:
                header = (int(parts[1]), int(parts[2]))
            except ValueError:
                raise ParseError("header counts must be integers", lineno) from None
            continue
        try:
            f = [int(x) for x in line.split()]
        except ValueError:
            raise ParseError(f"non-integer vertex in {line!r}", lineno) from None
        if len(set(f)) != len(f):
            raise ParseError(f"face {f} repeats a vertex", lineno)
        if any(v < 0 or v >= header[0] for v in f):
            raise ParseError(f"face {f} uses a vertex outside 0..{header[0] - 1}", lineno)
        if f != sorted(f):
            raise ParseError(f"face {f} is not in ascending order", lineno)
        facets.append(f)
    if header is None:
        raise ParseError("empty complex file")
    X = SimplicialComplex.from_facets(facets, header[0])
    if X.dim != header[1]:
        raise ParseError(f"header says dimension {header[1]}, facets give {X.dim}")
    return X


def load_table(path) -> List[List[int]]:
    """Read ``n`` followed by ``n`` rows of ``n`` element indices."""
    tokens = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            try:
                tokens.append((lineno, [int(x) for x in line.split()]))
            except ValueError:
                raise ParseError(f"non-integer entry in {line!r}", lineno) from None
    if not tokens or len(tokens[0][1]) != 1:
        raise ParseError("first line must hold the group order", tokens[0][0] if tokens else None)
    n = tokens[0][1][0]
    rows = tokens[1:]
    if len(rows) != n:
        raise ParseError(f"expected {n} table rows, got {len(rows)}")
    for lineno, r in rows:
        if len(r) != n:
            raise ParseError(f"row has {len(r)} entries, expected {n}", lineno)
    return [r for _, r in rows]


def load_permutations(path) -> List[List[int]]:
    perms = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            try:
                perms.append([int(x) for x in line.split()])
            except ValueError:
                raise ParseError(f"non-integer entry in {line!r}", lineno) from None
    return perms


def load_spec(path) -> ZooSpec:
    """Read a key-value zoo spec.

    Recognised keys: ``kind``, ``max_dim``, ``rows``, ``cols``, ``n_vertices``,
    ``edges`` (``a-b a-b ...``), ``generators`` (element indices), ``table``
    and ``permutations`` (file paths relative to the spec file).
    """
    path = Path(path)
    values: Dict[str, str] = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected 'key = value', got {line!r}", lineno)
        k, v = (s.strip() for s in line.split("=", 1))
        values[k] = v
    if "kind" not in values:
        raise ParseError("zoo spec has no 'kind'")
    params: Dict[str, Any] = {}
    for key in ("max_dim", "rows", "cols", "n_vertices"):
        if key in values:
            params[key] = int(values[key])
    if "edges" in values:
        params["edges"] = [tuple(int(x) for x in e.split("-")) for e in values["edges"].split()]
    if "generators" in values:
        params["generators"] = [int(x) for x in values["generators"].split()]
    if "table" in values:
        params["table"] = load_table(path.parent / values["table"])
    if "permutations" in values:
        params["permutations"] = load_permutations(path.parent / values["permutations"])
    return ZooSpec(values["kind"], params)
