"""Simplicial complexes over GF(2): faces, chains, (co)boundary matrices.

Faces are sorted vertex tuples.  Within each dimension faces are sorted
lexicographically and a chain coordinate is the index of its face in that
list, so operator matrices are fully determined by the face data.
"""

from __future__ import annotations

import threading
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import DimensionError, InvalidComplex
from .f2 import BitMatrix, BitVec

Face = Tuple[int, ...]


class SimplicialComplex:
    """A finite, non-empty, downward-closed family of faces on vertices ``0..n-1``.

    ``labels[v]`` records the name of local vertex ``v`` in a host complex
    (identity unless the complex was extracted as a link or ball).
    """

    def __init__(self, n_vertices: int, faces: Sequence[Sequence[Face]],
                 labels: Optional[Sequence[int]] = None):
        if n_vertices <= 0:
            raise InvalidComplex("the empty complex is not allowed")
        self.n_vertices = n_vertices
        self.faces: Tuple[Tuple[Face, ...], ...] = tuple(tuple(fs) for fs in faces)
        while self.faces and not self.faces[-1]:
            self.faces = self.faces[:-1]
        self.labels: Tuple[int, ...] = tuple(labels) if labels is not None else tuple(range(n_vertices))
        self._validate()
        self._index: Tuple[Dict[Face, int], ...] = tuple(
            {f: k for k, f in enumerate(fs)} for fs in self.faces)
        self._cache: Dict[Tuple[str, int], BitMatrix] = {}
        self._lock = threading.Lock()

    def _validate(self) -> None:
        if not self.faces or self.faces[0] != tuple((v,) for v in range(self.n_vertices)):
            raise InvalidComplex("X(0) must be exactly the vertices 0..n-1")
        if len(self.labels) != self.n_vertices:
            raise InvalidComplex("labels must name every vertex")
        for i, fs in enumerate(self.faces):
            if list(fs) != sorted(set(fs)):
                raise InvalidComplex(f"faces of dimension {i} are not sorted and unique")
            for f in fs:
                if len(f) != i + 1 or any(a >= b for a, b in zip(f, f[1:])):
                    raise InvalidComplex(f"face {f} is not a strictly ascending {i + 1}-tuple")
                if f[0] < 0 or f[-1] >= self.n_vertices:
                    raise InvalidComplex(f"face {f} uses an unknown vertex")
        for i in range(1, len(self.faces)):
            lower = set(self.faces[i - 1])
            for f in self.faces[i]:
                for k in range(len(f)):
                    if f[:k] + f[k + 1:] not in lower:
                        raise InvalidComplex(f"face {f} is missing subface {f[:k] + f[k + 1:]}")

    @classmethod
    def from_facets(cls, facets: Iterable[Iterable[int]], n_vertices: Optional[int] = None,
                    labels: Optional[Sequence[int]] = None) -> "SimplicialComplex":
        """Close a facet list downward.  Repeated vertices inside a facet are an error."""
        facet_list = []
        for f in facets:
            f = list(f)
            if len(set(f)) != len(f):
                raise InvalidComplex(f"face {f} repeats a vertex")
            if not f:
                continue
            facet_list.append(tuple(sorted(f)))
        if n_vertices is None:
            if not facet_list:
                raise InvalidComplex("the empty complex is not allowed")
            n_vertices = max(max(f) for f in facet_list) + 1
        if any(v < 0 or v >= n_vertices for f in facet_list for v in f):
            raise InvalidComplex("facet uses a vertex outside 0..n-1")
        top = max((len(f) for f in facet_list), default=1)
        by_dim: List[set] = [set() for _ in range(top)]
        by_dim[0].update((v,) for v in range(n_vertices))
        for f in set(facet_list):
            for k in range(2, len(f) + 1):
                by_dim[k - 1].update(combinations(f, k))
        return cls(n_vertices, [sorted(s) for s in by_dim], labels)

    @property
    def dim(self) -> int:
        return len(self.faces) - 1

    def count(self, i: int) -> int:
        return len(self.faces[i]) if 0 <= i <= self.dim else 0

    def f_vector(self) -> Tuple[int, ...]:
        return tuple(len(fs) for fs in self.faces)

    def euler_characteristic(self) -> int:
        return sum((-1) ** i * len(fs) for i, fs in enumerate(self.faces))

    def index(self, face: Sequence[int]) -> int:
        f = tuple(sorted(face))
        i = len(f) - 1
        if not 0 <= i <= self.dim or f not in self._index[i]:
            raise InvalidComplex(f"{tuple(face)} is not a face")
        return self._index[i][f]

    def __contains__(self, face) -> bool:
        f = tuple(sorted(face))
        i = len(f) - 1
        return 0 <= i <= self.dim and f in self._index[i]

    def facets(self) -> List[Face]:
        """Maximal faces, by dimension then lexicographically."""
        out = []
        for i, fs in enumerate(self.faces):
            upper = set()
            if i < self.dim:
                for g in self.faces[i + 1]:
                    upper.update(combinations(g, i + 1))
            out.extend(f for f in fs if f not in upper)
        return out

    def __eq__(self, other) -> bool:
        return (isinstance(other, SimplicialComplex) and self.n_vertices == other.n_vertices
                and self.faces == other.faces)

    def __hash__(self) -> int:
        return hash((self.n_vertices, self.faces))

    def __repr__(self) -> str:
        return f"SimplicialComplex(n_vertices={self.n_vertices}, f_vector={self.f_vector()})"

    # -- operators -----------------------------------------------------

    def _cached(self, key: Tuple[str, int], build) -> BitMatrix:
        with self._lock:
            m = self._cache.get(key)
            if m is None:
                m = build()
                self._cache[key] = m
            return m

    def boundary_matrix(self, i: int) -> BitMatrix:
        """Matrix of the boundary map C_i -> C_{i-1}; entry [s, t] = 1 iff s is a facet of t."""
        if not 1 <= i <= self.dim:
            raise DimensionError(f"boundary_matrix needs 1 <= i <= {self.dim}, got {i}")
        return self._cached(("d", i), lambda: self._build_boundary(i))

    def _build_boundary(self, i: int) -> BitMatrix:
        rows = [0] * len(self.faces[i - 1])
        low = self._index[i - 1]
        for col, t in enumerate(self.faces[i]):
            for k in range(len(t)):
                rows[low[t[:k] + t[k + 1:]]] |= 1 << col
        return BitMatrix(tuple(rows), len(rows), len(self.faces[i]))

    def coboundary_matrix(self, i: int) -> BitMatrix:
        """Matrix of the coboundary map C^i -> C^{i+1}, built directly from face inclusions."""
        if not 0 <= i < self.dim:
            raise DimensionError(f"coboundary_matrix needs 0 <= i < {self.dim}, got {i}")
        return self._cached(("delta", i), lambda: self._build_coboundary(i))

    def _build_coboundary(self, i: int) -> BitMatrix:
        low = self._index[i]
        rows = []
        for t in self.faces[i + 1]:
            r = 0
            for k in range(len(t)):
                r |= 1 << low[t[:k] + t[k + 1:]]
            rows.append(r)
        return BitMatrix(tuple(rows), len(rows), len(self.faces[i]))

    def boundary(self, c: "Chain") -> "Chain":
        self._check_chain(c)
        if c.dim == 0:
            raise DimensionError("the boundary of a 0-chain is not defined here")
        return Chain(self, c.dim - 1, self.boundary_matrix(c.dim) @ c.coeffs)

    def coboundary(self, c: "Chain") -> "Chain":
        self._check_chain(c)
        if c.dim >= self.dim:
            # no (i+1)-faces: the coboundary lives in the zero space
            return Chain.zero(self, c.dim + 1)
        return Chain(self, c.dim + 1, self.coboundary_matrix(c.dim) @ c.coeffs)

    def _check_chain(self, c: "Chain") -> None:
        if c.complex is not self and c.complex != self:
            raise DimensionError("chain belongs to a different complex")

    # -- derived complexes ---------------------------------------------

    def skeleton(self, k: int = 1) -> "SimplicialComplex":
        return SimplicialComplex(self.n_vertices, self.faces[:k + 1], self.labels)

    def neighbors(self) -> List[List[int]]:
        adj: List[List[int]] = [[] for _ in range(self.n_vertices)]
        if self.dim >= 1:
            for a, b in self.faces[1]:
                adj[a].append(b)
                adj[b].append(a)
        return adj

    def distances(self, source: int) -> List[Optional[int]]:
        """Breadth-first distances on the 1-skeleton (``None`` if unreachable)."""
        dist: List[Optional[int]] = [None] * self.n_vertices
        dist[source] = 0
        adj = self.neighbors()
        q = deque([source])
        while q:
            u = q.popleft()
            for w in adj[u]:
                if dist[w] is None:
                    dist[w] = dist[u] + 1
                    q.append(w)
        return dist

    def induced(self, vertices: Iterable[int]) -> Tuple["SimplicialComplex", "SimplicialMapImage"]:
        """Induced subcomplex on ``vertices`` (relabelled 0..k-1), plus its inclusion map."""
        keep = sorted(set(vertices))
        if not keep:
            raise InvalidComplex("the empty complex is not allowed")
        local = {v: k for k, v in enumerate(keep)}
        faces = []
        for fs in self.faces:
            layer = [tuple(local[v] for v in f) for f in fs if all(v in local for v in f)]
            if not layer:
                break
            faces.append(sorted(layer))
        sub = SimplicialComplex(len(keep), faces, [self.labels[v] for v in keep])
        return sub, SimplicialMapImage(sub, self, tuple(keep))


@dataclass(frozen=True, eq=False)
class Chain:
    """An F2-valued function on the i-faces of a fixed complex."""

    complex: SimplicialComplex
    dim: int
    coeffs: BitVec

    def __post_init__(self) -> None:
        if self.coeffs.length != self.complex.count(self.dim):
            raise DimensionError(
                f"chain length {self.coeffs.length} != |X({self.dim})| = {self.complex.count(self.dim)}")

    @classmethod
    def zero(cls, X: SimplicialComplex, dim: int) -> "Chain":
        return cls(X, dim, BitVec.zeros(X.count(dim)))

    @classmethod
    def from_faces(cls, X: SimplicialComplex, dim: int, faces: Iterable[Sequence[int]]) -> "Chain":
        return cls(X, dim, BitVec.from_support((X.index(f) for f in faces), X.count(dim)))

    @classmethod
    def indicator(cls, X: SimplicialComplex, face: Sequence[int]) -> "Chain":
        return cls.from_faces(X, len(face) - 1, [face])

    def _check(self, other: "Chain") -> None:
        if other.dim != self.dim or (other.complex is not self.complex and other.complex != self.complex):
            raise DimensionError("chains live in different spaces")

    def __add__(self, other: "Chain") -> "Chain":
        self._check(other)
        return Chain(self.complex, self.dim, self.coeffs + other.coeffs)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Chain) and other.dim == self.dim
                and other.coeffs == self.coeffs and other.complex == self.complex)

    def __hash__(self) -> int:
        return hash((self.dim, self.coeffs))

    @property
    def weight(self) -> int:
        return self.coeffs.weight

    def support(self) -> List[int]:
        return self.coeffs.support()

    def faces(self) -> List[Face]:
        fs = self.complex.faces[self.dim]
        return [fs[k] for k in self.support()]

    def dot(self, other: "Chain") -> int:
        self._check(other)
        return self.coeffs.dot(other.coeffs)

    def boundary(self) -> "Chain":
        return self.complex.boundary(self)

    def coboundary(self) -> "Chain":
        return self.complex.coboundary(self)

    def __repr__(self) -> str:
        return f"Chain(dim={self.dim}, faces={self.faces()})"


@dataclass(frozen=True, eq=False)
class SimplicialMapImage:
    """Vertex map from ``source`` into ``target`` that sends faces to faces."""

    source: SimplicialComplex
    target: SimplicialComplex
    vertex_map: Tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.vertex_map) != self.source.n_vertices:
            raise InvalidComplex("vertex map must cover every source vertex")
        for fs in self.source.faces:
            for f in fs:
                if self.image_face(f) not in self.target:
                    raise InvalidComplex(f"face {f} is not mapped to a face")

    def image_face(self, face: Sequence[int]) -> Face:
        return tuple(sorted({self.vertex_map[v] for v in face}))

    def image_faces(self, dim: int) -> List[Face]:
        return sorted({self.image_face(f) for f in self.source.faces[dim]})

    def push(self, c: Chain) -> Chain:
        """Push a chain forward (faces that collapse are dropped)."""
        support = []
        for f in c.faces():
            g = self.image_face(f)
            if len(g) == len(f):
                support.append(self.target.index(g))
        return Chain(self.target, c.dim, BitVec.from_support(support, self.target.count(c.dim)))

    def pull(self, c: Chain) -> Chain:
        """Restrict a host chain to the faces of an injective map's image."""
        if len(set(self.vertex_map)) != len(self.vertex_map):
            raise InvalidComplex("pull requires an injective vertex map")
        inv = {h: v for v, h in enumerate(self.vertex_map)}
        support = []
        for g in c.faces():
            if all(v in inv for v in g):
                f = tuple(sorted(inv[v] for v in g))
                if f in self.source:
                    support.append(self.source.index(f))
        return Chain(self.source, c.dim, BitVec.from_support(support, self.source.count(c.dim)))


# -- operations on complexes ---------------------------------------------

def boundary_matrix(X: SimplicialComplex, i: int) -> BitMatrix:
    return X.boundary_matrix(i)


def coboundary_matrix(X: SimplicialComplex, i: int) -> BitMatrix:
    return X.coboundary_matrix(i)


def link(X: SimplicialComplex, s: Sequence[int]) -> SimplicialComplex:
    """Link of face ``s``: faces ``t`` disjoint from ``s`` with ``s | t`` a face.

    Vertices are relabelled to ``0..k-1``; ``labels`` keeps the host names.
    """
    s = tuple(sorted(s))
    if s not in X:
        raise InvalidComplex(f"{s} is not a face")
    sset = set(s)
    members = set()
    for j in range(len(s), X.dim + 1):
        for f in X.faces[j]:
            if sset.issubset(f):
                t = tuple(v for v in f if v not in sset)
                if t:
                    members.add(t)
    if not members:
        raise InvalidComplex(f"the link of {s} is empty")
    verts = sorted({v for t in members for v in t})
    local = {v: k for k, v in enumerate(verts)}
    top = max(len(t) for t in members)
    by_dim: List[List[Face]] = [[] for _ in range(top)]
    for t in members:
        by_dim[len(t) - 1].append(tuple(local[v] for v in t))
    return SimplicialComplex(len(verts), [sorted(fs) for fs in by_dim],
                             [X.labels[v] for v in verts])


def ball(X: SimplicialComplex, center: int, r: int) -> Tuple[SimplicialComplex, SimplicialMapImage]:
    """Induced subcomplex on vertices within skeleton distance ``r`` of ``center``."""
    if not 0 <= center < X.n_vertices:
        raise InvalidComplex(f"{center} is not a vertex")
    dist = X.distances(center)
    return X.induced(v for v, d in enumerate(dist) if d is not None and d <= r)


def connected_components_2chain(X: SimplicialComplex, h: Chain) -> List[Chain]:
    """Split the support of a 2-chain into classes of triangles linked by shared edges."""
    if h.dim != 2:
        raise DimensionError("connected components are defined for 2-chains")
    tris = h.faces()
    parent = list(range(len(tris)))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    first_owner: Dict[Face, int] = {}
    for k, t in enumerate(tris):
        for e in combinations(t, 2):
            if e in first_owner:
                ra, rb = find(k), find(first_owner[e])
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
            else:
                first_owner[e] = k
    groups: Dict[int, List[Face]] = {}
    for k, t in enumerate(tris):
        groups.setdefault(find(k), []).append(t)
    return [Chain.from_faces(X, 2, groups[root]) for root in sorted(groups)]


def involution_quotient(X: SimplicialComplex, sigma: Sequence[int]) -> SimplicialComplex:
    """Quotient by a fixed-point-free simplicial involution.

    Orbit ``{v, sigma(v)}`` becomes vertex ``k`` where orbits are numbered by
    their smallest member.  Raises :class:`InvalidComplex` if ``sigma`` is not an
    involution, does not map faces to faces, fixes some face setwise, or
    collapses a face onto a lower-dimensional one.
    """
    n = X.n_vertices
    sigma = tuple(sigma)
    if len(sigma) != n or sorted(sigma) != list(range(n)):
        raise InvalidComplex("sigma must be a permutation of the vertices")
    if any(sigma[sigma[v]] != v for v in range(n)):
        raise InvalidComplex("sigma is not an involution")
    for fs in X.faces:
        for f in fs:
            g = tuple(sorted(sigma[v] for v in f))
            if g not in X:
                raise InvalidComplex(f"sigma maps face {f} to non-face {g}")
            if g == f:
                raise InvalidComplex(f"sigma fixes face {f}; the action is not free")
    reps = sorted({min(v, sigma[v]) for v in range(n)})
    orbit = {}
    for k, v in enumerate(reps):
        orbit[v] = k
        orbit[sigma[v]] = k
    layers = []
    for fs in X.faces:
        img = set()
        for f in fs:
            g = tuple(sorted({orbit[v] for v in f}))
            if len(g) != len(f):
                raise InvalidComplex(f"face {f} collapses in the quotient")
            img.add(g)
        layers.append(sorted(img))
    return SimplicialComplex(len(reps), layers)


def is_isomorphic(X: SimplicialComplex, Y: SimplicialComplex, max_vertices: int = 9) -> bool:
    """Brute-force isomorphism test over all vertex permutations (small complexes only)."""
    from itertools import permutations

    if X.f_vector() != Y.f_vector():
        return False
    if X.n_vertices > max_vertices:
        raise DimensionError("brute-force isomorphism is limited to small complexes")
    target = set(Y.facets())
    src = X.facets()
    for perm in permutations(range(Y.n_vertices)):
        if all(tuple(sorted(perm[v] for v in f)) in target for f in src):
            return True
    return False
