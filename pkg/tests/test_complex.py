import random
from itertools import combinations

import pytest

from xorgap import zoo
from xorgap.complex import (Chain, SimplicialComplex, ball, connected_components_2chain,
                            involution_quotient, is_isomorphic, link)
from xorgap.errors import DimensionError, InvalidComplex
from xorgap.f2 import BitVec, rank

from conftest import all_zoo
from oracles import brute_boundary, brute_coboundary, faces_of

ZOO = all_zoo()


def triangle():
    return SimplicialComplex.from_facets([(0, 1, 2)])


def random_chain(X, i, rng):
    return Chain(X, i, BitVec(rng.getrandbits(X.count(i)) if X.count(i) else 0, X.count(i)))


class TestConstruction:
    def test_closure_and_order(self):
        X = triangle()
        assert X.faces == (((0,), (1,), (2,)), ((0, 1), (0, 2), (1, 2)), ((0, 1, 2),))

    def test_empty_rejected(self):
        with pytest.raises(InvalidComplex):
            SimplicialComplex.from_facets([])

    def test_not_downward_closed(self):
        with pytest.raises(InvalidComplex):
            SimplicialComplex(3, [[(0,), (1,), (2,)], [(0, 1)], [(0, 1, 2)]])

    def test_repeated_vertex(self):
        with pytest.raises(InvalidComplex):
            SimplicialComplex.from_facets([(0, 0, 1)])

    @pytest.mark.parametrize("name", sorted(ZOO))
    def test_downward_closure_by_subset_enumeration(self, name):
        X = ZOO[name]
        for f in X.facets():
            for k in range(1, len(f)):
                for s in combinations(f, k):
                    assert s in X


class TestOperators:
    def test_triangle_boundary(self):
        X = triangle()
        d = X.boundary(Chain.indicator(X, (0, 1, 2)))
        assert d == Chain.from_faces(X, 1, [(0, 1), (1, 2), (0, 2)])

    def test_edge_coboundary(self):
        X = SimplicialComplex.from_facets([(0, 1)])
        for bits in range(4):
            f = Chain(X, 0, BitVec(bits, 2))
            assert X.coboundary(f).coeffs[0] == (bits & 1) ^ (bits >> 1)

    def test_rp2_boundary_shape_and_rank(self, rp2):
        d2 = rp2.boundary_matrix(2)
        assert d2.shape == (15, 10)
        assert rank(d2) == 9

    def test_constant_vertex_chain(self, rp2):
        ones = Chain(rp2, 0, BitVec((1 << 6) - 1, 6))
        assert rp2.coboundary(ones).weight == 0

    def test_range_errors(self, rp2):
        with pytest.raises(DimensionError):
            rp2.boundary_matrix(0)
        with pytest.raises(DimensionError):
            rp2.boundary_matrix(3)
        with pytest.raises(DimensionError):
            rp2.coboundary_matrix(2)

    @pytest.mark.parametrize("name", sorted(ZOO))
    def test_chain_complex_laws(self, name):
        X = ZOO[name]
        for i in range(1, X.dim):
            assert (X.boundary_matrix(i) @ X.boundary_matrix(i + 1)).is_zero()
            assert (X.coboundary_matrix(i) @ X.coboundary_matrix(i - 1)).is_zero()

    @pytest.mark.parametrize("name", sorted(ZOO))
    def test_coboundary_is_transpose(self, name):
        X = ZOO[name]
        for i in range(X.dim):
            assert X.coboundary_matrix(i) == X.boundary_matrix(i + 1).T

    @pytest.mark.parametrize("name", sorted(ZOO))
    def test_matches_definitions(self, name):
        X = ZOO[name]
        faces = faces_of(X.facets())
        rng = random.Random(7)
        for i in range(1, X.dim + 1):
            c = random_chain(X, i, rng)
            assert set(X.boundary(c).faces()) == brute_boundary(faces, i, c.faces())
            g = random_chain(X, i - 1, rng)
            assert set(X.coboundary(g).faces()) == brute_coboundary(faces, i - 1, g.faces())

    @pytest.mark.parametrize("name", sorted(ZOO))
    def test_adjointness(self, name):
        X = ZOO[name]
        rng = random.Random(name)
        for i in range(1, X.dim + 1):
            for _ in range(200):
                f = random_chain(X, i, rng)
                g = random_chain(X, i - 1, rng)
                assert f.dot(X.coboundary(g)) == X.boundary(f).dot(g)


class TestLink:
    def test_vertex_of_triangle(self):
        L = link(triangle(), (0,))
        assert L.f_vector() == (2, 1) and L.labels == (1, 2)

    def test_edge_of_tetrahedron_boundary(self):
        X = SimplicialComplex.from_facets(combinations(range(4), 3))
        L = link(X, (0, 1))
        assert L.f_vector() == (2,) and L.labels == (2, 3)

    def test_rp2_vertex_links_are_pentagons(self, rp2):
        for v in range(6):
            L = link(rp2, (v,))
            assert L.f_vector() == (5, 5)
            assert all(d == 2 for d in map(len, L.neighbors()))

    def test_not_a_face(self, rp2):
        with pytest.raises(InvalidComplex):
            link(rp2, (0, 1, 3, 4))


class TestBall:
    def test_radius_zero(self, rp2):
        B, inc = ball(rp2, 3, 0)
        assert B.f_vector() == (1,) and inc.vertex_map == (3,)

    @pytest.mark.parametrize("name", sorted(ZOO))
    def test_large_radius_is_everything(self, name):
        X = ZOO[name]
        B, _ = ball(X, 0, X.n_vertices)
        assert B == X

    @pytest.mark.parametrize("name", ["icosahedron", "klein_bottle"])
    def test_vertices_and_faces_exact(self, name):
        X = ZOO[name]
        for v in range(X.n_vertices):
            dist = X.distances(v)
            for r in (1, 2):
                B, inc = ball(X, v, r)
                inside = {u for u in range(X.n_vertices) if dist[u] is not None and dist[u] <= r}
                assert set(inc.vertex_map) == inside
                for i in range(X.dim + 1):
                    expected = {f for f in X.faces[i] if set(f) <= inside}
                    got = set(inc.image_faces(i)) if i <= B.dim else set()
                    assert got == expected

    def test_radius_one_is_closed_star(self):
        X = ZOO["icosahedron"]
        B, inc = ball(X, 0, 1)
        L = link(X, (0,))
        star = {tuple(sorted((0,) + tuple(L.labels[u] for u in f))) for f in L.faces[1]}
        assert star <= set(inc.image_faces(2))

    def test_push_pull_roundtrip(self):
        X = ZOO["icosahedron"]
        B, inc = ball(X, 0, 2)
        rng = random.Random(1)
        for _ in range(20):
            c = random_chain(B, 2, rng)
            assert inc.pull(inc.push(c)) == c
            assert X.boundary(inc.push(c)) == inc.push(B.boundary(c))


class TestComponents:
    def test_single_triangle(self, rp2):
        h = Chain.indicator(rp2, (0, 1, 2))
        assert connected_components_2chain(rp2, h) == [h]

    def test_vertex_sharing_triangles_split(self):
        X = SimplicialComplex.from_facets([(0, 1, 2), (2, 3, 4)])
        h = Chain.from_faces(X, 2, [(0, 1, 2), (2, 3, 4)])
        assert len(connected_components_2chain(X, h)) == 2

    @pytest.mark.parametrize("name", ["projective_plane_6", "torus_7", "klein_bottle", "icosahedron"])
    def test_partition_properties(self, name):
        X = ZOO[name]
        rng = random.Random(name)
        for _ in range(50):
            h = random_chain(X, 2, rng)
            comps = connected_components_2chain(X, h)
            total = Chain.zero(X, 2)
            for c in comps:
                total = total + c
            assert total == h
            assert sum(c.weight for c in comps) == h.weight
            edges = [{e for t in c.faces() for e in combinations(t, 2)} for c in comps]
            for a in range(len(comps)):
                for b in range(a + 1, len(comps)):
                    assert not edges[a] & edges[b]
                    assert not set(X.boundary(comps[a]).support()) & set(X.boundary(comps[b]).support())
            bsum = Chain.zero(X, 1)
            for c in comps:
                bsum = bsum + X.boundary(c)
            assert bsum == X.boundary(h)


class TestQuotient:
    def test_icosahedron_antipodal_gives_rp2(self, rp2):
        X, antipode = zoo.icosahedron()
        assert X.f_vector() == (12, 30, 20)
        Y = involution_quotient(X, antipode)
        assert Y.f_vector() == (6, 15, 10)
        assert is_isomorphic(Y, rp2)

    def test_disjoint_copy_swap(self, rp2):
        facets = list(rp2.facets()) + [tuple(v + 6 for v in f) for f in rp2.facets()]
        X = SimplicialComplex.from_facets(facets, 12)
        swap = [(v + 6) % 12 for v in range(12)]
        assert involution_quotient(X, swap) == rp2

    def test_fixed_vertex_rejected(self):
        X = SimplicialComplex.from_facets([(0, 1), (1, 2)])
        with pytest.raises(InvalidComplex):
            involution_quotient(X, [2, 1, 0])

    def test_non_simplicial_rejected(self):
        X = SimplicialComplex.from_facets([(0, 1), (2,), (3,)])
        with pytest.raises(InvalidComplex, match="non-face"):
            involution_quotient(X, [2, 3, 0, 1])

    def test_fixed_face_rejected(self):
        X = SimplicialComplex.from_facets([(0, 1), (2, 3)])
        with pytest.raises(InvalidComplex, match="not free"):
            involution_quotient(X, [1, 0, 3, 2])

    def test_not_involution(self):
        X = SimplicialComplex.from_facets([(0, 1), (1, 2), (2, 0)])
        with pytest.raises(InvalidComplex):
            involution_quotient(X, [1, 2, 0])
