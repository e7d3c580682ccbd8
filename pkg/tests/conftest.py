import pytest

from xorgap import cohomology, xorsys, zoo

NAMED = ["projective_plane_6", "torus_7", "klein_bottle", "icosahedron"]


def cone_over_octahedron(max_dim):
    # octahedron: antipodal pairs {0,3}, {1,4}, {2,5} are the non-edges
    octa = [(a, b) for a in range(6) for b in range(a + 1, 6) if b - a != 3]
    edges = octa + [(v, 6) for v in range(6)]
    return zoo.build("clique_complex", n_vertices=7, edges=edges, max_dim=max_dim)


def all_zoo():
    out = {k: zoo.build(k) for k in NAMED}
    out["cayley_z7"] = zoo.build("cayley_clique", table=zoo.cyclic_table(7), generators=[1, 2, 5, 6])
    out["cone_octahedron_3"] = cone_over_octahedron(3)
    return out


@pytest.fixture(scope="session")
def zoo_complexes():
    return all_zoo()


@pytest.fixture(scope="session")
def rp2():
    return zoo.build("projective_plane_6")


@pytest.fixture(scope="session")
def rp2_beta(rp2):
    return cohomology.pick_nontrivial_cocycle(rp2, 2)


@pytest.fixture(scope="session")
def rp2_instance(rp2, rp2_beta):
    return xorsys.make_instance(rp2, rp2_beta, "edge")
