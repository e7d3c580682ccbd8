import random
from fractions import Fraction

import pytest

from xorgap import cohomology, xorsys
from xorgap.complex import Chain, SimplicialComplex
from xorgap.errors import BudgetExceeded, DimensionError, ParseError
from xorgap.f2 import BitMatrix, BitVec, solve
from xorgap.xorsys import XorSystem, exhaustive_optimum, make_instance, violated_fraction

from conftest import all_zoo
from oracles import brute_max_sat_violations

ZOO = {k: X for k, X in all_zoo().items() if X.dim >= 2}


def test_single_triangle_zero_beta():
    X = SimplicialComplex.from_facets([(0, 1, 2)])
    sys = make_instance(X, Chain.zero(X, 2))
    assert sys.n_vars == 3 and sys.equations == (((0, 1, 2), 0),)


def test_projective_plane_shape(rp2_instance):
    assert (rp2_instance.n_vars, rp2_instance.m) == (15, 10)
    assert all(len(set(v)) == 3 for v, _ in rp2_instance.equations)
    assert rp2_instance.mode == "edge"
    assert rp2_instance.metadata["beta_class"] == "nontrivial"


def test_vertex_mode(rp2, rp2_beta):
    sys = make_instance(rp2, rp2_beta, "vertex")
    assert (sys.n_vars, sys.m) == (6, 10)
    assert [v for v, _ in sys.equations] == list(rp2.faces[2])
    assert violated_fraction(sys, [0] * 6) == Fraction(rp2_beta.chain.weight, 10)


def test_beta_length_mismatch(rp2):
    with pytest.raises(DimensionError):
        make_instance(rp2, Chain(rp2, 1, BitVec.zeros(15)))


def test_coboundary_beta_satisfied_by_its_preimage(rp2):
    rng = random.Random(0)
    for _ in range(10):
        f = Chain(rp2, 1, BitVec(rng.getrandbits(15), 15))
        sys = make_instance(rp2, rp2.coboundary(f))
        assert violated_fraction(sys, f.coeffs) == 0


class TestViolatedFraction:
    def test_flip_one_variable(self, rp2):
        sys = make_instance(rp2, Chain.zero(rp2, 2))
        for e in range(15):
            # every edge of RP^2_6 lies in exactly two triangles
            assert violated_fraction(sys, BitVec(1 << e, 15)) == Fraction(2, 10)

    def test_all_ones_beta(self, rp2):
        sys = make_instance(rp2, Chain(rp2, 2, BitVec((1 << 10) - 1, 10)))
        assert violated_fraction(sys, BitVec.zeros(15)) == 1

    def test_length_mismatch(self, rp2_instance):
        with pytest.raises(DimensionError):
            violated_fraction(rp2_instance, [0, 1])

    @pytest.mark.parametrize("name", sorted(ZOO))
    def test_matches_algebraic_distance(self, name):
        X = ZOO[name]
        beta = Chain(X, 2, BitVec(random.Random(name).getrandbits(X.count(2)), X.count(2)))
        sys = make_instance(X, beta)
        rng = random.Random(1)
        for _ in range(100):
            a = Chain(X, 1, BitVec(rng.getrandbits(X.count(1)), X.count(1)))
            assert violated_fraction(sys, a.coeffs) == Fraction((X.coboundary(a) + beta).weight, X.count(2))


class TestOptimum:
    def test_satisfiable(self, rp2):
        sys = make_instance(rp2, cohomology.pick_trivial_cocycle(rp2, 2))
        val, a = exhaustive_optimum(sys, method="full")
        assert val == 0 and violated_fraction(sys, a) == 0

    def test_projective_plane_equals_cosystole(self, rp2, rp2_instance):
        full, a = exhaustive_optimum(rp2_instance, method="full")
        coset, b = exhaustive_optimum(rp2_instance, method="coset", X=rp2)
        cos, _ = cohomology.cosystole(rp2, 2)
        assert full == coset == cos == Fraction(1, 10)
        assert violated_fraction(rp2_instance, a) == violated_fraction(rp2_instance, b) == full

    def test_plain_loop_oracle(self, rp2_instance):
        best = brute_max_sat_violations(rp2_instance.n_vars, rp2_instance.equations)
        assert Fraction(best, rp2_instance.m) == exhaustive_optimum(rp2_instance, method="full")[0]

    def test_contradictory_pair(self):
        sys = XorSystem.from_equations(1, [([0], 0), ([0], 1)])
        assert exhaustive_optimum(sys)[0] == Fraction(1, 2)

    def test_budget(self, rp2_instance):
        with pytest.raises(BudgetExceeded):
            exhaustive_optimum(rp2_instance, budget=1 << 10, method="full")

    def test_coset_needs_complex(self, rp2_instance):
        with pytest.raises(DimensionError):
            exhaustive_optimum(rp2_instance, method="coset")

    @pytest.mark.parametrize("name", ["projective_plane_6", "torus_7", "cayley_z7"])
    def test_full_and_coset_agree_on_random_beta(self, name):
        X = ZOO[name]
        rng = random.Random(name)
        for _ in range(3):
            beta = Chain(X, 2, BitVec(rng.getrandbits(X.count(2)), X.count(2)))
            sys = make_instance(X, beta)
            assert exhaustive_optimum(sys, method="full", budget=1 << 22)[0] == \
                exhaustive_optimum(sys, method="coset", X=X)[0]


@pytest.mark.parametrize("name", sorted(ZOO))
def test_satisfiability_dichotomy(name):
    X = ZOO[name]
    betas = [cohomology.pick_trivial_cocycle(X, 2)]
    if cohomology.report(X)[2].h_co:
        betas.append(cohomology.pick_nontrivial_cocycle(X, 2))
    for beta in betas:
        sys = make_instance(X, beta)
        solvable = solve(X.coboundary_matrix(1), beta.chain.coeffs) is not None
        # the system's own equation matrix, built from the instance rather than the complex
        rows = BitMatrix(tuple(sys.masks()), sys.m, sys.n_vars)
        a = solve(rows, BitVec.from_list(sys.rhs()))
        assert (a is not None) == solvable == (not beta.nontrivial)
        if a is not None:
            assert violated_fraction(sys, a) == 0
        if len(cohomology.coboundary_basis(X, 2)) <= 20:
            val, _ = exhaustive_optimum(sys, method="coset", X=X)
            assert (val == 0) == solvable


class TestFormat:
    def test_roundtrip(self, tmp_path, rp2_instance):
        p = tmp_path / "rp2.xor"
        xorsys.write(rp2_instance, p)
        assert xorsys.read(p) == rp2_instance
        assert xorsys.read(p).metadata["mode"] == "edge"
        assert "p xor 15 10" in p.read_text()

    @pytest.mark.parametrize("text, line", [
        ("p xor 3 1\n0 0 1 1\n", 2),
        ("p xor 3 2\n0 1 2 1\n", None),
        ("p xor 3 1\n2 1 0 1\n", 2),
        ("p xor 3 1\n0 1 2 2\n", 2),
        ("p xor 3 1\n0 1 5 0\n", 2),
        ("q xor 3 1\n", 1),
        ("c only a comment\n", None),
    ])
    def test_errors(self, text, line):
        with pytest.raises(ParseError) as e:
            xorsys.loads(text)
        if line is not None:
            assert e.value.line == line
