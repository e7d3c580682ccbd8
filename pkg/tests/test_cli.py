import shutil
import subprocess
import sys

import pytest

from xorgap import cohomology, resolution, sos, xorsys, zoo
from xorgap.cli import main


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture
def rp2_files(tmp_path):
    inst = tmp_path / "rp2.xor"
    assert run("instance", "--zoo", "projective_plane_6", "--out", inst) == 0
    return tmp_path, inst


def test_build_and_reload(tmp_path, rp2):
    out = tmp_path / "c.txt"
    assert run("build", "--zoo", "projective_plane_6", "--out", out) == 0
    assert zoo.load(out) == rp2
    manifest = (tmp_path / "c.txt.manifest").read_text()
    assert manifest.startswith("command build\n") and "output.c.txt " in manifest


def test_homology(tmp_path, capsys):
    assert run("homology", "--zoo", "torus_7", "--out", tmp_path / "h.txt") == 0
    assert "duality ok" in capsys.readouterr().out


def test_cocycle_trivial_complex_is_negative(tmp_path):
    (tmp_path / "tri.txt").write_text("complex 3 2\n0 1 2\n")
    assert run("cocycle", "--complex", tmp_path / "tri.txt", "--dim", "2", "--out", tmp_path / "b") == 1


def test_trivial_beta_optimum_is_zero(tmp_path, capsys):
    beta = tmp_path / "beta.chain"
    inst = tmp_path / "i.xor"
    assert run("cocycle", "--zoo", "projective_plane_6", "--trivial", "--out", beta) == 0
    assert run("instance", "--zoo", "projective_plane_6", "--beta", beta, "--out", inst) == 0
    assert xorsys.read(inst).metadata["beta_class"] == "trivial"
    capsys.readouterr()
    assert run("optimum", "--instance", inst, "--out", tmp_path / "o.txt") == 0
    assert "min_violated 0\n" in capsys.readouterr().out


def test_optimum_coset_matches_cosystole(rp2_files, capsys):
    tmp, inst = rp2_files
    assert run("optimum", "--instance", inst, "--zoo", "projective_plane_6", "--method", "coset",
               "--out", tmp / "o.txt") == 0
    assert "min_violated 1/10" in capsys.readouterr().out
    assert run("cosystole", "--zoo", "projective_plane_6", "--out", tmp / "s.txt") == 0
    assert (tmp / "s.txt").read_text().startswith("cosystole 1/10\n")


def test_refute_satisfiable_is_negative(tmp_path, capsys):
    inst = tmp_path / "sat.xor"
    assert run("instance", "--zoo", "projective_plane_6", "--trivial", "--out", inst) == 0
    capsys.readouterr()
    assert run("refute", "--instance", inst, "--w-max", "4", "--out", tmp_path / "r.txt") == 1
    assert "no refutation up to w_max" in capsys.readouterr().out


def test_refute_and_audit(rp2_files, capsys):
    tmp, inst = rp2_files
    assert run("refute", "--instance", inst, "--w-max", "6", "--out", tmp / "r.txt") == 0
    assert "refutation_width 5" in (tmp / "r.txt").read_text()
    dag = resolution.loads_dag((tmp / "r.txt.dag").read_text(), xorsys.read(inst))
    assert dag.root.equation.rhs == 1
    assert run("audit-dag", "--zoo", "projective_plane_6", "--instance", inst,
               "--dag", tmp / "r.txt.dag", "--out", tmp / "a.txt") == 0
    assert "violations 0" in (tmp / "a.txt").read_text()


def test_certify_and_verify(rp2_files):
    tmp, inst = rp2_files
    cert = tmp / "cert.txt"
    assert run("certify", "--instance", inst, "--t", "2", "--out", cert) == 0
    assert sos.load(cert).t == 2
    assert run("verify", "--instance", inst, "--cert", cert, "--out", tmp / "v.txt") == 0
    assert "objective 1\n" in (tmp / "v.txt").read_text()
    assert run("certify", "--instance", inst, "--t", "3", "--out", tmp / "c3.txt") == 1


def test_fill_in_ball(tmp_path, capsys):
    X = zoo.build("icosahedron")
    from xorgap.complex import Chain

    star = [t for t in X.faces[2] if 0 in t]
    f = X.boundary(Chain.from_faces(X, 2, star))
    cfile = tmp_path / "f.chain"
    cohomology.save_chain(f, cfile)
    out = tmp_path / "g.chain"
    assert run("fill", "--zoo", "icosahedron", "--chain", cfile, "--center", 0, "--radius", 1, "--out", out) == 0
    g = cohomology.load_chain(out, X)
    assert X.boundary(g) == f and g.weight == 5


def test_usage_errors(tmp_path):
    assert run() == 2
    assert run("optimum") == 2
    assert run("refute", "--instance", tmp_path / "missing.xor") == 2
    (tmp_path / "bad.xor").write_text("p xor 3 1\n0 0 1 1\n")
    assert run("optimum", "--instance", tmp_path / "bad.xor") == 2


def test_budget_exit_code(rp2_files):
    tmp, inst = rp2_files
    assert run("optimum", "--instance", inst, "--method", "full", "--budget-enum", 100,
               "--out", tmp / "o.txt") == 3


def test_pipeline_report(tmp_path, capsys):
    assert run("pipeline", "--zoo", "projective_plane_6", "--mode", "edge", "--t", 1, "--out", tmp_path) == 0
    report = (tmp_path / "report.txt").read_text()
    assert "satisfiable no" in report
    assert "certificate_objective 1\n" in report
    assert "refutation_width 5" in report
    assert "integrality_gap sdp 1 vs true 9/10" in report
    for name in ("instance.xor", "certificate.txt", "dag.txt", "audit.txt", "manifest.txt"):
        assert (tmp_path / name).exists()


def test_pipeline_is_byte_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert run("pipeline", "--zoo", "projective_plane_6", "--t", 2, "--out", d) == 0
    for name in ("instance.xor", "certificate.txt", "manifest.txt", "report.txt"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


@pytest.mark.skipif(shutil.which("xorgap") is None, reason="console script not installed")
def test_console_script(tmp_path):
    proc = subprocess.run(["xorgap", "homology", "--zoo", "projective_plane_6", "--out", str(tmp_path / "h")],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "duality ok" in proc.stdout


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "xorgap", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "pipeline" in proc.stdout
