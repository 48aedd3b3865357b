import io
import subprocess
import sys

import pytest

from qdiff import catalog
from qdiff.algebra import format_qalg
from qdiff.cli import run


@pytest.fixture()
def mq2_file(tmp_path):
    path = tmp_path / "mq2.qalg"
    path.write_text(format_qalg(catalog.aiii(2)))
    return str(path)


@pytest.fixture()
def plane_file(tmp_path):
    path = tmp_path / "plane.qalg"
    path.write_text(format_qalg(catalog.quantum_plane()))
    return str(path)


def call(argv, stdin=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = run(argv, out, err)
    return code, out.getvalue(), err.getvalue()


def test_normal_form(mq2_file):
    code, out, _ = call(["normal-form", mq2_file, "X4.X1"])
    assert code == 0
    assert out == "1q^0 * X1.X4 + -1q^1+1q^-1 * X2.X3\n"


def test_catalog_piped_into_qsym(monkeypatch):
    _, text, _ = call(["catalog", "symmetric", "2"])
    code, out, _ = call(["qsym", "-", "X2.X1"], stdin=text, monkeypatch=monkeypatch)
    assert code == 0
    assert out == "1/2q^0 * X1.X2 + 1/2q^0 * X2.X1\n"


def test_verify_stars(mq2_file):
    code, out, _ = call(["verify", mq2_file, "--suite", "stars", "--max-degree", "3"])
    assert code == 0
    assert "(r,k,s)=(1,2,0): (I x P x I) P = P" in out
    assert "FAIL" not in out


def test_verify_all_names_skipped_suites(plane_file):
    code, out, _ = call(["verify", plane_file, "--max-degree", "2"])
    assert code == 0
    assert "SKIP closed-forms" in out and "SKIP lifts" in out


def test_check_reports_failure_with_exit_one(tmp_path):
    path = tmp_path / "bad.qalg"
    path.write_text("qalg 1\ngens 3\nrel 2 1 : 1q^1 ;\nrel 3 1 : 1q^0 ;\nrel 3 2 : 1q^0 ; 1q^0 * 1 1\n")
    code, out, _ = call(["check", str(path)])
    assert code == 1
    assert "FAIL" in out and "X3X2X1" in out


def test_parse_error_exit_two(tmp_path, mq2_file):
    path = tmp_path / "broken.qalg"
    path.write_text("qalg 1\ngens 2\nrel 2 1 : 2q ;\n")
    code, _, err = call(["check", str(path)])
    assert code == 2
    assert "line 3, column 14" in err
    code, _, err = call(["normal-form", mq2_file, "X4.Y1"])
    assert code == 2 and "column 4" in err


def test_usage_errors_exit_two(mq2_file):
    assert call(["bogus"])[0] == 2
    assert call(["normal-form", mq2_file])[0] == 2
    assert call(["derive", mq2_file, "1", "z1", "--unknown"])[0] == 2
    assert call(["derive", mq2_file, "1", "z1", "--q-at", "abc"])[0] == 2
    assert call(["path-op", str(mq2_file), "3", "1"])[0] == 2


def test_wrong_algebra_exit_two(plane_file):
    code, _, err = call(["wave-check", plane_file])
    assert code == 2 and "quantum matrix" in err


def test_derive_and_q_at(mq2_file):
    assert call(["derive", mq2_file, "4", "z2z3"])[1] == "-1q^1+1q^-1 * z1^1\n"
    assert call(["derive", mq2_file, "4", "z2z3", "--q-at", "2"])[1] == "-3/2 * z1^1\n"
    assert call(["derive", mq2_file, "4", "z2z3", "--scheme", "f1"])[1] == "-1/2q^1+1/2q^-1 * z1^1\n"


def test_derive_export(mq2_file):
    code, out, _ = call(["derive", mq2_file, "4", "--export", "2"])
    assert code == 0 and "z1^1 z2^1z3^1 -1q^1+1q^-1" in out


def test_pair_star_dual_relations_poisson(mq2_file):
    assert call(["pair", mq2_file, "X1*.X2*", "X2.X1", "--symmetrized"])[1] == "1q^-1\n"
    assert call(["pair", mq2_file, "X1*.X2*", "X1.X2"])[1] == "1q^0\n"
    assert call(["star", mq2_file, "z2", "z1"])[1] == "1q^1 * z1^1z2^1\n"
    rels = call(["dual-relations", mq2_file])[1].splitlines()
    assert rels[0] == "X2*.X1* = 1q^1 * X1*.X2*" and len(rels) == 6
    assert call(["poisson", mq2_file, "z1", "z2"])[1] == "-1q^0 * z1^1z2^1\n"
    assert call(["poisson", mq2_file])[0] == 0


def test_path_op_and_lift_check(mq2_file):
    code, out, _ = call(["path-op", mq2_file, "2", "2", "--max-degree", "3"])
    assert code == 0
    assert out.splitlines()[0] == "1q^2 * O[1,1] d[1,2] d[2,1] + K[1,2] K[2,1] d[2,2]"
    code, out, _ = call(["path-op", mq2_file, "2", "2", "--printed", "--max-degree", "3"])
    assert code == 1 and "FAIL" in out
    assert call(["lift-check", mq2_file, "AF", "z2z3"])[0] == 0
    assert call(["lift-check", mq2_file, "BG", "--max-degree", "3"])[0] == 0


def test_projector_export(plane_file):
    out = call(["projector", plane_file, "2"])[1]
    assert out.splitlines()[1] == "X1.X2 X1.X2 1/2q^0"


def test_budget_is_enforced(mq2_file):
    code, _, err = call(["qsym", mq2_file, "X1.X1.X1.X1.X1.X1.X1.X1"])
    assert code == 2 and "budget" in err


def test_output_is_deterministic(mq2_file):
    argv = ["verify", mq2_file, "--suite", "braid", "--max-degree", "3"]
    first = subprocess.run([sys.executable, "-m", "qdiff.cli", *argv], capture_output=True, text=True)
    second = subprocess.run([sys.executable, "-m", "qdiff.cli", *argv], capture_output=True, text=True)
    assert first.returncode == 0
    assert first.stdout == second.stdout and first.stdout
