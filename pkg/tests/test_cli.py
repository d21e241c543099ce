import csv
import json

import numpy as np
import pytest

from cseig.bench import matrix_digest, random_csmatrix
from cseig.cli import (
    EXIT_BREAKDOWN,
    EXIT_NO_CONVERGENCE,
    EXIT_OK,
    EXIT_USAGE,
    EXIT_VERIFY_FAILED,
    main,
)
from cseig.fileio import read_matrix, write_matrix


@pytest.fixture
def matrix_file(tmp_path):
    def _make(A, name="a.txt"):
        path = tmp_path / name
        write_matrix(path, np.asarray(A, dtype=complex))
        return path
    return _make


def run_json(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out) if code == EXIT_OK else out


def values(report):
    return [complex(e["re"], e["im"]) for e in report["eigenvalues"]]


class TestSpectrum:
    def test_identity(self, capsys, matrix_file):
        code, report = run_json(capsys, ["spectrum", str(matrix_file(np.eye(3)))])
        assert code == EXIT_OK
        assert values(report) == [1, 1, 1]
        assert report["n"] == 3

    def test_imaginary_pair_sorted(self, capsys, matrix_file):
        code, report = run_json(capsys, ["spectrum", str(matrix_file([[0, 1j], [1j, 0]]))])
        assert code == EXIT_OK
        np.testing.assert_allclose(values(report), [-1j, 1j], atol=1e-15)

    def test_asymmetric_file(self, capsys, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("2\n0 0 1 0\n1.001 0 0 0\n")
        assert main(["spectrum", str(path)]) == EXIT_USAGE
        assert "NotSymmetricError" in capsys.readouterr().err

    def test_parse_error(self, capsys, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("3\n1 0\n")
        assert main(["spectrum", str(path)]) == EXIT_USAGE

    def test_missing_file(self, capsys, tmp_path):
        assert main(["spectrum", str(tmp_path / "nope.txt")]) == EXIT_USAGE

    def test_breakdown_exit_code(self, capsys, matrix_file):
        path = matrix_file([[0, 0, 1], [0, 0, 1j], [1, 1j, 0]])
        assert main(["spectrum", str(path)]) == EXIT_BREAKDOWN
        err = capsys.readouterr().err
        assert "IsotropicBreakdown" in err and "step 2" in err

    def test_no_convergence_exit_code(self, capsys, matrix_file):
        path = matrix_file(random_csmatrix(12, seed=4))
        assert main(["spectrum", str(path), "--max-sweeps", "1"]) == EXIT_NO_CONVERGENCE
        assert "index" in capsys.readouterr().err

    def test_bad_flag(self, capsys, matrix_file):
        with pytest.raises(SystemExit) as info:
            main(["spectrum", str(matrix_file(np.eye(2))), "--direction", "up"])
        assert info.value.code == EXIT_USAGE

    def test_csv_and_output_file(self, capsys, matrix_file, tmp_path):
        out = tmp_path / "r.csv"
        code = main(["spectrum", str(matrix_file(np.diag([2, 1j]))), "--format", "csv", "-o", str(out)])
        assert code == EXIT_OK
        rows = list(csv.DictReader(out.open()))
        assert [complex(float(r["re"]), float(r["im"])) for r in rows] == [1j, 2]

    def test_options_echo(self, capsys, matrix_file):
        code, report = run_json(capsys, ["spectrum", str(matrix_file(np.eye(2))), "--direction", "qr",
                                         "--tol", "1e-12"])
        assert report["options"]["direction"] == "qr"
        assert report["options"]["tol"] == 1e-12
        assert report["precision"] == "double"

    def test_extended_precision(self, capsys, matrix_file):
        A = random_csmatrix(8, seed=2)
        code, report = run_json(capsys, ["spectrum", str(matrix_file(A)), "--precision", "extended"])
        assert code == EXIT_OK
        assert report["precision"] == "extended"
        ref = np.sort_complex(np.linalg.eigvals(A))
        np.testing.assert_allclose(np.sort_complex(values(report)), ref, atol=1e-12)


class TestVerify:
    @pytest.fixture
    def pair(self, capsys, matrix_file, tmp_path):
        mpath = matrix_file(random_csmatrix(15, seed=7))
        rpath = tmp_path / "r.json"
        assert main(["spectrum", str(mpath), "--vectors", "-o", str(rpath)]) == EXIT_OK
        return mpath, rpath

    def test_own_output_passes(self, capsys, pair):
        assert main(["verify", *map(str, pair)]) == EXIT_OK
        assert "PASS" in capsys.readouterr().out

    def test_perturbed_eigenvalue_fails(self, capsys, pair):
        mpath, rpath = pair
        report = json.loads(rpath.read_text())
        report["eigenvalues"][3]["re"] += 1e-3
        rpath.write_text(json.dumps(report))
        assert main(["verify", str(mpath), str(rpath)]) == EXIT_VERIFY_FAILED
        assert "pair 3" in capsys.readouterr().out

    def test_zero_tolerance_fails(self, capsys, pair):
        assert main(["verify", *map(str, pair), "--tol", "0"]) == EXIT_VERIFY_FAILED

    def test_missing_vectors(self, capsys, matrix_file, tmp_path):
        mpath = matrix_file(np.eye(3))
        rpath = tmp_path / "r.json"
        main(["spectrum", str(mpath), "-o", str(rpath)])
        assert main(["verify", str(mpath), str(rpath)]) == EXIT_USAGE
        assert "eigenvectors" in capsys.readouterr().err

    def test_shape_mismatch(self, capsys, pair, matrix_file):
        _, rpath = pair
        assert main(["verify", str(matrix_file(np.eye(4), "b.txt")), str(rpath)]) == EXIT_USAGE


class TestOscillator:
    def test_harmonic_limit(self, capsys):
        code, report = run_json(capsys, ["oscillator", "--model", "quartic", "--coupling", "1e-12",
                                         "--basis", "8", "--levels", "3"])
        assert code == EXIT_OK
        np.testing.assert_allclose(values(report), [0.5, 1.5, 2.5], atol=1e-10)

    def test_invalid_theta(self, capsys):
        assert main(["oscillator", "--model", "ccubic", "--theta", "0.7"]) == EXIT_USAGE

    def test_invalid_basis(self, capsys):
        assert main(["oscillator", "--model", "icubic", "--basis", "0"]) == EXIT_USAGE

    def test_samples(self, capsys, tmp_path):
        out = tmp_path / "wf.csv"
        code = main(["oscillator", "--model", "icubic", "--basis", "40", "--levels", "2",
                     "--samples", str(out)])
        assert code == EXIT_OK
        rows = list(csv.DictReader(out.open()))
        assert list(rows[0]) == ["state_index", "x", "re", "im", "modulus", "phase"]
        assert len(rows) == 2 * 601
        assert float(rows[0]["x"]) == -6 and float(rows[600]["x"]) == 6
        assert {r["state_index"] for r in rows} == {"0", "1"}
        # eigenvectors are normalized in the bilinear sense, so psi^2 (no
        # conjugate) integrates to 1 while |psi|^2 integrates to more than 1
        xs = np.array([float(r["x"]) for r in rows[:601]])
        psi = np.array([complex(float(r["re"]), float(r["im"])) for r in rows[:601]])
        assert np.trapezoid(psi ** 2, xs) == pytest.approx(1, abs=1e-6)
        assert np.trapezoid(np.abs(psi) ** 2, xs) > 1


class TestBenchAndRandom:
    def test_one_row_per_phase(self, capsys):
        assert main(["bench", "--sizes", "50", "--trials", "1"]) == EXIT_OK
        out = capsys.readouterr().out.splitlines()
        assert out[0] == "size,phase,median_seconds"
        rows = [line for line in out[1:] if line.startswith("50,")]
        assert [r.split(",")[1] for r in rows] == ["tridiagonalize", "ql"]

    def test_bad_sizes(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["bench", "--sizes", "a,b"])
        assert info.value.code == EXIT_USAGE

    def test_random_matrix_file(self, capsys, tmp_path):
        out = tmp_path / "r.txt"
        assert main(["random", "5", "--seed", "3", "-o", str(out)]) == EXIT_OK
        A = read_matrix(out)
        assert matrix_digest(A) == matrix_digest(random_csmatrix(5, 3))
        assert matrix_digest(A) in capsys.readouterr().err
