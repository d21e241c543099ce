import numpy as np
import pytest

from cseig.bench import (
    NOMINAL_NOTE,
    BenchRow,
    bench_csv,
    fit_exponents,
    matrix_digest,
    random_csmatrix,
    run_bench,
)


def test_same_seed_same_matrix():
    assert matrix_digest(random_csmatrix(30, 5)) == matrix_digest(random_csmatrix(30, 5))


def test_seed_changes_matrix():
    assert matrix_digest(random_csmatrix(30, 5)) != matrix_digest(random_csmatrix(30, 6))


def test_ensemble():
    A = random_csmatrix(40, 0)
    np.testing.assert_array_equal(A, A.T)
    assert np.max(np.abs(A.real)) <= 1 and np.max(np.abs(A.imag)) <= 1


def test_fit_recovers_exponent():
    rows = [BenchRow(n, p, 1e-9 * n ** k) for n in (100, 200, 400)
            for p, k in (("tridiagonalize", 3), ("ql", 2))]
    fit = fit_exponents(rows)
    assert fit["tridiagonalize"] == pytest.approx(3)
    assert fit["ql"] == pytest.approx(2)


def test_single_size_has_no_exponent():
    assert fit_exponents(run_bench([20], trials=1)) == {"tridiagonalize": None, "ql": None}


def test_csv_mentions_nominal_cost():
    rows = run_bench([20, 40], trials=1)
    text = bench_csv(rows, fit_exponents(rows))
    assert NOMINAL_NOTE in text
    assert "phase,loglog_exponent" in text


def test_rejects_bad_arguments():
    with pytest.raises(ValueError):
        run_bench([20], trials=0)
    with pytest.raises(ValueError):
        run_bench([1])
