"""Recovery: signal generation, measurement, OMP, the experiment harness."""

import numpy as np
import pytest

from cwsense.designs import spread_code, subspace_to_code
from cwsense.errors import ParameterError
from cwsense.matrices import devore, from_binary_code
from cwsense.recovery import (CSV_HEADER, RecoveryReport, exact_recovery,
                              gen_sparse, measure, omp, reports_to_csv,
                              run_experiment)


def spread_matrix():
    # 15 x 5, pairwise disjoint supports, coherence 0
    return from_binary_code(subspace_to_code(spread_code(2, 4, 2)))


# -- gen_sparse -----------------------------------------------------------------

def test_gen_sparse_is_reproducible():
    a = gen_sparse(50, 5, seed=9)
    b = gen_sparse(50, 5, seed=9)
    assert a.support == b.support
    assert np.array_equal(a.values, b.values)
    c = gen_sparse(50, 5, seed=10)
    assert (a.support, tuple(a.values)) != (c.support, tuple(c.values))


def test_gen_sparse_support_shape():
    sig = gen_sparse(30, 7, seed=0)
    assert len(sig.support) == 7
    assert len(set(sig.support)) == 7
    assert list(sig.support) == sorted(sig.support)
    assert all(0 <= i < 30 for i in sig.support)


def test_gen_sparse_value_models():
    rad = gen_sparse(40, 10, model="rademacher", seed=2)
    assert set(np.abs(rad.values)) == {1.0}
    gau = gen_sparse(40, 10, model="gaussian", seed=2)
    assert np.all(gau.values != 0.0)
    assert not np.array_equal(rad.values, gau.values)


def test_gen_sparse_edge_cases():
    empty = gen_sparse(10, 0, seed=0)
    assert empty.support == () and len(empty.values) == 0
    with pytest.raises(ParameterError):
        gen_sparse(10, 11)
    with pytest.raises(ParameterError):
        gen_sparse(10, 2, model="cauchy")


def test_to_dense_places_values():
    sig = gen_sparse(12, 3, seed=5)
    dense = sig.to_dense()
    assert dense.shape == (12,)
    assert np.count_nonzero(dense) == 3
    for pos, val in zip(sig.support, sig.values):
        assert dense[pos] == val


# -- measure ---------------------------------------------------------------------

def test_measure_matches_dense_product():
    matrix = devore(3, 2)
    sig = gen_sparse(matrix.N, 3, seed=1)
    y = measure(matrix, sig)
    assert np.allclose(y, matrix.to_dense() @ sig.to_dense())


def test_measure_is_linear_in_the_signal():
    matrix = spread_matrix()
    sig = gen_sparse(matrix.N, 2, seed=4)
    doubled = type(sig)(N=sig.N, support=sig.support, values=2 * sig.values)
    assert np.allclose(measure(matrix, doubled), 2 * measure(matrix, sig))


def test_measure_rejects_length_mismatch():
    with pytest.raises(ParameterError):
        measure(devore(3, 2), gen_sparse(5, 1, seed=0))


# -- OMP -------------------------------------------------------------------------

def test_omp_single_column():
    matrix = devore(3, 2)
    truth = gen_sparse(matrix.N, 1, seed=3)
    estimate = omp(matrix, measure(matrix, truth), 1)
    assert exact_recovery(truth, estimate)


def test_omp_disjoint_columns_recover_to_full_width():
    matrix = spread_matrix()
    for k in range(1, 6):
        for trial in range(10):
            truth = gen_sparse(matrix.N, k,
                               seed=np.random.SeedSequence([k, trial]))
            estimate = omp(matrix, measure(matrix, truth), k)
            assert exact_recovery(truth, estimate)


def test_omp_residual_is_orthogonal_to_selection():
    matrix = devore(5, 2)
    truth = gen_sparse(matrix.N, 2, seed=11)
    y = measure(matrix, truth)
    estimate = omp(matrix, y, 2)
    a = matrix.to_dense()
    residual = y - a[:, list(estimate.support)] @ estimate.values
    assert np.max(np.abs(a[:, list(estimate.support)].T @ residual)) < 1e-9


def test_omp_parameter_errors():
    matrix = devore(3, 2)
    y = np.zeros(matrix.n)
    with pytest.raises(ParameterError):
        omp(matrix, y, 0)
    with pytest.raises(ParameterError):
        omp(matrix, y, matrix.n + 1)
    with pytest.raises(ParameterError):
        omp(matrix, np.zeros(3), 1)


def test_exact_recovery_criteria():
    truth = gen_sparse(20, 3, seed=6)
    same = type(truth)(N=20, support=truth.support,
                       values=truth.values + 1e-12)
    assert exact_recovery(truth, same)
    off_value = type(truth)(N=20, support=truth.support,
                            values=truth.values + 1e-6)
    assert not exact_recovery(truth, off_value)
    other = gen_sparse(20, 3, seed=7)
    assert truth.support != other.support  # seed 7 draws a different support
    assert not exact_recovery(truth, other)


# -- experiment harness ------------------------------------------------------------

def test_run_experiment_is_deterministic():
    matrix = spread_matrix()
    a = run_experiment(matrix, [1, 2], trials=20, seed=5)
    b = run_experiment(matrix, [1, 2], trials=20, seed=5)
    for ra, rb in zip(a, b):
        assert (ra.k, ra.trials, ra.successes) == (rb.k, rb.trials, rb.successes)
        assert ra.max_support_err == rb.max_support_err
        assert ra.max_value_err == rb.max_value_err
        assert ra.max_residual == rb.max_residual  # everything but seconds


def test_run_experiment_per_trial_streams_are_stable():
    # Adding more trials must not disturb the earlier ones.
    matrix = spread_matrix()
    short = run_experiment(matrix, [2], trials=5, seed=1)[0]
    long = run_experiment(matrix, [2], trials=10, seed=1)[0]
    assert long.successes >= short.successes


def test_run_experiment_skips_k_zero():
    matrix = spread_matrix()
    reports = run_experiment(matrix, [0, 1], trials=5, seed=0)
    assert [r.k for r in reports] == [1]


def test_run_experiment_rejections():
    matrix = spread_matrix()
    with pytest.raises(ParameterError):
        run_experiment(matrix, [6], trials=5, seed=0)   # k > min(n, N) = 5
    with pytest.raises(ParameterError):
        run_experiment(matrix, [1], trials=0, seed=0)
    with pytest.raises(ParameterError):
        run_experiment(matrix, [1], trials=5, seed=-2)


def test_run_experiment_zero_coherence_always_succeeds():
    matrix = spread_matrix()
    reports = run_experiment(matrix, range(1, 6), trials=25, seed=0)
    assert all(r.successes == r.trials for r in reports)
    assert all(r.max_value_err < 1e-9 for r in reports)


def test_reports_to_csv_layout():
    report = RecoveryReport(matrix_id="m", k=2, trials=10, successes=9,
                            max_support_err=2, max_value_err=0.5,
                            max_residual=1.25, seconds=0.125)
    text = reports_to_csv([report])
    lines = text.splitlines()
    assert lines[0] == CSV_HEADER
    assert lines[1] == "m,2,10,9,5.000e-01,0.125000"
