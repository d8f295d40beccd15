import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import all_specs
from oracles import cost_matrix, cut_count
from qaoa_qfi.errors import ContractError, DegenerateMatrixError, NumericError
from qaoa_qfi.graphs import complete_graph, cyclic_graph
from qaoa_qfi.qfi import (
    averaged_qfi,
    berry_curvature,
    covariance_fraction,
    derivative_state,
    eigen_extremes,
    jacobi_eigenvalues,
    qfi_fd_oracle,
    qfi_matrix,
    qfi_samples,
    qgt,
    sample_params,
)
from qaoa_qfi.simulator import AnsatzSpec, evolve, plus_state, prepare_state

C4 = cyclic_graph(4)
K4 = complete_graph(4)


def brute_force_var_cost(g):
    """Var(H_P) on |+>^N from the dense matrix."""
    n = g.n_nodes
    h = cost_matrix(g.edges, n)
    plus = np.full(1 << n, 2 ** (-n / 2))
    mean = plus @ h @ plus
    return (plus @ h @ h @ plus - mean ** 2).real


# --- derivative states ------------------------------------------------------------

def test_gamma_derivative_norm_depth_one(rng):
    spec = AnsatzSpec(C4, 1)
    assert brute_force_var_cost(C4) == pytest.approx(4.0)
    for _ in range(5):
        d = derivative_state(spec, rng.uniform(0, 2 * np.pi, 2), 0)
        assert np.vdot(d, d).real == pytest.approx(C4.n_edges, abs=1e-12)


def test_beta_derivative_at_zero_gamma():
    n, beta = 4, 0.83
    spec = AnsatzSpec(C4, 1)
    d = derivative_state(spec, [0.0, beta], 1)
    # |+>^N is a sum-X eigenstate with eigenvalue N
    expected = -1j * n * np.exp(-1j * beta * n) * plus_state(n).amplitudes
    np.testing.assert_allclose(d, expected, atol=1e-12)


def test_derivative_matches_central_difference(rng):
    eps = 1e-5
    for spec in all_specs(4):
        p = rng.uniform(0, 2 * np.pi, spec.n_params)
        for k in range(spec.n_params):
            e = np.zeros(spec.n_params)
            e[k] = eps
            fd = (prepare_state(spec, p + e).amplitudes - prepare_state(spec, p - e).amplitudes) / (2 * eps)
            np.testing.assert_allclose(derivative_state(spec, p, k), fd, atol=1e-6)


def test_derivative_index_error():
    spec = AnsatzSpec(C4, 1)
    with pytest.raises(IndexError):
        derivative_state(spec, [0.1, 0.2], 2)


# --- QGT ----------------------------------------------------------------------------

def test_qgt_beta_beta_vanishes_at_zero_gamma():
    tau = qgt(AnsatzSpec(C4, 1), [0.0, 1.1])
    assert abs(tau[1, 1]) < 1e-12


def test_qgt_diagonal_nonnegative_and_hermitian(rng):
    for spec in all_specs(4, depths=(2,)):
        for _ in range(100 // 6 + 1):
            tau = qgt(spec, rng.uniform(0, 2 * np.pi, spec.n_params))
            assert np.all(np.diag(tau).real >= -1e-12)
            np.testing.assert_allclose(tau, tau.conj().T, atol=1e-10)
            np.testing.assert_allclose(tau.imag, -tau.imag.T, atol=1e-10)
            assert np.linalg.eigvalsh(tau.real).min() >= -1e-8


def test_berry_curvature_antisymmetric(rng):
    spec = AnsatzSpec(K4, 2, "rxry", "cyclic", 2)
    omega = berry_curvature(qgt(spec, rng.uniform(0, 2 * np.pi, spec.n_params)))
    np.testing.assert_allclose(omega, -omega.T, atol=1e-12)


# --- QFI ----------------------------------------------------------------------------

@pytest.mark.parametrize("g, expected", [(C4, 16.0), (K4, 24.0)])
def test_gamma_gamma_closed_form(g, expected, rng):
    assert 4 * brute_force_var_cost(g) == pytest.approx(expected)
    spec = AnsatzSpec(g, 1)
    for _ in range(10):
        f = qfi_matrix(spec, rng.uniform(0, 2 * np.pi, 2))
        assert f[0, 0] == pytest.approx(expected, abs=1e-10)


@pytest.mark.parametrize("n", [3, 4, 5, 7])
def test_beta_beta_zero_at_zero_gamma(n):
    for g in (cyclic_graph(n), complete_graph(n)):
        f = qfi_matrix(AnsatzSpec(g, 1), [0.0, 2.2])
        assert abs(f[1, 1]) < 1e-10


def test_qfi_exactly_symmetric(rng):
    for spec in all_specs(4, depths=(3,)):
        f = qfi_matrix(spec, rng.uniform(0, 2 * np.pi, spec.n_params))
        assert np.array_equal(f, f.T)


def test_fd_oracle_agrees(rng):
    for spec in all_specs(4, topologies=("complete",), depths=(1, 3)):
        p = rng.uniform(0, 2 * np.pi, spec.n_params)
        oracle = qfi_fd_oracle(spec, p)
        np.testing.assert_allclose(qfi_matrix(spec, p), oracle, atol=1e-4)
        assert np.all(np.diag(oracle) >= -1e-6)


def test_fd_oracle_closed_form(rng):
    f = qfi_fd_oracle(AnsatzSpec(C4, 1), rng.uniform(0, 2 * np.pi, 2))
    assert f[0, 0] == pytest.approx(16.0, abs=1e-4)


@pytest.mark.parametrize("eps", [1e-7, 1e-2])
def test_fd_oracle_step_range(eps):
    with pytest.raises(ContractError):
        qfi_fd_oracle(AnsatzSpec(C4, 1), [0.1, 0.2], eps)


def test_global_phase_invariance(rng):
    for spec in all_specs(4, depths=(2,)):
        p = rng.uniform(0, 2 * np.pi, spec.n_params)
        phase = np.exp(1j * rng.uniform(0, 2 * np.pi))
        np.testing.assert_allclose(qfi_matrix(spec, p, phase=phase), qfi_matrix(spec, p), atol=1e-10)


def test_parameter_dependent_phase_is_gauged_out(rng):
    # psi' = exp(i a.theta) psi has d_k psi' = exp(..)(d_k psi + i a_k psi); the
    # Berry-connection term must remove the a-dependence entirely
    spec = AnsatzSpec(K4, 2, "rxry", "complete", 1)
    p = rng.uniform(0, 2 * np.pi, spec.n_params)
    a = rng.normal(size=spec.n_params)
    rows = evolve(spec, p, derivatives=True)
    psi, d = rows[0], rows[1:] + 1j * a[:, None] * rows[0]
    conn = d @ psi.conj()
    tau = d.conj() @ d.T - np.outer(conn.conj(), conn)
    np.testing.assert_allclose(4 * tau.real, qfi_matrix(spec, p), atol=1e-10)


def test_diagonal_within_generator_spectral_bound(rng):
    # F_ii <= (lambda_max - lambda_min)^2 of the layer generator; H_P eigenvalues are |E| - 2 cut
    for n in (4, 7):
        for spec in all_specs(n):
            edges = spec.graph.edges
            cuts = [cut_count(b, edges) for b in range(1 << n)]
            span_cost = (2 * (max(cuts) - min(cuts))) ** 2
            for _ in range(5):
                f = qfi_matrix(spec, rng.uniform(0, 2 * np.pi, spec.n_params))
                for i, kind in enumerate(spec.param_kinds()):
                    bound = span_cost if kind == "gamma" else (2 * n) ** 2
                    assert f[i, i] <= bound + 1e-8


def test_off_diagonal_cauchy_schwarz(rng):
    for spec in all_specs(4, depths=(3,)):
        for _ in range(10):
            f = qfi_matrix(spec, rng.uniform(0, 2 * np.pi, spec.n_params))
            bound = np.sqrt(np.outer(np.diag(f), np.diag(f)))
            assert np.all(np.abs(f) <= bound + 1e-8)


# --- covariance fraction, eigen extremes -------------------------------------------------

def test_covariance_fraction_examples():
    assert covariance_fraction(np.diag([1.0, 2.0, 3.0])) == 0.0
    assert covariance_fraction(np.array([[2.0, 1.0], [1.0, 2.0]])) == 0.5


def test_covariance_fraction_degenerate():
    with pytest.raises(DegenerateMatrixError):
        covariance_fraction(np.zeros((3, 3)))


@settings(max_examples=50, deadline=None)
@given(m=st.integers(1, 9), seed=st.integers(0, 2 ** 32 - 1))
def test_covariance_fraction_nonnegative(m, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(m, m))
    f = a @ a.T + 1e-3 * np.eye(m)
    assert covariance_fraction(f) >= 0


@pytest.mark.parametrize("m", [1, 4, 9])
def test_eigen_extremes_diagonal(m):
    assert eigen_extremes(np.diag(np.arange(1.0, m + 1))) == (m, 1)


def test_eigen_extremes_examples():
    me, le = eigen_extremes(np.array([[2.0, 1.0], [1.0, 2.0]]))
    assert me == pytest.approx(3.0) and le == pytest.approx(1.0)
    assert eigen_extremes(np.eye(5)) == (1.0, 1.0)


def test_eigen_extremes_rejects_bad_input():
    with pytest.raises(NumericError):
        eigen_extremes(np.array([[1.0, np.nan], [np.nan, 1.0]]))
    with pytest.raises(ContractError):
        eigen_extremes(np.eye(17))


@settings(max_examples=100, deadline=None)
@given(m=st.integers(1, 12), seed=st.integers(0, 2 ** 32 - 1), scale=st.floats(1e-3, 1e3))
def test_jacobi_matches_lapack(m, seed, scale):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(m, m)) * scale
    a = a + a.T
    np.testing.assert_allclose(jacobi_eigenvalues(a), np.linalg.eigvalsh(a), atol=1e-10 * max(scale, 1))


def test_jacobi_degenerate_spectrum():
    q, _ = np.linalg.qr(np.random.default_rng(0).normal(size=(6, 6)))
    a = q @ np.diag([2.0, 2.0, 2.0, -1.0, -1.0, 5.0]) @ q.T
    np.testing.assert_allclose(jacobi_eigenvalues(a), [-1, -1, 2, 2, 2, 5], atol=1e-10)


# --- averaging -----------------------------------------------------------------------------

def test_averaged_qfi_deterministic():
    spec = AnsatzSpec(K4, 2, "rxry", "cyclic", 2)
    f1, s1 = averaged_qfi(spec, 10, 42)
    f2, s2 = averaged_qfi(spec, 10, 42)
    assert np.array_equal(f1, f2) and s1 == s2
    f3, _ = averaged_qfi(spec, 10, 43)
    assert not np.array_equal(f1, f3)


def test_averaged_single_sample_equals_pointwise():
    spec = AnsatzSpec(K4, 2, "rx", "complete", 1)
    f, _ = averaged_qfi(spec, 1, 5)
    np.testing.assert_array_equal(f, qfi_matrix(spec, sample_params(spec, 5, 0)))


def test_averaged_gamma_gamma_constant():
    f, summary = averaged_qfi(AnsatzSpec(C4, 1), 100, 0)
    assert f[0, 0] == pytest.approx(16.0, abs=1e-8)
    assert summary.trace == pytest.approx(np.trace(f), abs=1e-8)
    assert summary.min_eig <= summary.max_eig


def test_samples_are_uniform_in_range():
    spec = AnsatzSpec(K4, 3, "rxry")
    draws = np.array([sample_params(spec, 1, i) for i in range(200)])
    assert draws.min() >= 0 and draws.max() < 2 * np.pi


def test_sample_stack_shape():
    spec = AnsatzSpec(C4, 2)
    assert qfi_samples(spec, 3, 0).shape == (3, 4, 4)
    with pytest.raises(ContractError):
        qfi_samples(spec, 0, 0)
