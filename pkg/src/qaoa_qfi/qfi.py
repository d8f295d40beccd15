"""Quantum geometric tensor, QFI matrix and summary diagnostics."""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .errors import ContractError, DegenerateMatrixError, NumericError
from .simulator import AnsatzSpec, check_params, evolve


@dataclass(frozen=True)
class QfiSummary:
    max_eig: float
    min_eig: float
    trace: float
    cov_fraction: float

    def to_json(self) -> dict:
        return asdict(self)


def derivative_state(spec: AnsatzSpec, params: Sequence[float], k: int) -> np.ndarray:
    """Exact ``d|psi>/d theta_k`` (unnormalized)."""
    if not 0 <= k < spec.n_params:
        raise IndexError(f"parameter index {k} out of range for {spec.n_params} parameters")
    return evolve(spec, params, derivatives=True)[k + 1]


def qgt(spec: AnsatzSpec, params: Sequence[float], *, phase: complex = 1.0) -> np.ndarray:
    """Quantum geometric tensor ``<d_i psi|d_j psi> - <d_i psi|psi><psi|d_j psi>``.

    ``phase`` multiplies the initial state; the result must not depend on it.
    """
    rows = evolve(spec, params, derivatives=True, phase=phase)
    psi, d = rows[0], rows[1:]
    berry = d @ psi.conj()  # <psi|d_j psi>
    tau = d.conj() @ d.T - np.outer(berry.conj(), berry)
    return 0.5 * (tau + tau.conj().T)


def qfi_matrix(spec: AnsatzSpec, params: Sequence[float], *, phase: complex = 1.0) -> np.ndarray:
    f = 4.0 * qgt(spec, params, phase=phase).real
    return 0.5 * (f + f.T)


def berry_curvature(tau: np.ndarray) -> np.ndarray:
    return 2.0 * tau.imag


def qfi_fd_oracle(spec: AnsatzSpec, params: Sequence[float], eps: float = 1e-4) -> np.ndarray:
    """QFI from finite differences of the fidelity ``|<psi(t)|psi(t + d)>|^2``.

    Uses ``f(d) = 1 - d^T F d / 4 + O(d^3)``, so ``F_ij = -2 d2f/dd_i dd_j``,
    with the mixed second difference over the four sign combinations of
    ``(+-eps e_i, +-eps e_j)``. Only state preparation is used, never the
    derivative branches.
    """
    if not 1e-6 <= eps <= 1e-3:
        raise ContractError(f"eps must be in [1e-6, 1e-3], got {eps}")
    params = check_params(spec, params)
    m = spec.n_params
    psi = evolve(spec, params)[0]

    def fid(delta):
        other = evolve(spec, params + delta)[0]
        return abs(np.vdot(psi, other)) ** 2

    basis = np.eye(m) * eps
    f = np.empty((m, m))
    for i in range(m):
        for j in range(i, m):
            acc = 0.0
            for si in (1, -1):
                for sj in (1, -1):
                    acc += si * sj * fid(si * basis[i] + sj * basis[j])
            f[i, j] = f[j, i] = -2.0 * acc / (4 * eps * eps)
    return f


def covariance_fraction(f: np.ndarray) -> float:
    """``sum_{i != j} |F_ij| / sum_i F_ii``."""
    f = np.asarray(f, dtype=float)
    tr = float(np.trace(f))
    if tr <= 1e-12:
        raise DegenerateMatrixError(f"trace {tr} too small for a covariance fraction")
    off = float(np.abs(f).sum() - np.abs(np.diag(f)).sum())
    return off / tr


def jacobi_eigenvalues(
    a: np.ndarray, tol: float = 1e-12, max_sweeps: int = 100
) -> np.ndarray:
    """Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations, ascending.

    Stops when the off-diagonal Frobenius norm drops below ``tol`` times the
    matrix Frobenius norm (absolute ``tol`` for a zero matrix).
    """
    a = np.array(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ContractError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NumericError("matrix has non-finite entries")
    n = a.shape[0]
    a = 0.5 * (a + a.T)
    scale = max(np.linalg.norm(a), 1.0)
    for _ in range(max_sweeps):
        off = np.sqrt(2.0 * np.sum(np.triu(a, 1) ** 2))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = np.copysign(1.0, theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rot_p = a[:, p].copy()
                rot_q = a[:, q].copy()
                a[:, p] = c * rot_p - s * rot_q
                a[:, q] = s * rot_p + c * rot_q
                rot_p = a[p, :].copy()
                rot_q = a[q, :].copy()
                a[p, :] = c * rot_p - s * rot_q
                a[q, :] = s * rot_p + c * rot_q
    else:
        raise NumericError(f"Jacobi did not converge in {max_sweeps} sweeps")
    return np.sort(np.diag(a))


def eigen_extremes(f: np.ndarray) -> tuple[float, float]:
    """(largest, smallest) eigenvalue."""
    f = np.asarray(f, dtype=float)
    if f.shape[0] > 16:
        raise ContractError(f"matrix dimension {f.shape[0]} exceeds 16")
    w = jacobi_eigenvalues(f)
    return float(w[-1]), float(w[0])


def summarize(f: np.ndarray) -> QfiSummary:
    me, le = eigen_extremes(f)
    return QfiSummary(me, le, float(np.trace(f)), covariance_fraction(f))


def sample_params(spec: AnsatzSpec, seed: int, index: int) -> np.ndarray:
    """Uniform [0, 2pi) draw from the substream keyed by ``(seed, index)``."""
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))
    return rng.uniform(0.0, 2 * np.pi, spec.n_params)


def qfi_samples(spec: AnsatzSpec, n_samples: int, seed: int) -> np.ndarray:
    """Stack of per-sample QFI matrices, shape ``(n_samples, m, m)``."""
    if n_samples < 1:
        raise ContractError(f"n_samples must be >= 1, got {n_samples}")
    return np.stack([qfi_matrix(spec, sample_params(spec, seed, i)) for i in range(n_samples)])


def averaged_qfi(spec: AnsatzSpec, n_samples: int = 100, seed: int = 0) -> tuple[np.ndarray, QfiSummary]:
    """Mean QFI over random parameter draws; the summary is of the mean matrix."""
    samples = qfi_samples(spec, n_samples, seed)
    f = samples.sum(axis=0) / n_samples
    f = 0.5 * (f + f.T)
    return f, summarize(f)


def sample_mean_extremes(samples: np.ndarray) -> tuple[float, float]:
    """Per-sample (ME, LE) averaged over samples; the alternative reading."""
    pairs = np.array([eigen_extremes(f) for f in samples])
    return float(pairs[:, 0].mean()), float(pairs[:, 1].mean())
