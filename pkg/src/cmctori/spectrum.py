"""Spectrum of the reduced Jacobi operator -d^2/dx^2 + q(x) on the closed profile.

q(x) = -2 v^2 - 32 s^2 t^2 / v^2 is sampled over one closed profile of
length x1 = k x0 and the operator is discretized by Fourier-Galerkin in the
real basis {1, cos(m w x), sin(m w x)}, w = 2 pi / x1. A fourth-order finite
difference discretization is kept as an independent cross-check.

The 2D operator separates: its eigenvalues are lambda_j + n^2 with
multiplicity 1 for n = 0 and 2 for n >= 1 (cos ny, sin ny).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse
import scipy.sparse.linalg

from .numerics import sym_eigen
from .surface import ClosureData, SurfaceParams, profile_v, profile_v_prime

log = logging.getLogger(__name__)

DEGENERACY_TOL = 5e-3


class SpectrumError(RuntimeError):
    pass


@dataclass
class Potential:
    period: float
    samples: np.ndarray
    fourier_coefficients: np.ndarray  # c_p with q(x) = sum_p c_p exp(i p w x), FFT ordering
    x0: float | None = None

    @property
    def x(self) -> np.ndarray:
        return np.arange(len(self.samples)) * self.period / len(self.samples)


def _next_pow2(n: int) -> int:
    return 1 << max(int(n) - 1, 1).bit_length()


def potential_values(params: SurfaceParams, x):
    v = profile_v(params, x)
    return -2 * v * v - 32 * (params.s * params.t) ** 2 / (v * v)


def build_potential(params: SurfaceParams, closure: ClosureData, n_samples: int = 4096) -> Potential:
    if n_samples < 128 or n_samples & (n_samples - 1):
        raise SpectrumError("n_samples must be a power of two >= 128")
    if n_samples / closure.k < 32:
        raise SpectrumError(
            f"{n_samples} samples cannot resolve {closure.k} periods (need 32 per period)"
        )
    x = np.arange(n_samples) * closure.x1 / n_samples
    if params.flat:
        q = np.full(n_samples, -1.0 / math.cos(params.gamma) ** 2)
        x0 = None
    else:
        q = potential_values(params, x)
        x0 = closure.x0
    return Potential(closure.x1, q, np.fft.fft(q) / n_samples, x0)


def constant_potential(value: float, period: float, n_samples: int = 256) -> Potential:
    q = np.full(n_samples, float(value))
    return Potential(period, q, np.fft.fft(q) / n_samples)


# ---------------------------------------------------------------------------
# Fourier-Galerkin solver

def _real_basis_transform(N: int) -> np.ndarray:
    """Unitary map from exponentials e_{-N..N} to (1, cos 1..N, sin 1..N)."""
    size = 2 * N + 1
    U = np.zeros((size, size), dtype=complex)
    U[N, 0] = 1.0
    r = 1 / math.sqrt(2)
    for m in range(1, N + 1):
        U[N + m, m] = r
        U[N - m, m] = r
        U[N + m, N + m] = -1j * r
        U[N - m, N + m] = 1j * r
    return U


def galerkin_matrix(potential: Potential, N: int) -> np.ndarray:
    """Real symmetric Galerkin matrix in the (1, cos, sin) basis."""
    n_samp = len(potential.samples)
    if 4 * N + 1 > n_samp:
        raise SpectrumError(f"{n_samp} potential samples alias a truncation of N={N}")
    omega = 2 * math.pi / potential.period
    m = np.arange(-N, N + 1)
    H = potential.fourier_coefficients[(m[:, None] - m[None, :]) % n_samp].astype(complex)
    H[np.diag_indices_from(H)] += (m * omega) ** 2
    U = _real_basis_transform(N)
    R = U.conj().T @ H @ U
    if np.abs(R.imag).max() > 1e-10 * max(1.0, np.abs(R.real).max()):
        raise SpectrumError("Galerkin matrix is not real; potential is not real-valued")
    R = R.real
    return 0.5 * (R + R.T)


@dataclass
class Spectrum1D:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns; coefficients on (1, cos 1..N, sin 1..N)
    truncation: int
    convergence_gap: float
    period: float
    coarse_eigenvalues: np.ndarray = field(default_factory=lambda: np.array([]))

    def eigenfunction(self, j: int, x) -> np.ndarray:
        """Values of the j-th (0-based) L^2-normalized eigenfunction at x."""
        return evaluate_real_series(self.eigenvectors[:, j], self.period, x)


def evaluate_real_series(coeffs: np.ndarray, period: float, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    N = (len(coeffs) - 1) // 2
    omega = 2 * math.pi / period
    m = np.arange(1, N + 1)
    phase = np.multiply.outer(x, m * omega)
    out = coeffs[0] / math.sqrt(period) + math.sqrt(2 / period) * (
        np.cos(phase) @ coeffs[1:N + 1] + np.sin(phase) @ coeffs[N + 1:]
    )
    return out


def default_count(k: int) -> int:
    return 4 * k + 8


def solve_spectrum_1d(
    potential: Potential,
    N: int = 512,
    tol: float = 1e-6,
    count: int | None = None,
    k: int | None = None,
) -> Spectrum1D:
    """Lowest eigenpairs of -d^2/dx^2 + q on the circle of length ``period``.

    The solve is repeated at N/2 and ``convergence_gap`` records the largest
    change among the reported eigenvalues; a gap above ``tol`` raises.
    """
    if N < 64:
        raise SpectrumError("truncation N must be at least 64")
    if count is None:
        count = default_count(k if k is not None else 1)
    count = min(count, 2 * (N // 2) + 1)
    fine = sym_eigen(galerkin_matrix(potential, N), count=count)
    coarse = sym_eigen(galerkin_matrix(potential, N // 2), count=count)
    gap = float(np.abs(fine.eigenvalues - coarse.eigenvalues).max())
    if gap > tol:
        raise SpectrumError(
            f"spectrum not converged at N={N}: eigenvalues moved by {gap:.2e} from N={N // 2}; "
            "increase --modes"
        )
    return Spectrum1D(fine.eigenvalues, fine.eigenvectors, N, gap, potential.period, coarse.eigenvalues)


# ---------------------------------------------------------------------------
# Finite-difference cross-check

def fd_spectrum(params: SurfaceParams, closure: ClosureData, n_points: int = 2048, count: int = 10) -> np.ndarray:
    """Lowest eigenvalues from a periodic fourth-order finite-difference Laplacian.

    The potential is sampled directly from the profile function, independent
    of the Fourier coefficients used by the Galerkin solver.
    """
    h = closure.x1 / n_points
    x = np.arange(n_points) * h
    if params.flat:
        q = np.full(n_points, -1.0 / math.cos(params.gamma) ** 2)
    else:
        q = potential_values(params, x)
    c = 1.0 / (12 * h * h)
    offsets = {0: 30 * c, 1: -16 * c, -1: -16 * c, 2: c, -2: c}
    rows, cols, vals = [], [], []
    idx = np.arange(n_points)
    for off, val in offsets.items():
        rows.append(idx)
        cols.append((idx + off) % n_points)
        vals.append(np.full(n_points, val))
    L = scipy.sparse.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n_points, n_points),
    )
    L = L + scipy.sparse.diags(q)
    sigma = float(q.min()) - 1.0
    w = scipy.sparse.linalg.eigsh(L.tocsc(), k=count, sigma=sigma, which="LM", return_eigenvectors=False)
    return np.sort(w)


# ---------------------------------------------------------------------------
# Kernel element and nodal counts

def kernel_residual_u0(params: SurfaceParams, closure: ClosureData, potential: Potential) -> float:
    """max |(-d^2/dx^2 + q) u0| / max |u0| for u0 = v'/v, derivatives by FFT."""
    if params.flat:
        raise SpectrumError("u0 = v'/v vanishes identically on flat tori")
    x = potential.x
    u0 = profile_v_prime(params, x) / profile_v(params, x)
    n = len(x)
    omega = 2 * math.pi / potential.period
    freqs = np.fft.fftfreq(n, d=1.0 / n) * omega
    u0_xx = np.fft.ifft(-(freqs**2) * np.fft.fft(u0)).real
    r = -u0_xx + potential.samples * u0
    return float(np.abs(r).max() / np.abs(u0).max())


def count_sign_changes(samples) -> int:
    """Sign changes around a periodic sample vector, zeros skipped."""
    a = np.asarray(samples, dtype=float)
    scale = np.abs(a).max()
    if scale == 0:
        raise ValueError("all-zero sample vector")
    signs = np.sign(np.where(np.abs(a) <= 1e-12 * scale, 0.0, a))
    signs = signs[signs != 0]
    if len(signs) == 0:
        return 0
    return int(np.sum(signs != np.roll(signs, -1)))


def nodal_domains(samples) -> int:
    changes = count_sign_changes(samples)
    return max(changes, 1)


# ---------------------------------------------------------------------------
# Index assembly

@dataclass
class IndexReport:
    B_minus: int
    B_plus: int
    n_minus_one: int
    n_zero: int
    index: int
    nullity: int
    shortcut_index: int
    tol: float
    agrees: bool
    warnings: list = field(default_factory=list)


def direct_index(eigs, tol: float) -> tuple[int, int]:
    """Index and nullity of the 2D operator from the 1D eigenvalues."""
    index = nullity = 0
    for lam in eigs:
        if lam < -tol:
            index += 1
        elif abs(lam) <= tol:
            nullity += 1
        n = 1
        while lam + n * n < -tol:
            index += 2
            n += 1
        if abs(lam + n * n) <= tol:
            nullity += 2
    return index, nullity


def assemble_index(spectrum, tol: float = DEGENERACY_TOL) -> IndexReport:
    """Classify eigenvalues against -1 and 0 and count index and nullity.

    ``spectrum`` may be a :class:`Spectrum1D` or a plain sequence of
    eigenvalues. The highest reported eigenvalue must be positive, otherwise
    negative eigenvalues may have been truncated.
    """
    eigs = np.sort(np.asarray(getattr(spectrum, "eigenvalues", spectrum), dtype=float))
    warnings = []
    if eigs[-1] <= tol:
        warnings.append("all reported eigenvalues are non-positive; index may be truncated")
    B_minus = int(np.sum(eigs < -1 - tol))
    B_plus = int(np.sum((eigs > -1 + tol) & (eigs < -tol)))
    n_m1 = int(np.sum(np.abs(eigs + 1) <= tol))
    n_0 = int(np.sum(np.abs(eigs) <= tol))
    index, nullity = direct_index(eigs, tol)
    shortcut = 3 * B_minus + 2 + B_plus
    applicable = n_m1 == 2 and bool(np.all(eigs[eigs < -1 - tol] > -4 + tol))
    agrees = (shortcut == index) if applicable else False
    if n_m1 != 2:
        warnings.append(f"{n_m1} eigenvalues within {tol:g} of -1 (expected a pair)")
    near = eigs[(np.abs(eigs + 1) > tol) & (np.abs(eigs + 1) <= 3 * tol)]
    if len(near):
        warnings.append(f"eigenvalues close to -1 outside tolerance: {near.tolist()}")
    if applicable and not agrees:
        warnings.append(f"direct index {index} disagrees with 3B-+2+B+ = {shortcut}")
    for w in warnings:
        log.warning(w)
    return IndexReport(B_minus, B_plus, n_m1, n_0, index, nullity, shortcut, tol, agrees, warnings)


def verify_minus_one_pair(spectrum, tol: float = DEGENERACY_TOL) -> bool:
    eigs = np.asarray(getattr(spectrum, "eigenvalues", spectrum), dtype=float)
    return int(np.sum(np.abs(eigs + 1) <= tol)) == 2
