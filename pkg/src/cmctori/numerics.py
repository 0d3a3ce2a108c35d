"""Numerical kernels: elliptic integrals and functions, quadrature, root
finding and a dense symmetric eigensolver.

The elliptic routines use the arithmetic-geometric mean and the descending
Landen transformation and accept numpy arrays for the argument ``u``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg
import scipy.optimize


class NumericsError(ArithmeticError):
    """Raised when a kernel is called outside its domain or fails to converge."""


class QuadratureError(NumericsError):
    """Adaptive quadrature ran out of subdivisions; ``result`` is the best estimate."""

    def __init__(self, message: str, result: "QuadratureResult"):
        super().__init__(message)
        self.result = result


class RootFindingError(NumericsError):
    def __init__(self, message: str, bracket: tuple[float, float] | None = None):
        super().__init__(message)
        self.bracket = bracket


# ---------------------------------------------------------------------------
# Elliptic integrals and functions

_AGM_MAXITER = 64


def _check_modulus(tau: float) -> float:
    tau = float(tau)
    if not (0.0 <= tau < 1.0) or not math.isfinite(tau):
        raise NumericsError(f"elliptic modulus must lie in [0, 1), got {tau!r}")
    return tau


def agm(a: float, b: float) -> float:
    """Arithmetic-geometric mean of two non-negative numbers."""
    for _ in range(_AGM_MAXITER):
        if abs(a - b) <= 1e-16 * abs(a):
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return 0.5 * (a + b)


def elliptic_K(tau: float) -> float:
    """Complete elliptic integral of the first kind, modulus ``tau``.

    K(tau) = int_0^1 dr / sqrt((1 - r^2)(1 - tau^2 r^2)) = pi / (2 agm(1, tau')).
    """
    tau = _check_modulus(tau)
    # 1 - tau^2 factored to keep precision as tau -> 1
    tau_c = math.sqrt((1.0 - tau) * (1.0 + tau))
    return math.pi / (2.0 * agm(1.0, tau_c))


def _landen_sequence(tau: float) -> tuple[list[float], list[float]]:
    a, b, c = 1.0, math.sqrt((1.0 - tau) * (1.0 + tau)), tau
    aa, cc = [a], [c]
    for _ in range(_AGM_MAXITER):
        if abs(c) <= 1e-16 * a:
            break
        a, b, c = 0.5 * (a + b), math.sqrt(a * b), 0.5 * (a - b)
        aa.append(a)
        cc.append(c)
    return aa, cc


def jacobi_sncndn(u, tau: float):
    """Jacobi sn, cn, dn with modulus ``tau`` via the descending Landen scheme.

    ``u`` may be a scalar or an array; the results have the same shape.
    """
    tau = _check_modulus(tau)
    u = np.asarray(u, dtype=float)
    if tau == 0.0:
        return np.sin(u), np.cos(u), np.ones_like(u)
    aa, cc = _landen_sequence(tau)
    # reduce modulo the real period 4K of sn/cn for accuracy at large |u|
    period = 4.0 * elliptic_K(tau)
    u = u - period * np.round(u / period)
    n = len(aa) - 1
    phi = (2.0**n) * aa[n] * u
    phis = [phi]
    for j in range(n, 0, -1):
        phi = 0.5 * (phi + np.arcsin(cc[j] / aa[j] * np.sin(phi)))
        phis.append(phi)
    phi0 = phis[-1]
    phi1 = phis[-2] if len(phis) > 1 else phi0
    sn = np.sin(phi0)
    cn = np.cos(phi0)
    dn = cn / np.cos(phi1 - phi0) if n > 0 else np.ones_like(u)
    # cn/cos(phi1 - phi0) loses accuracy where cn ~ 0; recover from the identity there
    dn_alt = np.sqrt(np.clip(1.0 - tau * tau * sn * sn, 0.0, None))
    dn = np.where(np.abs(cn) < 1e-3, dn_alt, dn)
    return sn, cn, dn


def jacobi_dn(u, tau: float):
    """Jacobi dn(u, tau); values lie in [sqrt(1 - tau^2), 1], period 2K(tau)."""
    return jacobi_sncndn(u, tau)[2]


# ---------------------------------------------------------------------------
# Quadrature

@dataclass(frozen=True)
class QuadratureResult:
    value: complex | float
    error_estimate: float
    evaluations: int
    converged: bool = True


# Gauss-Kronrod 7/15 nodes and weights on [-1, 1]
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KRONROD_W = np.concatenate([_WGK[:-1], _WGK[::-1]])
# Gauss nodes are the odd-indexed Kronrod nodes (1, 3, 5, 7 from the outside)
_GAUSS_W = np.zeros(15)
_GAUSS_W[[1, 3, 5]] = _WG[:3]
_GAUSS_W[7] = _WG[3]
_GAUSS_W[[13, 11, 9]] = _WG[:3]


def _gk15(f, a: np.ndarray, b: np.ndarray):
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    x = mid[:, None] + half[:, None] * _NODES[None, :]
    fx = np.asarray(f(x.ravel())).reshape(x.shape)
    kronrod = half * (fx @ _KRONROD_W)
    gauss = half * (fx @ _GAUSS_W)
    return kronrod, np.abs(kronrod - gauss)


def integrate(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    tol: float = 1e-10,
    max_intervals: int = 4000,
) -> QuadratureResult:
    """Adaptive Gauss-Kronrod (7/15) quadrature of ``f`` over [a, b].

    ``f`` is called with a 1-d array of abscissae and must return an array of
    the same length; complex-valued integrands are supported. Intervals are
    bisected in batches until the summed error estimate drops below ``tol``.
    Raises :class:`QuadratureError` (carrying the best estimate) if
    ``max_intervals`` is exceeded.
    """
    if not tol > 0:
        raise NumericsError("tol must be positive")
    if a == b:
        return QuadratureResult(0.0, 0.0, 0)
    lo = np.array([a], dtype=float)
    hi = np.array([b], dtype=float)
    vals, errs = _gk15(f, lo, hi)
    evaluations = 15
    done_val = 0.0
    done_err = 0.0
    while True:
        total_err = done_err + errs.sum()
        total_val = done_val + vals.sum()
        if not np.isfinite(total_val):
            raise NumericsError("non-finite integrand value")
        if total_err <= tol:
            return QuadratureResult(_scalar(total_val), float(total_err), evaluations)
        if len(lo) * 2 + evaluations // 15 > max_intervals:
            res = QuadratureResult(_scalar(total_val), float(total_err), evaluations, False)
            raise QuadratureError("quadrature did not converge", res)
        # retire intervals whose error is negligible relative to their share
        share = tol / max(len(lo), 1) * 0.5
        keep = errs > share
        done_val += vals[~keep].sum()
        done_err += errs[~keep].sum()
        lo, hi = lo[keep], hi[keep]
        mid = 0.5 * (lo + hi)
        lo, hi = np.concatenate([lo, mid]), np.concatenate([mid, hi])
        vals, errs = _gk15(f, lo, hi)
        evaluations += 15 * len(lo)


def _scalar(value):
    value = complex(value)
    return value.real if value.imag == 0.0 else value


# ---------------------------------------------------------------------------
# Root finding

def find_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-12,
    maxiter: int = 200,
) -> float:
    """Bracketed root of ``f`` in [lo, hi] by Brent's method."""
    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if not (np.sign(f_lo) * np.sign(f_hi) < 0):
        raise RootFindingError(
            f"no sign change on [{lo}, {hi}]: f(lo)={f_lo:.3e}, f(hi)={f_hi:.3e}",
            (lo, hi),
        )
    try:
        root, info = scipy.optimize.brentq(
            f, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps,
            maxiter=maxiter, full_output=True, disp=False,
        )
    except (RuntimeError, ValueError) as exc:
        raise RootFindingError(str(exc), (lo, hi)) from exc
    if not info.converged:
        raise RootFindingError(f"Brent iteration did not converge: {info.flag}", (lo, hi))
    return float(root)


# ---------------------------------------------------------------------------
# Dense symmetric eigensolver

@dataclass
class SymmetricSpectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns, orthonormal

    def residuals(self, matrix: np.ndarray) -> np.ndarray:
        r = matrix @ self.eigenvectors - self.eigenvectors * self.eigenvalues
        return np.linalg.norm(r, axis=0)


def _check_symmetric(matrix: np.ndarray) -> np.ndarray:
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NumericsError(f"expected a square matrix, got shape {m.shape}")
    scale = max(np.abs(m).max(), 1.0)
    if np.abs(m - m.T).max() > 1e-12 * scale:
        raise NumericsError("matrix is not symmetric")
    return 0.5 * (m + m.T)


def householder_tridiagonalize(matrix: np.ndarray):
    """Reduce a symmetric matrix to tridiagonal form, A = Q T Q^T.

    Returns (diagonal, off_diagonal, Q).
    """
    a = np.array(matrix, dtype=float)
    n = a.shape[0]
    q = np.eye(n)
    for k in range(n - 2):
        x = a[k + 1:, k]
        alpha = -math.copysign(np.linalg.norm(x), x[0] if x[0] != 0 else 1.0)
        v = x.copy()
        v[0] -= alpha
        vnorm = np.linalg.norm(v)
        if vnorm < 1e-300:
            continue
        v /= vnorm
        # A <- H A H with H = I - 2 v v^T acting on rows/cols k+1:
        sub = a[k + 1:, k:]
        sub -= 2.0 * np.outer(v, v @ sub)
        sub = a[k:, k + 1:]
        sub -= 2.0 * np.outer(sub @ v, v)
        q[:, k + 1:] -= 2.0 * np.outer(q[:, k + 1:] @ v, v)
    diag = np.diag(a).copy()
    off = np.diag(a, -1).copy()
    return diag, off, q


def tridiagonal_ql(diag: np.ndarray, off: np.ndarray, z: np.ndarray, max_sweeps: int = 60):
    """Implicit-shift QL on a symmetric tridiagonal matrix, accumulating into ``z``."""
    d = np.array(diag, dtype=float)
    n = len(d)
    e = np.zeros(n)
    e[: n - 1] = off
    z = np.array(z, dtype=float)
    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= np.finfo(float).eps * dd:
                    break
                m += 1
            if m == l:
                break
            sweeps += 1
            if sweeps > max_sweeps:
                raise NumericsError(f"QL iteration failed to converge for eigenvalue {l}")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                zi1 = z[:, i + 1].copy()
                z[:, i + 1] = s * z[:, i] + c * zi1
                z[:, i] = c * z[:, i] - s * zi1
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    order = np.argsort(d)
    return d[order], z[:, order]


def sym_eigen(matrix: np.ndarray, count: int | None = None, method: str = "lapack") -> SymmetricSpectrum:
    """Eigen-decomposition of a dense real symmetric matrix, ascending order.

    ``method="householder-ql"`` runs the in-house Householder reduction and
    implicit QL iteration; it is exact but slow in pure Python and intended
    for matrices up to a few hundred rows. The default ``"lapack"`` path calls
    LAPACK's symmetric driver. ``count`` limits the result to the lowest
    eigenpairs.
    """
    m = _check_symmetric(matrix)
    n = m.shape[0]
    if method == "householder-ql":
        d, e, q = householder_tridiagonalize(m)
        w, v = tridiagonal_ql(d, e, q)
    elif method == "lapack":
        subset = None if count is None or count >= n else (0, count - 1)
        try:
            w, v = scipy.linalg.eigh(m, subset_by_index=subset)
        except np.linalg.LinAlgError as exc:
            raise NumericsError(f"eigensolver failed: {exc}") from exc
    else:
        raise ValueError(f"unknown method {method!r}")
    if count is not None:
        w, v = w[:count], v[:, :count]
    return SymmetricSpectrum(np.asarray(w), np.asarray(v))
