"""Constant mean curvature tori of revolution in the unit 3-sphere.

A surface is fixed by the pair (s, t); the angle gamma follows from the
constraint (s + t)^2 - 4 s t sin^2(gamma) = 1/4 and the mean curvature is
H = cot(2 gamma). The profile function is v(x) = 2t / dn(2 s x, tau) with
tau = sqrt(1 - t^2/s^2), periodic with period x0 = K(tau)/s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .numerics import (
    NumericsError,
    _KRONROD_W,
    _NODES,
    elliptic_K,
    find_root,
    integrate,
    jacobi_sncndn,
)

QUARTER_PI = math.pi / 4
CONSTRAINT_TOL = 1e-12
TABLE_CLOSURE_TOL = 5e-2
SOLVED_CLOSURE_TOL = 1e-8


class SurfaceError(ValueError):
    """Invalid parameters or a failed geometric construction."""


class ClosureNotFound(SurfaceError):
    pass


class SurfaceClass(str, Enum):
    UNDULOIDAL = "Unduloidal"
    NODOIDAL = "Nodoidal"
    FLAT = "Flat"
    SPHERE = "Sphere"


def _st_ratio(s: float, t: float) -> float:
    return ((s + t) ** 2 - 0.25) / (4.0 * s * t)


def gamma_from_st(s: float, t: float) -> float:
    """Solve the constraint for gamma in (0, pi/4]."""
    if not s > 0:
        raise SurfaceError(f"s must be positive, got {s}")
    if t == 0:
        raise SurfaceError("t = 0 is the round sphere; no torus parameters")
    if not -s < t <= s:
        raise SurfaceError(f"t must lie in (-s, s], got t={t} with s={s}")
    ratio = _st_ratio(s, t)
    if not 0.0 < ratio <= 1.0:
        raise SurfaceError(
            f"no CMC surface with these (s,t): sin^2(gamma) would be {ratio:.6g}"
        )
    gamma = math.asin(math.sqrt(ratio))
    if gamma > QUARTER_PI * (1 + 1e-14):
        raise SurfaceError(f"gamma = {gamma:.6f} exceeds pi/4 for (s,t)=({s},{t})")
    return min(gamma, QUARTER_PI)


@dataclass(frozen=True)
class SurfaceParams:
    s: float
    t: float
    gamma: float

    def __post_init__(self):
        residual = self.constraint_residual
        if residual > CONSTRAINT_TOL:
            raise SurfaceError(f"constraint residual {residual:.3e} too large")

    @classmethod
    def from_st(cls, s: float, t: float) -> "SurfaceParams":
        return cls(float(s), float(t), gamma_from_st(s, t))

    @property
    def constraint_residual(self) -> float:
        s, t, g = self.s, self.t, self.gamma
        return abs((s + t) ** 2 - 4 * s * t * math.sin(g) ** 2 - 0.25)

    @property
    def flat(self) -> bool:
        return self.s == self.t

    @property
    def tau(self) -> float:
        if self.flat:
            return 0.0
        r = self.t / self.s
        return math.sqrt((1.0 - r) * (1.0 + r))

    @property
    def H(self) -> float:
        # cot(2 gamma), exactly zero at gamma = pi/4
        return math.cos(2 * self.gamma) / math.sin(2 * self.gamma) if self.gamma < QUARTER_PI else 0.0

    @property
    def st(self) -> float:
        return self.s * self.t


def clifford_torus() -> SurfaceParams:
    a = 1 / (2 * math.sqrt(2))
    return SurfaceParams(a, a, QUARTER_PI)


def flat_params(gamma: float) -> SurfaceParams:
    """Flat torus s = t with the given gamma in (0, pi/4]."""
    if not 0 < gamma <= QUARTER_PI:
        raise SurfaceError("gamma must lie in (0, pi/4]")
    t = 1.0 / (4.0 * math.cos(gamma))
    return SurfaceParams(t, t, gamma)


# ---------------------------------------------------------------------------
# Profile function and derived quantities

def profile_v(params: SurfaceParams, x):
    """v(x) = 2t / dn(2 s x, tau); constant 2s in the flat case."""
    x = np.asarray(x, dtype=float)
    if params.flat:
        return np.full_like(x, 2.0 * params.s)
    _, _, dn = jacobi_sncndn(2.0 * params.s * x, params.tau)
    return 2.0 * params.t / dn


def profile_v_prime(params: SurfaceParams, x):
    x = np.asarray(x, dtype=float)
    if params.flat:
        return np.zeros_like(x)
    tau = params.tau
    sn, cn, dn = jacobi_sncndn(2.0 * params.s * x, tau)
    return 4.0 * params.s * params.t * tau * tau * sn * cn / (dn * dn)


def ode_residual(params: SurfaceParams, x):
    """(v')^2 + (v^2 - 4s^2)(v^2 - 4t^2); zero on exact solutions."""
    v = profile_v(params, x)
    vp = profile_v_prime(params, x)
    return vp**2 + (v**2 - 4 * params.s**2) * (v**2 - 4 * params.t**2)


def period_x0(params: SurfaceParams) -> float:
    if params.flat:
        raise SurfaceError("period undefined; v constant in the flat case")
    return elliptic_K(params.tau) / params.s


def metric_and_curvature(params: SurfaceParams, x):
    """Conformal factor rho and Gauss curvature K at profile parameter x."""
    s, t, g = params.s, params.t, params.gamma
    v = profile_v(params, x)
    rho = 16 * s * s * t * t * math.sin(2 * g) ** 2 / v**2
    K = -(v**2 - 16 * s * s * t * t / v**2) / rho
    return rho, K


@dataclass(frozen=True)
class GeometricSummary:
    H: float
    mu_plus: float
    mu_minus: float
    X_plus: float
    X_minus: float
    r_plus: float
    r_minus: float
    surface_class: SurfaceClass


def geometry(params: SurfaceParams) -> GeometricSummary:
    """Bulge/neck radii r+, r- and the unduloid/nodoid classification.

    The radii are signed: a negative r- (nodoids) means the neck lies on the
    far side of the point of the profile plane farthest from the axis.
    """
    s, t, g = params.s, params.t, params.gamma
    sin2, cos2 = math.sin(g) ** 2, math.cos(g) ** 2
    # on the constraint, 1 + 16 s t sin^2 g = 4 (s+t)^2 and 1 - 16 s t cos^2 g = 4 (s-t)^2;
    # the factored forms avoid cancellation near the flat tori
    mu_p = 2 * (s + t)
    mu_m = 2 * abs(s - t)
    X_p = (-2 * mu_m * sin2 + 2 * mu_p * cos2) / (2 + (mu_m + mu_p) * math.sin(2 * g))
    X_m = (2 * mu_m * sin2 + 2 * mu_p * cos2) / (2 - (mu_m - mu_p) * math.sin(2 * g))
    r_p = math.pi / 2 - 2 * math.atan(X_p)
    r_m = math.pi / 2 - 2 * math.atan(X_m)
    if params.flat:
        cls = SurfaceClass.FLAT
    elif params.st < 0 and r_p <= math.pi / 2:
        cls = SurfaceClass.NODOIDAL
    else:
        cls = SurfaceClass.UNDULOIDAL
    return GeometricSummary(params.H, mu_p, mu_m, X_p, X_m, r_p, r_m, cls)


# ---------------------------------------------------------------------------
# Closing condition

def _theta_integrand(params: SurfaceParams):
    s, t, g = params.s, params.t, params.gamma
    st = s * t

    def f(x):
        v2 = profile_v(params, x) ** 2
        return 8 * st * v2 * math.sin(2 * g) / (v2 * v2 + 16 * st * st + 8 * st * v2 * math.cos(2 * g))

    return f


def closing_integral(params: SurfaceParams, tol: float = 1e-12) -> float:
    """Integral over one period of 8 s t v^2 sin(2g) / |v^2 + 4 s t e^{2ig}|^2."""
    return float(integrate(_theta_integrand(params), 0.0, period_x0(params), tol).value)


def closing_prefactor(params: SurfaceParams) -> float:
    """The factor multiplying tan(theta) inside the closing arctan."""
    gs = geometry(params)
    g = params.gamma
    denom = gs.mu_plus * math.cos(g) ** 2 - gs.mu_minus * math.sin(g) ** 2
    if abs(denom) < 1e-14:
        raise SurfaceError("singular configuration: mu+ cos^2 g = mu- sin^2 g")
    return 2 * (params.t + params.s * math.cos(2 * g)) / denom


def _unwrapped_arctan(c: float, theta: float) -> float:
    """arctan(c tan theta) continued continuously from theta = 0."""
    branch = math.floor(theta / math.pi + 0.5)
    return math.atan(c * math.tan(theta)) + math.copysign(1.0, c) * math.pi * branch


def axis_angle_per_period(params: SurfaceParams) -> float:
    """Angle advanced along the rotation axis by the profile over one period.

    The closed-form arctan expression is continued in its upper limit of
    integration. For nodoids the profile loops around the point farthest from
    the axis once per period, adding a full turn.
    """
    if params.flat:
        raise SurfaceError("axis angle per period undefined in the flat case")
    theta = closing_integral(params)
    phi = _unwrapped_arctan(closing_prefactor(params), theta)
    if geometry(params).surface_class is SurfaceClass.NODOIDAL:
        phi += 2 * math.pi
    return phi


@dataclass(frozen=True)
class ClosureData:
    k: int
    w: int
    x0: float
    x1: float
    angle_per_period: float
    residual: float
    raw_k: int = 0
    raw_w: int = 0

    def __post_init__(self):
        if not self.raw_k:
            object.__setattr__(self, "raw_k", self.k)
            object.__setattr__(self, "raw_w", self.w)


def _rotation_angle(phi: float) -> float:
    return phi % (2 * math.pi)


def closure_for(params: SurfaceParams, k: int, w: int) -> ClosureData:
    """Closure data for prescribed (k, w), with the achieved residual."""
    if params.flat:
        return flat_closure(params)
    x0 = period_x0(params)
    phi = axis_angle_per_period(params)
    residual = abs(k * _rotation_angle(phi) - 2 * math.pi * w)
    g = math.gcd(k, w)
    return ClosureData(k // g, w // g, x0, k // g * x0, phi, residual, raw_k=k, raw_w=w)


def flat_closure(params: SurfaceParams) -> ClosureData:
    """Flat tori close after x1 = 2 pi / tan(gamma)."""
    x1 = 2 * math.pi / math.tan(params.gamma)
    return ClosureData(1, 1, x1, x1, 2 * math.pi, 0.0)


def closure_search(params: SurfaceParams, k_max: int = 24, tol: float = TABLE_CLOSURE_TOL) -> ClosureData:
    """Smallest coprime (k, w), k <= k_max, with |k phi - 2 pi w| <= tol.

    phi is the axis angle per period reduced to [0, 2 pi), so w counts the
    turns of the period map; w/k is its rotation number.
    """
    if params.flat:
        return flat_closure(params)
    x0 = period_x0(params)
    phi = axis_angle_per_period(params)
    rot = _rotation_angle(phi)
    for k in range(1, k_max + 1):
        w = round(k * rot / (2 * math.pi))
        if w < 1 or math.gcd(k, w) != 1:
            continue
        residual = abs(k * rot - 2 * math.pi * w)
        if residual <= tol:
            return ClosureData(k, w, x0, k * x0, phi, residual)
    raise ClosureNotFound(
        f"closure not found: rotation number {rot / (2 * math.pi):.8f} has no "
        f"k <= {k_max} within tol {tol:g}"
    )


def closing_residual(s: float, t: float, k: int, w: int) -> float:
    """Signed k * phi - 2 pi w with phi reduced to [0, 2 pi)."""
    params = SurfaceParams.from_st(s, t)
    return k * _rotation_angle(axis_angle_per_period(params)) - 2 * math.pi * w


def t_range(s: float) -> list[tuple[float, float]]:
    """Intervals of t admitting gamma in (0, pi/4] for this s."""
    out = []
    if s < 0.5:
        hi = min(math.sqrt(0.25 - s * s), s)
        lo = 0.5 - s
        if lo < hi:
            out.append((lo, hi))
        out.append((-s, -math.sqrt(0.25 - s * s)))
    else:
        out.append((-s, 0.5 - s))
    return [(a, b) for a, b in out if a < b]


def solve_closing(s: float, k: int, w: int, bracket: tuple[float, float]) -> SurfaceParams:
    """Find t in ``bracket`` with k phi(s, t) = 2 pi w to 1e-8."""
    lo, hi = sorted(bracket)

    def f(t):
        try:
            return closing_residual(s, t, k, w)
        except SurfaceError as exc:
            raise SurfaceError(f"gamma leaves (0, pi/4] during the search at t={t}: {exc}") from exc

    t = find_root(f, lo, hi, tol=1e-15)
    params = SurfaceParams.from_st(s, t)
    res = abs(f(t))
    if res > SOLVED_CLOSURE_TOL:
        raise SurfaceError(f"closing residual {res:.2e} exceeds {SOLVED_CLOSURE_TOL}")
    return params


def find_closing_brackets(s: float, k: int, w: int, n: int = 240, near: float | None = None):
    """Scan admissible t for sign changes of the closing residual.

    Returns brackets ordered by distance from ``near`` (if given). Jumps caused
    by the angle wrapping through 2 pi are discarded.
    """
    brackets = []
    for a, b in t_range(s):
        pad = 1e-6 * (b - a)
        ts = np.linspace(a + pad, b - pad, n)
        vals = []
        for t in ts:
            if t == 0 or abs(t) >= s:
                vals.append(np.nan)
                continue
            try:
                vals.append(closing_residual(s, t, k, w))
            except (SurfaceError, NumericsError):
                vals.append(np.nan)
        vals = np.array(vals)
        for i in range(n - 1):
            f0, f1 = vals[i], vals[i + 1]
            if not (np.isfinite(f0) and np.isfinite(f1)) or f0 * f1 > 0:
                continue
            if abs(f1 - f0) > math.pi * k:  # wrap of the reduced angle
                continue
            brackets.append((float(ts[i]), float(ts[i + 1])))
    if near is not None:
        brackets.sort(key=lambda br: abs(0.5 * (br[0] + br[1]) - near))
    return brackets


def refine_closing(
    params: SurfaceParams,
    k: int,
    w: int,
    precision: tuple[float, float] = (5e-5, 5e-5),
) -> SurfaceParams:
    """Nearest exactly closing parameters to rounded inputs.

    Moves (s, t) along the gradient of the closing residual measured in units
    of the input precision (ds, dt), i.e. the smallest correction relative to
    the number of printed digits, and solves the residual to 1e-8 there.
    """
    s0, t0 = params.s, params.t
    ds, dt = precision

    def f(s, t):
        return closing_residual(s, t, k, w)

    f0 = f(s0, t0)
    if abs(f0) <= SOLVED_CLOSURE_TOL:
        return params
    h = 1e-7
    gs = (f(s0 + h, t0) - f(s0 - h, t0)) / (2 * h)
    gt = (f(s0, t0 + h) - f(s0, t0 - h)) / (2 * h)
    direction = np.array([ds * ds * gs, dt * dt * gt])
    direction /= math.hypot(direction[0] / ds, direction[1] / dt)
    step = -math.copysign(1.0, f0)  # residual decreases along -sign(f0)

    def g(a):
        return f(s0 + a * direction[0], t0 + a * direction[1])

    lo, f_lo = 0.0, f0
    a = 0.5
    while a <= 512:
        try:
            f_a = g(step * a)
        except (SurfaceError, NumericsError) as exc:
            raise SurfaceError(f"refinement left the admissible region: {exc}") from exc
        if f_a * f_lo < 0:
            if abs(f_a - f_lo) > math.pi * k:
                raise SurfaceError("closing residual wraps before reaching a root")
            root = find_root(g, *sorted((step * lo, step * a)), tol=1e-15)
            out = SurfaceParams.from_st(s0 + root * direction[0], t0 + root * direction[1])
            res = abs(closing_residual(out.s, out.t, k, w))
            if res > SOLVED_CLOSURE_TOL:
                raise SurfaceError(f"refined closing residual {res:.2e} exceeds {SOLVED_CLOSURE_TOL}")
            return out
        lo, f_lo = a, f_a
        a *= 2
    raise SurfaceError(f"no closing parameters near (s,t)=({s0},{t0}) for (k,w)=({k},{w})")


# ---------------------------------------------------------------------------
# Explicit immersion

@dataclass
class ImmersionState:
    A: complex
    B: complex
    C: complex
    D: complex
    M: complex
    c_plus: complex
    c_minus: complex
    s_plus: complex
    s_minus: complex
    g_plus: complex
    g_minus: complex
    branch_phase_log: list = field(default_factory=list)


@dataclass(frozen=True)
class ImmersionSample:
    point: np.ndarray
    x: float
    y: float
    on_sphere_residual: float
    conformality_residual: float


class Immersion:
    """The conformal immersion (x, y) -> S^3 for fixed parameters.

    The cumulative integrals g+ and g- = conj(g+) are cached at checkpoints
    every x0/64 along one period; evaluation at any x adds whole periods and a
    single Gauss-Kronrod panel from the nearest checkpoint.

    Square roots of the complex ratios are taken in closed form so they vary
    continuously in x: sqrt(CD) = e^{i g}|D|, sqrt(AB) = e^{i g}|A|,
    sqrt(B/A) = sqrt(conj(A)/conj(B)) = e^{i g} conj(A)/|A| and
    sqrt(C/conj(C)) = C/|C|.
    """

    n_checkpoints = 64

    def __init__(self, params: SurfaceParams):
        self.params = params
        s, t, g = params.s, params.t, params.gamma
        self.e2 = complex(math.cos(2 * g), math.sin(2 * g))
        self.eg = complex(math.cos(g), math.sin(g))
        self.A = s + t * self.e2
        self.B = s * self.e2 + t
        self._w_plus = 4 * s * t * self.e2
        if params.flat:
            self.x0 = None
            self._slope = 2.0 / (1.0 + (2 * s) ** 2 / self._w_plus)
        else:
            self.x0 = period_x0(params)
            self._build_checkpoints()

    def _g_integrand(self, x):
        v = profile_v(self.params, x)
        return 2.0 / (1.0 + v * v / self._w_plus)

    def _build_checkpoints(self):
        n = self.n_checkpoints
        self._h = self.x0 / n
        cps = np.zeros(n + 1, dtype=complex)
        for i in range(n):
            a = i * self._h
            cps[i + 1] = cps[i] + integrate(self._g_integrand, a, a + self._h, 1e-14).value
        self._cps = cps

    def g_plus(self, x):
        x = np.asarray(x, dtype=float)
        if self.params.flat:
            return self._slope * x
        periods = np.floor(x / self.x0)
        r = x - periods * self.x0
        idx = np.minimum((r / self._h).astype(int), self.n_checkpoints - 1)
        a = idx * self._h
        half = 0.5 * (r - a)
        mid = a + half
        nodes = mid[..., None] + half[..., None] * _NODES
        fx = self._g_integrand(nodes)
        panel = half * (fx @ _KRONROD_W)
        return periods * self._cps[-1] + self._cps[idx] + panel

    def state(self, x: float, y: float) -> ImmersionState:
        p = self.params
        v = float(profile_v(p, x))
        vp = float(profile_v_prime(p, x))
        st = p.s * p.t
        C = 4 * st * self.e2 + v * v
        D = 4 * st + v * v * self.e2
        M = 2 * st * vp * (1 - self.e2 * self.e2)
        gp = complex(self.g_plus(x))
        gm = gp.conjugate()
        z = complex(x, y)
        st_ = ImmersionState(
            self.A, self.B, C, D, M,
            np.cosh(0.5 * (z - gp)), np.cosh(0.5 * (z - gm)),
            np.sinh(0.5 * (z - gp)), np.sinh(0.5 * (z - gm)),
            gp, gm,
        )
        st_.branch_phase_log = [np.angle(self.eg * abs(D)), np.angle(C)]
        return st_

    def point(self, x, y):
        """Points of the surface in R^4; x, y broadcast as arrays."""
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        p = self.params
        st = p.s * p.t
        v = profile_v(p, x)
        vp = profile_v_prime(p, x)
        C = 4 * st * self.e2 + v * v
        D = 4 * st + v * v * self.e2
        M = 2 * st * vp * (1 - self.e2 * self.e2)
        gp = self.g_plus(x)
        gm = np.conj(gp)
        z = x + 1j * y
        cp, sp = np.cosh(0.5 * (z - gp)), np.sinh(0.5 * (z - gp))
        cm, sm = np.cosh(0.5 * (z - gm)), np.sinh(0.5 * (z - gm))
        A, B, eg = self.A, self.B, self.eg
        sqrt_cd = eg * np.abs(D)
        sqrt_ab = eg * abs(A)
        sqrt_ba = eg * A.conjugate() / abs(A)
        unit_c = C / np.abs(C)
        X = 2 * eg * B.conjugate() * (
            cm * sp * M / (v * A * sqrt_cd)
            + cm * cp * sqrt_ba * np.conj(unit_c)
            - sm * sp * sqrt_ba * unit_c
        )
        Y = -cm * cp * M / (v * sqrt_ab * sqrt_cd) - cm * sp * np.conj(unit_c) + sm * cp * unit_c
        return np.stack([X.real, Y.imag, Y.real, X.imag], axis=-1)

    def tangents(self, x: float, y: float, h: float = 1e-4):
        fx = (self.point(x + h, y) - self.point(x - h, y)) / (2 * h)
        fy = (self.point(x, y + h) - self.point(x, y - h)) / (2 * h)
        return fx, fy

    def sample(self, x: float, y: float, h: float = 1e-4) -> ImmersionSample:
        pt = self.point(x, y)
        fx, fy = self.tangents(x, y, h)
        conf = max(abs(fx @ fy), abs(fx @ fx - fy @ fy))
        return ImmersionSample(pt, float(x), float(y), abs(float(np.linalg.norm(pt)) - 1.0), float(conf))

    def curvatures(self, x: float, y: float, h: float = 1e-3):
        """Mean and Gauss curvature from finite-difference fundamental forms.

        Uses fourth-order central differences; the normal is taken in the
        tangent space of S^3 at the point. Returns (H, K) with H >= 0 sign
        chosen by the normal orientation that makes it non-negative.
        """
        P = self.point

        def d1(fn):
            return (-fn(2 * h) + 8 * fn(h) - 8 * fn(-h) + fn(-2 * h)) / (12 * h)

        def d2(fn):
            return (-fn(2 * h) + 16 * fn(h) - 30 * fn(0.0) + 16 * fn(-h) - fn(-2 * h)) / (12 * h * h)

        p0 = P(x, y)
        sx = d1(lambda d: P(x + d, y))
        sy = d1(lambda d: P(x, y + d))
        sxx = d2(lambda d: P(x + d, y))
        syy = d2(lambda d: P(x, y + d))
        sxy = d1(lambda d: d1(lambda e: P(x + d, y + e)))
        frame = np.vstack([p0, sx, sy])
        normal = np.linalg.svd(frame)[2][-1]
        E, F, G = sx @ sx, sx @ sy, sy @ sy
        e, f, g = sxx @ normal, sxy @ normal, syy @ normal
        det1 = E * G - F * F
        H = (e * G - 2 * f * F + g * E) / (2 * det1)
        K = 1.0 + (e * g - f * f) / det1
        return abs(H), K


def immerse(params: SurfaceParams, x: float, y: float) -> ImmersionSample:
    return Immersion(params).sample(x, y)


# ---------------------------------------------------------------------------
# Profile curve

@dataclass
class ProfileCurve:
    x: np.ndarray
    points: np.ndarray  # projected 2D coordinates inside the unit disk
    axis_distance: np.ndarray
    bulge_x: np.ndarray
    neck_x: np.ndarray
    bulges: np.ndarray
    necks: np.ndarray
    skipped: int = 0


def stereographic_disk(points4: np.ndarray) -> np.ndarray:
    """Project the profile slice {x3 = 0, x4 >= 0} onto the unit disk.

    Projection from (0, 0, 0, -1); the rotation axis {x3 = x4 = 0} maps to
    the unit circle and the point farthest from the axis to the origin.
    """
    p = np.asarray(points4)
    x4 = np.hypot(p[..., 2], p[..., 3])
    denom = 1.0 + x4
    return np.stack([p[..., 0] / denom, p[..., 1] / denom], axis=-1)


def axis_distance(points4: np.ndarray) -> np.ndarray:
    p = np.asarray(points4)
    return np.arcsin(np.clip(np.hypot(p[..., 2], p[..., 3]), 0.0, 1.0))


def profile_curve(params: SurfaceParams, closure: ClosureData, n_samples: int = 2000) -> ProfileCurve:
    """Sample S(x, 0) over one closed profile and project to the unit disk."""
    imm = Immersion(params)
    xs = np.linspace(0.0, closure.x1, n_samples + 1)
    pts = imm.point(xs, np.zeros_like(xs))
    ok = np.hypot(pts[:, 2], pts[:, 3]) > -1.0 + 1e-12
    proj = stereographic_disk(pts[ok])
    dist = axis_distance(pts[ok])
    if params.flat:
        bx = nx = np.array([])
    else:
        bx = closure.x0 * np.arange(closure.k)
        nx = closure.x0 * (np.arange(closure.k) + 0.5)
    return ProfileCurve(
        xs[ok], proj, dist, bx, nx,
        stereographic_disk(imm.point(bx, np.zeros_like(bx))) if len(bx) else np.zeros((0, 2)),
        stereographic_disk(imm.point(nx, np.zeros_like(nx))) if len(nx) else np.zeros((0, 2)),
        skipped=int((~ok).sum()),
    )


def count_local_maxima(values: np.ndarray) -> int:
    """Strict local maxima of a periodic sample sequence."""
    v = np.asarray(values)
    prev, nxt = np.roll(v, 1), np.roll(v, -1)
    return int(np.sum((v > prev) & (v >= nxt)))
