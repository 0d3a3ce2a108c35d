"""Closed-form index results and lower bounds for CMC tori of revolution."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .surface import SurfaceClass

INTEGER_TOL = 1e-9


@dataclass(frozen=True)
class FlatResult:
    H: float
    alpha: float
    b: int
    index: int
    nullity: int
    near_nullity_six: bool = False


def flat_alpha(H: float) -> float:
    return (math.sqrt(1 + H * H) - H) ** 2


def _strict_floor(value: float) -> int:
    """Greatest integer strictly less than ``value``."""
    n = math.floor(value)
    return n - 1 if n == value else n


def flat_index(H: float) -> FlatResult:
    """Index 3 + 2b and nullity (4 or 6) of the flat CMC torus with mean curvature H."""
    if H < 0:
        raise ValueError("H must be non-negative")
    alpha = flat_alpha(H)
    # sqrt(1 + e^{2 asinh H}) equals sqrt((1 + alpha)/alpha) since e^{-asinh H} = sqrt(alpha)
    bound = math.sqrt(1 + math.exp(2 * math.asinh(H)))
    b = _strict_floor(bound)
    root = math.sqrt((1 + alpha) / alpha)
    is_int = abs(root - round(root)) <= INTEGER_TOL
    near = not is_int and abs(root - round(root)) <= 1e-6
    # at an exact integer the lattice point on the ellipse is null, not negative
    if is_int:
        b = round(root) - 1
    return FlatResult(H, alpha, b, 3 + 2 * b, 6 if is_int else 4, near)


def flat_lattice_index(H: float, eps: float = 1e-12) -> tuple[int, int]:
    """Index and nullity by enumerating m^2 + alpha n^2 - 1 - alpha over the lattice."""
    alpha = flat_alpha(H)
    n_max = math.ceil(math.sqrt((1 + alpha) / alpha)) + 2
    index = nullity = 0
    for m in range(n_max + 1):
        for n in range(n_max + 1):
            lam = m * m + alpha * n * n - 1 - alpha
            mult = 4 if m * n > 0 else (2 if m + n > 0 else 1)
            if lam < -eps:
                index += mult
            elif abs(lam) <= eps:
                nullity += mult
    return index, nullity


def sphere_constants() -> tuple[int, int]:
    """Round spheres: index 1, nullity 3 (first Laplace eigenvalues 0 and 2(1+H^2))."""
    return 1, 3


@dataclass(frozen=True)
class BoundReport:
    surface_class: str
    k: int
    w: int
    base_bound: int
    improved_bound: int | None
    nullity_bound: int
    numeric_index: int | None = None
    numeric_nullity: int | None = None
    satisfied: bool | None = None

    @property
    def applicable_bound(self) -> int:
        return max(self.base_bound, self.improved_bound or 0)


def torus_bounds(surface_class, k: int, w: int) -> BoundReport:
    """Lower bounds for the index of a non-flat torus with k bulges and wrapping w."""
    cls = SurfaceClass(surface_class)
    if cls in (SurfaceClass.FLAT, SurfaceClass.SPHERE):
        raise ValueError(f"{cls.value} surfaces have exact index formulas; use flat_index/sphere_constants")
    if k < 1 or w < 1:
        raise ValueError("k and w must be positive")
    base = max(5, 2 * k + 1)
    improved = None
    if cls is SurfaceClass.NODOIDAL and k >= 2:
        improved = max(11, 2 * k + 5)
    elif cls is SurfaceClass.UNDULOIDAL and w >= 2:
        improved = max(6 * w - 1, 2 * k + 4 * w - 3)
    return BoundReport(cls.value, k, w, base, improved, 5)


def verify_surface(surface_class, k: int, w: int, index: int, nullity: int) -> BoundReport:
    """Compare a numerically assembled index and nullity with every applicable bound."""
    rep = torus_bounds(surface_class, k, w)
    ok = index >= rep.applicable_bound and nullity >= rep.nullity_bound
    return BoundReport(rep.surface_class, k, w, rep.base_bound, rep.improved_bound,
                       rep.nullity_bound, index, nullity, ok)
