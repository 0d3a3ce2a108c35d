import math

import numpy as np
import pytest

from cmctori.bounds import (
    flat_alpha,
    flat_index,
    flat_lattice_index,
    sphere_constants,
    torus_bounds,
    verify_surface,
)


def test_clifford():
    res = flat_index(0.0)
    assert (res.alpha, res.b, res.index, res.nullity) == (1.0, 1, 5, 4)


def test_alpha_is_tan_squared_gamma():
    for gamma in (0.2, 0.5, 0.7):
        H = 1 / math.tan(2 * gamma)
        assert flat_alpha(H) == pytest.approx(math.tan(gamma) ** 2, rel=1e-12)


def test_nullity_six_at_integer_root():
    # alpha = 1/3 gives sqrt((1 + alpha)/alpha) = 2
    H = (1 / math.sqrt(3) - math.sqrt(3)) / -2  # (1 - alpha) / (2 sqrt(alpha))
    res = flat_index(H)
    assert res.alpha == pytest.approx(1 / 3, rel=1e-12)
    assert res.nullity == 6
    assert res.index == 5
    assert flat_lattice_index(H, eps=1e-9) == (5, 6)


@pytest.mark.parametrize("H", np.linspace(0, 10, 200))
def test_formula_matches_lattice(H):
    res = flat_index(H)
    assert (res.index, res.nullity) == flat_lattice_index(H)


def test_negative_H_rejected():
    with pytest.raises(ValueError):
        flat_index(-1.0)


def test_sphere():
    assert sphere_constants() == (1, 3)


@pytest.mark.parametrize(
    "cls, k, w, base, improved",
    [
        ("Unduloidal", 2, 1, 5, None),
        ("Unduloidal", 9, 4, 19, 31),
        ("Unduloidal", 5, 2, 11, 15),
        ("Nodoidal", 5, 1, 11, 15),
        ("Nodoidal", 11, 3, 23, 27),
        ("Nodoidal", 1, 1, 5, None),
    ],
)
def test_torus_bounds(cls, k, w, base, improved):
    rep = torus_bounds(cls, k, w)
    assert (rep.base_bound, rep.improved_bound, rep.nullity_bound) == (base, improved, 5)


@pytest.mark.parametrize("cls", ["Flat", "Sphere"])
def test_bounds_refuse_exact_classes(cls):
    with pytest.raises(ValueError):
        torus_bounds(cls, 2, 1)


def test_verify_surface_flags_violation():
    assert verify_surface("Nodoidal", 5, 1, 24, 5).satisfied
    assert not verify_surface("Nodoidal", 5, 1, 14, 5).satisfied
    assert not verify_surface("Unduloidal", 2, 1, 6, 4).satisfied
