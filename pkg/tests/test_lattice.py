import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ergodic_primes.errors import ParameterError, ResourceError
from ergodic_primes.lattice import (
    GammaSet,
    IntegerPolynomialMap,
    ball,
    boundary_layer_count,
    build_gamma,
    canonical_map,
    chebyshev_omega,
    check_region,
    cube,
    custom_region,
    ellipsoid,
    enumerate_weighted_points,
    gamma_size,
    lattice_breakpoints,
    make_config,
    region_contains,
    scale_matrix_apply,
    weighted_points,
)


def test_build_gamma_examples():
    assert build_gamma(1, 3).indices == ((1,), (2,), (3,))
    g = build_gamma(2, 2)
    assert g.indices == ((0, 1), (0, 2), (1, 0), (1, 1), (2, 0))
    assert build_gamma(2, 1).indices == ((0, 1), (1, 0))


def test_gamma_size_formula():
    for k in range(1, 5):
        for d in range(1, 5):
            assert len(build_gamma(k, d)) == math.comb(k + d, k) - 1 == gamma_size(k, d)


def test_gamma_validation():
    with pytest.raises(ParameterError):
        GammaSet(1, ((0,),))
    with pytest.raises(ParameterError):
        GammaSet(1, ((2,), (1,)))
    with pytest.raises(ResourceError):
        build_gamma(4, 8, max_size=100)
    assert GammaSet.from_indices(1, [(2,), (1,), (2,)]).indices == ((1,), (2,))


def test_canonical_map_examples():
    g = build_gamma(2, 2)
    assert canonical_map((0, 0), g) == (0,) * 5
    assert canonical_map((1, 1), g) == (1,) * 5
    assert canonical_map((2, 3), g) == (3, 9, 2, 6, 4)
    with pytest.raises(OverflowError):
        canonical_map((2**40, 1), g)
    assert canonical_map((Fraction(1, 2), 1), g)[4] == Fraction(1, 4)


@given(st.lists(st.integers(-50, 50), min_size=2, max_size=2), st.lists(st.integers(-50, 50), min_size=2, max_size=2))
def test_canonical_map_multiplicative(x, y):
    g = build_gamma(2, 3)
    xy = tuple(a * b for a, b in zip(x, y))
    cx, cy, cxy = canonical_map(x, g), canonical_map(y, g), canonical_map(xy, g)
    assert all(a * b == c for a, b, c in zip(cx, cy, cxy))


def test_region_examples():
    assert region_contains(ball(1), 2, [1.9])
    assert not region_contains(ball(1), 2, [2.0])
    assert region_contains(cube(2), 3, [1.4, -1.4])
    assert not region_contains(cube(2), 3, [1.5, 0.0])


@given(st.floats(0.1, 10), st.floats(0.1, 10), st.lists(st.floats(-10, 10), min_size=2, max_size=2))
def test_region_monotone(t1, t2, x):
    lo, hi = sorted((t1, t2))
    for reg in (ball(2), cube(2), ellipsoid([1.0, 0.6])):
        if reg.contains(lo, np.array(x)):
            assert reg.contains(hi, np.array(x))


def test_builtin_regions_pass_checks():
    for reg in (ball(1), ball(2), ball(3), cube(1), cube(2), cube(3), ellipsoid([0.9, 0.5])):
        assert check_region(reg) == []


def test_custom_region_checks():
    diamond = custom_region(2, lambda y: np.abs(y).sum(axis=-1) < 1, 0.7)
    assert region_contains(diamond, 2, [0.9, 0.9])
    assert diamond.gauge(np.array([[0.5, 0.5]]))[0] == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ParameterError):
        custom_region(2, lambda y: np.abs(y).max(axis=-1) < 1, 0.5)  # leaves the unit ball
    with pytest.raises(ParameterError):
        custom_region(2, lambda y: (np.abs(y).sum(axis=-1) < 0.9) & ~((np.abs(y[..., 0]) < 0.05) & (y[..., 1] > 0.3)), 0.2)


def test_weighted_point_examples():
    cfg = make_config(1, 0, 1)
    pts = list(enumerate_weighted_points(cfg, ball(1), 2.5))
    assert [p.point for p in pts] == [(-2,), (-1,), (0,), (1,), (2,)]
    assert all(p.weight == 1 for p in pts)
    cfgp = make_config(1, 1, 1)
    pts = list(enumerate_weighted_points(cfgp, ball(1), 4))
    assert sorted(p.point for p in pts) == [(-3,), (-2,), (2,), (3,)]
    for p in pts:
        assert p.weight == pytest.approx(math.log(abs(p.point[0])))
    assert list(enumerate_weighted_points(cfgp, ball(1), 1)) == []


def test_chebyshev_omega_examples():
    assert chebyshev_omega(3.5, make_config(1, 0, 1), ball(1)) == 7
    assert chebyshev_omega(1, make_config(1, 1, 1), ball(1)) == 0
    assert chebyshev_omega(10, make_config(1, 1, 1), ball(1)) == pytest.approx(2 * math.log(210), abs=1e-12)


def test_chebyshev_omega_monotone():
    for cfg, reg in ((make_config(2, 1, 1), ball(2)), (make_config(2, 0, 1), cube(2)), (make_config(2, 2, 1), ball(2))):
        vals = [chebyshev_omega(t, cfg, reg) for t in np.linspace(0.5, 30, 60)]
        assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_mixed_enumeration_weights():
    cfg = make_config(2, 1, 1)
    pts, w = weighted_points(cfg, ball(2), 12)
    assert np.all(np.sqrt((pts.astype(float) ** 2).sum(axis=1)) < 12)
    from ergodic_primes.primes import is_prime

    assert all(is_prime(abs(int(p))) for p in pts[:, 1])
    assert np.allclose(w, np.log(np.abs(pts[:, 1])))


def test_scale_matrix():
    g = build_gamma(1, 2)
    assert scale_matrix_apply(1, (3, 4), g) == (3, 4)
    assert scale_matrix_apply(2, (1, 1), g) == (2, 4)
    g2 = build_gamma(2, 2)
    assert scale_matrix_apply(10, (1,) * 5, g2) == (10, 100, 10, 100, 100)


@given(st.fractions(1, 20), st.fractions(1, 20), st.lists(st.fractions(-5, 5), min_size=5, max_size=5))
def test_scale_matrix_group_law(s, t, xi):
    g = build_gamma(2, 2)
    assert scale_matrix_apply(s, scale_matrix_apply(t, tuple(xi), g), g) == scale_matrix_apply(s * t, tuple(xi), g)


def test_polynomial_map():
    P = IntegerPolynomialMap.from_dicts(1, [{(1,): 1, (2,): 3}])
    assert P(np.array([[2]])).tolist() == [[14]]
    with pytest.raises(ParameterError):
        IntegerPolynomialMap.from_dicts(1, [{(0,): 1}])
    with pytest.raises(OverflowError):
        P(np.array([[2**40]]))


def test_boundary_layer_fit():
    ratios = []
    for reg in (ball(2), cube(2)):
        for N in (20, 50, 100, 200):
            for q in (1, 5, 10):
                ratios.append(boundary_layer_count(reg, N, q) / (q * N))
    C = max(ratios)
    assert C < 30  # a fitted constant, bounded uniformly over the sweep
    assert boundary_layer_count(ball(1), 50, 2) == 10  # |n| in [48, 52]


def test_lattice_breakpoints():
    cfg = make_config(1, 0, 1)
    assert lattice_breakpoints(cfg, ball(1), 1, 4).tolist() == [1.0, 2.0, 3.0]
