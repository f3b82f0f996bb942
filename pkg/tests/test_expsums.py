import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate, special

from ergodic_primes.errors import EmptyAverageError, ParameterError
from ergodic_primes.expsums import (
    DiscreteMultiplier,
    ReducedFraction,
    approximation_error,
    continuous_multiplier,
    discrete_multiplier,
    gauss_sum,
    gauss_sums_all,
    in_major_box,
    max_gauss_modulus,
    property2_ratio,
    weyl_sum,
)
from ergodic_primes.lattice import GammaSet, ball, build_gamma, cube, make_config, weighted_points
from ergodic_primes.operators import CZKernel, riesz_kernel
from ergodic_primes.primes import euler_totient, mobius, units_mod

INV_X = CZKernel(lambda x: 1.0 / x[..., 0], 1, 1.0, 2.0, "1/x")
QUAD = GammaSet.from_indices(1, [(2,)])


def direct_gauss_quadratic(a, q):
    return sum(cmath.exp(2j * math.pi * a * x * x / q) for x in range(1, q + 1)) / q


def test_reduced_fraction_validation():
    with pytest.raises(ParameterError):
        ReducedFraction((2,), 4)
    with pytest.raises(ParameterError):
        ReducedFraction((0,), 3)
    assert ReducedFraction.make((0, -1), 5).a == (5, 4)
    assert ReducedFraction((2, 3), 4).point.tolist() == [-0.5, -0.25]


def test_weyl_examples():
    cfg1 = make_config(1, 0, 1)
    assert weyl_sum([0.5], cfg1, ball(1), 4.5) == pytest.approx(1.0, abs=1e-12)
    cfgq = make_config(1, 0, gamma=QUAD)
    assert weyl_sum([Fraction(1, 4)], cfgq, ball(1), 4.5) == pytest.approx(5 + 4j, abs=1e-12)
    assert weyl_sum(ReducedFraction((1,), 4), cfgq, ball(1), 4.5) == pytest.approx(5 + 4j, abs=1e-12)


def test_weyl_zero_frequency_counts():
    cfg = make_config(1, 1, 1)
    pts, w = weighted_points(cfg, ball(1), 50)
    assert weyl_sum([0.0], cfg, ball(1), 50) == len(pts)
    assert weyl_sum([0.0], cfg, ball(1), 50, phi="log").real == pytest.approx(w.sum())


def test_weyl_inner_region():
    cfg = make_config(1, 0, 1)
    assert weyl_sum([0.0], cfg, ball(1), 10.5, inner=ball(1)) == 0
    half = ball(1)
    # Omega_t minus the cube (-t/2, t/2): |n| in [t/2, t)
    assert weyl_sum([0.0], cfg, half, 10.5, inner=cube(1)).real == 10


@given(st.integers(1, 60), st.integers(-5, 5), st.integers(1, 40))
def test_weyl_rational_phase_invariance(q, shift, a):
    cfg = make_config(1, 0, gamma=build_gamma(1, 3))
    xi = [Fraction(a, q), Fraction(1, q), Fraction(2, q)]
    moved = [xi[0] + shift, xi[1], xi[2] - shift]
    assert weyl_sum(xi, cfg, ball(1), 30.5) == pytest.approx(weyl_sum(moved, cfg, ball(1), 30.5), abs=1e-9)


def test_exact_phase_with_large_monomials():
    cfg = make_config(1, 0, gamma=GammaSet.from_indices(1, [(3,)]))
    t = 100_000.5
    fr = ReducedFraction((1,), 7)
    exact = weyl_sum(fr, cfg, ball(1), t)
    # oracle: n^3 mod 7 histogram
    n = np.arange(-100_000, 100_001)
    ref = np.sum(np.exp(2j * np.pi * ((n**3) % 7) / 7))
    assert exact == pytest.approx(ref, abs=1e-6)
    # the double nearest 1/7 is not 1/7; n^3 of size 1e15 exposes the gap
    num, den = (1 / 7).as_integer_ratio()
    frac = np.array([(int(m) ** 3 * num % den) / den for m in n])
    ref_float = np.sum(np.exp(2j * np.pi * frac))
    got = weyl_sum([1 / 7], cfg, ball(1), t)
    assert abs(ref_float - ref) > 1.0
    assert got == pytest.approx(ref_float, abs=1e-3 * abs(ref_float))


def test_gauss_examples():
    cfg1 = make_config(1, 0, 1)
    assert gauss_sum(ReducedFraction((1,), 1), cfg1) == 1
    assert abs(gauss_sum(ReducedFraction((1,), 5), cfg1)) < 1e-15
    G = gauss_sum(ReducedFraction((1,), 3), make_config(1, 0, gamma=QUAD))
    assert G == pytest.approx(1j / math.sqrt(3), abs=1e-15)
    assert abs(gauss_sum(ReducedFraction((1,), 4), make_config(1, 1, 1))) < 1e-15


@given(st.integers(1, 150).filter(lambda q: q % 2 == 1))
def test_quadratic_gauss_oracle(q):
    cfg = make_config(1, 0, gamma=QUAD)
    table = gauss_sums_all(q, cfg)
    for a in units_mod(q):
        assert table[a % q] == pytest.approx(direct_gauss_quadratic(a, q), abs=1e-12)
    assert max_gauss_modulus(q, cfg) == pytest.approx(q**-0.5, abs=1e-12)


@given(st.integers(1, 200))
def test_ramanujan_identity(q):
    cfg = make_config(1, 1, 1)
    for a in units_mod(q):
        assert abs(gauss_sum(ReducedFraction((a,), q), cfg)) == pytest.approx(abs(mobius(q)) / euler_totient(q), abs=1e-12)


@given(st.integers(1, 12), st.data())
def test_gauss_modulus_le_one(q, data):
    cfg = make_config(2, 1, 2)
    a = tuple(data.draw(st.lists(st.integers(1, q), min_size=5, max_size=5)))
    if math.gcd(math.gcd(*a), q) == 1:
        G = gauss_sum(ReducedFraction(a, q), cfg)
        assert abs(G) <= 1 + 1e-12
        assert G == pytest.approx(gauss_sums_all(q, cfg)[tuple(x % q for x in a)], abs=1e-12)


def test_discrete_multiplier_examples():
    cfg = make_config(1, 0, 1)
    assert discrete_multiplier([0.0], 2.5, cfg, ball(1)) == pytest.approx(1.0)
    assert discrete_multiplier([0.5], 2.5, cfg, ball(1)) == pytest.approx(0.2)
    xi = 0.137
    ref = sum(cmath.exp(2j * math.pi * n * xi) for n in range(-2, 3)) / 5
    assert discrete_multiplier([xi], 2.5, cfg, ball(1)) == pytest.approx(ref)
    with pytest.raises(EmptyAverageError):
        DiscreteMultiplier(1.0, make_config(1, 1, 1), ball(1))


@given(st.floats(-0.5, 0.5), st.floats(-0.5, 0.5), st.floats(2.01, 40.0))
def test_discrete_multiplier_bounds_and_symmetry(a, b, t):
    cfg = make_config(1, 1, 2)
    m = DiscreteMultiplier(t, cfg, ball(1))
    v = m([a, b])
    assert abs(v) <= 1 + 1e-12
    assert m([-a, -b]) == pytest.approx(v.conjugate(), abs=1e-12)


def test_discrete_multiplier_grid_matches_pointwise():
    cfg = make_config(1, 0, 2)
    m = DiscreteMultiplier(6.5, cfg, ball(1))
    grid = m.on_grid((16, 64))
    for j1, j2 in ((0, 0), (3, 7), (15, 63), (8, 32)):
        assert grid[j1, j2] == pytest.approx(m([j1 / 16, j2 / 64]), abs=1e-12)


def test_phi_closed_form_k1():
    for t in (1.0, 3.0, 17.0):
        for xi in (0.0, 0.01, 0.1, 0.37):
            z = 2 * math.pi * t * xi
            ref = 1.0 if z == 0 else math.sin(z) / z
            assert continuous_multiplier([xi], t, ball(1), build_gamma(1, 1)) == pytest.approx(ref, abs=1e-10)


def test_phi_bessel_k2():
    g = build_gamma(2, 1)
    for xi in ([0.1, 0.2], [0.5, -0.3], [0.0, 1.3]):
        r = 2 * math.pi * math.hypot(*xi)
        ref = 2 * special.j1(r) / r
        assert continuous_multiplier(xi, 1.0, ball(2), g) == pytest.approx(ref, abs=1e-10)


def test_phi_quadratic_against_quad():
    g = build_gamma(1, 2)
    for xi in ([0.3, 0.7], [-1.1, 2.5]):
        re = integrate.quad(lambda x: math.cos(2 * math.pi * (xi[0] * x + xi[1] * x * x)), -1, 1, epsabs=1e-13)[0]
        im = integrate.quad(lambda x: math.sin(2 * math.pi * (xi[0] * x + xi[1] * x * x)), -1, 1, epsabs=1e-13)[0]
        assert continuous_multiplier(xi, 1.0, ball(1), g) == pytest.approx(complex(re, im) / 2, abs=1e-10)


def test_phi_cube_k2_product():
    g = build_gamma(2, 1)
    xi = [0.4, 1.1]
    ref = np.sinc(xi[0]) * np.sinc(xi[1])  # cube of side 1
    assert continuous_multiplier(xi, 1.0, cube(2), g) == pytest.approx(ref, abs=1e-10)


def test_psi_sine_integral():
    g = build_gamma(1, 1)
    assert continuous_multiplier([0.0], 5.0, ball(1), g, "psi", INV_X) == 0
    for t, xi in ((1.0, 0.3), (4.0, 0.05), (9.0, -0.21)):
        ref = 2j * special.sici(2 * math.pi * xi * t)[0]
        assert continuous_multiplier([xi], t, ball(1), g, "psi", INV_X) == pytest.approx(ref, abs=1e-10)


def test_psi_riesz_k2_scaling():
    g = build_gamma(2, 1)
    K = riesz_kernel(2)
    a = continuous_multiplier([0.2, 0.1], 3.0, ball(2), g, "psi", K)
    b = continuous_multiplier([0.6, 0.3], 1.0, ball(2), g, "psi", K)
    assert a == pytest.approx(b, abs=1e-9)  # degree-0 homogeneity of the kernel


@given(st.floats(-0.5, 0.5), st.floats(-0.5, 0.5))
def test_phi_conjugate_symmetry(a, b):
    g = build_gamma(1, 2)
    v = continuous_multiplier([a, b], 2.0, ball(1), g)
    assert continuous_multiplier([-a, -b], 2.0, ball(1), g) == pytest.approx(v.conjugate(), abs=1e-10)


def test_approximation_examples():
    one = ReducedFraction((1,), 1)
    cfg = make_config(1, 0, 1)
    assert approximation_error(one, [0.0], 50.5, cfg, ball(1)) == pytest.approx(0.0, abs=1e-12)
    errs = [approximation_error(one, [0.1 / t], t, cfg, ball(1)) for t in (100, 1000, 10000)]
    assert 0 < errs[0] and errs[0] > errs[1] > errs[2]
    cfgp = make_config(1, 1, 1)
    errs = [approximation_error(one, [0.0], t, cfgp, ball(1), normalization="volume") for t in (100, 1000, 10000)]
    assert errs[0] > errs[1] > errs[2]


def test_approximation_major_box():
    fr = ReducedFraction((1,), 3)
    g = build_gamma(1, 1)
    assert in_major_box(fr, [1 / 3 + 0.001], 100, g, 1.0)
    assert not in_major_box(fr, [1 / 3 + 0.1], 100, g, 1.0)
    with pytest.raises(ParameterError):
        approximation_error(fr, [1 / 3 + 0.1], 100, make_config(1, 0, 1), ball(1), L=1.0)
    # near 1/3 the discrete multiplier is G(1/3) times the continuous one, up to O(q/t)
    err = approximation_error(fr, [1 / 3 + 0.002], 200.5, make_config(1, 0, 1), ball(1), L=1.0)
    assert err < 3 / 200


def test_approximation_cotlar_and_differences():
    fr = ReducedFraction((1,), 1)
    cfg = make_config(1, 0, 1)
    e1 = approximation_error(fr, [0.003], 100.5, cfg, ball(1), "cotlar", INV_X)
    e2 = approximation_error(fr, [0.003], 100.5, cfg, ball(1), "cotlar", INV_X, t_prev=50.5)
    assert e1 < 0.05 and e2 < 0.05


def test_property2_envelope_bounded():
    g = build_gamma(1, 2)
    ratios = [property2_ratio([x, 0.5 * x], n, 0.5, ball(1), g) for n in (4, 9, 16) for x in np.geomspace(1e-6, 0.4, 12)]
    assert max(ratios) < 50
