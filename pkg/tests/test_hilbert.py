import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import roots_laguerre

from photonbasis import (
    ScaleConfig,
    SpectralChannel,
    basis_channel,
    energy,
    enumerate_basis,
    gauss_laguerre_rule,
    gram_matrix,
    inner_product,
    laguerre_energy_oracle,
    laguerre_overlap_oracle,
    photon_number,
)
from photonbasis.exceptions import DomainError, GridMismatchError
from photonbasis.hilbert import laguerre_moment_quadrature, radial_gram


# quadrature rule

@pytest.mark.parametrize("order", [2, 3, 16, 200, 512])
def test_rule_structure(order):
    rule = gauss_laguerre_rule(order)
    assert rule.nodes.size == rule.weights.size == order
    assert np.all(rule.nodes > 0)
    assert np.all(np.diff(rule.nodes) > 0)
    assert np.all(rule.weights > 0)
    assert rule.moment(0) == pytest.approx(1.0, abs=1e-14)


def test_rule_examples(small_rule, rule):
    assert rule.moment(3) == pytest.approx(6.0, rel=1e-12)
    # order 16 is exact through degree 31
    for q in range(32):
        assert small_rule.moment(q) == pytest.approx(math.factorial(q), rel=1e-12), q


def test_rule_moments_order_200(rule):
    for q in (0, 1, 5, 20, 60, 120):
        assert rule.moment(q) == pytest.approx(math.factorial(q), rel=1e-12), q


def test_rule_against_scipy():
    x, w = roots_laguerre(60)
    rule = gauss_laguerre_rule(60)
    assert np.allclose(rule.x_nodes, x, rtol=1e-13)
    nonzero = w > 1e-250
    assert np.allclose(np.exp(rule.x_log_weights[nonzero]), w[nonzero], rtol=1e-10)


def test_rule_folding_and_scale():
    base = gauss_laguerre_rule(40, 1.0)
    scaled = gauss_laguerre_rule(40, 2.5)
    assert np.allclose(scaled.nodes, 2.5 * base.nodes, rtol=1e-15)
    assert np.allclose(scaled.weights, 2.5**2 * base.weights, rtol=1e-15)
    # int dk k exp(-2k/k0) = k0^2/4
    assert scaled.integrate(np.exp(-2 * scaled.nodes / 2.5)) == pytest.approx(2.5**2 / 4, rel=1e-13)


def test_rule_is_deterministic():
    a = gauss_laguerre_rule(77)
    b = gauss_laguerre_rule(77)
    assert np.array_equal(a.nodes, b.nodes) and np.array_equal(a.weights, b.weights)


@pytest.mark.parametrize("order", [1, 513, 2.5])
def test_rule_order_range(order):
    with pytest.raises(DomainError):
        gauss_laguerre_rule(order)


def test_rule_bad_k0():
    with pytest.raises(DomainError):
        gauss_laguerre_rule(10, 0.0)


# inner products, photon number, energy

def test_inner_product_examples(rule):
    a = basis_channel((3, 1, 0, 1), rule)
    assert inner_product(a, a, rule) == pytest.approx(1.0, abs=1e-10)
    b = basis_channel((2, 1, 0, 1), rule)
    c = basis_channel((4, 1, 0, 1), rule)
    assert abs(inner_product(b, c, rule)) < 1e-10
    d = basis_channel((3, 1, 1, 1), rule)
    assert inner_product(a, d, rule) == 0
    e = basis_channel((3, 1, 0, -1), rule)
    assert inner_product(a, e, rule) == 0


def test_conjugate_symmetry(rule, rng):
    f = basis_channel((3, 1, 0, 1), rule, coefficient=1 + 2j)
    g = [basis_channel((3, 1, 0, 1), rule, 0.5 - 1j), basis_channel((5, 1, 0, 1), rule, 3j)]
    assert inner_product(f, g, rule) == pytest.approx(np.conj(inner_product(g, f, rule)), abs=1e-14)
    assert inner_product(f, g, rule) == pytest.approx(np.conj(1 + 2j) * (0.5 - 1j), abs=1e-12)


def test_photon_number_examples(rule):
    assert photon_number(basis_channel((4, 2, 1, -1), rule), rule) == pytest.approx(1.0, abs=1e-12)
    assert photon_number(basis_channel((4, 2, 1, -1), rule, 2.0), rule) == pytest.approx(4.0, abs=1e-12)
    pair = [basis_channel((4, 2, 1, -1), rule), basis_channel((4, 3, 1, -1), rule)]
    assert photon_number(pair, rule) == pytest.approx(2.0, abs=1e-12)
    # duplicate channels add
    same = [basis_channel((4, 2, 1, -1), rule), basis_channel((6, 2, 1, -1), rule)]
    assert photon_number(same, rule) == pytest.approx(2.0, abs=1e-12)


def test_energy_examples(rule):
    scale = ScaleConfig(k0=1.0)
    assert energy(basis_channel((2, 1, 0, 1), rule), rule, scale) / scale.energy_quantum == pytest.approx(2.0, rel=1e-10)
    assert energy(basis_channel((7, 3, -2, -1), rule), rule, scale) / scale.energy_quantum == pytest.approx(7.0, rel=1e-10)
    zero = SpectralChannel(1, 0, 1, rule.nodes, np.zeros(rule.order))
    assert energy(zero, rule, scale) == 0.0


def test_energy_in_joules_at_other_k0():
    scale = ScaleConfig(k0=3.0)
    rule = gauss_laguerre_rule(200, 3.0)
    e = energy(basis_channel((5, 2, 0, 1), rule, scale=scale), rule, scale)
    assert e == pytest.approx(5 * scale.hbar * scale.c0 * 3.0, rel=1e-10)


def test_energy_quantization_all(rule):
    scale = ScaleConfig()
    for n in range(2, 13):
        for j in range(1, n):
            ratio = energy(basis_channel((n, j, 0, 1), rule), rule, scale) / scale.energy_quantum
            assert abs(ratio - n) < 1e-10 * n


def test_grid_mismatch(rule):
    other = gauss_laguerre_rule(100)
    f = basis_channel((3, 1, 0, 1), other)
    with pytest.raises(GridMismatchError):
        inner_product(f, f, rule)
    with pytest.raises(GridMismatchError):
        basis_channel((3, 1, 0, 1), rule, scale=ScaleConfig(k0=2.0))


def test_channel_validation(rule):
    with pytest.raises(DomainError):
        SpectralChannel(0, 0, 1, rule.nodes, np.zeros(rule.order))
    with pytest.raises(DomainError):
        SpectralChannel(1, 0, 1, rule.nodes, np.zeros(3))


# analytic oracles

def test_oracle_examples():
    assert laguerre_overlap_oracle(3, 0, 1) == 0.0
    assert laguerre_overlap_oracle(3, 0, 0) == 6.0
    assert laguerre_overlap_oracle(5, 2, 2) == 2520.0
    assert laguerre_energy_oracle(3, 0) == 24.0
    # (n, j) = (2, 1): 3! * 4 = 24, times the squared norm 2/3 and the 1/4 from x = 2k
    assert laguerre_energy_oracle(3, 0) * (2 / 3) / 8 == pytest.approx(2.0)
    with pytest.raises(DomainError):
        laguerre_overlap_oracle(100, 80, 80)


def test_oracles_against_quadrature(rule):
    assert laguerre_moment_quadrature(5, 3, 3, rule, extra_power=1) == pytest.approx(laguerre_energy_oracle(5, 3), rel=1e-12)
    for alpha in range(16):
        for s in range(11):
            for sb in range(11):
                q = laguerre_moment_quadrature(alpha, s, sb, rule)
                exact = laguerre_overlap_oracle(alpha, s, sb)
                scale = laguerre_overlap_oracle(alpha, max(s, sb), max(s, sb))
                assert abs(q - exact) < 1e-12 * scale
            e = laguerre_moment_quadrature(alpha, s, s, rule, extra_power=1)
            assert e == pytest.approx(laguerre_energy_oracle(alpha, s), rel=1e-12)


# Gram matrix

def test_gram_identity(rule):
    idx = enumerate_basis(12)
    g = gram_matrix(idx, rule)
    assert g.shape == (len(idx), len(idx))
    assert np.max(np.abs(g - np.eye(len(idx)))) < 1e-10
    assert np.array_equal(g, g.T)


def test_radial_gram_is_identity(rule):
    for j in (1, 4, 9):
        g = radial_gram(j, 20, rule)
        assert np.max(np.abs(g - np.eye(g.shape[0]))) < 1e-10


def test_gram_cross_channel_entries_exactly_zero(rule):
    idx = enumerate_basis(4)
    g = gram_matrix(idx, rule)
    for a, ia in enumerate(idx):
        for b, ib in enumerate(idx):
            if ia.channel != ib.channel:
                assert g[a, b] == 0.0


def test_gram_matches_pairwise_inner_products(rule):
    idx = enumerate_basis(4, lambdas=(1,), m_filter=[0])
    g = gram_matrix(idx, rule)
    for a, ia in enumerate(idx):
        for b, ib in enumerate(idx):
            ip = inner_product(basis_channel(ia, rule), basis_channel(ib, rule), rule)
            assert g[a, b] == pytest.approx(ip.real, abs=1e-14)


# Cauchy-Schwarz on random channel sets

channel_labels = st.sampled_from([(1, 0, 1), (1, 1, -1), (2, -1, 1), (3, 2, 1)])
complex_coeffs = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)


@st.composite
def random_fields(draw):
    out = []
    for _ in range(draw(st.integers(1, 4))):
        j, m, lam = draw(channel_labels)
        n = draw(st.integers(j + 1, 10))
        out.append(((n, j, m, lam), draw(complex_coeffs)))
    return out


@settings(max_examples=40, deadline=None)
@given(random_fields(), random_fields())
def test_cauchy_schwarz(f_spec, g_spec):
    rule = gauss_laguerre_rule(200)
    f = [basis_channel(i, rule, c) for i, c in f_spec]
    g = [basis_channel(i, rule, c) for i, c in g_spec]
    lhs = abs(inner_product(f, g, rule)) ** 2
    rhs = photon_number(f, rule) * photon_number(g, rule)
    assert lhs <= rhs * (1 + 1e-12) + 1e-12
