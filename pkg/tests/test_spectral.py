import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sticky_spme.grid import make_grid
from sticky_spme.spectral import (ContinuousSine, apply_frac_laplacian,
                                  apply_laplacian, build_basis,
                                  continuous_norm, discrete_norm)


def test_eigenvalue_oracles():
    # n=1, h=1/2: lam_1 = 16 sin^2(pi/4) = 8; n=2, h=1/3: 9 and 27
    np.testing.assert_allclose(build_basis(make_grid(1)).eigenvalues, [8.0])
    np.testing.assert_allclose(build_basis(make_grid(2)).eigenvalues,
                               [9.0, 27.0], atol=1e-12)


def test_laplacian_matches_dense():
    g = make_grid(6)
    L = (np.diag(np.full(6, 2.0)) - np.diag(np.ones(5), 1)
         - np.diag(np.ones(5), -1)) / g.h**2
    rng = np.random.default_rng(0)
    v = rng.standard_normal(6)
    np.testing.assert_allclose(apply_laplacian(v, g), L @ v, rtol=1e-13)


def test_eigenpairs_diagonalize():
    g = make_grid(17)
    basis = build_basis(g)
    M = basis.modes()
    for k in (1, 5, 17):
        mk = M[:, k - 1]
        np.testing.assert_allclose(apply_laplacian(mk, g),
                                   basis.eigenvalues[k - 1] * mk,
                                   rtol=1e-10, atol=1e-8)


def test_transform_is_involution_and_matches_dense():
    g = make_grid(12)
    basis = build_basis(g)
    rng = np.random.default_rng(1)
    v = rng.standard_normal(12)
    np.testing.assert_allclose(basis.transform(v), basis.modes() @ v, rtol=1e-12)
    np.testing.assert_allclose(basis.transform(basis.transform(v)), v, rtol=1e-12)


def test_frac_laplacian_powers_compose():
    g = make_grid(10)
    basis = build_basis(g)
    rng = np.random.default_rng(2)
    v = rng.standard_normal(10)
    half_twice = apply_frac_laplacian(apply_frac_laplacian(v, basis, 0.5),
                                      basis, 0.5)
    np.testing.assert_allclose(half_twice, apply_laplacian(v, g), rtol=1e-10)
    inv = apply_frac_laplacian(apply_laplacian(v, g), basis, -1.0)
    np.testing.assert_allclose(inv, v, rtol=1e-10)
    np.testing.assert_allclose(apply_frac_laplacian(v, basis, 0.0), v)
    with pytest.raises(ValueError):
        apply_frac_laplacian(v, basis, 1.5)


def test_discrete_norm_theta_zero_is_l2():
    g = make_grid(8)
    basis = build_basis(g)
    v = np.arange(1.0, 9.0)
    assert discrete_norm(v, basis, 0.0) == pytest.approx(
        np.sqrt(g.h * np.sum(v**2)), rel=1e-13)


def test_discrete_norm_single_mode():
    g = make_grid(15)
    basis = build_basis(g)
    v = basis.modes()[:, 3]
    # h * lam^theta for a unit eigenvector
    for theta in (-1.0, -0.5, 0.0, 0.5, 1.0):
        expect = np.sqrt(g.h * basis.eigenvalues[3] ** theta)
        assert discrete_norm(v, basis, theta) == pytest.approx(expect, rel=1e-12)


def test_discrete_norm_batched():
    g = make_grid(9)
    basis = build_basis(g)
    rng = np.random.default_rng(4)
    V = rng.standard_normal((5, 9))
    batch = discrete_norm(V, basis, 0.5)
    single = [discrete_norm(v, basis, 0.5) for v in V]
    np.testing.assert_allclose(batch, single, rtol=1e-13)


def test_continuous_norm_single_mode():
    f = ContinuousSine(np.array([0.0, 1.0]))   # g_2, lam = (2 pi)^2
    lam = (2.0 * np.pi) ** 2
    assert continuous_norm(f, 1.0) == pytest.approx(np.sqrt(lam))
    assert continuous_norm(f, -0.5) == pytest.approx(lam**-0.25)
    assert continuous_norm(f, 1.0, homogeneous=False) == pytest.approx(
        np.sqrt(1.0 + lam))


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=1, max_value=64), st.integers(0, 2**31))
def test_poincare_monotone_property(n, seed):
    basis = build_basis(make_grid(n))
    v = np.random.default_rng(seed).standard_normal(n)
    norms = [discrete_norm(v, basis, t) for t in np.linspace(-1.0, 1.0, 9)]
    assert all(a <= b for a, b in zip(norms, norms[1:]))
