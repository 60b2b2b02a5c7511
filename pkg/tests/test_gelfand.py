"""Tests for coefficient extraction, kernel operators, and averaging."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from schur_harmonics import gelfand as gf
from schur_harmonics import schatten as sc
from schur_harmonics.special_fn import legendre_all, spherical_u2


def ones(x):
    return np.ones(np.shape(x), dtype=complex)


# ---------------------------------------------------------------------------
# disc coefficients


def test_u2_constant_function():
    spec = gf.coefficients_u2(ones, 4)
    assert_allclose(spec.coeffs[(0, 0)], 1.0, atol=1e-10)
    rest = max(abs(c) for idx, c in spec.items() if idx != (0, 0))
    assert rest <= 1e-10


def test_u2_single_spherical_function():
    spec = gf.coefficients_u2(lambda z: spherical_u2(2, 1, z), 5)
    assert_allclose(spec.coeffs[(2, 1)], 0.25, atol=1e-10)
    rest = max(abs(c) for idx, c in spec.items() if idx != (2, 1))
    assert rest <= 1e-10
    # cross-check the normalization with an independent high-order rule
    z, w = gf.disc_quadrature(96, 193)
    h = spherical_u2(2, 1, z)
    assert_allclose(np.sum(w * h * np.conj(h)), 0.25, atol=1e-12)


def test_u2_coordinate_function():
    spec = gf.coefficients_u2(lambda z: np.asarray(z, dtype=complex), 3)
    assert_allclose(spec.coeffs[(1, 0)], 0.5, atol=1e-10)
    rest = max(abs(c) for idx, c in spec.items() if idx != (1, 0))
    assert rest <= 1e-10


def test_u2_orthogonality_validates_disc_density():
    L = 8
    z, w = gf.disc_quadrature(4 * L, 8 * L + 1)
    fam = gf._u2_family_on(z, L)
    idxs = sorted(fam)
    h = np.array([fam[i] for i in idxs])
    gram = (h * w) @ h.conj().T
    target = np.diag([1.0 / (l + m + 1) for l, m in idxs])
    assert np.abs(gram - target).max() <= 1e-8


def test_u2_under_resolution_error():
    with pytest.raises(gf.UnderResolvedError):
        gf.coefficients_u2(ones, 8, n_radial=4, n_angular=65)
    with pytest.raises(gf.UnderResolvedError):
        gf.coefficients_u2(ones, 8, n_radial=40, n_angular=9)


# ---------------------------------------------------------------------------
# interval coefficients


def test_su2_constant_function():
    spec = gf.coefficients_su2(ones, 5)
    assert_allclose(spec.coeffs[0], 1.0, atol=1e-12)
    assert max(abs(c) for n, c in spec.items() if n != 0) <= 1e-12


def test_su2_single_legendre():
    spec = gf.coefficients_su2(lambda r: legendre_all(3, r)[3].astype(complex), 6)
    assert_allclose(spec.coeffs[3], 1.0 / 7.0, atol=1e-12)
    assert max(abs(c) for n, c in spec.items() if n != 3) <= 1e-12


def test_su2_square_function():
    spec = gf.coefficients_su2(lambda r: np.asarray(r, dtype=complex) ** 2, 4)
    assert_allclose(spec.coeffs[0], 1.0 / 3.0, atol=1e-12)
    assert_allclose(spec.coeffs[2], 2.0 / 15.0, atol=1e-12)
    assert abs(spec.coeffs[1]) <= 1e-12 and abs(spec.coeffs[3]) <= 1e-12


def test_su2_orthogonality():
    t, wt = np.polynomial.legendre.leggauss(64)
    vals = legendre_all(30, t)
    gram = 0.5 * (vals * wt) @ vals.T
    target = np.diag([1.0 / (2 * n + 1) for n in range(31)])
    assert np.abs(gram - target).max() <= 1e-10


# ---------------------------------------------------------------------------
# weighted coefficient bound and synthesis


def test_lp_lower_bound_examples():
    spec = gf.coefficients_u2(ones, 3)
    assert_allclose(gf.lp_lower_bound(spec, 3.0), 1.0, atol=1e-9)
    single = gf.CoefficientSpectrum("u2", {(2, 1): 0.25}, 3)
    assert_allclose(gf.lp_lower_bound(single, 4.0), 4.0 ** -0.75, rtol=1e-14)
    other = gf.CoefficientSpectrum("u2", {(3, 1): 0.5 + 0.5j}, 4)
    assert_allclose(
        gf.lp_lower_bound(other, 2.5), abs(0.5 + 0.5j) * 5 ** (1 / 2.5), rtol=1e-14
    )


def test_lp_lower_bound_rejects_inf():
    spec = gf.CoefficientSpectrum("su2", {0: 1.0}, 0)
    with pytest.raises(ValueError):
        gf.lp_lower_bound(spec, np.inf)


def test_lp_lower_bound_monotone_in_modulus():
    small = gf.CoefficientSpectrum("su2", {1: 0.2, 3: 0.1}, 3)
    big = gf.CoefficientSpectrum("su2", {1: 0.3, 3: 0.4}, 3)
    assert gf.lp_lower_bound(small, 3.0) <= gf.lp_lower_bound(big, 3.0)


def test_synthesize_empty_and_constant():
    empty = gf.CoefficientSpectrum("su2", {}, 0)
    assert gf.synthesize(empty)(0.3) == 0.0
    const = gf.CoefficientSpectrum("su2", {0: 1.0}, 0)
    assert_allclose(gf.synthesize(const)(np.linspace(-1, 1, 5)), np.ones(5))


def test_roundtrip_u2():
    rng = np.random.default_rng(0)
    coeffs = {
        (l, m): complex(rng.standard_normal(), rng.standard_normal())
        for l in range(7)
        for m in range(7 - l)
    }
    spec = gf.CoefficientSpectrum("u2", coeffs, 6)
    back = gf.coefficients_u2(gf.synthesize(spec), 6)
    err = max(abs(back.coeffs[idx] - coeffs[idx]) for idx in coeffs)
    assert err <= 1e-9


def test_roundtrip_su2():
    rng = np.random.default_rng(1)
    coeffs = {n: complex(rng.standard_normal(), rng.standard_normal()) for n in range(7)}
    spec = gf.CoefficientSpectrum("su2", coeffs, 6)
    back = gf.coefficients_su2(gf.synthesize(spec), 6)
    err = max(abs(back.coeffs[n] - coeffs[n]) for n in coeffs)
    assert err <= 1e-9


# ---------------------------------------------------------------------------
# kernel operator


def test_kernel_constant_is_projection():
    for pair, order in (("u2", 4), ("su2", 6)):
        assert_allclose(
            gf.kernel_schatten_norm(ones, 3.0, order, pair), 1.0, atol=1e-10
        )


def test_kernel_u2_spectral_identity():
    phi = gf.synthesize(gf.CoefficientSpectrum("u2", {(1, 0): 0.5}, 1))
    val = gf.kernel_schatten_norm(phi, 2.0, 3, "u2")
    assert_allclose(val, 1.0 / math.sqrt(2.0), rtol=1e-10)


def test_kernel_su2_spectral_identity():
    phi = gf.synthesize(gf.CoefficientSpectrum("su2", {1: 1.0 / 3.0}, 1))
    val = gf.kernel_schatten_norm(phi, 3.0, 4, "su2")
    assert_allclose(val, 3.0 ** (-2.0 / 3.0), rtol=1e-10)


def test_kernel_parseval_and_doubling():
    rng = np.random.default_rng(2)
    coeffs = {n: complex(rng.standard_normal(), rng.standard_normal()) * 0.3 for n in range(4)}
    spec = gf.CoefficientSpectrum("su2", coeffs, 3)
    phi = gf.synthesize(spec)
    want = gf.lp_lower_bound(spec, 2.0)
    coarse = gf.kernel_schatten_norm(phi, 2.0, 5, "su2")
    fine = gf.kernel_schatten_norm(phi, 2.0, 10, "su2")
    assert_allclose(coarse, want, rtol=1e-9)
    assert abs(fine - coarse) <= 1e-9 * max(1.0, want)


def test_kernel_check_flag_quiet_when_resolved():
    phi = gf.synthesize(gf.CoefficientSpectrum("su2", {2: 0.4}, 2))
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("error")
        val = gf.kernel_schatten_norm(phi, 4.0, 6, "su2", check=True)
    assert_allclose(val, gf.lp_lower_bound(
        gf.CoefficientSpectrum("su2", {2: 0.4}, 2), 4.0), rtol=1e-9)


# ---------------------------------------------------------------------------
# Haar sampling and averaging


def test_haar_u2_moments():
    rng = np.random.default_rng(3)
    us = gf.haar_u2(rng, 6000)
    unitarity = np.abs(
        np.einsum("nba,nbc->nac", us.conj(), us) - np.eye(2)
    ).max()
    assert unitarity <= 1e-12
    u11 = us[:, 0, 0]
    assert abs(u11.mean()) <= 0.05
    assert abs((np.abs(u11) ** 2).mean() - 0.5) <= 0.02
    assert abs((np.abs(u11) ** 4).mean() - 1.0 / 3.0) <= 0.02


def test_k_average_fixed_point():
    pts = gf.haar_u2(np.random.default_rng(4), 4)

    def phi(m):  # U(1)-bi-invariant: depends on the corner entry only
        return m[..., 0, 0] ** 2

    res = gf.k_average(phi, pts, 16, seed=5, subgroup="u1")
    direct = np.einsum("iba,jbc->ijac", pts.conj(), pts)[..., 0, 0] ** 2
    assert np.abs(res.symbol.values - direct).max() <= 1e-12


def test_k_average_constant():
    pts = gf.haar_u2(np.random.default_rng(6), 3)
    res = gf.k_average(lambda m: np.ones(m.shape[:-2], dtype=complex), pts, 8, seed=7)
    assert np.abs(res.symbol.values - 1.0).max() == 0.0


def test_k_average_convexity_bound():
    pts = gf.haar_u2(np.random.default_rng(8), 4)

    def phi(m):
        return m[..., 0, 0] ** 2 + 0.4 * m[..., 1, 0] * np.conj(m[..., 0, 1])

    n_samples = 16
    res = gf.k_average(
        phi, pts, n_samples, seed=9, subgroup="u1",
        diag_p=4.0, diag_cfg=sc.SearchConfig(restarts=4, seed=1), diag_budget=12,
    )
    assert res.conjugates_probed == 12
    avg_norm = sc.ms_norm_lower(res.symbol, 4.0, sc.SearchConfig(seed=2)).value
    mc_tol = 1.0 / math.sqrt(n_samples)
    assert avg_norm <= res.max_conjugate_norm + 3.0 * mc_tol


def test_subgroup_samplers_land_in_subgroup():
    rng = np.random.default_rng(10)
    u1 = gf.subgroup_sampler("u1")(rng, 5)
    assert_allclose(u1[:, 0, 0], np.ones(5))
    assert_allclose(np.abs(u1[:, 1, 1]), np.ones(5))
    so2 = gf.subgroup_sampler("so2")(rng, 5)
    assert np.abs(so2.imag).max() == 0.0
    dets = so2[:, 0, 0] * so2[:, 1, 1] - so2[:, 0, 1] * so2[:, 1, 0]
    assert_allclose(dets.real, np.ones(5), rtol=1e-12)
    with pytest.raises(ValueError):
        gf.subgroup_sampler("sp4")


# ---------------------------------------------------------------------------
# serialization


def test_spectrum_json_roundtrip():
    rng = np.random.default_rng(11)
    coeffs = {
        (l, m): complex(rng.standard_normal(), rng.standard_normal())
        for l in range(3)
        for m in range(3 - l)
    }
    spec = gf.CoefficientSpectrum("u2", coeffs, 2)
    back = gf.spectrum_from_json(gf.spectrum_to_json(spec))
    assert back.pair == "u2" and back.truncation == 2
    for idx in coeffs:
        assert_allclose(back.coeffs[idx], coeffs[idx])


def test_spectrum_csv(tmp_path):
    spec = gf.CoefficientSpectrum("su2", {0: 1.0, 2: 0.5j}, 2)
    path = tmp_path / "spec.csv"
    gf.spectrum_to_csv(spec, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "pair,l,m_or_n,degree,abs_c,dim"
    assert len(lines) == 3
