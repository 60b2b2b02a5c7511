"""Tests for Sp(2,R) membership, embeddings, and the KAK decomposition."""

import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

from schur_harmonics import symplectic as sp


def test_special_elements_are_symplectic():
    cases = [
        sp.weyl_element(1.0, 0.3),
        sp.d_alpha(0.7),
        sp.d_alpha_prime(1.2),
        sp.su2_element(0.3, 0.4),
        sp.v_element(),
    ]
    for g in cases:
        check = sp.symplectic_check(g)
        assert check.in_g
        assert check.symplectic_defect <= 1e-12


def test_u_element_trivial_cases():
    assert_allclose(sp.su2_element(1.0, 0.0), np.eye(4), atol=1e-15)
    assert_allclose(sp.d_alpha(0.0), np.eye(4), atol=1e-15)
    with pytest.raises(ValueError):
        sp.su2_element(0.9, 0.9)


def test_v_squared_is_central_i():
    vv = sp.v_element() @ sp.v_element()
    assert_allclose(vv, sp.embed_u2(1j * np.eye(2)), atol=1e-14)


def test_embedding_is_homomorphism():
    rng = np.random.default_rng(0)
    for _ in range(10):
        u1 = sp.recover_u2(sp.haar_k(rng))
        u2 = sp.recover_u2(sp.haar_k(rng))
        assert (
            np.linalg.norm(sp.embed_u2(u1 @ u2) - sp.embed_u2(u1) @ sp.embed_u2(u2))
            <= 1e-12
        )


def test_embed_recover_roundtrip():
    rng = np.random.default_rng(1)
    k = sp.haar_k(rng)
    check = sp.symplectic_check(k)
    assert check.in_k
    assert np.linalg.norm(sp.embed_u2(check.u) - k) <= 1e-12


def test_symplectic_check_diagnostics():
    check = sp.symplectic_check(np.eye(4))
    assert check.in_g and check.in_k
    assert check.symplectic_defect == 0.0
    check = sp.symplectic_check(sp.weyl_element(1.0, 0.5))
    assert check.in_g and not check.in_k


def test_commutation_relations():
    rng = np.random.default_rng(2)
    d = sp.d_alpha(0.9)
    for theta in rng.uniform(0, 2 * np.pi, 5):
        k1 = sp.embed_u2(np.diag([1.0, np.exp(1j * theta)]))
        assert np.linalg.norm(d @ k1 - k1 @ d) <= 1e-12
    dp = sp.d_alpha_prime(1.4)
    for theta in rng.uniform(0, 2 * np.pi, 5):
        rot = sp.embed_u2(
            np.array(
                [[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]],
                dtype=complex,
            )
        )
        assert np.linalg.norm(dp @ rot - rot @ dp) <= 1e-12


def test_reciprocal_singular_values():
    rng = np.random.default_rng(3)
    for _ in range(20):
        g = sp.haar_k(rng) @ sp.weyl_element(*sorted(rng.uniform(0, 3, 2))[::-1]) @ sp.haar_k(rng)
        s = np.linalg.svd(g, compute_uv=False)
        assert abs(s[0] * s[3] - 1.0) <= 1e-9
        assert abs(s[1] * s[2] - 1.0) <= 1e-9


# ---------------------------------------------------------------------------
# KAK


def test_kak_of_chamber_element():
    res = sp.kak_decompose(sp.weyl_element(1.3, 0.4))
    assert_allclose(res.alpha, (1.3, 0.4), atol=1e-12)
    assert res.residual <= 1e-12


def test_kak_of_compact_element():
    rng = np.random.default_rng(4)
    res = sp.kak_decompose(sp.haar_k(rng))
    assert_allclose(res.alpha, (0.0, 0.0), atol=1e-9)


def test_kak_roundtrip_random_and_degenerate():
    rng = np.random.default_rng(5)
    cases = []
    for _ in range(100):
        a1 = rng.uniform(0, 3)
        cases.append((a1, rng.uniform(0, a1)))
    for _ in range(10):
        a2 = rng.uniform(0.3, 2.0)
        cases.append((a2 + rng.uniform(0, 1e-8), a2))
    for _ in range(10):
        cases.append((rng.uniform(0.3, 3.0), rng.uniform(0, 1e-8)))
    cases += [(0.0, 0.0), (1e-12, 0.0), (2.0, 2.0), (2.0, 0.0)]
    for a1, a2 in cases:
        g = sp.haar_k(rng) @ sp.weyl_element(a1, a2) @ sp.haar_k(rng)
        res = sp.kak_decompose(g)
        assert abs(res.alpha1 - a1) <= 1e-8
        assert abs(res.alpha2 - a2) <= 1e-8
        assert res.residual <= 1e-8
        for k, u in ((res.k1, res.u1), (res.k2, res.u2)):
            assert sp.symplectic_check(k).in_k
            assert np.linalg.norm(u.conj().T @ u - np.eye(2)) <= 1e-9
            assert np.linalg.norm(sp.embed_u2(u) - k) <= 1e-9


def test_kak_chamber_part_unique():
    rng = np.random.default_rng(6)
    a = (1.7, 0.6)
    for _ in range(100):
        g = sp.haar_k(rng) @ sp.weyl_element(*a) @ sp.haar_k(rng)
        res = sp.kak_decompose(g)
        assert_allclose(res.alpha, a, atol=1e-8)


def test_kak_rejects_non_symplectic():
    with pytest.raises(sp.SymplecticError):
        sp.kak_decompose(np.diag([2.0, 1.0, 1.0, 1.0]))


def test_kak_ordering_invariant():
    rng = np.random.default_rng(7)
    for _ in range(25):
        g = sp.haar_k(rng) @ sp.weyl_element(rng.uniform(0, 2), 0.0) @ sp.haar_k(rng)
        res = sp.kak_decompose(g)
        assert res.alpha1 >= res.alpha2 >= 0.0


def test_matrix_json_roundtrip():
    rng = np.random.default_rng(8)
    g = sp.haar_k(rng) @ sp.weyl_element(0.9, 0.2) @ sp.haar_k(rng)
    back = sp.matrix_from_json(sp.matrix_to_json(g))
    assert_allclose(back, g, atol=1e-15)
    res = sp.kak_decompose(g)
    payload = json.loads(sp.kak_to_json(res))
    assert set(payload) == {"alpha1", "alpha2", "residual", "k1", "k2"}
