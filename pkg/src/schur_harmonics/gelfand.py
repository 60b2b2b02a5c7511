"""Coefficient extraction and kernel operators for the two compact pairs.

A bi-invariant function phi on U(2) (under the embedded U(1)) descends to a
function phi0 on the closed unit disc, and expands as
phi0 = sum c_{l,m} (l+m+1) h_{l,m} against the zonal family of
``special_fn``.  The coefficient is the plain inner product
c_{l,m} = <phi0, h_{l,m}> under the uniform area measure dA/pi on the disc,
which is the pushforward of the uniform measure on the unit sphere of C^2
under the first coordinate.  That density is not taken on faith: the
orthogonality relations <h, h'> = delta / (l+m+1) are part of the test
suite and validate it numerically.

For SU(2) under SO(2) the same structure reads phi0 = sum c_n (2n+1) P_n on
[-1, 1] with c_n = (1/2) integral of phi0 P_n.

The weighted coefficient sums (sum |c|^p dim)^(1/p) bound the Schatten
multiplier norm of the associated two-point kernel from below, and the
discretized kernel operator converges to the same value, which gives the
dual route checked by the tests.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import numpy as np

from .schatten import MultiplierSymbol, SearchConfig, ms_norm_lower, schatten_norm
from .special_fn import jacobi_all, legendre_all

__all__ = [
    "CoefficientSpectrum",
    "UnderResolvedError",
    "disc_quadrature",
    "coefficients_u2",
    "coefficients_su2",
    "lp_lower_bound",
    "synthesize",
    "kernel_schatten_norm",
    "haar_u2",
    "subgroup_sampler",
    "KAverageResult",
    "k_average",
    "spectrum_to_json",
    "spectrum_from_json",
    "spectrum_to_csv",
]


class UnderResolvedError(ValueError):
    """Quadrature order too low for the requested truncation."""


@dataclass
class CoefficientSpectrum:
    """Peter-Weyl coefficients of one pair up to a truncation degree.

    ``pair`` is "u2" (indices (l, m), dimension l+m+1) or "su2" (index n,
    dimension 2n+1).  Only indices within the truncation are stored.
    """

    pair: str
    coeffs: dict
    truncation: int

    def __post_init__(self):
        if self.pair not in ("u2", "su2"):
            raise ValueError("pair must be 'u2' or 'su2'")

    def dim(self, idx) -> int:
        if self.pair == "u2":
            return idx[0] + idx[1] + 1
        return 2 * idx + 1

    def items(self):
        return self.coeffs.items()


# ---------------------------------------------------------------------------
# quadrature grids


def disc_quadrature(n_radial: int, n_angular: int):
    """Nodes z and weights w with sum w f(z) ~ (1/pi) int_D f dA.

    Gauss-Legendre in |z|^2 tensored with a uniform angle grid; the rule is
    exact for integrands polynomial in (z, conj z) of degree <= n_radial in
    |z|^2 and angular frequency < n_angular.
    """
    t, wt = np.polynomial.legendre.leggauss(n_radial)
    u = (t + 1.0) / 2.0
    wu = wt / 2.0
    theta = 2.0 * np.pi * np.arange(n_angular) / n_angular
    z = np.sqrt(u)[:, None] * np.exp(1j * theta)[None, :]
    w = np.repeat(wu[:, None] / n_angular, n_angular, axis=1)
    return z.ravel(), w.ravel()


def _sphere3_nodes(order: int):
    """Probability quadrature on the unit sphere of C^2.

    Points (sqrt(u) e^{i t1}, sqrt(1-u) e^{i t2}) with u Gauss-Legendre on
    [0, 1] and both angles uniform; returns (n, 2) complex nodes and weights.
    """
    t, wt = np.polynomial.legendre.leggauss(order)
    u = (t + 1.0) / 2.0
    wu = wt / 2.0
    m = 2 * order + 1
    theta = 2.0 * np.pi * np.arange(m) / m
    e = np.exp(1j * theta)
    x1 = (np.sqrt(u)[:, None, None] * e[None, :, None] * np.ones(m)[None, None, :]).ravel()
    x2 = (np.sqrt(1.0 - u)[:, None, None] * np.ones(m)[None, :, None] * e[None, None, :]).ravel()
    w = (wu[:, None, None] * np.ones((m, m))[None, :, :] / (m * m)).ravel()
    return np.column_stack([x1, x2]), w


def _sphere2_nodes(order: int):
    """Probability quadrature on the 2-sphere (Gauss-Legendre x uniform)."""
    t, wt = np.polynomial.legendre.leggauss(order)
    m = 2 * order + 1
    phi = 2.0 * np.pi * np.arange(m) / m
    st = np.sqrt(1.0 - t**2)
    x = (st[:, None] * np.cos(phi)[None, :]).ravel()
    y = (st[:, None] * np.sin(phi)[None, :]).ravel()
    z = np.repeat(t[:, None], m, axis=1).ravel()
    w = np.repeat(wt[:, None] / (2.0 * m), m, axis=1).ravel()
    return np.column_stack([x, y, z]), w


# ---------------------------------------------------------------------------
# coefficient extraction


def _u2_indices(L: int):
    return [(l, m) for l in range(L + 1) for m in range(L + 1 - l)]


def _u2_family_on(z: np.ndarray, L: int) -> dict:
    """Evaluate every h_{l,m} with l+m <= L on the flat array z."""
    r2 = (z * z.conj()).real
    x = np.clip(2.0 * r2 - 1.0, -1.0, 1.0)
    vals = {}
    for k in range(L + 1):
        jac = jacobi_all(L - k, 0.0, float(k), x)
        zk = z**k
        for m in range(L + 1 - k):
            vals[(m + k, m)] = zk * jac[m]
            if k > 0:
                vals[(m, m + k)] = np.conj(zk) * jac[m]
    return vals


def coefficients_u2(
    phi0, L: int = 24, n_radial: int | None = None, n_angular: int | None = None
) -> CoefficientSpectrum:
    """Coefficients c_{l,m} = <phi0, h_{l,m}> for all l + m <= L.

    Parameters
    ----------
    phi0 : callable
        Evaluator on the closed unit disc, vectorized over complex arrays.
    L : int
        Truncation degree (default 24); the spectrum records it, so
        downstream bounds are reported as truncated (still valid) bounds.
    n_radial, n_angular : int, optional
        Quadrature orders; default 4L (and 8L+1 angles).  Orders below
        L+1 radial / 2L+1 angular cannot resolve the requested truncation
        and raise UnderResolvedError.
    """
    if L < 0:
        raise ValueError("truncation must be >= 0")
    if n_radial is None:
        n_radial = max(4 * L, 8)
    if n_angular is None:
        n_angular = max(8 * L + 1, 9)
    if n_radial < L + 1 or n_angular < 2 * L + 1:
        raise UnderResolvedError(
            f"orders ({n_radial}, {n_angular}) cannot resolve degree {L}"
        )
    z, w = disc_quadrature(n_radial, n_angular)
    fam = _u2_family_on(z, L)
    fz = np.asarray(phi0(z), dtype=complex)
    coeffs = {
        idx: complex(np.sum(w * fz * np.conj(h))) for idx, h in sorted(fam.items())
    }
    return CoefficientSpectrum("u2", coeffs, L)


def coefficients_su2(phi0, N: int = 24, order: int | None = None) -> CoefficientSpectrum:
    """Legendre coefficients c_n = (1/2) int phi0 P_n on [-1, 1], n <= N."""
    if N < 0:
        raise ValueError("truncation must be >= 0")
    if order is None:
        order = max(2 * N + 2, 4)
    if order < N + 1:
        raise UnderResolvedError(f"order {order} cannot resolve degree {N}")
    t, wt = np.polynomial.legendre.leggauss(order)
    vals = legendre_all(N, t)
    ft = np.asarray(phi0(t), dtype=complex)
    coeffs = {n: complex(0.5 * np.sum(wt * ft * vals[n])) for n in range(N + 1)}
    return CoefficientSpectrum("su2", coeffs, N)


def lp_lower_bound(spec: CoefficientSpectrum, p: float) -> float:
    """The weighted coefficient sum (sum |c|^p dim)^(1/p).

    This is a valid lower bound on the S^p multiplier norm of the
    bi-invariant two-point kernel with these coefficients.  Truncated
    spectra still give valid (smaller) bounds since all terms are
    nonnegative.  p = inf is out of contract and rejected.
    """
    if not np.isfinite(p) or p < 1:
        raise ValueError("p must lie in [1, inf)")
    total = sum(abs(c) ** p * spec.dim(idx) for idx, c in spec.items())
    return float(total ** (1.0 / p))


def synthesize(spec: CoefficientSpectrum):
    """Evaluator of the finite sum  sum c dim h  matching the pair tag."""
    items = sorted(spec.items())
    if spec.pair == "su2":

        def phi0_su2(r):
            r = np.asarray(r, dtype=float)
            vals = legendre_all(spec.truncation, np.atleast_1d(r))
            out = np.zeros(vals.shape[1], dtype=complex)
            for n, c in items:
                out += c * (2 * n + 1) * vals[n]
            return out if r.ndim else complex(out[0])

        return phi0_su2

    def phi0_u2(z):
        z = np.asarray(z, dtype=complex)
        flat = np.atleast_1d(z).ravel()
        fam = _u2_family_on(flat, spec.truncation)
        out = np.zeros(flat.size, dtype=complex)
        for idx, c in items:
            out += c * (idx[0] + idx[1] + 1) * fam[idx]
        return out.reshape(np.atleast_1d(z).shape) if z.ndim else complex(out[0])

    return phi0_u2


# ---------------------------------------------------------------------------
# discretized kernel operator


def kernel_schatten_norm(
    phi0, p: float, order: int, pair: str = "u2", check: bool = False
) -> float:
    """Schatten p-norm of the discretized two-point kernel operator.

    The kernel psi(x, y) = phi0(<x, y>) is sampled on a quadrature grid of
    the homogeneous space (the unit sphere of C^2 for "u2", the 2-sphere
    for "su2"), scaled by sqrt(w_i w_j), and its singular values are summed.
    As the order grows this converges to (sum |c|^p dim)^(1/p) over the
    coefficients of phi0.

    With ``check=True`` the value is recomputed at twice the order; a drift
    above 1% raises a resolution warning (warnings.warn) and the finer value
    is returned.
    """
    if not np.isfinite(p) or p < 1:
        raise ValueError("p must lie in [1, inf)")

    def value_at(q: int) -> float:
        if pair == "u2":
            # <x_i, x_j> lies in the closed disc up to rounding, which the
            # disc evaluators absorb.
            nodes, w = _sphere3_nodes(q)
            gram = nodes.conj() @ nodes.T
        elif pair == "su2":
            nodes, w = _sphere2_nodes(q)
            gram = np.clip(nodes @ nodes.T, -1.0, 1.0)
        else:
            raise ValueError("pair must be 'u2' or 'su2'")
        psi = np.asarray(phi0(gram.ravel()), dtype=complex).reshape(gram.shape)
        sw = np.sqrt(w)
        kernel = psi * sw[:, None] * sw[None, :]
        return schatten_norm(kernel, p)

    val = value_at(order)
    if check:
        fine = value_at(2 * order)
        if abs(fine - val) > 0.01 * max(abs(fine), 1e-300):
            import warnings

            warnings.warn(
                f"kernel norm moved {val:.6g} -> {fine:.6g} under order doubling",
                RuntimeWarning,
                stacklevel=2,
            )
        return fine
    return val


# ---------------------------------------------------------------------------
# Haar sampling and bi-invariant averaging


def haar_u2(rng: np.random.Generator, size: int = 1) -> np.ndarray:
    """Haar-random 2x2 unitaries via phase-normalized QR of Gaussians."""
    z = rng.standard_normal((size, 2, 2)) + 1j * rng.standard_normal((size, 2, 2))
    out = np.empty_like(z)
    for i in range(size):
        q, r = np.linalg.qr(z[i])
        out[i] = q * (np.diag(r) / np.abs(np.diag(r)))
    return out


def subgroup_sampler(name: str):
    """Sampler of Haar elements of a compact subgroup of U(2) by name.

    "u1" is the circle embedded as diag(1, e^{i t}); "so2" the rotation
    matrices; "u2" the full group.
    """

    if name == "u1":

        def sample(rng, size):
            t = rng.uniform(0.0, 2.0 * np.pi, size)
            out = np.zeros((size, 2, 2), dtype=complex)
            out[:, 0, 0] = 1.0
            out[:, 1, 1] = np.exp(1j * t)
            return out

    elif name == "so2":

        def sample(rng, size):
            t = rng.uniform(0.0, 2.0 * np.pi, size)
            out = np.zeros((size, 2, 2), dtype=complex)
            out[:, 0, 0] = np.cos(t)
            out[:, 0, 1] = -np.sin(t)
            out[:, 1, 0] = np.sin(t)
            out[:, 1, 1] = np.cos(t)
            return out

    elif name == "u2":
        sample = haar_u2
    else:
        raise ValueError(f"unknown subgroup {name!r}")
    return sample


@dataclass
class KAverageResult:
    symbol: MultiplierSymbol
    max_conjugate_norm: float | None = None
    conjugates_probed: int = 0


def k_average(
    phi,
    points,
    n_samples: int,
    seed: int,
    subgroup: str = "u1",
    diag_p: float | None = None,
    diag_cfg: SearchConfig | None = None,
    diag_budget: int = 16,
) -> KAverageResult:
    """Monte Carlo bi-invariant averaging of a function on U(2).

    Averages phi(k g k') over n_samples^2 Haar pairs (k, k') of the chosen
    subgroup and returns the averaged two-point symbol on the grid
    ``points`` (entries phi_avg(g_i^{-1} g_j)).  The Monte Carlo error is
    O(n_samples^{-1/2}).

    When ``diag_p`` is given, a seeded subsample of at most ``diag_budget``
    conjugate symbols is run through the ratio search and the largest
    estimate is reported; by convexity the averaged symbol's multiplier
    norm never exceeds the worst conjugate's.
    """
    pts = np.asarray(points, dtype=complex)
    n = pts.shape[0]
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    sampler = subgroup_sampler(subgroup)
    ks = sampler(rng, n_samples)
    kps = sampler(rng, n_samples)
    # g_i^{-1} g_j for unitary grid points
    base = np.einsum("iba,jbc->ijac", pts.conj(), pts)
    # k_r (g_i^{-1} g_j) k'_s, averaged over (r, s)
    left = np.einsum("rab,ijbc->rijac", ks, base)
    conj_vals = np.einsum("rijab,sbc->rsijac", left, kps)
    avg = np.zeros((n, n), dtype=complex)
    for r in range(n_samples):
        for s_idx in range(n_samples):
            avg += np.asarray(phi(conj_vals[r, s_idx]), dtype=complex)
    avg /= n_samples * n_samples

    max_norm = None
    probed = 0
    if diag_p is not None:
        cfg = diag_cfg or SearchConfig(restarts=4)
        pairs = [(r, s) for r in range(n_samples) for s in range(n_samples)]
        idx = rng.permutation(len(pairs))[: min(diag_budget, len(pairs))]
        max_norm = 0.0
        for k in idx:
            r, s_idx = pairs[int(k)]
            sym = MultiplierSymbol(np.asarray(phi(conj_vals[r, s_idx]), dtype=complex))
            max_norm = max(max_norm, ms_norm_lower(sym, diag_p, cfg).value)
            probed += 1
    return KAverageResult(MultiplierSymbol(avg), max_norm, probed)


# phi in k_average is applied to stacked (..., 2, 2) arrays; grid values are
# entrywise functions of the matrix, so implementations should accept that.


# ---------------------------------------------------------------------------
# serialization


def spectrum_to_json(spec: CoefficientSpectrum) -> str:
    rows = []
    for idx, c in sorted(spec.items()):
        if spec.pair == "u2":
            rows.append(
                {"l": idx[0], "m": idx[1], "re": c.real, "im": c.imag, "dim": spec.dim(idx)}
            )
        else:
            rows.append({"n": idx, "re": c.real, "im": c.imag, "dim": spec.dim(idx)})
    return json.dumps({"pair": spec.pair, "truncation": spec.truncation, "coeffs": rows})


def spectrum_from_json(text: str) -> CoefficientSpectrum:
    obj = json.loads(text)
    pair = obj["pair"]
    coeffs = {}
    for row in obj["coeffs"]:
        idx = (row["l"], row["m"]) if pair == "u2" else row["n"]
        coeffs[idx] = complex(row["re"], row["im"])
    return CoefficientSpectrum(pair, coeffs, obj["truncation"])


def spectrum_to_csv(spec: CoefficientSpectrum, path) -> None:
    """|c| against degree, for plotting."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["pair", "l", "m_or_n", "degree", "abs_c", "dim"])
        for idx, c in sorted(spec.items()):
            if spec.pair == "u2":
                writer.writerow(
                    [spec.pair, idx[0], idx[1], idx[0] + idx[1], f"{abs(c):.17g}", spec.dim(idx)]
                )
            else:
                writer.writerow([spec.pair, "", idx, idx, f"{abs(c):.17g}", spec.dim(idx)])
