"""Jacobi and Legendre polynomials and the two spherical-function families.

The two families are the zonal functions of the compact pairs (U(2), U(1))
and (SU(2), SO(2)).  The first lives on the closed unit disc (the double
coset space of U(1) in U(2)), the second on [-1, 1] (the double coset space
of SO(2) in SU(2), where it reduces to plain Legendre polynomials).

Everything is evaluated by forward three-term recurrence in double
precision, which is stable on [-1, 1] at the degrees used here (a few
hundred).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "jacobi_eval",
    "jacobi_all",
    "legendre_all",
    "spherical_u2",
    "spherical_su2",
    "HoelderScanReport",
    "hoelder_bound_check",
    "empirical_u2_constant",
    "scan_report_to_csv",
]


def _check_interval(x, lo=-1.0, hi=1.0):
    x = np.asarray(x, dtype=float)
    if np.any(x < lo) or np.any(x > hi):
        raise ValueError(f"argument outside [{lo}, {hi}]")
    return x


def jacobi_all(nmax: int, a: float, b: float, x) -> np.ndarray:
    """Evaluate Jacobi polynomials of all degrees 0..nmax at the points x.

    Parameters
    ----------
    nmax : int
        Highest degree to compute.
    a, b : float
        Weight exponents, both >= 0.
    x : array_like
        Evaluation points in [-1, 1].

    Returns
    -------
    (nmax+1, len(x)) array with row n holding degree n.
    """
    if nmax < 0:
        raise ValueError("nmax must be >= 0")
    if a < 0 or b < 0:
        raise ValueError("weight exponents must be >= 0")
    x = _check_interval(np.atleast_1d(x))
    out = np.empty((nmax + 1, x.size))
    out[0] = 1.0
    if nmax == 0:
        return out
    out[1] = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0
    for n in range(2, nmax + 1):
        c1 = 2.0 * n * (n + a + b) * (2.0 * n + a + b - 2.0)
        c2 = (2.0 * n + a + b - 1.0) * (
            (2.0 * n + a + b) * (2.0 * n + a + b - 2.0) * x + a * a - b * b
        )
        c3 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * (2.0 * n + a + b)
        out[n] = (c2 * out[n - 1] - c3 * out[n - 2]) / c1
    return out


def jacobi_eval(n: int, a: float, b: float, x):
    """Value of the degree-n Jacobi polynomial with exponents (a, b) at x.

    x must lie in [-1, 1]; anything outside raises a ValueError.  Scalar in,
    scalar out; array in, array out.
    """
    scalar = np.isscalar(x)
    vals = jacobi_all(n, a, b, x)[n]
    return float(vals[0]) if scalar else vals


def legendre_all(nmax: int, x) -> np.ndarray:
    """Legendre polynomials of all degrees 0..nmax (the a = b = 0 case)."""
    return jacobi_all(nmax, 0.0, 0.0, x)


def spherical_u2(l: int, m: int, z):
    """Zonal function of the pair (U(2), U(1)) at a point of the closed disc.

    For l >= m this is z**(l-m) * P_m^(0, l-m)(2|z|^2 - 1), and the complex
    conjugate pattern for l < m.  The index (l, m) labels a representation of
    dimension l + m + 1.

    Parameters
    ----------
    l, m : int
        Nonnegative integers.
    z : complex or array of complex
        Points with |z| <= 1 (a slack of 1e-12 is absorbed).
    """
    if l < 0 or m < 0:
        raise ValueError("indices must be nonnegative")
    scalar = np.isscalar(z)
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    r2 = (z * z.conj()).real
    if np.any(r2 > 1.0 + 1e-12):
        raise ValueError("point outside the closed unit disc")
    x = np.clip(2.0 * r2 - 1.0, -1.0, 1.0)
    if l >= m:
        vals = z ** (l - m) * jacobi_all(m, 0.0, l - m, x)[m]
    else:
        vals = np.conj(z) ** (m - l) * jacobi_all(l, 0.0, m - l, x)[l]
    return complex(vals[0]) if scalar else vals


def spherical_su2(n: int, r):
    """Zonal function of the pair (SU(2), SO(2)): the Legendre value P_n(r)."""
    if n < 0:
        raise ValueError("index must be nonnegative")
    scalar = np.isscalar(r)
    vals = legendre_all(n, r)[n]
    return float(vals[0]) if scalar else vals


@dataclass
class HoelderScanReport:
    """Outcome of a Hoelder-bound scan over one spherical family.

    ``empirical_constants`` maps a bound shape to the smallest constant that
    makes the bound hold over the whole scan.  ``rows`` holds one record per
    (index, bound shape) for CSV export.  ``violations`` is only populated by
    the SU(2) scan, where the bounds come with the explicit constant 4 and
    are expected to hold with none.
    """

    family: str
    max_degree: int
    grid: int
    empirical_constants: dict = field(default_factory=dict)
    rows: list = field(default_factory=list)
    violations: list = field(default_factory=list)

    @property
    def empirical_c(self) -> float:
        """Single constant covering every bound shape in the scan."""
        return max(self.empirical_constants.values())


# Legendre pair bounds on [-1/2, 1/2], all with the explicit constant 4:
#   |P_n(x)-P_n(y)| <= 4/sqrt(n)
#   |P_n(x)-P_n(y)| <= 4*sqrt(n)*|x-y|
#   |P_n(x)-P_n(y)| <= 4*|x-y|**(1/2)
_SU2_SLACK = 1e-12


def _scan_su2(max_degree: int, grid: int) -> HoelderScanReport:
    xs = np.linspace(-0.5, 0.5, grid)
    vals = legendre_all(max_degree, xs)
    dx = np.abs(xs[:, None] - xs[None, :])
    sqrt_dx = np.sqrt(dx)
    np.fill_diagonal(dx, 1.0)  # mask the zero-distance diagonal in ratios
    np.fill_diagonal(sqrt_dx, 1.0)
    report = HoelderScanReport("su2", max_degree, grid)
    worst = {"uniform": 0.0, "lipschitz": 0.0, "holder_half": 0.0}
    for n in range(1, max_degree + 1):
        dp = np.abs(vals[n][:, None] - vals[n][None, :])
        rn = math.sqrt(n)
        # Smallest constant making each bound shape hold at this degree.
        per_n = {
            "uniform": dp.max() * rn,
            "lipschitz": (dp / dx).max() / rn,
            "holder_half": (dp / sqrt_dx).max(),
        }
        n_bad = 0
        if any(c > 4.0 + _SU2_SLACK for c in per_n.values()):
            bad = dp > 4.0 * sqrt_dx + _SU2_SLACK
            bad |= dp > 4.0 * rn * dx + _SU2_SLACK
            bad |= dp > 4.0 / rn + _SU2_SLACK
            np.fill_diagonal(bad, False)
            n_bad = int(bad.sum())
            ii, jj = np.nonzero(bad)
            for i, j in zip(ii[:16], jj[:16]):
                report.violations.append(
                    {"n": n, "x": xs[i], "y": xs[j], "lhs": dp[i, j]}
                )
        for kind, c in per_n.items():
            worst[kind] = max(worst[kind], c)
            report.rows.append(
                {"family": "su2", "l": "", "m_or_n": n, "bound_kind": kind,
                 "empirical_C": c, "violations": n_bad}
            )
    report.empirical_constants = worst
    return report


def _scan_u2(max_degree: int, grid: int) -> HoelderScanReport:
    # On |z| = 1/sqrt(2) the Jacobi argument 2|z|^2 - 1 is frozen at 0, so
    # each h_{l,m} is a constant times the pure phase e^{i(l-m)theta}.  The
    # pairwise difference then depends only on the grid lag, which collapses
    # the O(grid^2) pair scan to one pass over lags per index.
    d = np.arange(1, grid)
    dtheta = 2.0 * math.pi * d / grid
    report = HoelderScanReport("u2", max_degree, grid)
    worst = {"lipschitz": 0.0, "uniform": 0.0}
    for l in range(max_degree + 1):
        for m in range(max_degree + 1 - l):
            amp = abs(spherical_u2(l, m, 1.0 / math.sqrt(2.0)))
            k = l - m
            dh = 2.0 * amp * np.abs(np.sin(k * dtheta / 2.0))
            dim = l + m + 1
            c_lip = (dh / dtheta).max() / dim ** 0.75
            c_unif = dh.max() * dim ** 0.25 / 2.0
            worst["lipschitz"] = max(worst["lipschitz"], c_lip)
            worst["uniform"] = max(worst["uniform"], c_unif)
            report.rows.append(
                {"family": "u2", "l": l, "m_or_n": m, "bound_kind": "lipschitz",
                 "empirical_C": c_lip, "violations": 0}
            )
            report.rows.append(
                {"family": "u2", "l": l, "m_or_n": m, "bound_kind": "uniform",
                 "empirical_C": c_unif, "violations": 0}
            )
    report.empirical_constants = worst
    return report


def hoelder_bound_check(family: str, max_degree: int, grid: int) -> HoelderScanReport:
    """Scan one spherical family against its two-sided Hoelder bounds.

    For "su2" the three Legendre inequalities carry the explicit constant 4
    and the report lists any violation (none are expected).  For "u2" the
    uniform constant is not pinned a priori; the scan evaluates the family on
    the circle |z| = 1/sqrt(2) and reports the smallest constant covering
    both bound shapes (a Lipschitz bound growing like dim^(3/4) and a
    uniform bound decaying like dim^(-1/4)).
    """
    if max_degree < 1:
        raise ValueError("max_degree must be >= 1")
    if grid < 100:
        raise ValueError("grid must have at least 100 points")
    if family == "su2":
        return _scan_su2(max_degree, grid)
    if family == "u2":
        return _scan_u2(max_degree, grid)
    raise ValueError(f"unknown family {family!r}")


_U2_CONSTANT_CACHE: dict = {}


def empirical_u2_constant(max_degree: int = 40, grid: int = 512) -> float:
    """Empirical uniform constant for the U(2) family bounds (cached)."""
    key = (max_degree, grid)
    if key not in _U2_CONSTANT_CACHE:
        _U2_CONSTANT_CACHE[key] = hoelder_bound_check("u2", max_degree, grid).empirical_c
    return _U2_CONSTANT_CACHE[key]


def scan_report_to_csv(report: HoelderScanReport, path) -> None:
    """Write a scan report as CSV with one row per (index, bound shape)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["family", "l", "m_or_n", "bound_kind", "empirical_C", "violations"])
        for row in report.rows:
            writer.writerow(
                [row["family"], row["l"], row["m_or_n"], row["bound_kind"],
                 f"{row['empirical_C']:.17g}", row["violations"]]
            )
