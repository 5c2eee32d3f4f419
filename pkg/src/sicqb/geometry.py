"""Geometry of the quantum states inside the probability simplex."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError
from .state_rep import state_to_probs

GEOMETRY_TOL = 1e-10
ZERO_TOL = 1e-9


@dataclass(frozen=True)
class Check:
    name: str
    expected: float
    observed: float
    passed: bool


@dataclass
class GeometryReport:
    d: int
    tol: float = GEOMETRY_TOL
    checks: list = field(default_factory=list)

    def add(self, name, expected, observed):
        self.checks.append(
            Check(name, float(expected), float(observed), abs(expected - observed) < self.tol)
        )
        return self

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def __bool__(self):
        return self.passed

    def to_dict(self):
        checks = [
            {"name": c.name, "expected": c.expected, "observed": c.observed, "pass": c.passed}
            for c in self.checks
        ]
        return {"d": self.d, "tol": self.tol, "pass": self.passed, "checks": checks}

    def to_table(self):
        rows = [("check", "expected", "observed", "pass")]
        rows += [(c.name, f"{c.expected:.15g}", f"{c.observed:.15g}", str(c.passed)) for c in self.checks]
        widths = [max(len(r[i]) for r in rows) for i in range(4)]
        return "\n".join("  ".join(s.ljust(w) for s, w in zip(r, widths)).rstrip() for r in rows)


def _vec(p, d):
    p = np.asarray(p, dtype=float)
    if p.shape != (d * d,):
        raise DimensionError(f"need a length-{d * d} vector, got shape {p.shape}")
    return p


def pure_purity(d):
    return 2.0 / (d * (d + 1))


def sphere_radius_sq(d):
    return (d - 1) / (d**2 * (d + 1))


def basis_distribution(d, k):
    """``1/d`` in slot ``k`` (0-based), ``1/(d(d+1))`` elsewhere."""
    if not 0 <= k < d * d:
        raise IndexError(f"k must lie in [0, {d * d}), got {k}")
    e = np.full(d * d, 1.0 / (d * (d + 1)))
    e[k] = 1.0 / d
    return e


def sphere_check(p, d, tol=GEOMETRY_TOL):
    p = _vec(p, d)
    w = p - 1.0 / d**2
    report = GeometryReport(d, tol)
    report.add("sum_p_squared", pure_purity(d), p @ p)
    report.add("centered_norm_sq", sphere_radius_sq(d), w @ w)
    return report


@dataclass(frozen=True)
class InnerBoundReport:
    inner: float
    lower_margin: float
    upper_margin: float
    passed: bool

    def __bool__(self):
        return self.passed


def inner_bound_check(p, s, d, tol=GEOMETRY_TOL):
    """Check ``1/(d(d+1)) <= <p|s> <= 2/(d(d+1))`` and report both margins."""
    p, s = _vec(p, d), _vec(s, d)
    ip = float(p @ s)
    lower = ip - 1.0 / (d * (d + 1))
    upper = 2.0 / (d * (d + 1)) - ip
    return InnerBoundReport(ip, lower, upper, lower >= -tol and upper >= -tol)


@dataclass(frozen=True)
class NFlatResult:
    d: int
    n: int
    min_distance_sq: float
    radius_sq: float
    pokes_through: bool


def nflat_min_distance(d, n):
    """Squared distance from the simplex centre to an ``n``-flat, and the poke-through verdict.

    The sphere of pure states reaches outside the simplex through a proper
    face (``n >= 1``) iff ``n < d(d-1)/2``.  For ``n = 0`` the flat is the
    whole simplex and nothing can poke through.
    """
    if not 0 <= n < d * d:
        raise ValueError(f"n must satisfy 0 <= n < {d * d}, got {n}")
    dist = n / (d**2 * (d**2 - n))
    # integer form of n < d(d-1)/2
    return NFlatResult(d, n, dist, sphere_radius_sq(d), n >= 1 and 2 * n < d * (d - 1))


@dataclass(frozen=True)
class ZerosAudit:
    count: int
    bound: int
    passed: bool


def zeros_bound(d):
    return d * (d - 1) // 2


def zeros_audit(p, d, zero_tol=ZERO_TOL):
    p = _vec(p, d)
    count = int(np.sum(p < zero_tol))
    bound = zeros_bound(d)
    return ZerosAudit(count, bound, count <= bound)


def zeros_monte_carlo(sic, samples, rng, zero_tol=ZERO_TOL):
    """Largest zero count over ``samples`` Haar-random pure states."""
    from .randomness import haar_pure_kets

    d = sic.d
    kets = haar_pure_kets(d, samples, rng)
    # p(i) = |<psi_i|v>|^2 / d, vectorized over samples
    probs = np.einsum("ka,iab,kb->ki", kets.conj(), sic.projectors, kets).real / d
    counts = np.sum(probs < zero_tol, axis=1)
    worst = int(counts.max())
    return ZerosAudit(worst, zeros_bound(d), worst <= zeros_bound(d))


@dataclass(frozen=True)
class GramSpectrum:
    eigenvalues: np.ndarray
    lambda0: float
    lambda_rest: float
    psd: bool


def max_distant_gram(d, n, tol=1e-15):
    """Spectrum of the proposed Gram matrix of ``n`` mutually maximally distant states.

    Diagonal ``(d-1)/(d^2(d+1))``, off-diagonal ``-1/(d^2(d+1))``.  The
    eigenvalues are computed numerically; ``lambda0`` and ``lambda_rest`` are
    the closed forms ``(d-n)/(d^2(d+1))`` and ``1/(d(d+1))``.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    a = (d - 1) / (d**2 * (d + 1))
    b = -1.0 / (d**2 * (d + 1))
    G = np.full((n, n), b) + (a - b) * np.eye(n)
    eig = np.linalg.eigvalsh(G)
    lam0 = (d - n) / (d**2 * (d + 1))
    return GramSpectrum(eig, lam0, 1.0 / (d * (d + 1)), bool(eig[0] >= -tol))


def build_max_distant_set(d, sic):
    """SIC vectors of the ``d`` computational-basis states."""
    if sic.d != d:
        raise DimensionError(f"SIC dimension {sic.d} does not match d={d}")
    out = []
    for k in range(d):
        rho = np.zeros((d, d), dtype=complex)
        rho[k, k] = 1
        out.append(state_to_probs(rho, sic))
    return out


@dataclass(frozen=True)
class Entropies:
    renyi2: float
    daroczy2: float


def order2_entropies(p):
    s = float(np.sum(np.asarray(p, dtype=float) ** 2))
    return Entropies(-math.log(s), 2.0 * (1.0 - s))
