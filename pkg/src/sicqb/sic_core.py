"""SIC-POVM construction, verification and numerical search.

A SIC in dimension ``d`` is a set of ``d**2`` rank-1 projectors ``Pi_i`` with
``tr(Pi_i Pi_j) = (d*delta_ij + 1)/(d + 1)``.  The measurement effects are
``E_i = Pi_i / d``.

Weyl-Heisenberg covariant candidates are generated from a fiducial vector
``psi`` as ``|psi_ab> = X^a Z^b |psi>`` and indexed ``i = a*d + b`` (0-based
in code, ``a*d + b + 1`` in the 1-based convention used in documentation).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .errors import DimensionError, SicNotFoundError, UnsupportedDimensionError

VERIFY_TOL = 1e-10
SEARCH_TOL = 1e-8
MAX_DIMENSION = 12

PROVENANCES = ("builtin", "orbit-of-fiducial", "loaded")


def _canonical_phase(v, eps=1e-12):
    """Rotate ``v`` so its first nonzero amplitude is real and positive."""
    v = np.asarray(v, dtype=complex)
    nz = np.flatnonzero(np.abs(v) > eps)
    if nz.size == 0:
        return v
    a = v[nz[0]]
    out = v * (abs(a) / a)
    out[nz[0]] = abs(a)
    return out


@dataclass(frozen=True)
class Fiducial:
    d: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.shape != (self.d,):
            raise DimensionError(f"fiducial needs {self.d} amplitudes, got {amps.size}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"fiducial is not normalized (norm {norm!r})")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_vector(cls, v):
        """Normalize ``v`` and fix its global phase."""
        v = np.asarray(v, dtype=complex).reshape(-1)
        v = _canonical_phase(v / np.linalg.norm(v))
        return cls(d=v.size, amplitudes=v)


@dataclass(frozen=True)
class SicSet:
    """``d**2`` projectors of shape ``(d**2, d, d)``; element order is significant."""

    d: int
    projectors: np.ndarray
    provenance: str = "loaded"

    def __post_init__(self):
        P = np.asarray(self.projectors, dtype=complex)
        if P.ndim != 3 or P.shape[1] != P.shape[2]:
            raise DimensionError(f"projectors must have shape (n, d, d), got {P.shape}")
        if P.shape[1] != self.d:
            raise DimensionError(
                f"projectors are {P.shape[1]}x{P.shape[1]} but d={self.d}"
            )
        if P.shape[0] != self.d**2:
            raise DimensionError(f"expected {self.d**2} projectors, got {P.shape[0]}")
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        P.setflags(write=False)
        object.__setattr__(self, "projectors", P)

    @property
    def n(self):
        return self.d**2

    @property
    def effects(self):
        return self.projectors / self.d

    def gram(self):
        """Overlap matrix ``tr(Pi_i Pi_j)``."""
        return np.einsum("iab,jba->ij", self.projectors, self.projectors).real


@dataclass(frozen=True)
class SicVerificationReport:
    max_overlap_deviation: float
    max_idempotency_residual: float
    resolution_of_identity_residual: float
    frobenius_F: float
    tol: float
    max_hermiticity_residual: float = 0.0
    passed: bool = field(init=False)

    def __post_init__(self):
        ok = max(
            self.max_overlap_deviation,
            self.max_idempotency_residual,
            self.resolution_of_identity_residual,
            self.max_hermiticity_residual,
        ) < self.tol
        object.__setattr__(self, "passed", bool(ok))

    def __bool__(self):
        return self.passed


# --- built-in exemplars ---------------------------------------------------

_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

_QUBIT_SIGNS = ((1, 1, 1), (1, -1, -1), (-1, -1, 1), (-1, 1, -1))


def _qutrit_vectors():
    w = np.exp(2j * np.pi / 3)
    wb = w.conjugate()
    vecs = np.array(
        [
            [0, 1, -1], [-1, 0, 1], [1, -1, 0],
            [0, w, -wb], [-1, 0, wb], [1, -w, 0],
            [0, wb, -w], [-1, 0, w], [1, -wb, 0],
        ],
        dtype=complex,
    )
    return vecs / np.sqrt(2)


def builtin_sic(d):
    """Return the explicit SIC for ``d`` in {2, 3}.

    ``d=2`` uses the tetrahedral Bloch vectors ``(±1, ±1, ±1)/sqrt(3)`` with an
    even number of minus signs; ``d=3`` uses the nine vectors built from the
    cube roots of unity.
    """
    if d == 2:
        eye = np.eye(2, dtype=complex)
        P = [
            0.5 * (eye + (sx * _PAULI[0] + sy * _PAULI[1] + sz * _PAULI[2]) / np.sqrt(3))
            for sx, sy, sz in _QUBIT_SIGNS
        ]
        return SicSet(2, np.array(P), "builtin")
    if d == 3:
        V = _qutrit_vectors()
        return SicSet(3, np.einsum("ia,ib->iab", V, V.conj()), "builtin")
    raise UnsupportedDimensionError(
        f"no built-in SIC for d={d}; supported dimensions are 2 and 3"
    )


# --- Weyl-Heisenberg orbit ------------------------------------------------

def shift_matrix(d):
    return np.roll(np.eye(d, dtype=complex), 1, axis=0)


def clock_matrix(d):
    return np.diag(np.exp(2j * np.pi * np.arange(d) / d))


def wh_displacement(d, a, b):
    """``X^a Z^b`` with ``X|k> = |k+1 mod d>`` and ``Z|k> = exp(2 pi i k/d)|k>``."""
    if d < 2:
        raise DimensionError(f"d must be >= 2, got {d}")
    if not (0 <= a < d and 0 <= b < d):
        raise ValueError(f"displacement indices must lie in [0, {d}), got ({a}, {b})")
    return np.linalg.matrix_power(shift_matrix(d), a) @ np.linalg.matrix_power(clock_matrix(d), b)


def wh_group(d):
    """All ``d**2`` displacement operators, stacked in orbit order."""
    return np.array([wh_displacement(d, a, b) for a in range(d) for b in range(d)])


def fiducial_orbit(f):
    """Candidate SIC from the Weyl-Heisenberg orbit of ``f``.

    No claim is made that the result satisfies the SIC overlap condition; use
    :func:`verify_sic` for that.
    """
    vecs = wh_group(f.d) @ f.amplitudes
    return SicSet(f.d, np.einsum("ia,ib->iab", vecs, vecs.conj()), "orbit-of-fiducial")


# --- verification ---------------------------------------------------------

def frobenius_objective(effects):
    """Squared Frobenius distance of the effect Gram matrix from the identity.

    ``F = sum_i (1 - tr E_i^2)^2 + sum_{i != j} (tr E_i E_j)^2``
    """
    E = np.asarray(effects, dtype=complex)
    M = np.einsum("iab,jba->ij", E, E).real
    return float(np.sum((np.eye(len(E)) - M) ** 2))


def frobenius_lower_bound(d):
    """Value of ``F`` attained by a SIC in dimension ``d``.

    From the Schwarz bound with ``tr E_i^2 = 1/d^2`` and
    ``tr E_i E_j = 1/(d^2 (d+1))``.
    """
    m = 1.0 / d**2
    n = 1.0 / (d**2 * (d + 1))
    n_eff = d**2
    return (n_eff * (1 - m)) ** 2 / n_eff + (n_eff * (n_eff - 1) * n) ** 2 / (d**4 - d**2)


def verify_sic(s, tol=VERIFY_TOL):
    d = s.d
    P = np.asarray(s.projectors)
    if P.shape != (d * d, d, d):
        raise DimensionError(f"expected projectors of shape {(d * d, d, d)}, got {P.shape}")
    G = np.einsum("iab,jba->ij", P, P)
    target = (d * np.eye(d * d) + 1) / (d + 1)
    overlap_dev = float(np.max(np.abs(G - target)))
    idem = float(np.max(np.abs(P @ P - P)))
    herm = float(np.max(np.abs(P - np.conj(np.swapaxes(P, 1, 2)))))
    resolution = float(np.max(np.abs(P.sum(axis=0) / d - np.eye(d))))
    return SicVerificationReport(
        max_overlap_deviation=overlap_dev,
        max_idempotency_residual=idem,
        resolution_of_identity_residual=resolution,
        frobenius_F=frobenius_objective(P / d),
        tol=tol,
        max_hermiticity_residual=herm,
    )


# --- numerical search -----------------------------------------------------

@dataclass(frozen=True)
class SearchOptions:
    tol: float = SEARCH_TOL
    max_restarts: int = 200
    max_iter: int = 5000
    max_dimension: int = MAX_DIMENSION


def restart_rng(d, seed, restart):
    """Generator for one restart; fixed by ``(seed, d, restart)`` alone."""
    return np.random.default_rng(np.random.SeedSequence([seed, d, restart]))


def _overlaps(D, psi):
    # g_n = <psi| D_n |psi>
    return np.einsum("k,nkl,l->n", psi.conj(), D, psi)


def _frame_potential(x, D, d):
    """Scale-invariant ``sum_n |g_n|^4 / |psi|^8`` and its real gradient."""
    psi = x[:d] + 1j * x[d:]
    Dpsi = D @ psi
    DHpsi = np.conj(np.swapaxes(D, 1, 2)) @ psi
    g = Dpsi @ psi.conj()
    g2 = np.abs(g) ** 2
    s = np.vdot(psi, psi).real
    N = np.sum(g2**2)
    # Wirtinger derivative d/d(conj psi)
    dN = 2 * ((g2 * g.conj()) @ Dpsi + (g2 * g) @ DHpsi)
    dF = dN / s**4 - 4 * N / s**5 * psi
    return N / s**4, 2 * np.concatenate([dF.real, dF.imag])


def _overlap_residuals(x, D, d):
    psi = x[:d] + 1j * x[d:]
    s = np.vdot(psi, psi).real
    g2 = np.abs(_overlaps(D[1:], psi)) ** 2
    return np.concatenate([g2 / s**2 - 1.0 / (d + 1), [s - 1.0]])


def _overlap_jacobian(x, D, d):
    psi = x[:d] + 1j * x[d:]
    Dn = D[1:]
    s = np.vdot(psi, psi).real
    Dpsi = Dn @ psi
    DHpsi = np.conj(np.swapaxes(Dn, 1, 2)) @ psi
    g = Dpsi @ psi.conj()
    w = g.conj()[:, None] * Dpsi + g[:, None] * DHpsi
    dg2 = 2 * np.concatenate([w.real, w.imag], axis=1)
    g2 = np.abs(g) ** 2
    J = dg2 / s**2 - (2 * g2 / s**3)[:, None] * (2 * x)[None, :]
    return np.vstack([J, 2 * x[None, :]])


def max_orbit_deviation(f):
    """Largest ``| |<psi|D|psi>|^2 - 1/(d+1) |`` over non-identity displacements."""
    D = wh_group(f.d)
    g2 = np.abs(_overlaps(D[1:], f.amplitudes)) ** 2
    return float(np.max(np.abs(g2 - 1.0 / (f.d + 1))))


def _one_restart(d, D, rng, opts):
    x0 = rng.standard_normal(2 * d)
    res = optimize.minimize(
        _frame_potential, x0, args=(D, d), jac=True, method="BFGS",
        options={"gtol": 1e-12, "maxiter": opts.max_iter},
    )
    x = res.x / np.linalg.norm(res.x)
    polish = optimize.least_squares(
        _overlap_residuals, x, jac=_overlap_jacobian, args=(D, d),
        method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=200 * (2 * d + 1),
    )
    f = Fiducial.from_vector(polish.x[:d] + 1j * polish.x[d:])
    return f, max_orbit_deviation(f)


def find_sic(d, seed=0, opts=None):
    """Search for a Weyl-Heisenberg covariant SIC fiducial in dimension ``d``.

    Each restart draws a Gaussian starting point, minimizes the frame
    potential ``sum |<psi|X^a Z^b|psi>|^4`` with BFGS and then polishes the
    overlap equations with Levenberg-Marquardt.  Restart ``k`` is seeded with
    ``SeedSequence([seed, d, k])``; restarts run in index order and the first
    one meeting ``opts.tol`` is returned, so the result depends only on
    ``(d, seed, opts)``.

    Raises
    ------
    SicNotFoundError
        If no restart converges; carries the best residual seen.
    """
    opts = opts or SearchOptions()
    if not 2 <= d <= opts.max_dimension:
        raise UnsupportedDimensionError(
            f"d={d} outside the searchable range [2, {opts.max_dimension}]"
        )
    D = wh_group(d)
    best = np.inf
    for k in range(opts.max_restarts):
        f, residual = _one_restart(d, D, restart_rng(d, seed, k), opts)
        if residual <= opts.tol:
            return f
        best = min(best, residual)
    raise SicNotFoundError(d, best, opts.max_restarts)


def sic_for_dimension(d, seed=0, opts=None):
    """Built-in SIC for d in {2, 3}, otherwise the orbit of a searched fiducial."""
    if d in (2, 3):
        return builtin_sic(d)
    return fiducial_orbit(find_sic(d, seed, opts))
