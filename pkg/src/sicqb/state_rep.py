"""Density matrices <-> SIC probability vectors.

With a SIC ``{Pi_i}`` a state ``rho`` maps to ``p(i) = tr(rho Pi_i)/d`` and is
recovered by ``rho = sum_i ((d+1) p(i) - 1/d) Pi_i``.  Only part of the
simplex is reachable; the remaining operations here characterize that part
(structure coefficients, the pure-state variety, the square-root
parameterization).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConstraintError, DecompositionError, DimensionError

PSD_TOL = 1e-10


def check_density_matrix(rho, tol=1e-12, psd_tol=PSD_TOL):
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"density matrix must be square, got shape {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > tol:
        raise ValueError(f"density matrix has trace {np.trace(rho).real!r}")
    if np.linalg.eigvalsh(rho)[0] < -psd_tol:
        raise ValueError("density matrix is not positive semi-definite")
    return rho


def check_prob_vector(p, n=None, tol=1e-12):
    p = np.asarray(p, dtype=float)
    if p.ndim != 1:
        raise DimensionError(f"probability vector must be 1-D, got shape {p.shape}")
    if n is not None and p.size != n:
        raise DimensionError(f"probability vector has length {p.size}, expected {n}")
    if abs(p.sum() - 1) > tol or np.any(p < -tol) or np.any(p > 1 + tol):
        raise ValueError("vector is not on the probability simplex")
    return p


def _check_dim(sic, d):
    if d != sic.d:
        raise DimensionError(f"state dimension {d} does not match SIC dimension {sic.d}")


def state_to_probs(rho, sic):
    rho = np.asarray(rho, dtype=complex)
    _check_dim(sic, rho.shape[0])
    return np.einsum("ab,iba->i", rho, sic.projectors).real / sic.d


def probs_to_state(p, sic):
    """Reconstruct the (possibly non-PSD) operator represented by ``p``."""
    p = np.asarray(p, dtype=float)
    d = sic.d
    if p.shape != (d * d,):
        raise DimensionError(f"need a length-{d * d} vector, got shape {p.shape}")
    coeffs = (d + 1) * p - 1.0 / d
    rho = np.einsum("i,iab->ab", coeffs, sic.projectors)
    return 0.5 * (rho + rho.conj().T)


@dataclass(frozen=True)
class Validity:
    valid: bool
    min_eigenvalue: float

    def __bool__(self):
        return self.valid


def validate_probs(p, sic, tol=PSD_TOL):
    lam = float(np.linalg.eigvalsh(probs_to_state(p, sic))[0])
    return Validity(lam >= -tol, lam)


def hs_inner_from_probs(p, q, d):
    """``tr(rho sigma)`` computed from the SIC vectors of ``rho`` and ``sigma``."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != (d * d,) or q.shape != (d * d,):
        raise DimensionError(f"both vectors must have length {d * d}")
    return d * (d + 1) * float(p @ q) - 1.0


# --- structure coefficients -----------------------------------------------

def triple_products(sic):
    """``tr(Pi_i Pi_j Pi_k)`` as a dense ``(n, n, n)`` complex tensor."""
    P = sic.projectors
    n, d = P.shape[0], sic.d
    PP = np.einsum("iab,jbc->ijac", P, P).reshape(n * n, d * d)
    # tr(A B) = sum_ac A_ac B_ca
    Pt = np.swapaxes(P, 1, 2).reshape(n, d * d)
    return (PP @ Pt.T).reshape(n, n, n)


@dataclass(frozen=True)
class StructureCoeffs:
    d: int
    alpha: np.ndarray
    c: np.ndarray

    def sum_rule_residuals(self):
        """Max deviations of the three index-sum identities for ``alpha``."""
        d, n = self.d, self.d**2
        eye = np.eye(n)
        over_k = np.max(np.abs(self.alpha.sum(axis=2) - (d * eye + 1) / (d + 1)))
        over_i = np.max(np.abs(self.alpha.sum(axis=0) - d * eye))
        over_j = np.max(np.abs(self.alpha.sum(axis=1) - d * eye))
        return {"sum_k": float(over_k), "sum_i": float(over_i), "sum_j": float(over_j)}


def structure_coeffs(sic):
    d, n = sic.d, sic.n
    T = triple_products(sic)
    alpha = ((d + 1) * T - ((d * np.eye(n) + 1) / (d + 1))[:, :, None]) / d
    c = T.real.copy()
    alpha.setflags(write=False)
    c.setflags(write=False)
    return StructureCoeffs(d, alpha, c)


# --- pure states ----------------------------------------------------------

@dataclass(frozen=True)
class PurityReport:
    pure: bool
    r2: float                      # sum p^2 - 2/(d(d+1))
    r3: float                      # sum c p p p - (d+7)/(d+1)^3
    fixed_point_residual: float    # max_k of the c_ijk quadratic form
    alpha_fixed_point_residual: float  # same test written with alpha_ijk (real part)
    alpha_fixed_point_imag: float
    alpha_cubic_residual: float    # Re sum alpha p p p - 4/(d(d+1)^2)

    def __bool__(self):
        return self.pure


def purity_classify(p, sic_or_coeffs, tol=1e-9):
    """Test whether ``p`` lies on the pure-state variety.

    Pure iff both the quadratic and cubic residuals vanish.  The componentwise
    fixed-point equations are reported as well, in both the ``c_ijk`` and the
    ``alpha_ijk`` forms, as a cross-check.
    """
    coeffs = _as_coeffs(sic_or_coeffs)
    d = coeffs.d
    p = np.asarray(p, dtype=float)
    if p.shape != (d * d,):
        raise DimensionError(f"need a length-{d * d} vector, got shape {p.shape}")
    r2 = float(p @ p - 2.0 / (d * (d + 1)))
    cpp = np.einsum("ijk,i,j->k", coeffs.c, p, p)
    r3 = float(cpp @ p - (d + 7) / (d + 1) ** 3)
    fixed = p - ((d + 1) ** 2 / (3 * d)) * cpp + 1.0 / (3 * d)
    app = np.einsum("ijk,i,j->k", coeffs.alpha, p, p)
    alt = p - (d + 1) * app / 3 - 2.0 / (3 * d * (d + 1))
    cubic = float((app @ p).real - 4.0 / (d * (d + 1) ** 2))
    pure = abs(r2) <= tol and abs(r3) <= tol
    return PurityReport(
        pure=pure,
        r2=r2,
        r3=r3,
        fixed_point_residual=float(np.max(np.abs(fixed))),
        alpha_fixed_point_residual=float(np.max(np.abs(alt.real))),
        alpha_fixed_point_imag=float(np.max(np.abs(alt.imag))),
        alpha_cubic_residual=cubic,
    )


def _as_coeffs(obj):
    if isinstance(obj, StructureCoeffs):
        return obj
    return structure_coeffs(obj)


@dataclass(frozen=True)
class CkDecomposition:
    m_k: np.ndarray
    Q_k: np.ndarray
    residual: float


def ck_decompose(coeffs, k, tol=1e-9):
    """Split ``C_k = |m_k><m_k| + d/(2(d+1)) Q_k`` and check ``Q_k``.

    ``Q_k`` must be a symmetric projector of rank ``2d - 2``; the returned
    residual is the worst of the symmetry, idempotency and trace defects.
    """
    d, n = coeffs.d, coeffs.d**2
    if not 0 <= k < n:
        raise IndexError(f"k must lie in [0, {n}), got {k}")
    m = np.full(n, 1.0 / (d + 1))
    m[k] = 1.0
    Q = (coeffs.c[:, :, k] - np.outer(m, m)) * (2 * (d + 1) / d)
    residual = max(
        float(np.max(np.abs(Q - Q.T))),
        float(np.max(np.abs(Q @ Q - Q))),
        abs(float(np.trace(Q)) - (2 * d - 2)),
    )
    if residual > tol:
        raise DecompositionError(k, residual)
    return CkDecomposition(m, Q, residual)


# --- square-root parameterization -----------------------------------------

def sqrt_constraint_residual(b, d):
    b = np.asarray(b, dtype=float)
    return float(b.sum() ** 2 + d * (b @ b) - (d + 1))


def project_onto_ellipsoid(b, d):
    """Rescale ``b`` by the positive root ``t`` of ``t^2 ((sum b)^2 + d |b|^2) = d + 1``."""
    b = np.asarray(b, dtype=float)
    quad = b.sum() ** 2 + d * (b @ b)
    return b * np.sqrt((d + 1) / quad)


def sqrt_coeffs_from_state(rho, sic):
    """Expansion coefficients of the principal square root of ``rho`` in the SIC."""
    w, V = np.linalg.eigh(rho)
    B = (V * np.sqrt(np.clip(w, 0, None))) @ V.conj().T
    d = sic.d
    trBP = np.einsum("ab,iba->i", B, sic.projectors).real
    return (d + 1) / d * trBP - np.trace(B).real / d


def sample_state_sqrt(b, sic_or_coeffs, rng=None, tol=1e-8):
    """Map square-root coefficients ``b`` to a valid probability vector.

    ``p(k) = (1/d) sum_ij c_ijk b_i b_j``.  Pass ``b=None`` with ``rng`` (a
    :class:`numpy.random.Generator` or seed) to draw a Gaussian direction and
    rescale it onto the ellipsoid.
    """
    coeffs = _as_coeffs(sic_or_coeffs)
    d = coeffs.d
    if b is None:
        rng = np.random.default_rng(rng)
        b = project_onto_ellipsoid(rng.standard_normal(d * d), d)
    b = np.asarray(b, dtype=float)
    if b.shape != (d * d,):
        raise DimensionError(f"need {d * d} coefficients, got shape {b.shape}")
    res = sqrt_constraint_residual(b, d)
    if abs(res) > tol:
        raise ConstraintError(f"coefficients are off the ellipsoid (residual {res:.3e})")
    return np.einsum("ijk,i,j->k", coeffs.c, b, b) / d
