"""The Born rule written as a relation between SIC and ground probabilities.

A SIC measurement "in the sky" with outcomes ``i`` and an arbitrary POVM
``{F_j}`` "on the ground" define conditionals ``r(j|i) = tr(Pi_i F_j)``.  If
the sky measurement is never performed, the ground probabilities are

    q(j) = (d+1) sum_i p(i) r(j|i) - (1/d) sum_i r(j|i)

instead of the classical ``s(j) = sum_i p(i) r(j|i)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionError,
    FundamentalInequalityError,
    NotUnitaryError,
    UndefinedPosteriorError,
)

POVM_TOL = 1e-10
INEQUALITY_TOL = 1e-10


@dataclass(frozen=True)
class Povm:
    d: int
    effects: np.ndarray

    def __post_init__(self):
        F = np.asarray(self.effects, dtype=complex)
        if F.ndim != 3 or F.shape[1:] != (self.d, self.d):
            raise DimensionError(f"effects must have shape (m, {self.d}, {self.d}), got {F.shape}")
        F.setflags(write=False)
        object.__setattr__(self, "effects", F)

    @property
    def m(self):
        return self.effects.shape[0]

    def check(self, tol=POVM_TOL):
        F = self.effects
        if np.max(np.abs(F - np.conj(np.swapaxes(F, 1, 2)))) > tol:
            raise ValueError("POVM effects are not Hermitian")
        if min(np.linalg.eigvalsh(f)[0] for f in F) < -tol:
            raise ValueError("POVM effect is not positive semi-definite")
        if np.max(np.abs(F.sum(axis=0) - np.eye(self.d))) > tol:
            raise ValueError("POVM effects do not sum to the identity")
        return self

    @classmethod
    def von_neumann(cls, basis):
        """Rank-1 projective measurement onto the columns of the unitary ``basis``."""
        B = np.asarray(basis, dtype=complex)
        return cls(B.shape[0], np.einsum("aj,bj->jab", B, B.conj()))

    @classmethod
    def computational(cls, d):
        return cls.von_neumann(np.eye(d))

    @classmethod
    def trivial(cls, d):
        return cls(d, np.eye(d, dtype=complex)[None])

    @classmethod
    def from_sic(cls, sic):
        return cls(sic.d, sic.effects)


@dataclass(frozen=True)
class ConditionalMatrix:
    """Entries ``r[j, i] = r(j|i)``: row ``j`` is a ground outcome, column ``i`` a sky outcome."""

    r: np.ndarray

    def __post_init__(self):
        r = np.array(self.r, dtype=float)
        if r.ndim != 2:
            raise DimensionError(f"conditional matrix must be 2-D, got shape {r.shape}")
        r.setflags(write=False)
        object.__setattr__(self, "r", r)

    @property
    def m(self):
        return self.r.shape[0]

    @property
    def n(self):
        return self.r.shape[1]

    @property
    def column_sums(self):
        return self.r.sum(axis=0)

    @property
    def row_sums(self):
        return self.r.sum(axis=1)

    def is_stochastic(self, tol=1e-12):
        return bool(
            np.all(self.r >= -tol)
            and np.all(self.r <= 1 + tol)
            and np.max(np.abs(self.column_sums - 1)) <= tol
        )


def conditional_matrix(sic, ground):
    if ground.d != sic.d:
        raise DimensionError(f"POVM dimension {ground.d} does not match SIC dimension {sic.d}")
    return ConditionalMatrix(np.einsum("iab,jba->ji", sic.projectors, ground.effects).real)


def _check_inequality(q, tol):
    bad = np.flatnonzero((q < -tol) | (q > 1 + tol))
    if bad.size:
        raise FundamentalInequalityError(int(bad[0]), float(q[bad[0]]))
    return q


def _check_prior(p, R):
    p = np.asarray(p, dtype=float)
    if p.shape != (R.n,):
        raise DimensionError(f"prior has length {p.size}, conditional matrix has {R.n} columns")
    return p


def urgleichung(p, R, d, tol=INEQUALITY_TOL):
    """Ground probabilities when the SIC in the sky is not performed.

    Raises
    ------
    FundamentalInequalityError
        If some ``q(j)`` leaves ``[-tol, 1 + tol]``; that means ``p`` or ``R``
        is not a legitimate state/measurement pair.
    """
    p = _check_prior(p, R)
    if R.n != d * d:
        raise DimensionError(f"conditional matrix has {R.n} columns, expected {d * d}")
    q = (d + 1) * (R.r @ p) - R.row_sums / d
    return _check_inequality(q, tol)


def classical_ltp(p, R):
    """Law of total probability ``s(j) = sum_i p(i) r(j|i)``."""
    return R.r @ _check_prior(p, R)


def unitary_transition(sic, U, tol=1e-10):
    """Doubly stochastic ``r_U(j|i) = tr(U Pi_i U^dagger Pi_j)/d``."""
    U = np.asarray(U, dtype=complex)
    d = sic.d
    if U.shape != (d, d):
        raise DimensionError(f"unitary must be {d}x{d}, got {U.shape}")
    if np.max(np.abs(U @ U.conj().T - np.eye(d))) > tol:
        raise NotUnitaryError("matrix is not unitary")
    rotated = U @ sic.projectors @ U.conj().T
    return ConditionalMatrix(np.einsum("iab,jba->ji", rotated, sic.projectors).real / d)


def evolve_probs(p, R_U, d, tol=INEQUALITY_TOL):
    p = _check_prior(p, R_U)
    if R_U.m != d * d or R_U.n != d * d:
        raise DimensionError(f"transition matrix must be {d * d}x{d * d}")
    q = (d + 1) * (R_U.r @ p) - 1.0 / d
    return _check_inequality(q, tol)


def reciprocity_posterior(R, j):
    """Bayes posterior over sky outcomes given ground outcome ``j`` and a flat prior."""
    row = R.r[j]
    total = row.sum()
    if total <= 0:
        raise UndefinedPosteriorError(j)
    return row / total


@dataclass(frozen=True)
class IsuResult:
    is_isu: bool
    m: int
    max_row_sum_deviation: float

    def __bool__(self):
        return self.is_isu


def isu_check(R, d, tol=1e-10):
    """In-step unpredictability: every row sum equals ``d**2 / m``."""
    dev = float(np.max(np.abs(R.row_sums - d * d / R.m)))
    return IsuResult(dev <= tol, R.m, dev)
