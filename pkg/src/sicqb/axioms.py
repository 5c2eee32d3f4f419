"""Exact solver for the generalized urgleichung

    q(j) = alpha sum_i p(i) r(j|i) - beta sum_i r(j|i),   i = 1..n

together with the consistency constraints

    n beta = alpha - 1
    (m0/n) alpha - beta = 1
    (n - m0) / ((m0-1)^2 + n - 1) = qbar / (qbar + 2).

All arithmetic is in :class:`fractions.Fraction`.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .born_rule import Povm, conditional_matrix, urgleichung
from .errors import DimensionError, InconsistentPairError


def _frac_str(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class UrgleichungParams:
    alpha: Fraction
    beta: Fraction
    n: int
    m0: int
    qbar: int

    @property
    def cos_theta(self):
        return Fraction(self.n - self.m0, (self.m0 - 1) ** 2 + self.n - 1)

    def invariant_residuals(self):
        """Exact residuals of the three defining relations (all zero when consistent)."""
        return (
            self.n * self.beta - (self.alpha - 1),
            Fraction(self.m0, self.n) * self.alpha - self.beta - 1,
            self.cos_theta - Fraction(self.qbar, self.qbar + 2),
        )

    def is_consistent(self):
        return all(r == 0 for r in self.invariant_residuals())

    @property
    def real_hilbert_space(self):
        return self.qbar == 1

    def to_dict(self):
        return {
            "qbar": self.qbar,
            "m0": self.m0,
            "n": self.n,
            "alpha": _frac_str(self.alpha),
            "beta": _frac_str(self.beta),
            "cos_theta": _frac_str(self.cos_theta),
        }


def general_urgleichung(p, R, params):
    """Generalized ground probabilities; components may fall outside [0, 1]."""
    p = np.asarray(p, dtype=float)
    if p.shape != (R.n,) or R.n != params.n:
        raise DimensionError(
            f"prior length {p.size}, conditional columns {R.n} and n={params.n} must agree"
        )
    return float(params.alpha) * (R.r @ p) - float(params.beta) * R.row_sums


def solve_constants(qbar, m0):
    """Solve the constraints exactly for ``(n, alpha, beta)``.

    Clearing denominators in the angle relation gives
    ``2n = m0 (qbar (m0 - 1) + 2)``; the two linear relations then fix
    ``beta = (n - m0) / (n (m0 - 1))`` and ``alpha = 1 + n beta``.
    """
    if not isinstance(qbar, int) or qbar < 0:
        raise ValueError(f"qbar must be a nonnegative integer, got {qbar!r}")
    if not isinstance(m0, int) or m0 < 2:
        raise ValueError(f"m0 must be an integer >= 2, got {m0!r}")
    n = Fraction(m0 * (qbar * (m0 - 1) + 2), 2)
    if n.denominator != 1 or n <= 0:
        raise InconsistentPairError(f"(qbar={qbar}, m0={m0}) gives non-integer n={n}")
    n = int(n)
    beta = Fraction(n - m0, n * (m0 - 1))
    params = UrgleichungParams(1 + n * beta, beta, n, m0, qbar)
    assert params.is_consistent(), params
    return params


def universal_angle_table(qbar_max, m0_max):
    """Consistent ``(qbar, m0)`` rows for ``0 <= qbar <= qbar_max``, ``2 <= m0 <= m0_max``."""
    rows = []
    for qbar in range(qbar_max + 1):
        for m0 in range(2, m0_max + 1):
            try:
                params = solve_constants(qbar, m0)
            except InconsistentPairError:
                continue
            if params.cos_theta != Fraction(qbar, qbar + 2):
                raise AssertionError(f"angle mismatch for {params}")
            rows.append(params)
    return rows


TABLE_FIELDS = ("qbar", "m0", "n", "alpha", "beta", "cos_theta", "real_hilbert_space")


def _row(params):
    row = params.to_dict()
    row["real_hilbert_space"] = params.real_hilbert_space
    return row


def table_to_json(rows):
    return json.dumps([_row(r) for r in rows], indent=2)


def table_to_csv(rows):
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=TABLE_FIELDS, lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow(_row(r))
    return buf.getvalue()


@dataclass(frozen=True)
class CertaintyReport:
    d: int
    cos_theta: float
    analytic_cos_theta: float
    angle_matrix_residual: float
    certainty_residual: float
    passed: bool

    def __bool__(self):
        return self.passed


def certainty_check(sic, basis, tol=1e-12):
    """Check that a von Neumann basis measurement achieves the ideal of certainty.

    Priors ``p_k(i) = (m0/n) r(k|i)`` are built from the basis projectors; their
    mutual inner products, the certainty ``q(j) = delta_jk`` under the
    urgleichung, and the angle ``cos(theta) = 1/2`` are all checked against
    the constants recovered by :func:`solve_constants` with ``qbar=2``.
    """
    d = sic.d
    P = np.asarray(basis, dtype=complex)
    if P.shape != (d, d, d):
        raise DimensionError(f"need {d} projectors of size {d}x{d}, got shape {P.shape}")
    overlaps = np.einsum("jab,kba->jk", P, P)
    if np.max(np.abs(overlaps - np.eye(d))) > 1e-10 or np.max(np.abs(P.sum(axis=0) - np.eye(d))) > 1e-10:
        raise ValueError("basis projectors are not orthonormal and complete")

    params = solve_constants(2, d)
    alpha, beta = float(params.alpha), float(params.beta)
    ratio = params.m0 / params.n
    R = conditional_matrix(sic, Povm(d, P))
    priors = ratio * R.r  # row k is p_k

    gram = priors @ priors.T
    expected = (ratio * np.eye(d) + beta) / alpha
    angle_res = float(np.max(np.abs(gram - expected)))

    certainty = np.array([urgleichung(priors[k], R, d) for k in range(d)])
    cert_res = float(np.max(np.abs(certainty - np.eye(d))))

    cos_theta = float(gram[0, 1] / gram[0, 0])
    analytic = float(params.cos_theta)
    passed = (
        angle_res <= tol
        and cert_res <= tol
        and abs(cos_theta - 0.5) <= tol
        and abs(cos_theta - analytic) <= tol
    )
    return CertaintyReport(d, cos_theta, analytic, angle_res, cert_res, passed)


def computational_basis_projectors(d):
    return np.array([np.diag(np.eye(d)[k]).astype(complex) for k in range(d)])
