"""Executable acceptance criteria.

Each ``criterion_N`` returns a :class:`CriterionResult`; :func:`run_all`
runs them in order.  Tolerances are fixed here and not configurable.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import born_rule as br
from . import geometry as geo
from . import state_rep as sr
from .axioms import (
    certainty_check,
    computational_basis_projectors,
    general_urgleichung,
    solve_constants,
)
from .randomness import (
    haar_pure_kets,
    random_density_matrix,
    random_povm,
    random_unitary,
)
from .sic_core import builtin_sic, find_sic, fiducial_orbit, verify_sic


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.number:>2}: {self.name} ({self.detail}; {self.seconds:.2f}s)"


@lru_cache(maxsize=None)
def sic(d, seed=0):
    if d in (2, 3):
        return builtin_sic(d)
    return fiducial_orbit(find_sic(d, seed))


def _rng(seed, tag):
    return np.random.default_rng(np.random.SeedSequence([seed, tag]))


def _timed(number, name, fn, seed):
    t0 = time.perf_counter()
    passed, detail = fn(seed)
    return CriterionResult(number, name, bool(passed), detail, time.perf_counter() - t0)


def _c1(seed):
    t0 = time.perf_counter()
    devs = {d: verify_sic(builtin_sic(d)).max_overlap_deviation for d in (2, 3)}
    passes = {d: verify_sic(builtin_sic(d)).passed for d in (2, 3)}
    elapsed = time.perf_counter() - t0
    ok = all(passes.values()) and max(devs.values()) < 1e-12 and elapsed < 1.0
    return ok, f"max overlap deviation {max(devs.values()):.2e} < 1e-12, {elapsed:.3f}s < 1s"


def _c2(seed):
    worst, slowest = 0.0, 0.0
    for d in range(2, 8):
        t0 = time.perf_counter()
        s = fiducial_orbit(find_sic(d, seed))
        slowest = max(slowest, time.perf_counter() - t0)
        G = s.gram()
        off = G[~np.eye(d * d, dtype=bool)]
        worst = max(worst, float(np.max(np.abs(off - 1 / (d + 1)))))
    return worst <= 1e-8 and slowest < 300, f"worst overlap error {worst:.2e} <= 1e-8, slowest d {slowest:.2f}s < 300s"


def _c3(seed):
    rng = _rng(seed, 3)
    worst = 0.0
    for d in range(2, 7):
        s = sic(d, seed)
        for _ in range(100):
            rho = random_density_matrix(d, rng)
            back = sr.probs_to_state(sr.state_to_probs(rho, s), s)
            worst = max(worst, float(np.max(np.abs(back - rho))))
    return worst < 1e-12, f"max entry error {worst:.2e} < 1e-12"


def _c4(seed):
    rng = _rng(seed, 4)
    worst, non_isu = 0.0, 0
    for d in (2, 3, 4):
        s = sic(d, seed)
        for t in range(100):
            rho = random_density_matrix(d, rng)
            if t % 10 == 0:
                povm = br.Povm.von_neumann(random_unitary(d, rng))
            else:
                povm = br.Povm(d, random_povm(d, int(rng.integers(2, 2 * d + 3)), rng))
            R = br.conditional_matrix(s, povm)
            non_isu += not br.isu_check(R, d)
            q = br.urgleichung(sr.state_to_probs(rho, s), R, d)
            born = np.einsum("ab,jba->j", rho, povm.effects).real
            worst = max(worst, float(np.max(np.abs(q - born))))
    ok = worst < 1e-12 and non_isu > 0
    return ok, f"max |q - tr(rho F)| {worst:.2e} < 1e-12, {non_isu} non-ISU POVMs"


def _c5(seed):
    rng = _rng(seed, 5)
    w2 = w3 = 0.0
    for d in (2, 3, 4):
        s = sic(d, seed)
        c = sr.structure_coeffs(s).c
        kets = haar_pure_kets(d, 100, rng)
        for v in kets:
            p = sr.state_to_probs(np.outer(v, v.conj()), s)
            w2 = max(w2, abs(p @ p - 2 / (d * (d + 1))))
            w3 = max(w3, abs(np.einsum("ijk,i,j,k->", c, p, p, p) - (d + 7) / (d + 1) ** 3))
    return w2 <= 1e-10 and w3 <= 1e-9, f"quadratic {w2:.2e} <= 1e-10, cubic {w3:.2e} <= 1e-9"


def _c6(seed):
    worst = 0.0
    for d in (2, 3):
        worst = max(worst, *sr.structure_coeffs(builtin_sic(d)).sum_rule_residuals().values())
    return worst < 1e-10, f"max sum-rule residual {worst:.2e} < 1e-10"


def _c7(seed):
    idem = tr = 0.0
    for d in (2, 3):
        coeffs = sr.structure_coeffs(builtin_sic(d))
        for k in range(d * d):
            Q = sr.ck_decompose(coeffs, k).Q_k
            idem = max(idem, float(np.max(np.abs(Q @ Q - Q))))
            tr = max(tr, abs(float(np.trace(Q)) - (2 * d - 2)))
    return idem < 1e-9 and tr <= 1e-9, f"idempotency {idem:.2e} < 1e-9, trace error {tr:.2e} <= 1e-9"


def _c8(seed):
    rng = _rng(seed, 8)
    ds = conj = comp = 0.0
    for d in (2, 3, 4):
        s = sic(d, seed)
        for _ in range(20):
            U, V = random_unitary(d, rng), random_unitary(d, rng)
            RU = br.unitary_transition(s, U)
            ds = max(ds, float(np.max(np.abs(RU.row_sums - 1))), float(np.max(np.abs(RU.column_sums - 1))))
            rho = random_density_matrix(d, rng)
            p = sr.state_to_probs(rho, s)
            q = br.evolve_probs(p, RU, d)
            conj = max(conj, float(np.max(np.abs(q - sr.state_to_probs(U @ rho @ U.conj().T, s)))))
            two_step = br.evolve_probs(q, br.unitary_transition(s, V), d)
            one_step = br.evolve_probs(p, br.unitary_transition(s, V @ U), d)
            comp = max(comp, float(np.max(np.abs(two_step - one_step))))
    ok = max(ds, conj, comp) <= 1e-12
    return ok, f"double stochasticity {ds:.2e}, conjugation {conj:.2e}, composition {comp:.2e} (all <= 1e-12)"


def _c9(seed):
    rng = _rng(seed, 9)
    notes, ok = [], True
    # sphere radius on pure states
    rad = 0.0
    for d in range(2, 6):
        s = sic(d, seed)
        for v in haar_pure_kets(d, 50, rng):
            p = sr.state_to_probs(np.outer(v, v.conj()), s)
            w = p - 1 / d**2
            rad = max(rad, abs(w @ w - (d - 1) / (d**2 * (d + 1))))
    ok &= rad <= 1e-10 and geo.sphere_radius_sq(2) == 1 / 12
    notes.append(f"radius^2 {rad:.1e}")
    # Gram PSD flip
    flip_ok, lam = True, 0.0
    for d in range(2, 11):
        at, above = geo.max_distant_gram(d, d), geo.max_distant_gram(d, d + 1)
        flip_ok &= at.psd and not above.psd
        for g, n in ((at, d), (above, d + 1)):
            lam = max(lam, abs(g.eigenvalues[0] - (d - n) / (d**2 * (d + 1))))
    ok &= flip_ok and lam <= 1e-12
    notes.append(f"gram flip {flip_ok}, lambda0 {lam:.1e}")
    # n-flat formula against direct distance of the flat's centre point
    flat, contained = 0.0, {}
    for d in range(2, 7):
        for n in range(d * d):
            point = np.zeros(d * d)
            point[: d * d - n] = 1 / (d * d - n)
            direct = float(np.sum((point - 1 / d**2) ** 2))
            flat = max(flat, abs(direct - geo.nflat_min_distance(d, n).min_distance_sq))
        contained[d] = not any(geo.nflat_min_distance(d, n).pokes_through for n in range(d * d))
    qubit_only = contained[2] and not any(contained[d] for d in range(3, 7))
    ok &= flat <= 1e-12 and qubit_only
    notes.append(f"n-flat {flat:.1e}, qubit-only containment {qubit_only}")
    # zeros bound
    zeros_ok = all(geo.zeros_monte_carlo(sic(d, seed), 10_000, rng).passed for d in range(2, 6))
    ok &= zeros_ok
    notes.append(f"zeros bound held {zeros_ok}")
    return ok, ", ".join(notes)


def _c10(seed):
    rng = _rng(seed, 10)
    exact = all(
        (lambda P: (P.n, P.alpha, P.beta) == (d * d, Fraction(d + 1), Fraction(1, d)))(solve_constants(2, d))
        for d in range(2, 101)
    )
    classical = all(
        (lambda P: P.alpha == 1 and P.beta == 0 and P.n == m0)(solve_constants(0, m0))
        for m0 in range(2, 51)
    )
    # qbar=0 urgleichung coincides with the law of total probability
    P0 = solve_constants(0, 4)
    R = br.ConditionalMatrix(rng.dirichlet(np.ones(3), size=4).T)
    p = rng.dirichlet(np.ones(4))
    classical &= np.allclose(general_urgleichung(p, R, P0), br.classical_ltp(p, R), atol=1e-15, rtol=0)
    reports = [certainty_check(sic(d, seed), computational_basis_projectors(d)) for d in (2, 3, 4)]
    cos_err = max(abs(r.cos_theta - 0.5) for r in reports)
    ok = exact and classical and all(r.passed for r in reports) and cos_err <= 1e-12
    return ok, f"qbar=2 exact {exact}, qbar=0 classical {classical}, cos(theta) error {cos_err:.1e} <= 1e-12"


def _c11(seed):
    rng = _rng(seed, 11)
    worst = np.inf
    for d in (2, 3):
        coeffs = sr.structure_coeffs(builtin_sic(d))
        s = builtin_sic(d)
        for _ in range(1000):
            p = sr.sample_state_sqrt(None, coeffs, rng)
            worst = min(worst, sr.validate_probs(p, s).min_eigenvalue)
    return worst >= -1e-10, f"min reconstructed eigenvalue {worst:.2e} >= -1e-10"


def _c12(seed):
    rng = _rng(seed, 12)
    worst = np.inf
    for d in (2, 3):
        s = builtin_sic(d)
        for _ in range(100):
            povm = br.Povm(d, random_povm(d, int(rng.integers(2, 2 * d + 3)), rng))
            R = br.conditional_matrix(s, povm)
            for j in range(R.m):
                worst = min(worst, sr.validate_probs(br.reciprocity_posterior(R, j), s).min_eigenvalue)
    return worst >= -1e-10, f"min reconstructed eigenvalue {worst:.2e} >= -1e-10"


CRITERIA = {
    1: ("built-in SIC verification", _c1),
    2: ("SIC search d=2..7", _c2),
    3: ("state/probability round trip", _c3),
    4: ("Born-rule equivalence", _c4),
    5: ("pure-state variety", _c5),
    6: ("structure coefficient sums", _c6),
    7: ("C_k decomposition", _c7),
    8: ("unitary dynamics", _c8),
    9: ("geometry numbers", _c9),
    10: ("axiom recovery", _c10),
    11: ("square-root sampler", _c11),
    12: ("reciprocity posteriors", _c12),
}

SLOW = {2}


def run_criterion(number, seed=0):
    name, fn = CRITERIA[number]
    return _timed(number, name, fn, seed)


def run_all(slow=False, seed=0):
    return [run_criterion(k, seed) for k in CRITERIA if slow or k not in SLOW]
