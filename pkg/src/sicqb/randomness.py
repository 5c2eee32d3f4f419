"""Seeded random quantum objects used by the tests and the self-test."""

import numpy as np
from scipy.stats import unitary_group


def haar_pure_state(d, rng):
    """Normalized complex Gaussian vector, returned as a ket."""
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def haar_pure_kets(d, count, rng):
    v = rng.standard_normal((count, d)) + 1j * rng.standard_normal((count, d))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def random_density_matrix(d, rng, rank=None):
    """Normalized Wishart matrix ``G G^dagger / tr``."""
    k = d if rank is None else rank
    G = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
    rho = G @ G.conj().T
    return rho / np.trace(rho).real


def random_unitary(d, rng):
    return unitary_group.rvs(d, random_state=rng)


def random_povm(d, m, rng):
    """``m`` random PSD effects, conjugated by ``S^{-1/2}`` with ``S`` their sum.

    The resulting effects generally have unequal traces, so they are not ISU.
    """
    A = np.array([random_density_matrix(d, rng) for _ in range(m)])
    S = A.sum(axis=0)
    w, V = np.linalg.eigh(S)
    S_inv_half = (V / np.sqrt(w)) @ V.conj().T
    F = S_inv_half @ A @ S_inv_half
    return 0.5 * (F + np.conj(np.swapaxes(F, 1, 2)))
