import numpy as np
import pytest

from sicqb.acceptance import sic as cached_sic
from sicqb.sic_core import builtin_sic


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def sic2():
    return builtin_sic(2)


@pytest.fixture(scope="session")
def sic3():
    return builtin_sic(3)


@pytest.fixture(scope="session")
def sic_of():
    """SIC for any small dimension (built-in for 2 and 3, searched otherwise)."""
    return cached_sic


def direct_probs(rho, sic):
    """Independent loop oracle for p(i) = tr(rho Pi_i)/d."""
    d = sic.d
    out = []
    for P in sic.projectors:
        total = 0j
        for a in range(d):
            for b in range(d):
                total += rho[a, b] * P[b, a]
        out.append(total.real / d)
    return np.array(out)
