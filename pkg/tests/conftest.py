import numpy as np
import pytest

import starcap as sc


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture(scope="session")
def euclid():
    return sc.RadialConformalFactor.euclidean(1.0)


@pytest.fixture(scope="session")
def sphere():
    return sc.RadialConformalFactor.sphere(1.0)


@pytest.fixture(scope="session")
def hyperbolic():
    return sc.RadialConformalFactor.hyperbolic(1.0)


@pytest.fixture(scope="session")
def round_ring(euclid):
    """Annulus 1 < r < 2 in the plane."""
    return sc.StarshapedRing(sc.RadialFunction.constant(2.0, 64),
                             sc.RadialFunction.constant(1.0, 64), euclid)


@pytest.fixture(scope="session")
def star_ring(euclid):
    """The wavy test ring: outer 1.5 + 0.3 cos 2t, inner 0.5 + 0.1 cos t."""
    outer = sc.RadialFunction.from_fourier([1.5, 0.0, 0.3], m=128)
    inner = sc.RadialFunction.from_fourier([0.5, 0.1], m=128)
    return sc.StarshapedRing(outer, inner, euclid)


def random_smooth_radial(rng, m=128, base=1.0, amp=0.4, modes=4):
    """Random positive profile: base plus a few low Fourier modes."""
    cos = [base] + list(amp * rng.uniform(-1, 1, modes) / modes)
    sin = list(amp * rng.uniform(-1, 1, modes) / modes)
    return sc.RadialFunction.from_fourier(cos, sin, m=m)
