import numpy as np
import pytest

from spectrisk import spectra


@pytest.fixture(scope="session")
def unit_mass():
    return spectra.make_point_masses([(1.0, 1.0)])


@pytest.fixture(scope="session")
def ar1_09():
    return spectra.ar1_limit(0.9)


@pytest.fixture(scope="session")
def ar1_05():
    return spectra.ar1_limit(0.5)


@pytest.fixture(scope="session")
def two_point():
    # unit-mean mixture on {0.5, 2} with the maximal second moment
    return spectra.make_point_masses([(0.5, 2.0 / 3.0), (2.0, 1.0 / 3.0)])


def random_point_masses(rng: np.random.Generator, max_atoms: int = 6,
                        lo: float = 0.05, hi: float = 5.0):
    """Seeded random unit-weight spectrum, bounded away from zero."""
    k = int(rng.integers(1, max_atoms + 1))
    atoms = rng.uniform(lo, hi, size=k)
    weights = rng.uniform(0.1, 1.0, size=k)
    weights /= weights.sum()
    return spectra.make_point_masses(list(zip(atoms, weights)))
