from functools import lru_cache

import numpy as np
from scipy.spatial.transform import Rotation

from livatom.helium import HeliumConfig, ee_coulomb_integral, helium_ground_shift
from livatom.kf_tensor import KappaMatrix, construct_uniform


def random_kappa(rng, scale=1e-3) -> KappaMatrix:
    a = rng.uniform(-scale, scale, (3, 3))
    # upper triangle mirrored keeps exact symmetry
    return KappaMatrix(np.triu(a) + np.triu(a, 1).T)


def rotate(kappa: KappaMatrix, rot: np.ndarray) -> KappaMatrix:
    m = rot @ kappa.entries @ rot.T
    return KappaMatrix(np.triu(m) + np.triu(m, 1).T)


def random_rotation(rng) -> np.ndarray:
    return Rotation.random(random_state=rng).as_matrix()


@lru_cache(maxsize=None)
def ee_estimate(z, samples=10_000_000, seed=HeliumConfig.seed):
    return ee_coulomb_integral(HeliumConfig(Z=z, mc_samples=samples, seed=seed))


@lru_cache(maxsize=None)
def helium_uniform_shift(k, z=2.0, samples=10_000_000):
    return helium_ground_shift(HeliumConfig(Z=z, mc_samples=samples), construct_uniform(k))


@lru_cache(maxsize=None)
def default_bound_table():
    from livatom.bounds import bound_table

    return tuple(bound_table())
