"""Random generators shared by the test modules."""

import numpy as np

from qadv.qobjects import Channel, DensityMatrix


def random_density(rng, dim: int) -> DensityMatrix:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    m = g @ g.conj().T
    return DensityMatrix(m / np.real(np.trace(m)))


def random_psd(rng, dim: int, scale: float = 1.0) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * (g @ g.conj().T) / dim


def random_hermitian(rng, dim: int) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return 0.5 * (g + g.conj().T)


def random_full_support_density(rng, dim: int, floor: float = 0.05) -> DensityMatrix:
    rho = random_density(rng, dim).mat
    mixed = np.eye(dim) / dim
    return DensityMatrix((1.0 - dim * floor) * rho + dim * floor * mixed)


def random_channel(rng, in_dim: int, out_dim: int, kraus_count: int) -> Channel:
    rows = out_dim * kraus_count
    if rows < in_dim:
        raise ValueError("need out_dim * kraus_count >= in_dim")
    g = rng.normal(size=(rows, in_dim)) + 1j * rng.normal(size=(rows, in_dim))
    q, _ = np.linalg.qr(g)
    kraus = tuple(q[i * out_dim : (i + 1) * out_dim, :] for i in range(kraus_count))
    return Channel(kraus)


def random_unit_vector(rng, dim: int) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_feasible_test(rng, rho: np.ndarray, eps: float) -> np.ndarray:
    """Random test blended toward I just enough to meet the type-I level."""
    dim = rho.shape[0]
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, _ = np.linalg.qr(g)
    lam = rng.uniform(0.0, 1.0, size=dim)
    t = (q * lam) @ q.conj().T
    alpha = 1.0 - float(np.real(np.trace(t @ rho)))
    if alpha > eps:
        theta = 1.0 - eps / alpha
        t = (1.0 - theta) * t + theta * np.eye(dim)
    return t
