import numpy as np
import pytest

from xorgame import Observable


def random_hermitian(rng: np.random.Generator, d: int) -> np.ndarray:
    h = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (h + h.conj().T) / 2


def random_observable(rng: np.random.Generator, d: int) -> Observable:
    """Random ±1 observable: random eigenbasis, random ±1 spectrum."""
    h = random_hermitian(rng, d)
    w, v = np.linalg.eigh(h)
    signs = np.where(rng.random(d) < 0.5, -1.0, 1.0)
    m = (v * signs) @ v.conj().T
    return Observable((m + m.conj().T) / 2)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
