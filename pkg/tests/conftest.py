import hypothesis
import numpy as np
import pytest

hypothesis.settings.register_profile("fast", max_examples=25)
hypothesis.settings.register_profile("thorough", max_examples=200)


def random_unitaries(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-ish random U(2) batch via QR of complex Ginibre matrices."""
    z = rng.normal(size=(n, 2, 2)) + 1j * rng.normal(size=(n, 2, 2))
    q, r = np.linalg.qr(z)
    diag = r[:, (0, 1), (0, 1)]
    phases = diag / np.abs(diag)
    return q * phases[:, None, :]


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
