import numpy as np
import pytest

from ellthom import kernels

backends = kernels.available_backends()


def test_python_backend_always_available():
    assert "python" in backends
    assert kernels.BACKEND in ("cython", "python")


@pytest.mark.skipif("cython" not in backends, reason="compiled extension not built")
@pytest.mark.parametrize("name", kernels.NAMES)
def test_backends_agree(name):
    py, cy = backends["python"], backends["cython"]
    q = np.exp(2j * np.pi * (0.3 + 0.9j))
    rng = np.random.default_rng(7)
    zs = rng.uniform(-1, 1, 50) + 1j * rng.uniform(-1, 1, 50)
    a = rng.normal(size=7) + 1j * rng.normal(size=7)
    b = rng.normal(size=7) + 1j * rng.normal(size=7)
    b[0] += 2
    ii = np.array([0, 0, 1, 1, 2], dtype=np.intp)
    jj = np.array([0, 1, 0, 1, 0], dtype=np.intp)
    kk = np.array([0, 1, 1, 2, 2], dtype=np.intp)
    args = {
        "jet_mul": (a, b),
        "jet_div": (a, b),
        "sigma_values": (zs, q, 60),
        "ochanine_values": (zs, q, 60),
        "sigma_taylor": (0.2 + 0.1j, q, 60, 8),
        "ochanine_taylor": (0.2 + 0.1j, q, 60, 8),
        "sparse_mul": (a[:3], b[:3], ii, jj, kk, 3),
    }[name]
    x = np.asarray(getattr(py, name)(*args))
    y = np.asarray(getattr(cy, name)(*args))
    assert np.allclose(x, y, rtol=1e-12, atol=1e-14)


def test_pure_python_switch(monkeypatch):
    import importlib

    monkeypatch.setenv("ELLTHOM_PURE_PYTHON", "1")
    mod = importlib.reload(kernels)
    try:
        assert mod.BACKEND == "python"
    finally:
        monkeypatch.delenv("ELLTHOM_PURE_PYTHON")
        importlib.reload(kernels)
