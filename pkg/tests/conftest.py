import numpy as np
import pytest

from pptes.lorentz import random_local_sl

# two points on the line p = (p1, 1/5, 1/5, 1/5, 2/5 - p1) and the cross-ratios of their ranges
QP_P1 = (0.35651164020026005, 0.3943325092488642)
QP_T = (-0.2651270982388964, -0.036855353393877174)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_complex(rng, *shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def projector(basis):
    q, _ = np.linalg.qr(np.asarray(basis, dtype=complex))
    return q @ q.conj().T


def subspace_distance(b1, b2):
    """Spectral norm of the difference of the orthogonal projectors."""
    return np.linalg.norm(projector(b1) - projector(b2), 2)


def parallel(u, v, tol=1e-8):
    u = np.asarray(u, dtype=complex).ravel()
    v = np.asarray(v, dtype=complex).ravel()
    return abs(np.vdot(u, v)) >= (1 - tol) * np.linalg.norm(u) * np.linalg.norm(v)


def slocc_conjugate(state, rng):
    return state.conjugated(random_local_sl(3, rng))


def random_t(rng, kind):
    if kind == "negative":
        return complex(-rng.uniform(0.1, 5))
    if kind == "unit":
        return complex(rng.uniform(0.05, 0.95))
    if kind == "large":
        return complex(rng.uniform(1.1, 6))
    while True:
        t = complex(rng.normal(), rng.normal())
        if abs(t.imag) > 0.05 and abs(t) > 0.1 and abs(t - 1) > 0.1:
            return t


# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}


def record(number, passed, detail):
    ACCEPTANCE[number] = (bool(passed), detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}")
