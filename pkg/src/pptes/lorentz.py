"""Levi-Civita operators and the Lorentz invariant of n-qubit states.

The invariant of a (possibly unnormalized) density matrix ``rho`` on ``n`` qubits is
``Tr(rho^T eps_n rho eps_n)`` with ``eps_n`` the n-fold tensor power of the 2x2
Levi-Civita matrix. It is unchanged by local ``SL(2, C)`` operations and by
transposition.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DimensionError, ParameterError
from .qmat import MultiQubitState, as_matrix, qubit_count

EPSILON = np.array([[0, 1], [-1, 0]], dtype=complex)


@dataclass(frozen=True)
class LorentzInvariantValue:
    value: float
    imag_residual: float

    def __float__(self):
        return self.value


@lru_cache(maxsize=None)
def _epsilon_n(n: int) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for _ in range(n):
        out = np.kron(out, EPSILON)
    out.flags.writeable = False
    return out


def epsilon_n(n: int) -> np.ndarray:
    """``eps^{(x) n}``; satisfies ``eps_n^T = (-1)^n eps_n`` and ``eps_n^2 = (-1)^n I``."""
    if n < 1:
        raise ParameterError("epsilon_n needs n >= 1")
    return _epsilon_n(int(n)).copy()


def lorentz_invariant(state) -> LorentzInvariantValue:
    """Real part of ``Tr(rho^T eps_n rho eps_n)`` with the dropped imaginary part recorded."""
    rho = as_matrix(state)
    if rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"state must be square, got {rho.shape}")
    eps = _epsilon_n(qubit_count(rho.shape[0]))
    # Tr(A^T E B E) = sum((E^T A)_{ij} (B E)_{ij}) without forming the full product
    val = np.sum((eps.T @ rho) * (rho @ eps))
    return LorentzInvariantValue(float(val.real), float(abs(val.imag)))


def pairwise_pure_invariant(xi1, xi2, n: int | None = None) -> float:
    """``Tr(rho_1^T eps_n rho_2 eps_n) = (-1)^n |xi1^T eps_n xi2|^2`` for pure ``rho_i = xi_i xi_i^dagger``."""
    xi1 = np.asarray(xi1, dtype=complex).ravel()
    xi2 = np.asarray(xi2, dtype=complex).ravel()
    if xi1.shape != xi2.shape:
        raise DimensionError(f"vector lengths differ: {xi1.size} vs {xi2.size}")
    if n is None:
        n = qubit_count(xi1.size)
    elif xi1.size != 2**n:
        raise DimensionError(f"vectors of length {xi1.size} do not live on {n} qubits")
    return (-1) ** n * abs(xi1 @ _epsilon_n(n) @ xi2) ** 2


def conjecture_state(n: int, m: int, xi1=None, seed: int = 0) -> MultiQubitState:
    """Equal mixture of ``m >= 2`` pure states spread over the plane ``span{xi1, eps_n conj(xi1)}``.

    ``xi_k = cos(k pi/m) xi1 + sin(k pi/m) eta`` for ``k = 1..m``, where ``eta`` is
    ``eps_n conj(xi1)`` normalized. For odd ``n`` the two spanning vectors are
    orthogonal automatically and the resulting invariant is ``-1/2``.
    """
    if n < 1 or n % 2 == 0:
        raise ParameterError("conjecture_state needs odd n")
    if m < 2:
        raise ParameterError("conjecture_state needs m >= 2")
    if xi1 is None:
        rng = np.random.default_rng(seed)
        xi1 = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    xi1 = np.asarray(xi1, dtype=complex).ravel()
    if xi1.size != 2**n:
        raise DimensionError(f"xi1 must have length {2**n}")
    xi1 = xi1 / np.linalg.norm(xi1)
    eta = _epsilon_n(n) @ xi1.conj()
    eta = eta - (xi1.conj() @ eta) * xi1
    eta = eta / np.linalg.norm(eta)
    rho = np.zeros((2**n, 2**n), dtype=complex)
    for k in range(1, m + 1):
        ang = k * np.pi / m
        v = np.cos(ang) * xi1 + np.sin(ang) * eta
        rho += np.outer(v, v.conj())
    return MultiQubitState(rho / m)


def random_sl2(rng: np.random.Generator) -> np.ndarray:
    """Random 2x2 complex matrix with determinant 1.

    Complex Gaussian entries; draws with ``|det| < 1e-3`` are rejected and the rest
    rescaled by the principal ``det^{-1/2}``.
    """
    while True:
        g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        d = np.linalg.det(g)
        if abs(d) >= 1e-3:
            return g / np.sqrt(d)


def random_local_sl(n: int, rng: np.random.Generator) -> np.ndarray:
    """``V_1 (x) ... (x) V_n`` with each factor drawn by :func:`random_sl2`."""
    out = np.ones((1, 1), dtype=complex)
    for _ in range(n):
        out = np.kron(out, random_sl2(rng))
    return out
