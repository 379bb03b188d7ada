"""Dense complex linear algebra for multi-qubit density matrices.

Matrices are plain ``numpy`` complex arrays. Qubits (parties) are labelled
``1..n`` with qubit 1 the most significant tensor factor, i.e. the usual
``kron(q1, q2, ..., qn)`` ordering.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import DimensionError, NotHermitianError

DEFAULT_REL_TOL = 1e-10


def as_matrix(m) -> np.ndarray:
    """Return ``m`` as a finite 2-D complex128 array (vectors become columns)."""
    if isinstance(m, MultiQubitState):
        return m.matrix
    arr = np.asarray(m, dtype=complex)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise DimensionError(f"expected a matrix, got array with shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DimensionError("matrix has non-finite entries")
    return arr


def qubit_count(dim: int) -> int:
    """Number of qubits for a Hilbert-space dimension, which must be a power of two."""
    n = int(dim).bit_length() - 1
    if dim < 2 or 2**n != dim:
        raise DimensionError(f"dimension {dim} is not a power of two >= 2")
    return n


def hermitian_defect(m) -> float:
    """Largest entrywise deviation ``max |M - M^dagger|``."""
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"matrix is not square: {m.shape}")
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def _check_hermitian(m: np.ndarray, tol: float) -> None:
    scale = max(1.0, float(np.max(np.abs(m))))
    defect = hermitian_defect(m)
    if defect > tol * scale:
        raise NotHermitianError(f"matrix is not Hermitian: max |M - M^dagger| = {defect:.3e}")


@dataclass(frozen=True, eq=False)
class MultiQubitState:
    """An unnormalized n-qubit density matrix with the tolerance it was validated at.

    Hermiticity is checked entrywise relative to the largest entry, positivity
    relative to the trace. Normalization is not required.
    """

    matrix: np.ndarray
    tol: float = DEFAULT_REL_TOL
    n: int = field(init=False)

    def __post_init__(self):
        m = as_matrix(self.matrix).copy()
        if m.shape[0] != m.shape[1]:
            raise DimensionError(f"density matrix must be square, got {m.shape}")
        n = qubit_count(m.shape[0])
        if self.tol < 0:
            raise ValueError("tolerance must be nonnegative")
        _check_hermitian(m, max(self.tol, 1e-12))
        tr = np.trace(m)
        if not tr.real > 0 or abs(tr.imag) > max(self.tol, 1e-12) * abs(tr.real):
            raise DimensionError(f"trace must be real and positive, got {tr}")
        lo = min_eigenvalue(m)
        if lo < -max(self.tol, 1e-12) * tr.real:
            raise DimensionError(f"matrix is not positive semidefinite (min eigenvalue {lo:.3e})")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "n", n)

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def normalized(self) -> "MultiQubitState":
        return MultiQubitState(self.matrix / self.trace, tol=self.tol)

    def conjugated(self, op) -> "MultiQubitState":
        """The state ``op @ rho @ op^dagger`` (e.g. a local SLOCC operation)."""
        op = as_matrix(op)
        out = op @ self.matrix @ op.conj().T
        return MultiQubitState((out + out.conj().T) / 2, tol=self.tol)


def tensor(a, b, *more) -> np.ndarray:
    """Kronecker product of two or more matrices (vectors are treated as columns)."""
    out = np.kron(as_matrix(a), as_matrix(b))
    for m in more:
        out = np.kron(out, as_matrix(m))
    return out


def split_tensor(p, q) -> np.ndarray:
    """Block-interleaved product placing ``p`` on the middle qubit.

    With ``q = [[A, B], [C, D]]`` in 2x2 blocks the result is
    ``[[p(x)A, p(x)B], [p(x)C, p(x)D]]``, so ``split_tensor(p, v (x) w) == v (x) p (x) w``.
    """
    p, q = as_matrix(p), as_matrix(q)
    if p.shape != (2, 2) or q.shape != (4, 4):
        raise DimensionError(f"split_tensor needs 2x2 and 4x4 inputs, got {p.shape} and {q.shape}")
    return np.block(
        [
            [np.kron(p, q[:2, :2]), np.kron(p, q[:2, 2:])],
            [np.kron(p, q[2:, :2]), np.kron(p, q[2:, 2:])],
        ]
    )


def partial_transpose(state, parties) -> np.ndarray:
    """Transpose the tensor factors of the qubits listed in ``parties`` (1-based).

    Works by permuting the row/column index pair of each selected qubit in the
    ``2n``-index tensor, so any subset of qubits is handled the same way.
    """
    m = as_matrix(state)
    n = qubit_count(m.shape[0])
    parties = sorted(set(int(k) for k in np.atleast_1d(parties)))
    if not parties:
        raise DimensionError("party set must be nonempty")
    if parties[0] < 1 or parties[-1] > n:
        raise DimensionError(f"party index out of range 1..{n}: {parties}")
    axes = list(range(2 * n))
    for k in parties:
        axes[k - 1], axes[n + k - 1] = axes[n + k - 1], axes[k - 1]
    return m.reshape([2] * (2 * n)).transpose(axes).reshape(2**n, 2**n)


def permute_qubits(m, order) -> np.ndarray:
    """Reorder the qubits of a state vector or square operator.

    ``order`` lists 1-based qubit labels; new qubit ``i`` is old qubit ``order[i]``.
    """
    arr = np.asarray(m, dtype=complex)
    perm = [k - 1 for k in order]
    n = len(perm)
    if arr.ndim == 1:
        return arr.reshape([2] * n).transpose(perm).reshape(-1)
    axes = perm + [n + k for k in perm]
    return arr.reshape([2] * (2 * n)).transpose(axes).reshape(2**n, 2**n)


def numeric_rank(m, rel_tol: float = DEFAULT_REL_TOL) -> int:
    """Count singular values above ``rel_tol * sigma_max`` (0 for the zero matrix)."""
    if rel_tol <= 0:
        raise ValueError("rel_tol must be positive")
    s = np.linalg.svd(as_matrix(m), compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > rel_tol * s[0]))


def _eigh_checked(m, tol: float = 1e-8):
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"matrix is not square: {m.shape}")
    _check_hermitian(m, tol)
    return np.linalg.eigh((m + m.conj().T) / 2)


def kernel_basis(m, rel_tol: float = DEFAULT_REL_TOL) -> np.ndarray:
    """Orthonormal kernel basis of a Hermitian matrix, one vector per column.

    Eigenvectors with ``|eigenvalue| <= rel_tol * max |eigenvalue|`` span the kernel.
    """
    w, v = _eigh_checked(m)
    top = np.max(np.abs(w)) if w.size else 0.0
    if top == 0:
        return v
    return v[:, np.abs(w) <= rel_tol * top]


def range_basis(m, rel_tol: float = DEFAULT_REL_TOL) -> np.ndarray:
    """Orthonormal basis of the range of a Hermitian matrix (complement of ``kernel_basis``)."""
    w, v = _eigh_checked(m)
    top = np.max(np.abs(w)) if w.size else 0.0
    if top == 0:
        return v[:, :0]
    return v[:, np.abs(w) > rel_tol * top]


def orthogonal_complement(basis) -> np.ndarray:
    """Orthonormal basis (columns) of the orthogonal complement of span(basis columns)."""
    b = as_matrix(basis)
    u, s, _ = np.linalg.svd(b, full_matrices=True)
    r = int(np.sum(s > DEFAULT_REL_TOL * s[0])) if s.size and s[0] > 0 else 0
    return u[:, r:]


def min_eigenvalue(m) -> float:
    return float(_eigh_checked(m)[0][0])


def is_ppt(state, tol: float = DEFAULT_REL_TOL):
    """PPT test over every nonempty proper subset of qubits.

    Returns ``(ok, report)`` where ``report`` maps each party subset (a tuple of
    1-based labels) to the minimum eigenvalue of that partial transpose. A subset
    passes when its minimum eigenvalue is at least ``-tol * trace``.
    """
    m = as_matrix(state)
    n = qubit_count(m.shape[0])
    tr = float(np.trace(m).real)
    report = {}
    for size in range(1, n):
        for subset in combinations(range(1, n + 1), size):
            report[subset] = min_eigenvalue(partial_transpose(m, subset))
    ok = all(v >= -tol * tr for v in report.values())
    return ok, report
