"""Geometry of four vectors in C^2 and Bell-basis reduction of two-qubit quadruples.

Four pairwise independent vectors of C^2 are determined, up to an invertible map
and rescaling of each vector, by a single cross-ratio ``t``. Permuting the four
vectors moves ``t`` through its anharmonic orbit of at most six values.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .errors import ConditionViolation, DegenerateInputError, DimensionError, ParameterError

INDEPENDENCE_TOL = 1e-10
DEGENERATE_T_TOL = 1e-8
REAL_TOL = 1e-8
ORBIT_TOL = 1e-6

STANDARD_TARGET = np.array([[1, 0, 1, 0], [0, 1, 1, 1]], dtype=complex)

# Unnormalized Bell vectors as columns: (|00>+|11>), (|00>-|11>), (|01>+|10>), (|01>-|10>).
BELL = np.array(
    [
        [1, 1, 0, 0],
        [0, 0, 1, 1],
        [0, 0, 1, -1],
        [1, -1, 0, 0],
    ],
    dtype=complex,
)
BELL_NORMALIZED = BELL / np.sqrt(2)
EPS2 = np.kron(np.array([[0, 1], [-1, 0]]), np.array([[0, 1], [-1, 0]])).astype(complex)


def det2(x, y) -> complex:
    return x[0] * y[1] - x[1] * y[0]


def as_quadruple(q) -> np.ndarray:
    """Return four 2-vectors as the columns of a 2x4 array, checking pairwise independence."""
    x = np.asarray(q, dtype=complex)
    if x.shape == (4, 2):
        x = x.T
    if x.shape != (2, 4):
        raise DimensionError(f"expected four vectors in C^2, got shape {x.shape}")
    for i in range(4):
        for j in range(i + 1, 4):
            scale = np.linalg.norm(x[:, i]) * np.linalg.norm(x[:, j])
            if abs(det2(x[:, i], x[:, j])) <= INDEPENDENCE_TOL * scale:
                raise DegenerateInputError(f"vectors {i + 1} and {j + 1} are linearly dependent")
    return x


def cross_ratio(q) -> complex:
    """``det(x1,x3) det(x2,x4) / (det(x1,x4) det(x2,x3))``."""
    x = np.asarray(q, dtype=complex)
    if x.shape == (4, 2):
        x = x.T
    x1, x2, x3, x4 = x.T
    return complex(det2(x1, x3) * det2(x2, x4) / (det2(x1, x4) * det2(x2, x3)))


def _check_t(t: complex) -> complex:
    t = complex(t)
    if abs(t) <= DEGENERATE_T_TOL or abs(t - 1) <= DEGENERATE_T_TOL:
        raise ParameterError(f"t = {t} is excluded (must avoid 0 and 1)")
    return t


def is_real(t: complex) -> bool:
    return abs(t.imag) <= REAL_TOL * (1 + abs(t.real))


@dataclass(frozen=True)
class StandardForm:
    """``W @ x @ D == [[1, 0, 1, t], [0, 1, 1, 1]]`` with ``D`` diagonal."""

    W: np.ndarray
    D: np.ndarray
    t: complex

    def target(self) -> np.ndarray:
        out = STANDARD_TARGET.copy()
        out[0, 3] = self.t
        return out


def standard_form(q) -> StandardForm:
    x = as_quadruple(q)
    (a, b), (c, d), (e, f), (g, h) = x.T
    w0 = np.array([[d, -c], [-b, a]])
    d0 = np.array([1 / (a * d - b * c), 1 / (a * d - b * c), 1 / (d * e - c * f), 1 / (a * h - b * g)])
    t1 = (a * f - b * e) / (d * e - c * f)
    t2 = (d * g - c * h) / (a * h - b * g)
    t = _check_t(t1 * t2)
    W = np.diag([t1, 1]) @ w0
    D = np.diag(d0 * np.array([1 / t1, 1, 1 / t1, 1]))
    return StandardForm(W=W, D=D, t=t)


def orbit_values(t: complex) -> tuple:
    """The six anharmonic images of ``t`` in a fixed order."""
    t = complex(t)
    return (t, 1 / t, 1 - t, 1 / (1 - t), 1 - 1 / t, t / (t - 1))


@dataclass(frozen=True)
class CharacteristicSet:
    """Orbit of a cross-ratio under the six anharmonic Mobius maps."""

    t: complex
    values: tuple

    def distinct(self, tol: float = ORBIT_TOL) -> list:
        out = []
        for v in self.values:
            if all(abs(v - u) > tol * (1 + abs(v) + abs(u)) for u in out):
                out.append(v)
        return out

    def contains(self, value: complex, tol: float = ORBIT_TOL) -> bool:
        value = complex(value)
        return any(abs(value - v) <= tol * (1 + abs(value) + abs(v)) for v in self.values)

    def same_as(self, other: "CharacteristicSet", tol: float = ORBIT_TOL) -> bool:
        # one shared member already determines the whole orbit
        return min(abs(u - v) - tol * (1 + abs(u) + abs(v)) for u in self.values for v in other.values) <= 0

    def canonical(self) -> complex:
        """Deterministic representative: the orbit member with smallest ``(|v - 1/2|, Re v, Im v)``."""
        return min(self.values, key=lambda v: (round(abs(v - 0.5), 12), round(v.real, 12), round(v.imag, 12)))


def t_orbit(t: complex) -> CharacteristicSet:
    t = _check_t(t)
    return CharacteristicSet(t=t, values=orbit_values(t))


class Pairing(enum.Enum):
    """Which pairs of the quadruple can be made simultaneously orthogonal."""

    A = ((0, 1), (2, 3))  # t < 0
    B = ((0, 3), (1, 2))  # 0 < t < 1
    C = ((0, 2), (1, 3))  # t > 1


def orthogonalizability(t: complex):
    """The ``Pairing`` for real ``t``, or ``None`` when ``t`` is not real."""
    t = _check_t(t)
    if not is_real(t):
        return None
    if t.real < 0:
        return Pairing.A
    if t.real < 1:
        return Pairing.B
    return Pairing.C


def orthogonalizing_transform(q):
    """Invertible ``V`` making the pairs named by :func:`orthogonalizability` orthogonal.

    Returns ``None`` when the cross-ratio is not real. The quadruple is reordered so
    that the designated pairs come first and second; its cross-ratio is then negative
    and ``Diag(1, sqrt(-t)) W`` of the reordered standard form does the job.
    """
    x = as_quadruple(q)
    pairing = orthogonalizability(standard_form(x).t)
    if pairing is None:
        return None
    (i, j), (k, l) = pairing.value
    sf = standard_form(x[:, [i, j, k, l]])
    ts = sf.t.real
    if ts >= 0:
        raise DegenerateInputError(f"reordered cross-ratio {sf.t} is not negative")
    return np.diag([1, np.sqrt(-ts)]) @ sf.W


def matrixize(psi) -> np.ndarray:
    """``(x, y, z, w) -> [[x, y], [z, w]]``."""
    psi = np.asarray(psi, dtype=complex).ravel()
    if psi.size != 4:
        raise DimensionError("matrixize needs a 4-vector")
    return psi.reshape(2, 2)


def vectorize(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.shape != (2, 2):
        raise DimensionError("vectorize needs a 2x2 matrix")
    return m.reshape(4)


@dataclass(frozen=True)
class BellTransform:
    """``(P (x) Q) @ psi_i * D[i, i]`` equals Bell column ``i`` for each of the four inputs."""

    P: np.ndarray
    Q: np.ndarray
    D: np.ndarray
    residual: float

    @property
    def W(self) -> np.ndarray:
        return np.kron(self.P, self.Q)


def bell_condition_residuals(psis) -> np.ndarray:
    """Relative values ``|psi_i^T (eps (x) eps) psi_j| / (|psi_i| |psi_j|)`` as a 4x4 array."""
    psis = np.asarray(psis, dtype=complex)
    norms = np.linalg.norm(psis, axis=0)
    return np.abs(psis.T @ EPS2 @ psis) / np.outer(norms, norms)


def bell_transform(psis, tol: float = 1e-8) -> BellTransform:
    """Local ``P (x) Q`` and diagonal ``D`` taking four entangled 2-qubit vectors to the Bell basis.

    ``psis`` holds the vectors as columns. Requires each vector entangled and
    ``psi_i^T (eps (x) eps) psi_j = 0`` for ``i != j``. The construction normalizes
    the first vector to the identity, diagonalizes the second by similarity, reads
    off the remaining off-diagonal structure, and rescales.
    """
    psis = np.asarray(psis, dtype=complex)
    if psis.shape != (4, 4):
        raise DimensionError(f"expected four 4-vectors as columns, got {psis.shape}")
    A = [matrixize(psis[:, i]) for i in range(4)]
    for i, a in enumerate(A):
        if abs(np.linalg.det(a)) <= tol * np.linalg.norm(a) ** 2:
            raise DegenerateInputError(f"vector {i + 1} is a product vector")
    res = bell_condition_residuals(psis)
    np.fill_diagonal(res, 0.0)
    worst = np.unravel_index(np.argmax(res), res.shape)
    if res[worst] > tol:
        raise ConditionViolation(
            f"pairwise condition fails for vectors {worst[0] + 1},{worst[1] + 1}: residual {res[worst]:.3e}",
            pair=(int(worst[0]), int(worst[1])),
            residual=float(res[worst]),
        )

    p0 = np.linalg.inv(A[0])
    q0 = np.eye(2, dtype=complex)
    a2p = p0 @ A[1] @ q0
    evals, evecs = np.linalg.eig(a2p)
    if abs(evals[0] - evals[1]) <= 1e-10 * (abs(evals[0]) + abs(evals[1])):
        raise DegenerateInputError("second matrix is not diagonalizable with distinct eigenvalues")
    # put the eigenvalue with the larger real part first so the output is deterministic
    order = np.argsort(-evals.real, kind="stable")
    evecs = evecs[:, order]
    p1 = np.linalg.inv(evecs)
    p1_inv = evecs
    App = [p1 @ p0 @ a @ q0 @ p1_inv for a in A]
    s1 = App[1][0, 0]
    b3, c3 = App[2][0, 1], App[2][1, 0]
    b4 = App[3][0, 1]
    s = c3 / b3
    rs = np.sqrt(s)
    p2 = np.diag([rs, 1])
    q2 = np.diag([1, rs])
    P = p2 @ p1 @ p0
    Q = (q0 @ p1_inv @ q2).T
    D = np.diag([1 / rs, 1 / (s1 * rs), 1 / (b3 * s), 1 / (b4 * s)])
    mapped = np.kron(P, Q) @ psis @ D
    residual = float(np.max(np.abs(mapped - BELL)))
    return BellTransform(P=P, Q=Q, D=D, residual=residual)


def _bell_images(p, q) -> np.ndarray:
    return BELL_NORMALIZED.conj().T @ np.kron(p, q) @ BELL_NORMALIZED


def _perm_from_unitary(p, q):
    overlaps = _bell_images(p, q)
    images = tuple(int(np.argmax(np.abs(overlaps[:, j]))) for j in range(4))
    return images


_S = np.diag([1, 1j])
_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
# Generators for adjacent transpositions (1 2), (2 3), (3 4) of the Bell basis.
_GENERATORS = [
    (_S, _S),
    (_H, _H),
    (_S, _S.conj()),
]


def _build_permutation_table() -> dict:
    identity = (np.eye(2, dtype=complex), np.eye(2, dtype=complex))
    table = {(0, 1, 2, 3): identity}
    queue = deque([(0, 1, 2, 3)])
    while queue:
        key = queue.popleft()
        p, q = table[key]
        for gp, gq in _GENERATORS:
            np_, nq = gp @ p, gq @ q
            img = _perm_from_unitary(np_, nq)
            if img not in table:
                table[img] = (np_, nq)
                queue.append(img)
    assert len(table) == 24
    return table


_PERMUTATION_TABLE = _build_permutation_table()


def bell_permutation_unitary(sigma):
    """Unitaries ``P, Q`` and phases with ``(P (x) Q) phi_j = exp(i beta_j) phi_sigma(j)``.

    ``sigma`` is given by its images ``(sigma(1), ..., sigma(4))`` using 1-based labels;
    the Bell vectors are the normalized columns of ``BELL``. Returns ``(P, Q, betas)``
    with ``betas`` in ``[0, 2 pi)``.
    """
    key = tuple(int(s) - 1 for s in sigma)
    if sorted(key) != [0, 1, 2, 3]:
        raise ParameterError(f"{sigma} is not a permutation of 1..4")
    p, q = _PERMUTATION_TABLE[key]
    overlaps = _bell_images(p, q)
    betas = np.array([np.angle(overlaps[key[j], j]) % (2 * np.pi) for j in range(4)])
    return p.copy(), q.copy(), betas


def all_permutations():
    """Every permutation of 1..4 as an image tuple."""
    return [tuple(s + 1 for s in p) for p in permutations(range(4))]
