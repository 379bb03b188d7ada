"""Product vectors in four-dimensional subspaces of C^2 (x) C^4.

A vector ``a (x) psi`` lies in a subspace ``S`` exactly when it is orthogonal to an
orthonormal basis ``r_1..r_4`` of the complement. Splitting each ``r_i^dagger`` into
halves ``(u_i^dagger, w_i^dagger)`` and taking ``a = (s, 1)``, this reads
``(s U + W) psi = 0`` with ``U``, ``W`` the 4x4 matrices of stacked rows. So ``s`` is a
root of the quartic ``det(s U + W)``, and ``psi`` spans the null space. ``a = (1, 0)``
(the root at infinity) occurs exactly when ``det U = 0``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, DimensionError
from .qmat import as_matrix, orthogonal_complement, permute_qubits

FACTOR_TOL = 1e-8
INFINITY_TOL = 1e-9
ZERO_POLY_TOL = 1e-10
MERGE_TOL = 1e-7


class Partition(enum.Enum):
    """Bipartite cut of three qubits; the value is ``(local qubit, remote qubits)``."""

    A_BC = (1, (2, 3))
    B_AC = (2, (1, 3))
    C_AB = (3, (1, 2))

    @property
    def label(self) -> str:
        return {"A_BC": "A|BC", "B_AC": "B|AC", "C_AB": "C|AB"}[self.name]

    @property
    def order(self) -> tuple:
        local, remote = self.value
        return (local,) + remote

    @classmethod
    def parse(cls, text) -> "Partition":
        if isinstance(text, cls):
            return text
        key = str(text).upper().replace("|", "_")
        for p in cls:
            if p.name == key or p.label == str(text):
                return p
        raise ValueError(f"unknown partition {text!r}")


def _phase_fix(v: np.ndarray) -> np.ndarray:
    """Scale to unit norm with the largest-modulus entry real and positive."""
    v = np.asarray(v, dtype=complex)
    v = v / np.linalg.norm(v)
    k = int(np.argmax(np.abs(v) - 1e-12 * np.arange(v.size)))
    return v * (abs(v[k]) / v[k])


@dataclass(frozen=True)
class ProductVectorRecord:
    """A product vector found in a subspace.

    ``vector`` uses the original qubit order; ``remote_factor`` is ordered by the
    remote qubits of ``partition``. ``tripartite_factors`` are in qubit order 1, 2, 3
    and present only when the remote factor is itself a product.
    """

    vector: np.ndarray
    partition: Partition
    local_factor: np.ndarray
    remote_factor: np.ndarray
    tripartite_factors: tuple | None
    residual: float
    local_parameter: complex | None = None  # s with local factor proportional to (s, 1); None at infinity

    @property
    def is_tripartite(self) -> bool:
        return self.tripartite_factors is not None

    def to_dict(self) -> dict:
        def enc(v):
            return [[float(z.real), float(z.imag)] for z in np.asarray(v).ravel()]

        return {
            "partition": self.partition.label,
            "vector": enc(self.vector),
            "local_factor": enc(self.local_factor),
            "remote_factor": enc(self.remote_factor),
            "local_parameter": None
            if self.local_parameter is None
            else [self.local_parameter.real, self.local_parameter.imag],
            "tripartite_factors": None
            if self.tripartite_factors is None
            else [enc(f) for f in self.tripartite_factors],
            "residual": self.residual,
        }


def split_remote(psi, tol: float = FACTOR_TOL):
    """Factor a 2-qubit vector as ``b (x) c`` when ``|det F(psi)| <= tol |psi|^2``, else ``None``."""
    f = np.asarray(psi, dtype=complex).reshape(2, 2)
    nrm2 = np.linalg.norm(f) ** 2
    if abs(np.linalg.det(f)) > tol * nrm2:
        return None
    u, s, vh = np.linalg.svd(f)
    return _phase_fix(u[:, 0]), _phase_fix(vh[0])


def _quartic_coefficients(U: np.ndarray, W: np.ndarray) -> np.ndarray:
    """Coefficients (highest degree first) of ``det(s U + W)`` by interpolation on the unit circle."""
    k = np.arange(5)
    nodes = np.exp(2j * np.pi * k / 5)
    vals = np.array([np.linalg.det(z * U + W) for z in nodes])
    # vals_k = sum_j c_j w^(jk) with w = exp(2 pi i/5)  =>  c_j = (1/5) sum_k vals_k w^(-jk)
    low_to_high = np.fft.fft(vals) / 5
    return low_to_high[::-1]


def _is_identically_zero(U: np.ndarray, W: np.ndarray) -> bool:
    probes = [r * np.exp(1j * (0.3 + 2 * np.pi * k / 7)) for r in (0.5, 1.0, 2.0) for k in range(7)]
    for z in probes:
        m = z * U + W
        scale = np.linalg.norm(m, 2) ** 4
        if abs(np.linalg.det(m)) > ZERO_POLY_TOL * scale:
            return False
    return True


def _polish(s: complex, U: np.ndarray, W: np.ndarray) -> complex:
    """One Newton step on ``det(s U + W)`` using ``p'/p = tr((sU + W)^{-1} U)``; kept only if it helps."""
    m = s * U + W
    try:
        g = np.trace(np.linalg.solve(m, U))
    except np.linalg.LinAlgError:
        return s
    if g == 0 or not np.isfinite(g):
        return s
    cand = s - 1 / g
    before = np.linalg.svd(m, compute_uv=False)[-1]
    after = np.linalg.svd(cand * U + W, compute_uv=False)[-1]
    return cand if after < before else s


def _chordal(a, b) -> float:
    """Chordal distance on the Riemann sphere; ``None`` stands for infinity."""
    if a is None and b is None:
        return 0.0
    if a is None or b is None:
        z = b if a is None else a
        return 2 / np.sqrt(1 + abs(z) ** 2)
    return 2 * abs(a - b) / (np.sqrt(1 + abs(a) ** 2) * np.sqrt(1 + abs(b) ** 2))


def bipartite_products_in_subspace(basis, partition=Partition.A_BC, tol: float = FACTOR_TOL) -> list:
    """All product vectors (up to scalar) of a 4-dimensional subspace of three qubits under a cut.

    ``basis`` holds spanning 8-vectors as columns. Raises ``DegenerateInputError`` if
    the subspace holds a continuum of product vectors.
    """
    partition = Partition.parse(partition)
    b = as_matrix(basis)
    if b.shape[0] != 8:
        raise DimensionError(f"expected 8-vectors, got shape {b.shape}")
    order = partition.order
    bp = np.column_stack([permute_qubits(b[:, j], order) for j in range(b.shape[1])])
    comp = orthogonal_complement(bp)
    if comp.shape[1] != 4:
        raise DimensionError(f"subspace has dimension {8 - comp.shape[1]}, expected 4")
    rows = comp.conj().T
    U, W = rows[:, :4], rows[:, 4:]

    if _is_identically_zero(U, W):
        raise DegenerateInputError("subspace contains a continuum of product vectors")

    su = np.linalg.svd(U, compute_uv=False)
    scale = max(su[0], np.linalg.norm(W, 2))
    at_infinity = su[-1] <= INFINITY_TOL * scale

    coeffs = _quartic_coefficients(U, W)
    if at_infinity:
        coeffs = coeffs[1:]
    coeffs = np.trim_zeros(coeffs, "f")
    roots = [_polish(complex(s), U, W) for s in np.roots(coeffs)] if coeffs.size > 1 else []

    params = [None] if at_infinity else []
    for s in roots:
        if all(_chordal(s, q) > MERGE_TOL for q in params):
            params.append(s)

    inverse = [order.index(k) + 1 for k in (1, 2, 3)]
    records = []
    for s in params:
        if s is None:
            a = np.array([1, 0], dtype=complex)
            m = U
        else:
            a = np.array([s, 1], dtype=complex)
            m = s * U + W
        psi = _phase_fix(np.linalg.svd(m)[2][-1].conj())
        a = _phase_fix(a)
        v = np.kron(a, psi)
        residual = float(np.linalg.norm(rows @ v))
        remote = split_remote(psi, tol)
        tri = None
        if remote is not None:
            by_qubit = {order[0]: a, order[1]: remote[0], order[2]: remote[1]}
            tri = (by_qubit[1], by_qubit[2], by_qubit[3])
        records.append(
            ProductVectorRecord(
                vector=permute_qubits(v, inverse),
                partition=partition,
                local_factor=a,
                remote_factor=psi,
                tripartite_factors=tri,
                residual=residual,
                local_parameter=s,
            )
        )
    records.sort(key=_record_key)
    return records


def _record_key(rec: ProductVectorRecord):
    s = rec.local_parameter
    if s is None:
        return (1, 0.0, 0.0)
    return (0, round(s.real, 9), round(s.imag, 9))


def is_tripartite_product(v, tol: float = FACTOR_TOL):
    """Factors ``(a, b, c)`` with ``|v - a (x) b (x) c| <= tol |v|``, or ``None``."""
    v = np.asarray(v, dtype=complex).ravel()
    if v.size != 8:
        raise DimensionError("expected an 8-vector")
    nrm = np.linalg.norm(v)
    if nrm == 0:
        raise DimensionError("zero vector has no factorization")
    u, s, vh = np.linalg.svd(v.reshape(2, 4))
    a = u[:, 0] * s[0]
    rest = vh[0]
    u2, s2, vh2 = np.linalg.svd(rest.reshape(2, 2))
    b = u2[:, 0] * s2[0]
    c = vh2[0]
    approx = np.kron(np.kron(a, b), c)
    if np.linalg.norm(v - approx) > tol * nrm:
        return None
    return a, b, c


def _factor_lists(items) -> list:
    out = []
    for it in items:
        if isinstance(it, ProductVectorRecord):
            if it.tripartite_factors is None:
                raise DegenerateInputError("record has no tripartite factorization")
            out.append(it.tripartite_factors)
        else:
            out.append(tuple(np.asarray(f, dtype=complex).ravel() for f in it))
    return out


def general_position(items, tol: float = 1e-10) -> bool:
    """True iff, for every qubit, any two of the local factors are linearly independent.

    ``items`` are tripartite records or triples of 2-vectors.
    """
    factors = _factor_lists(items)
    for party in range(3):
        vecs = [f[party] for f in factors]
        for v in vecs:
            if np.linalg.norm(v) <= tol:
                return False
        for i in range(len(vecs)):
            for j in range(i + 1, len(vecs)):
                x, y = vecs[i], vecs[j]
                if abs(x[0] * y[1] - x[1] * y[0]) <= tol * np.linalg.norm(x) * np.linalg.norm(y):
                    return False
    return True
