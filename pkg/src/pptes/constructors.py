"""Explicit three-qubit rank-four PPT entangled state families.

* ``upb_*``       states built from the three-qubit unextendible product basis
* ``type2_*``     the one-parameter family of zero-invariant states on the Bell basis
* ``qp_state``    states from six product vectors spanning a five-dimensional space
* ``example10_*`` the split-tensor zero-invariant family and its map onto ``type2_state``
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import BranchError, DegenerateInputError, ParameterError
from .qmat import MultiQubitState, numeric_rank, split_tensor, tensor
from .vecgeom import BELL, DEGENERATE_T_TOL, REAL_TOL

KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)


def _check_t(t) -> complex:
    t = complex(t)
    if abs(t) <= DEGENERATE_T_TOL or abs(t - 1) <= DEGENERATE_T_TOL:
        raise ParameterError(f"t = {t} is excluded (must avoid 0 and 1)")
    return t


def _outer(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex).ravel()
    return np.outer(v, v.conj())


# --------------------------------------------------------------------------- UPB


@dataclass(frozen=True)
class UpbSpec:
    theta1: float
    theta2: float
    theta3: float

    def __post_init__(self):
        for name in ("theta1", "theta2", "theta3"):
            th = getattr(self, name)
            if not 0 < th < np.pi / 2:
                raise ParameterError(f"{name} = {th} must lie in the open interval (0, pi/2)")

    @property
    def thetas(self) -> tuple:
        return (self.theta1, self.theta2, self.theta3)


def _x(th):
    return np.array([np.cos(th), np.sin(th)], dtype=complex)


def _xp(th):
    return np.array([-np.sin(th), np.cos(th)], dtype=complex)


def upb_factors(spec: UpbSpec) -> list:
    """Local factors ``(a_j, b_j, c_j)`` of the four UPB members."""
    t1, t2, t3 = spec.thetas
    return [
        (KET0, KET0, KET0),
        (KET1, _x(t2), _x(t3)),
        (_x(t1), KET1, _xp(t3)),
        (_xp(t1), _xp(t2), KET1),
    ]


def upb_vectors(spec: UpbSpec) -> np.ndarray:
    """The four normalized, pairwise orthogonal UPB members as columns of an 8x4 array."""
    return np.column_stack([tensor(a, b, c).ravel() for a, b, c in upb_factors(spec)])


def upb_state(spec: UpbSpec) -> MultiQubitState:
    """``(I_8 - sum_j xi_j xi_j^dagger) / 4``: trace one, rank four, kernel spanned by the UPB."""
    xi = upb_vectors(spec)
    return MultiQubitState((np.eye(8) - xi @ xi.conj().T) / 4)


def upb_invariant_closed_form(spec: UpbSpec) -> float:
    t1, t2, t3 = spec.thetas
    c, s = np.cos, np.sin
    return -0.25 * (c(t1) ** 2 * c(t2) ** 2 + s(t1) ** 2 * c(t3) ** 2 + s(t2) ** 2 * s(t3) ** 2)


def upb_bipartite_factors(spec: UpbSpec) -> list:
    """Closed-form ``(alpha_i, e_i)`` of the A|BC decomposition of ``upb_state`` (``e_i`` unnormalized)."""
    t1, t2, t3 = spec.thetas
    c2, s2, c3, s3 = np.cos(t2), np.sin(t2), np.cos(t3), np.sin(t3)
    e1 = np.array([-c2 * s3**2 / c3 - s2**2 / (c2 * c3), c2 * s3, s2 * c3, s2 * s3])
    e2 = np.array([0, c2 * s3, s2 * c3, s2 * s3])
    e3 = np.array([0, c2, -s3 / (s2 * c3), s2])
    e4 = np.array([0, -s2 / (c2 * s3), c3, s3])
    alphas = [KET1, KET0, _xp(t1), _x(t1)]
    return [(a, e.astype(complex)) for a, e in zip(alphas, (e1, e2, e3, e4))]


# --------------------------------------------------------------------------- type II family


def default_weights(t) -> tuple:
    """Weights ``(|t^2 - t|, |t - 1|, |t|, 1)`` that make the type-II family PPT."""
    t = complex(t)
    return (abs(t * t - t), abs(t - 1), abs(t), 1.0)


@dataclass(frozen=True)
class Type2Spec:
    t: complex
    weights: tuple = None

    def __post_init__(self):
        object.__setattr__(self, "t", _check_t(self.t))
        if self.weights is None:
            object.__setattr__(self, "weights", default_weights(self.t))
        if len(self.weights) != 4 or any(w <= 0 for w in self.weights):
            raise ParameterError("type-II weights must be four positive reals")
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))


def type2_local_factors(t) -> np.ndarray:
    """Columns ``(1,0), (0,1), (1,1), (t,1)``."""
    return np.array([[1, 0, 1, complex(t)], [0, 1, 1, 1]], dtype=complex)


def type2_state(spec: Type2Spec | complex, normalize: bool = False) -> MultiQubitState:
    """``sum_i w_i (a_i a_i^dagger) (x) (phi_i phi_i^dagger)`` with unnormalized Bell ``phi_i``.

    Unnormalized by default, matching the closed-form 8x8 display of the family.
    """
    if not isinstance(spec, Type2Spec):
        spec = Type2Spec(spec)
    a = type2_local_factors(spec.t)
    rho = sum(w * np.kron(_outer(a[:, i]), _outer(BELL[:, i])) for i, w in enumerate(spec.weights))
    if normalize:
        rho = rho / np.trace(rho).real
    return MultiQubitState(rho)


def type2_kernel_basis(t) -> np.ndarray:
    """The parametrized kernel ``(a, -(..)/2|t|^2, -(..)/2|t|^2, -a, b, c, d, b)`` for unit ``(a, b, c, d)``."""
    t = _check_t(t)
    at2 = abs(t) ** 2
    cols = []
    for a, b, c, d in np.eye(4):
        x2 = -((at2 + t) * c + (at2 - t) * d) / (2 * at2)
        x3 = -((at2 - t) * c + (at2 + t) * d) / (2 * at2)
        cols.append([a, x2, x3, -a, b, c, d, b])
    return np.array(cols, dtype=complex).T


def type2_ppt_blocks(lam1: float, lam2: float, lam3: float, t) -> tuple:
    """The 2x2 Schur-complement blocks ``(P, Q)`` left after congruence-reducing ``rho^{T_2}``.

    Applies to the weights ``(lam1, lam2, lam3, 1)``. Both blocks vanish exactly
    when ``rho^{T_2}`` has rank four, i.e. on the default weights.
    """
    t = complex(t)
    tb = t.conjugate()
    at2 = abs(t) ** 2
    if lam1 <= 0 or lam2 <= 0 or lam3 <= 0:
        raise ParameterError("weights must be positive")
    d1, d2 = lam3 + at2, lam3 + 1
    if d1 <= 0 or d2 <= 0:
        raise ParameterError("degenerate denominators")
    p11 = lam3 + at2 - lam1**2 / d1 - (lam3 + t) * (lam3 + tb) / d2
    p12 = lam2 * (lam3 + t) / d2 - lam1 * (lam3 + t) / d1
    p21 = lam2 * (lam3 + tb) / d2 - lam1 * (lam3 + tb) / d1
    p22 = lam3 * (1 - t) * (1 - tb) / d1 - lam2**2 / d2
    q11 = lam1 - (lam3 - at2) ** 2 / lam1 - (lam3 - t) * (lam3 - tb) / lam2
    q12 = (lam3 - t) * (1 - lam3) / lam2 - (lam3 - at2) * (lam3 - t) / lam1
    q21 = (lam3 - tb) * (1 - lam3) / lam2 - (lam3 - at2) * (lam3 - tb) / lam1
    q22 = lam2 - (lam3 - t) * (lam3 - tb) / lam1 - (lam3 - 1) ** 2 / lam2
    P = np.array([[p11, p12], [p21, p22]], dtype=complex)
    Q = np.array([[q11, q12], [q21, q22]], dtype=complex)
    return P, Q


def type2_partial_transpose_display(lam1: float, lam2: float, lam3: float, t) -> np.ndarray:
    """Closed form of ``rho^{T_2}`` for weights ``(lam1, lam2, lam3, 1)``."""
    t = complex(t)
    tb = t.conjugate()
    a = abs(t) ** 2
    l1, l2, l3 = lam1, lam2, lam3
    return np.array(
        [
            [l1, 0, 0, l3 - a, 0, 0, 0, l3 - t],
            [0, l3 + a, l1, 0, 0, l3 + t, 0, 0],
            [0, l1, l3 + a, 0, 0, 0, l3 + t, 0],
            [l3 - a, 0, 0, l1, l3 - t, 0, 0, 0],
            [0, 0, 0, l3 - tb, l2, 0, 0, l3 - 1],
            [0, l3 + tb, 0, 0, 0, l3 + 1, -l2, 0],
            [0, 0, l3 + tb, 0, 0, -l2, l3 + 1, 0],
            [l3 - tb, 0, 0, 0, l3 - 1, 0, 0, l2],
        ],
        dtype=complex,
    )


# --------------------------------------------------------------------------- Q_p family


class AlphaFormula(enum.Enum):
    EX13 = "ex13"
    EX17 = "ex17"


def _qp_vectors() -> list:
    e1, e2 = KET0, KET1
    return [
        tensor(e2, e1 + 2 * e2, e1),
        tensor(e2, e1 + e2, e1 + e2),
        tensor(e1, e2, e1 - e2),
        tensor(e1 + e2, e2, e1 + e2),
        tensor(e1 + 2 * e2, e1, e2),
        tensor(e1 + e2, e1 - 2 * e2, e2),
    ]


def qp_vectors() -> np.ndarray:
    """The six normalized product vectors ``z_1..z_6`` as columns."""
    return np.column_stack([v.ravel() / np.linalg.norm(v) for v in _qp_vectors()])


def qp_factors() -> list:
    """Local factors of ``z_1..z_6`` (unnormalized)."""
    e1, e2 = KET0, KET1
    return [
        (e2, e1 + 2 * e2, e1),
        (e2, e1 + e2, e1 + e2),
        (e1, e2, e1 - e2),
        (e1 + e2, e2, e1 + e2),
        (e1 + 2 * e2, e1, e2),
        (e1 + e2, e1 - 2 * e2, e2),
    ]


@dataclass(frozen=True)
class QpSpec:
    p: tuple
    alpha_formula: AlphaFormula = AlphaFormula.EX17

    def __post_init__(self):
        p = tuple(float(x) for x in self.p)
        if len(p) != 5 or any(x <= 0 for x in p):
            raise ParameterError("p must be five positive reals")
        if abs(sum(p) - 1) > 1e-12:
            raise ParameterError(f"p must sum to 1, got {sum(p)!r}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "alpha_formula", AlphaFormula(self.alpha_formula))

    @classmethod
    def line(cls, p1: float, alpha_formula=AlphaFormula.EX17) -> "QpSpec":
        """``p = (p1, 1/5, 1/5, 1/5, 2/5 - p1)``."""
        return cls((p1, 0.2, 0.2, 0.2, 0.4 - p1), alpha_formula)


def qp_alpha(spec: QpSpec) -> float:
    p1, p2, p3, p4, p5 = spec.p
    if spec.alpha_formula is AlphaFormula.EX13:
        return 2 / (9 * p1) + 2 / (9 * p2) + 2 / (9 * p3) + 8 / (81 * p4) + 125 / (81 * p5)
    return 1 / (2 * p1) + 2 / (5 * p2) + 1 / (5 * p3) + 2 / (5 * p4) + 1 / (2 * p5)


def qp_matrix(spec: QpSpec) -> np.ndarray:
    """``(alpha sum_i p_i z_i z_i^dagger - z_6 z_6^dagger) / (alpha - 1)`` without validation."""
    z = qp_vectors()
    alpha = qp_alpha(spec)
    mix = sum(pi * _outer(z[:, i]) for i, pi in enumerate(spec.p))
    return (alpha * mix - _outer(z[:, 5])) / (alpha - 1)


def qp_state(spec: QpSpec, tol: float = 1e-10) -> MultiQubitState:
    """The ``Q_p`` state; raises if the chosen ``alpha`` does not give a PSD rank-four matrix."""
    m = qp_matrix(spec)
    w = np.linalg.eigvalsh(m)
    if w[0] < -tol * w[-1] or numeric_rank(m, tol) != 4:
        raise DegenerateInputError(
            f"alpha formula {spec.alpha_formula.value} gives eigenvalues {np.round(w, 6).tolist()}, "
            "not a PSD rank-four state"
        )
    return MultiQubitState(m)


def qp_invariant_line(p1: float) -> float:
    """Closed-form invariant along ``p = (p1, 1/5, 1/5, 1/5, 2/5 - p1)``."""
    p5 = 0.4 - p1
    pre = (25 * p1 * p5 + 1) / (100 * (20 * p1 * p5 + 1) ** 2)
    return pre * (670 * p1**2 * p5 + 14 * p1 - 800 * p1**2 * p5**2 - 277 * p1 * p5 - 12)


# --------------------------------------------------------------------------- split-tensor family


def _example10_parts(t):
    t = _check_t(t)
    b = np.array([[1, 0, 1, -t], [0, 1, -1, 1]], dtype=complex)
    u = np.array(
        [[0, -t, -t, -t], [1, 0, 1, t], [-1, 0, 1, t], [0, 1, -1, -1]],
        dtype=complex,
    )
    at = abs(t)
    lam = (at**2 * abs(1 - t) ** 2, abs(1 - t) ** 2, at**2, 1.0)
    alpha = 1 / (5 * at**4 + 10 * at**2 + 1 + (3 * at**2 + 1) * abs(1 - t) ** 2)
    return b, u, lam, alpha


def example10_expressions(t) -> tuple:
    """The three expressions of the family: ``b (x) u``, ``b (x)_s u`` and ``u (x) b``."""
    b, u, lam, alpha = _example10_parts(t)
    bb = [_outer(b[:, i]) for i in range(4)]
    uu = [_outer(u[:, i]) for i in range(4)]
    first = alpha * sum(lam[i] * np.kron(bb[i], uu[i]) for i in range(4))
    second = alpha * sum(lam[i] * split_tensor(bb[i], uu[i]) for i in range(4))
    third = alpha * sum(lam[i] * np.kron(uu[i], bb[i]) for i in range(4))
    return first, second, third


def example10_state(t) -> MultiQubitState:
    return MultiQubitState(example10_expressions(t)[0])


def example10_connecting_transform(t, allow_unverified_branch: bool = False) -> np.ndarray:
    """Local ``W1 (x) W2 (x) W3`` with ``V rho V^dagger`` proportional to ``type2_state(t)``.

    The factors use principal square roots of ``t`` and ``1 - t``; that branch is only
    validated for real ``t`` in ``(0, 1)``. Other ``t`` raise ``BranchError`` unless
    ``allow_unverified_branch`` is set.
    """
    t = _check_t(t)
    in_range = abs(t.imag) <= REAL_TOL * (1 + abs(t.real)) and 0 < t.real < 1
    if not in_range and not allow_unverified_branch:
        raise BranchError(f"connecting transform branch is only validated for real t in (0, 1), got {t}")
    if in_range:
        t = complex(t.real)
    st = np.sqrt(t)
    s1 = np.sqrt(1 - t)
    w1 = np.diag([1, -1]).astype(complex)
    w2 = np.array([[(st - 1) / s1, (st - t) / s1], [1, st]], dtype=complex)
    w3 = np.array([[1, st], [(1 - st) / s1, (t - st) / s1]], dtype=complex)
    return tensor(w1, w2, w3)
