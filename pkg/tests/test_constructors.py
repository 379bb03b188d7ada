import itertools

import numpy as np
import pytest

from pptes.constructors import (
    AlphaFormula,
    QpSpec,
    Type2Spec,
    UpbSpec,
    default_weights,
    example10_connecting_transform,
    example10_expressions,
    example10_state,
    qp_factors,
    qp_invariant_line,
    qp_matrix,
    qp_state,
    qp_vectors,
    type2_kernel_basis,
    type2_local_factors,
    type2_partial_transpose_display,
    type2_ppt_blocks,
    type2_state,
    upb_bipartite_factors,
    upb_factors,
    upb_invariant_closed_form,
    upb_state,
    upb_vectors,
)
from pptes.errors import BranchError, DegenerateInputError, ParameterError
from pptes.lorentz import lorentz_invariant
from pptes.qmat import is_ppt, kernel_basis, numeric_rank, partial_transpose, tensor

from conftest import QP_P1, subspace_distance


def _display_type2(t):
    """The closed-form 8x8 matrix of the type-II family, entry by entry."""
    t = complex(t)
    a, at, b, tb = abs(t * t - t), abs(t), abs(t - 1), t.conjugate()
    at2 = at**2
    return np.array(
        [
            [a, 0, 0, a, 0, 0, 0, 0],
            [0, at + at2, at - at2, 0, 0, at + t, at - t, 0],
            [0, at - at2, at + at2, 0, 0, at - t, at + t, 0],
            [a, 0, 0, a, 0, 0, 0, 0],
            [0, 0, 0, 0, b, 0, 0, -b],
            [0, at + tb, at - tb, 0, 0, at + 1, at - 1, 0],
            [0, at - tb, at + tb, 0, 0, at - 1, at + 1, 0],
            [0, 0, 0, 0, -b, 0, 0, b],
        ]
    )


# --------------------------------------------------------------------------- UPB


def test_upb_spec_rejects_out_of_range():
    for bad in (0, np.pi / 2, -0.1, 2.0):
        with pytest.raises(ParameterError):
            UpbSpec(bad, 0.5, 0.5)


def test_upb_members_orthonormal(rng):
    xi = upb_vectors(UpbSpec(*rng.uniform(0.1, 1.4, 3)))
    np.testing.assert_allclose(xi.conj().T @ xi, np.eye(4), atol=1e-14)


def _unextendible(factors, tol=1e-12):
    """A product vector orthogonal to every member must be orthogonal to each one in some party.

    Enumerate all 3^4 ways of assigning a party to each member. A party that receives
    two members with independent factors would need a zero factor, so the
    assignment is infeasible. The set is unextendible iff every assignment is infeasible.
    """
    for assign in itertools.product(range(3), repeat=4):
        feasible = True
        for party in range(3):
            vecs = [factors[j][party] for j in range(4) if assign[j] == party]
            if len(vecs) >= 2 and np.linalg.matrix_rank(np.column_stack(vecs), tol) == 2:
                feasible = False
        if feasible:
            return False
    return True


def test_upb_unextendible_by_case_analysis(rng):
    for _ in range(10):
        assert _unextendible(upb_factors(UpbSpec(*rng.uniform(0.05, 1.5, 3))))


def test_case_analysis_detects_extendible_set():
    e0, e1 = np.array([1, 0]), np.array([0, 1])
    basis_members = [(e0, e0, e0), (e0, e0, e1), (e1, e1, e0), (e1, e1, e1)]
    assert not _unextendible(basis_members)


def test_upb_state_structure(rng):
    spec = UpbSpec(*rng.uniform(0.1, 1.4, 3))
    rho = upb_state(spec)
    assert rho.trace == pytest.approx(1)
    assert numeric_rank(rho) == 4
    assert is_ppt(rho)[0]
    assert subspace_distance(kernel_basis(rho), upb_vectors(spec)) < 1e-12


def test_upb_invariant_closed_form_symmetric_point():
    spec = UpbSpec(np.pi / 4, np.pi / 4, np.pi / 4)
    assert upb_invariant_closed_form(spec) == pytest.approx(-0.1875)
    assert lorentz_invariant(upb_state(spec)).value == pytest.approx(-0.1875, abs=1e-14)


def test_upb_bipartite_factors_span_range(rng):
    spec = UpbSpec(*rng.uniform(0.1, 1.4, 3))
    rho = upb_state(spec).matrix
    pairs = upb_bipartite_factors(spec)
    vecs = np.column_stack([np.kron(a, e) for a, e in pairs])
    np.testing.assert_allclose(upb_vectors(spec).conj().T @ vecs, 0, atol=1e-12)
    recon = sum(np.outer(v, v.conj()) / np.vdot(v, v).real for v in vecs.T) / 4
    np.testing.assert_allclose(recon, rho, atol=1e-12)


# --------------------------------------------------------------------------- type II


@pytest.mark.parametrize("t", [2, 0.3, -1.5, 0.4 + 0.9j, 1j, -2 - 0.5j])
def test_type2_matches_closed_form_display(t):
    np.testing.assert_allclose(type2_state(t).matrix, _display_type2(t), atol=1e-14)


def test_type2_normalize_flag():
    assert type2_state(2, normalize=True).trace == pytest.approx(1)
    # weights (2, 1, 2, 1), |a_i|^2 = (1, 1, 2, 5), |phi_i|^2 = 2
    assert type2_state(Type2Spec(2)).trace == pytest.approx(2 * (2 + 1 + 4 + 5))


@pytest.mark.parametrize("t", [0, 1])
def test_type2_rejects_excluded_t(t):
    with pytest.raises(ParameterError):
        type2_state(t)


def test_type2_spec_weights():
    assert Type2Spec(2).weights == (2.0, 1.0, 2.0, 1.0)
    with pytest.raises(ParameterError):
        Type2Spec(2, weights=(1, 1, 0, 1))
    with pytest.raises(ParameterError):
        Type2Spec(2, weights=(1, 1, 1))


def test_type2_local_factors():
    np.testing.assert_array_equal(type2_local_factors(3), [[1, 0, 1, 3], [0, 1, 1, 1]])


@pytest.mark.parametrize("t", [2, 0.3, -1.5, 0.4 + 0.9j])
def test_type2_kernel_closed_form(t):
    rho = type2_state(t).matrix
    k = type2_kernel_basis(t)
    np.testing.assert_allclose(rho @ k, 0, atol=1e-12)
    assert subspace_distance(k, kernel_basis(rho)) < 1e-10


@pytest.mark.parametrize("t", [2, 0.3, -1.5, 0.4 + 0.9j])
def test_partial_transpose_display(t):
    rng = np.random.default_rng(7)
    lam = rng.uniform(0.2, 2, 3)
    rho = type2_state(Type2Spec(t, weights=(*lam, 1))).matrix
    disp = type2_partial_transpose_display(*lam, t)
    np.testing.assert_allclose(partial_transpose(rho, [2]), disp, atol=1e-13)
    np.testing.assert_allclose(partial_transpose(rho, [3]), disp, atol=1e-13)


@pytest.mark.parametrize("t", [2, 0.3, -1.5, 0.4 + 0.9j, -0.2 + 3j])
def test_ppt_blocks_vanish_on_default_weights(t):
    lam = default_weights(t)[:3]
    P, Q = type2_ppt_blocks(*lam, t)
    assert np.linalg.norm(P) < 1e-12 and np.linalg.norm(Q) < 1e-12
    assert numeric_rank(type2_partial_transpose_display(*lam, t)) == 4


def test_ppt_blocks_reject_nonpositive_weights():
    with pytest.raises(ParameterError):
        type2_ppt_blocks(0, 1, 1, 2)


# --------------------------------------------------------------------------- Q_p


def test_qp_vectors_span_five_dimensions():
    z = qp_vectors()
    assert z.shape == (8, 6)
    assert np.linalg.matrix_rank(z) == 5
    for j, (a, b, c) in enumerate(qp_factors()):
        v = tensor(a, b, c).ravel()
        np.testing.assert_allclose(v / np.linalg.norm(v), z[:, j])


def test_qp_spec_validation():
    with pytest.raises(ParameterError):
        QpSpec((0.5, 0.5, 0, 0, 0))
    with pytest.raises(ParameterError):
        QpSpec((0.3, 0.2, 0.2, 0.2, 0.2))
    assert QpSpec.line(0.3).p == pytest.approx((0.3, 0.2, 0.2, 0.2, 0.1))


@pytest.mark.parametrize("p1", QP_P1)
def test_qp_state_valid(p1):
    rho = qp_state(QpSpec.line(p1))
    assert rho.trace == pytest.approx(1)
    assert numeric_rank(rho) == 4
    assert is_ppt(rho)[0]


@pytest.mark.parametrize("p1", [0.05, 0.2, 0.3, *QP_P1])
def test_qp_invariant_closed_form(p1):
    rho = qp_state(QpSpec.line(p1))
    assert lorentz_invariant(rho).value == pytest.approx(qp_invariant_line(p1), abs=1e-12)


@pytest.mark.parametrize("p1", QP_P1)
def test_qp_alternative_alpha_is_not_rank_four(p1):
    spec = QpSpec.line(p1, AlphaFormula.EX13)
    assert numeric_rank(qp_matrix(spec)) == 5
    with pytest.raises(DegenerateInputError):
        qp_state(spec)


def test_qp_kernel_contains_all_zero_product():
    rho = qp_state(QpSpec.line(QP_P1[0])).matrix
    e000 = np.zeros(8)
    e000[0] = 1
    np.testing.assert_allclose(rho @ e000, 0, atol=1e-14)


# --------------------------------------------------------------------------- split-tensor family


@pytest.mark.parametrize("t", [0.2, 0.5, 0.8])
def test_example10_expressions_agree(t):
    a, b, c = example10_expressions(t)
    np.testing.assert_allclose(a, b, atol=1e-14)
    np.testing.assert_allclose(a, c, atol=1e-14)
    rho = example10_state(t)
    assert rho.trace == pytest.approx(1)
    assert numeric_rank(rho) == 4
    assert is_ppt(rho)[0]
    assert abs(lorentz_invariant(rho).value) < 1e-14


@pytest.mark.parametrize("t", [0.2, 0.5, 0.8])
def test_example10_connecting_transform(t):
    v = example10_connecting_transform(t)
    mapped = v @ example10_state(t).matrix @ v.conj().T
    target = type2_state(t).matrix
    np.testing.assert_allclose(mapped / np.trace(mapped), target / np.trace(target), atol=1e-12)


@pytest.mark.parametrize("t", [2, -1, 0.3 + 0.4j])
def test_connecting_transform_branch_gate(t):
    with pytest.raises(BranchError):
        example10_connecting_transform(t)
    v = example10_connecting_transform(t, allow_unverified_branch=True)
    assert v.shape == (8, 8)
