"""Verification and classification of three-qubit rank-four PPT entangled states.

The pipeline:

1. verify the input (PSD, rank 4, PPT, partial transposes of rank 4, the range
   holds no tripartite product vector and exactly four bipartite ones per cut);
2. compute the Lorentz invariant of the trace-normalized state;
3. zero invariant (type II): bring the range product vectors to the canonical
   Bell-state family and report the orbit of its parameter;
4. nonzero invariant (type I): find the four kernel product vectors; if they are
   tripartite and in general position, their per-qubit cross-ratios decide whether
   the state comes from an unextendible product basis.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .constructors import type2_state
from .errors import (
    ConditionViolation,
    DegenerateInputError,
    DimensionError,
    ParameterError,
    VerificationError,
)
from .lorentz import lorentz_invariant
from .products import (
    Partition,
    bipartite_products_in_subspace,
    general_position,
    is_tripartite_product,
)
from .qmat import (
    DEFAULT_REL_TOL,
    as_matrix,
    hermitian_defect,
    is_ppt,
    kernel_basis,
    min_eigenvalue,
    numeric_rank,
    partial_transpose,
    range_basis,
)
from .vecgeom import (
    DEGENERATE_T_TOL,
    CharacteristicSet,
    bell_transform,
    cross_ratio,
    is_real,
    standard_form,
    t_orbit,
)

TYPE2_TOL = 1e-9
BORDERLINE_TOL = 1e-6
RESIDUAL_TOL = 1e-8
NEGATIVE_WEIGHT_TOL = 1e-10


class StateType(enum.Enum):
    TYPE_I = "TypeI"
    TYPE_II = "TypeII"


class UpbVerdict(enum.Enum):
    CONSTRUCTIBLE = "UpbConstructible"
    NOT_CONSTRUCTIBLE = "NotUpbConstructible"


class SloccVerdict(enum.Enum):
    EQUIVALENT = "Equivalent"
    NOT_EQUIVALENT = "NotEquivalent"
    INCONCLUSIVE = "Inconclusive"


def _cplx(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def orbit_to_dict(orbit: CharacteristicSet | None):
    if orbit is None:
        return None
    return {
        "t": _cplx(orbit.t),
        "canonical": _cplx(orbit.canonical()),
        "values": [_cplx(v) for v in orbit.values],
    }


# --------------------------------------------------------------------------- range analysis


def _matrix(state) -> np.ndarray:
    m = as_matrix(state)
    if m.shape != (8, 8):
        raise DimensionError(f"expected an 8x8 three-qubit matrix, got {m.shape}")
    return m


def range_products(state, partition=Partition.A_BC, tol: float = DEFAULT_REL_TOL) -> list:
    return bipartite_products_in_subspace(range_basis(_matrix(state), tol), partition)


def kernel_products(state, partition=Partition.A_BC, tol: float = DEFAULT_REL_TOL) -> list:
    return bipartite_products_in_subspace(kernel_basis(_matrix(state), tol), partition)


def _local_quadruple(records) -> np.ndarray:
    if len(records) != 4:
        raise DegenerateInputError(f"expected four product vectors, found {len(records)}")
    return np.column_stack([r.local_factor for r in records])


def characteristic_set(state, tol: float = DEFAULT_REL_TOL) -> CharacteristicSet:
    """Orbit of the cross-ratio of the qubit-1 factors of the range product vectors (A|BC cut)."""
    return t_orbit(cross_ratio(_local_quadruple(range_products(state, Partition.A_BC, tol))))


def upb_constructibility(t1, t2, t3) -> bool:
    """True iff all three are real and lie in pairwise different intervals of (-inf,0), (0,1), (1,inf)."""
    ts = []
    for t in (t1, t2, t3):
        t = complex(t)
        if abs(t) <= DEGENERATE_T_TOL or abs(t - 1) <= DEGENERATE_T_TOL:
            raise ParameterError(f"t = {t} is excluded (must avoid 0 and 1)")
        ts.append(t)
    if not all(is_real(t) for t in ts):
        return False
    bins = {0 if t.real < 0 else 1 if t.real < 1 else 2 for t in ts}
    return len(bins) == 3


# --------------------------------------------------------------------------- decomposition


@dataclass(frozen=True)
class BiseparableTerm:
    alpha: np.ndarray
    psi: np.ndarray
    weight: float


@dataclass(frozen=True)
class BiseparableDecomposition:
    terms: tuple
    residual: float

    def reconstruct(self) -> np.ndarray:
        return sum(
            t.weight * np.kron(np.outer(t.alpha, t.alpha.conj()), np.outer(t.psi, t.psi.conj()))
            for t in self.terms
        )


def decompose_biseparable(state, tol: float = DEFAULT_REL_TOL) -> BiseparableDecomposition:
    """``rho = sum_i w_i (alpha_i alpha_i^dagger) (x) (psi_i psi_i^dagger)`` across the A|BC cut.

    Factors are unit vectors taken from the four range product vectors; the weights
    solve a real least-squares problem against the vectorized rank-one terms.
    """
    rho = _matrix(state)
    recs = range_products(rho, Partition.A_BC, tol)
    _local_quadruple(recs)
    cols = []
    for r in recs:
        v = r.vector / np.linalg.norm(r.vector)
        cols.append(np.outer(v, v.conj()).ravel())
    A = np.column_stack(cols)
    A_real = np.vstack([A.real, A.imag])
    b_real = np.concatenate([rho.ravel().real, rho.ravel().imag])
    w, *_ = np.linalg.lstsq(A_real, b_real, rcond=None)
    top = float(np.max(np.abs(w)))
    if np.any(w < -NEGATIVE_WEIGHT_TOL * max(top, 1.0)):
        raise DegenerateInputError(f"negative weight in decomposition: {w.min():.3e}")
    w = np.clip(w, 0.0, None)
    for r in recs:
        if is_tripartite_product(r.vector) is not None:
            raise DegenerateInputError("range product vector is fully separable")
    terms = tuple(
        BiseparableTerm(alpha=r.local_factor, psi=r.remote_factor, weight=float(wi)) for r, wi in zip(recs, w)
    )
    dec = BiseparableDecomposition(terms=terms, residual=0.0)
    resid = float(np.linalg.norm(dec.reconstruct() - rho) / np.linalg.norm(rho))
    return BiseparableDecomposition(terms=terms, residual=resid)


# --------------------------------------------------------------------------- verification


@dataclass(frozen=True)
class Check:
    passed: bool
    detail: str


@dataclass
class VerificationReport:
    checks: dict = field(default_factory=dict)
    range_products: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks.values())

    @property
    def failures(self) -> list:
        return [k for k, c in self.checks.items() if not c.passed]

    def to_dict(self) -> dict:
        return {
            "entangled_rank4_ppt": self.passed,
            "checks": {k: {"passed": c.passed, "detail": c.detail} for k, c in self.checks.items()},
        }


def verify_rank4_pptes(state, tol: float = DEFAULT_REL_TOL) -> VerificationReport:
    """Run every structural check of a three-qubit rank-four PPTES; failures are report entries."""
    rep = VerificationReport()
    rho = _matrix(state)
    defect = hermitian_defect(rho)
    scale = max(1.0, float(np.max(np.abs(rho))))
    herm = defect <= tol * scale
    rep.checks["hermitian"] = Check(herm, f"max |M - M^dagger| = {defect:.3e}")
    if not herm:
        return rep
    rho = (rho + rho.conj().T) / 2
    tr = float(np.trace(rho).real)
    lo = min_eigenvalue(rho)
    rep.checks["psd"] = Check(tr > 0 and lo >= -tol * tr, f"trace = {tr:.6g}, min eigenvalue = {lo:.3e}")
    rank = numeric_rank(rho, tol)
    rep.checks["rank4"] = Check(rank == 4, f"rank = {rank}")
    ok, ppt = is_ppt(rho, tol)
    worst = min(ppt.values())
    rep.checks["ppt"] = Check(ok, f"min partial-transpose eigenvalue = {worst:.3e}")
    pt_ranks = {k: numeric_rank(partial_transpose(rho, [k]), tol) for k in (1, 2, 3)}
    rep.checks["pt_rank4"] = Check(
        all(r == 4 for r in pt_ranks.values()),
        ", ".join(f"rank(rho^T{k}) = {r}" for k, r in pt_ranks.items()),
    )
    if not (rep.checks["psd"].passed and rank == 4):
        rep.checks["range_ces"] = Check(False, "skipped: range is not four-dimensional")
        return rep
    basis = range_basis(rho, tol)
    counts, tripartite, worst_res = [], 0, 0.0
    for part in Partition:
        try:
            recs = bipartite_products_in_subspace(basis, part)
        except DegenerateInputError as exc:
            rep.checks[f"range_products_{part.name}"] = Check(False, str(exc))
            continue
        rep.range_products[part] = recs
        tripartite += sum(r.is_tripartite for r in recs)
        worst_res = max([worst_res] + [r.residual for r in recs])
        counts.append(len(recs))
        rep.checks[f"range_products_{part.name}"] = Check(
            len(recs) == 4 and all(r.residual <= RESIDUAL_TOL for r in recs),
            f"{len(recs)} product vectors across {part.label}",
        )
    rep.checks["range_ces"] = Check(
        tripartite == 0 and len(rep.range_products) == 3,
        f"{tripartite} fully separable range vectors found (max residual {worst_res:.1e})",
    )
    return rep


# --------------------------------------------------------------------------- classification


@dataclass
class ClassificationReport:
    invariant: float
    type: StateType
    kernel_products: list
    general_position: bool | None
    t_triple: tuple | None
    upb_verdict: UpbVerdict
    canonical_t_orbit: CharacteristicSet | None
    characteristic_set: CharacteristicSet
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "invariant": self.invariant,
            "type": self.type.value,
            "upb_verdict": self.upb_verdict.value,
            "general_position": self.general_position,
            "t_triple": None if self.t_triple is None else [_cplx(t) for t in self.t_triple],
            "canonical_t_orbit": orbit_to_dict(self.canonical_t_orbit),
            "characteristic_set": orbit_to_dict(self.characteristic_set),
            "kernel_products": [r.to_dict() for r in self.kernel_products],
            "diagnostics": self.diagnostics,
        }


def _canonicalize_type2(rho_n: np.ndarray, recs: list, diag: dict) -> CharacteristicSet:
    """Map the range product vectors onto the canonical Bell family and report its orbit."""
    alphas = np.column_stack([r.local_factor for r in recs])
    psis = np.column_stack([r.remote_factor for r in recs])
    sf = standard_form(alphas)
    try:
        bt = bell_transform(psis)
    except (ConditionViolation, DegenerateInputError) as exc:
        diag["canonical_form"] = f"Bell transform failed: {exc}"
        return t_orbit(sf.t)
    V = np.kron(sf.W, bt.W)
    mapped = V @ rho_n @ V.conj().T
    mapped = mapped / np.trace(mapped).real
    target = type2_state(sf.t, normalize=True).matrix
    diag["canonical_t"] = _cplx(sf.t)
    diag["bell_transform_residual"] = bt.residual
    diag["canonical_state_residual"] = float(np.max(np.abs(mapped - target)) / np.max(np.abs(target)))
    return t_orbit(sf.t)


def classify(state, tol: float = DEFAULT_REL_TOL, type2_tol: float = TYPE2_TOL) -> ClassificationReport:
    """Type, product-vector inventory and UPB verdict of a three-qubit rank-four PPTES.

    Raises ``VerificationError`` (carrying the report) when the input fails verification.
    """
    rho = _matrix(state)
    rep = verify_rank4_pptes(rho, tol)
    if not rep.passed:
        raise VerificationError(
            "input is not a verified rank-four PPT entangled state: " + ", ".join(rep.failures), report=rep
        )
    rho = (rho + rho.conj().T) / 2
    rho_n = rho / np.trace(rho).real
    inv = lorentz_invariant(rho_n)
    diag: dict = {"invariant_imag_residual": inv.imag_residual}
    range_a = rep.range_products[Partition.A_BC]
    char_set = t_orbit(cross_ratio(_local_quadruple(range_a)))
    kernel = kernel_products(rho_n, Partition.A_BC, tol)
    diag["kernel_product_count"] = len(kernel)
    diag["kernel_tripartite_count"] = sum(r.is_tripartite for r in kernel)

    if abs(inv.value) <= type2_tol:
        orbit = _canonicalize_type2(rho_n, range_a, diag)
        return ClassificationReport(
            invariant=inv.value,
            type=StateType.TYPE_II,
            kernel_products=kernel,
            general_position=None,
            t_triple=None,
            upb_verdict=UpbVerdict.NOT_CONSTRUCTIBLE,
            canonical_t_orbit=orbit,
            characteristic_set=char_set,
            diagnostics=diag,
        )

    if abs(inv.value) <= BORDERLINE_TOL:
        diag["borderline_invariant"] = True
    gp = None
    t_triple = None
    verdict = UpbVerdict.NOT_CONSTRUCTIBLE
    if len(kernel) != 4:
        diag["note"] = "kernel does not hold exactly four product vectors"
    elif not all(r.is_tripartite for r in kernel):
        diag["note"] = "kernel product vectors are not all fully separable"
    else:
        gp = general_position(kernel)
        if not gp:
            diag["note"] = "kernel vectors are fully separable but not in general position"
            diag["non_general_position_branch"] = True
        else:
            t_triple = tuple(
                cross_ratio(np.column_stack([r.tripartite_factors[k] for r in kernel])) for k in range(3)
            )
            if upb_constructibility(*t_triple):
                verdict = UpbVerdict.CONSTRUCTIBLE
    return ClassificationReport(
        invariant=inv.value,
        type=StateType.TYPE_I,
        kernel_products=kernel,
        general_position=gp,
        t_triple=t_triple,
        upb_verdict=verdict,
        canonical_t_orbit=None,
        characteristic_set=char_set,
        diagnostics=diag,
    )


def compare_reports(r1: ClassificationReport, r2: ClassificationReport) -> SloccVerdict:
    """SLOCC verdict from two classification reports.

    Different characteristic sets, or different types (whether the invariant vanishes
    is preserved by invertible local maps), rule equivalence out. Equal orbits decide
    equivalence for type II only.
    """
    if r1.type != r2.type:
        return SloccVerdict.NOT_EQUIVALENT
    if not r1.characteristic_set.same_as(r2.characteristic_set):
        return SloccVerdict.NOT_EQUIVALENT
    if r1.type is StateType.TYPE_II:
        return SloccVerdict.EQUIVALENT
    return SloccVerdict.INCONCLUSIVE


def slocc_compare(state1, state2, tol: float = DEFAULT_REL_TOL) -> SloccVerdict:
    return compare_reports(classify(state1, tol), classify(state2, tol))

