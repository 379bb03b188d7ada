"""Acceptance criteria 1-10, each at its stated tolerance.

Every test records a one-line verdict that is printed in the terminal summary.
"""

import numpy as np
import pytest

from pptes.classify import (
    SloccVerdict,
    StateType,
    UpbVerdict,
    characteristic_set,
    classify,
    kernel_products,
    slocc_compare,
    verify_rank4_pptes,
)
from pptes.constructors import (
    QpSpec,
    UpbSpec,
    default_weights,
    example10_connecting_transform,
    example10_state,
    qp_state,
    type2_kernel_basis,
    type2_partial_transpose_display,
    type2_ppt_blocks,
    type2_state,
    upb_invariant_closed_form,
    upb_state,
)
from pptes.errors import ConditionViolation
from pptes.lorentz import conjecture_state, lorentz_invariant, random_local_sl
from pptes.products import Partition, bipartite_products_in_subspace
from pptes.qmat import is_ppt, kernel_basis, numeric_rank
from pptes.vecgeom import BELL, bell_transform

from conftest import QP_P1, QP_T, parallel, random_complex, random_t, record, subspace_distance

T_KINDS = ("negative", "unit", "large", "complex")


def _rng(number):
    return np.random.default_rng(1000 + number)


def _orbit_distance(orbit, value):
    return min(abs(v - value) for v in orbit.values)


def _finish(number, failures, detail):
    record(number, not failures, detail if not failures else f"{detail}; failures: {failures[:3]}")
    assert not failures, failures


def test_criterion_01_qp_invariant():
    failures, values = [], []
    for p1 in QP_P1:
        rho = qp_state(QpSpec.line(p1))
        ok_ppt, _ = is_ppt(rho)
        if numeric_rank(rho) != 4 or not ok_ppt:
            failures.append(f"p1={p1}: not a PSD rank-four PPT state")
        inv = lorentz_invariant(rho).value
        values.append(inv)
        if abs(inv - (-0.063)) > 1e-3:
            failures.append(f"p1={p1}: I={inv}")
    _finish(1, failures, f"I = {values[0]:.15g}, {values[1]:.15g} (target -0.063 +/- 1e-3)")


def test_criterion_02_qp_characteristic_parameters():
    failures, dists = [], []
    states = [qp_state(QpSpec.line(p1)) for p1 in QP_P1]
    for rho, t in zip(states, QP_T):
        d = _orbit_distance(characteristic_set(rho), t)
        dists.append(d)
        if d > 1e-6:
            failures.append(f"t={t}: orbit distance {d:.2e}")
    verdict = slocc_compare(*states)
    if verdict is not SloccVerdict.NOT_EQUIVALENT:
        failures.append(f"slocc_compare gave {verdict.value}")
    _finish(2, failures, f"orbit distances {dists[0]:.1e}, {dists[1]:.1e}; compare -> {verdict.value}")


def test_criterion_03_upb_closed_form():
    grid = (np.arange(10) + 0.5) * (np.pi / 2) / 10
    failures, worst, lo, hi = [], 0.0, 0.0, -1.0
    for th in np.array(np.meshgrid(grid, grid, grid)).reshape(3, -1).T:
        spec = UpbSpec(*th)
        inv = lorentz_invariant(upb_state(spec)).value
        err = abs(inv - upb_invariant_closed_form(spec))
        worst = max(worst, err)
        lo, hi = min(lo, inv), max(hi, inv)
        if err > 1e-10 or not -0.25 < inv < 0:
            failures.append(f"theta={th}: I={inv}, err={err:.1e}")
    _finish(3, failures, f"1000 grid points, max deviation {worst:.1e}, range [{lo:.4f}, {hi:.4f}]")


def test_criterion_04_type2_family():
    rng = _rng(4)
    failures, worst_inv, worst_dist = [], 0.0, 0.0
    for k in range(50):
        t = random_t(rng, T_KINDS[k % 4])
        rho = type2_state(t)
        rep = verify_rank4_pptes(rho)
        if not rep.passed:
            failures.append(f"t={t}: verification failed {rep.failures}")
        inv = max(abs(lorentz_invariant(rho).value), abs(lorentz_invariant(rho.normalized()).value))
        worst_inv = max(worst_inv, inv)
        if inv > 1e-10:
            failures.append(f"t={t}: I={inv:.1e}")
        dist = subspace_distance(kernel_basis(rho), type2_kernel_basis(t))
        worst_dist = max(worst_dist, dist)
        if dist > 1e-10:
            failures.append(f"t={t}: kernel distance {dist:.1e}")
        for part in Partition:
            recs = kernel_products(rho, part)
            if len(recs) != 4 or any(r.is_tripartite for r in recs):
                failures.append(f"t={t}: kernel products across {part.label} wrong")
    _finish(4, failures, f"50 values of t, max |I| {worst_inv:.1e}, max kernel distance {worst_dist:.1e}")


def test_criterion_05_ppt_blocks():
    rng = _rng(5)
    failures, worst_on, least_off = [], 0.0, np.inf
    for k in range(50):
        t = random_t(rng, T_KINDS[k % 4])
        lam = np.array(default_weights(t)[:3])
        P, Q = type2_ppt_blocks(*lam, t)
        on = max(np.linalg.norm(P), np.linalg.norm(Q))
        worst_on = max(worst_on, on)
        rank_on = numeric_rank(type2_partial_transpose_display(*lam, t), 1e-9)
        if on > 1e-12 or rank_on != 4:
            failures.append(f"on D t={t}: block norm {on:.1e}, rank {rank_on}")

        delta = rng.uniform(0.05, 0.3, 3) * rng.choice([-1, 1], 3) * (rng.random(3) < 0.7)
        if not delta.any():
            delta[0] = 0.1
        lam_off = lam * (1 + delta)
        P, Q = type2_ppt_blocks(*lam_off, t)
        off = max(np.linalg.norm(P), np.linalg.norm(Q))
        least_off = min(least_off, off)
        rank_off = numeric_rank(type2_partial_transpose_display(*lam_off, t), 1e-9)
        if off < 1e-4:
            failures.append(f"off D t={t}, delta={delta}: block norm {off:.1e}")
        if (off <= 1e-12) != (rank_off == 4):
            failures.append(f"off D t={t}: block verdict disagrees with rank {rank_off}")
    _finish(5, failures, f"max block norm on D {worst_on:.1e}, min off D {least_off:.1e}")


def test_criterion_06_connecting_transform():
    rng = _rng(6)
    failures, worst = [], 0.0
    for _ in range(20):
        t = rng.uniform(0.01, 0.99)
        v = example10_connecting_transform(t)
        mapped = v @ example10_state(t).matrix @ v.conj().T
        target = type2_state(t).matrix
        mapped = mapped * (np.trace(target) / np.trace(mapped))
        dev = np.max(np.abs(mapped - target)) / np.max(np.abs(target))
        worst = max(worst, dev)
        if dev > 1e-8:
            failures.append(f"t={t}: deviation {dev:.1e}")
    _finish(6, failures, f"20 values of t, max relative deviation {worst:.1e}")


def _well_conditioned(rng, n, limit=20.0):
    while True:
        m = random_complex(rng, n, n)
        if np.linalg.cond(m) <= limit:
            return m


def test_criterion_07_bell_transform():
    rng = _rng(7)
    failures, worst = [], 0.0
    for _ in range(100):
        p0, q0 = _well_conditioned(rng, 2), _well_conditioned(rng, 2)
        d0 = np.diag(np.exp(rng.uniform(-1, 1, 4)) * np.exp(2j * np.pi * rng.random(4)))
        psis = np.kron(p0, q0) @ BELL @ d0
        bt = bell_transform(psis)
        err = np.max(np.abs(bt.W @ psis @ bt.D - BELL))
        worst = max(worst, err)
        if err > 1e-8:
            failures.append(f"round trip error {err:.1e}")
    rejected = 0
    for _ in range(100):
        psis = random_complex(rng, 4, 4)
        assert all(abs(np.linalg.det(psis[:, j].reshape(2, 2))) > 1e-6 for j in range(4))
        try:
            bell_transform(psis)
        except ConditionViolation:
            rejected += 1
    if rejected != 100:
        failures.append(f"only {rejected}/100 violating quadruples rejected")
    _finish(7, failures, f"max round-trip error {worst:.1e}, rejected {rejected}/100")


def test_criterion_08_end_to_end():
    rng = _rng(8)
    failures = []

    def same(r1, r2):
        if r1.type is not r2.type or r1.upb_verdict is not r2.upb_verdict:
            return False
        o1 = r1.canonical_t_orbit or r1.characteristic_set
        o2 = r2.canonical_t_orbit or r2.characteristic_set
        return o1.same_as(o2, 1e-6)

    for _ in range(20):
        rho = upb_state(UpbSpec(*rng.uniform(0.05, np.pi / 2 - 0.05, 3)))
        rep = classify(rho)
        if (rep.type, rep.upb_verdict) != (StateType.TYPE_I, UpbVerdict.CONSTRUCTIBLE):
            failures.append(f"UPB state gave {rep.type.value}, {rep.upb_verdict.value}")
        if not same(rep, classify(rho.conjugated(random_local_sl(3, rng)))):
            failures.append("UPB state unstable under local conjugation")
    for p1 in QP_P1:
        rho = qp_state(QpSpec.line(p1))
        rep = classify(rho)
        if (rep.type, rep.upb_verdict) != (StateType.TYPE_I, UpbVerdict.NOT_CONSTRUCTIBLE):
            failures.append(f"Q_p gave {rep.type.value}, {rep.upb_verdict.value}")
        if not same(rep, classify(rho.conjugated(random_local_sl(3, rng)))):
            failures.append("Q_p unstable under local conjugation")
    for k in range(20):
        t = random_t(rng, T_KINDS[k % 4])
        rho = type2_state(t)
        rep = classify(rho)
        if rep.type is not StateType.TYPE_II or _orbit_distance(rep.canonical_t_orbit, t) > 1e-6 * (1 + abs(t)):
            failures.append(f"type2({t}) gave {rep.type.value}")
        if not same(rep, classify(rho.conjugated(random_local_sl(3, rng)))):
            failures.append(f"type2({t}) unstable under local conjugation")
    _finish(8, failures, "20 UPB, 2 Q_p, 20 type-II states plus local conjugates")


def test_criterion_09_invariant_ranges():
    rng = _rng(9)
    failures, samples = [], 0

    def check_zero_rank(inv, rank, n):
        if abs(inv) <= 1e-12 and rank > 2 ** (n - 1):
            failures.append(f"n={n}: zero invariant with rank {rank}")

    for n in (2, 3, 4):
        d = 2**n
        xs = random_complex(rng, 10_000, d)
        xs /= np.linalg.norm(xs, axis=1, keepdims=True)
        for x in xs:
            inv = lorentz_invariant(np.outer(x, x.conj())).value
            if n % 2 and abs(inv) > 1e-12:
                failures.append(f"pure n={n}: I={inv:.1e}")
            if not n % 2 and not -1e-12 <= inv <= 1 + 1e-12:
                failures.append(f"pure n={n}: I={inv}")
            check_zero_rank(inv, 1, n)
        ys = random_complex(rng, 10_000, d)
        ys /= np.linalg.norm(ys, axis=1, keepdims=True)
        cs = rng.uniform(0, 1, 10_000)
        for x, y, c in zip(xs, ys, cs):
            rho = c * np.outer(x, x.conj()) + (1 - c) * np.outer(y, y.conj())
            inv = lorentz_invariant(rho).value
            if n % 2 and not -0.5 - 1e-12 <= inv <= 1e-12:
                failures.append(f"rank-2 n={n}: I={inv}")
            if not n % 2 and not (-1e-12 <= inv < 1):
                failures.append(f"rank-2 n={n}: I={inv}")
            check_zero_rank(inv, 2, n)
        for k in range(1, d + 1):
            g = random_complex(rng, d, k)
            rho = g @ g.conj().T
            rho /= np.trace(rho).real
            check_zero_rank(lorentz_invariant(rho).value, numeric_rank(rho), n)
        samples += 20_000 + d
    for rho in (type2_state(2, normalize=True), example10_state(0.4)):
        check_zero_rank(lorentz_invariant(rho).value, numeric_rank(rho), 3)
    worst = 0.0
    for m in range(2, 13):
        inv = lorentz_invariant(conjecture_state(3, m, seed=m)).value
        worst = max(worst, abs(inv + 0.5))
        if abs(inv + 0.5) > 1e-10:
            failures.append(f"conjecture m={m}: I={inv}")
    _finish(9, failures, f"{samples} sampled states; conjecture family max |I + 1/2| {worst:.1e}")


def test_criterion_10_product_vector_oracle():
    rng = _rng(10)
    failures, worst = [], 0.0
    for _ in range(200):
        local = random_complex(rng, 2, 4)
        remote = random_complex(rng, 4, 4)
        planted = np.column_stack([np.kron(local[:, i], remote[:, i]) for i in range(4)])
        basis, _ = np.linalg.qr(planted @ random_complex(rng, 4, 4))
        recs = bipartite_products_in_subspace(basis, Partition.A_BC)
        if len(recs) != 4:
            failures.append(f"found {len(recs)} product vectors")
            continue
        worst = max([worst] + [r.residual for r in recs])
        for r in recs:
            hits = sum(parallel(r.vector, v) for v in planted.T)
            if r.residual > 1e-8 or hits != 1:
                failures.append(f"record with residual {r.residual:.1e} matches {hits} planted vectors")
    _finish(10, failures, f"200 subspaces, max residual {worst:.1e}")
