"""Endoscopic data, eta invariants, transfer factors, the constancy identity."""

import random
from fractions import Fraction as F

import pytest

from helpers import random_algebra, random_fixed_invertible
from twistedgl.endoscopy import (EndoscopicDatum, enumerate_elliptic_data,
                                 eta_so, eta_sp, gs_constancy_check,
                                 is_quasisplit_even, quasisplit_space,
                                 regular_nilpotent_so, regular_nilpotent_sp,
                                 separation_check, split_odd_space,
                                 theta_space, transfer_factor,
                                 transfer_factor_whittaker)
from twistedgl.gsnorm import GSConfiguration, gs_section, make_ambient, random_config, rigidify, gs_norm
from twistedgl.linalg import det, identity, mat, mat_mul, mat_neg, transpose
from twistedgl.localfield import QP, hilbert_qp, square_class, square_class_table
from twistedgl.qform import (diag_form, direct_sum, hyperbolic, invariants,
                             norm_form, represents, scale, witt_decompose,
                             witt_equivalent)
from twistedgl.weil import Mu8, epsilon_half, weil_index

RNG = random.Random(11)


def test_datum_constraints():
    p3 = square_class(1, 3)
    EndoscopicDatum(0, 4, p3)
    with pytest.raises(ValueError):
        EndoscopicDatum(2, 2, p3)  # chi must be nontrivial when n_O = 2
    with pytest.raises(ValueError):
        EndoscopicDatum(0, 2, square_class(3, 3))
    with pytest.raises(ValueError):
        EndoscopicDatum(1, 3, p3)


def test_enumeration_counts():
    assert len(enumerate_elliptic_data(1, 3)) == 4
    data = enumerate_elliptic_data(2, 3)
    assert len(data) == 8
    by_no = {}
    for d in data:
        by_no.setdefault(d.n_O, []).append(d)
    assert len(by_no[0]) == 1 and len(by_no[2]) == 3 and len(by_no[4]) == 4
    assert len(enumerate_elliptic_data(1, 2)) == 8
    for n, p in ((1, 3), (2, 3), (1, 2), (3, 5)):
        data = enumerate_elliptic_data(n, p)
        assert len(set(data)) == len(data)
        for d in data:
            assert d.n_O + d.n_S == 2 * n


def test_quasisplit_space():
    for p in (2, 3, 5):
        for kcls in square_class_table(p):
            for c in square_class_table(p):
                for n_o in (2, 4, 6):
                    q = quasisplit_space(n_o, kcls, c, p)
                    assert q.dim == n_o
                    assert invariants(q).dpm == kcls
                    assert is_quasisplit_even(q)
                if kcls.is_trivial():
                    _, kernel = witt_decompose(quasisplit_space(4, kcls, c, p))
                    assert kernel.aniso_dim == 0


def test_quasisplit_space_c_changes_hasse_only():
    p = 3
    kcls = square_class(3, 3)
    q1 = quasisplit_space(4, kcls, square_class(1, p), p)
    nonnorm = next(x for x in square_class_table(p)
                   if hilbert_qp(kcls.representative, x.representative, p) == -1)
    q2 = quasisplit_space(4, kcls, nonnorm, p)
    i1, i2 = invariants(q1), invariants(q2)
    assert i1.dpm == i2.dpm and i1.hasse != i2.hasse


def test_theta_space():
    for n in (1, 2, 3):
        th = theta_space(n)
        assert len(th.theta_gram) == 2 * n
        assert transpose(th.theta_gram) == mat_neg(th.theta_gram)
        assert det(th.theta_gram) != 0


def test_regular_nilpotent_sp_base_case():
    nil = regular_nilpotent_sp(1)
    # basis (e_1, e_-1): N e_1 = 0, N e_-1 = e_1
    assert nil == ((F(0), F(1)), (F(0), F(0)))


def test_regular_nilpotent_sp_top_power():
    for n in (1, 2, 3, 4):
        nil = regular_nilpotent_sp(n)
        power = identity(2 * n)
        for _ in range(2 * n - 1):
            power = mat_mul(power, nil)
        # N^(2n-1) sends e_-1 (last basis vector) to e_1 (first), kills others
        cols = list(zip(*power))
        assert cols[-1][0] == 1
        assert all(v == 0 for v in cols[-1][1:])
        for col in cols[:-1]:
            assert all(v == 0 for v in col)
        assert mat_mul(power, nil) == tuple(tuple(F(0) for _ in range(2 * n))
                                            for _ in range(2 * n))


def test_eta_sp_is_one():
    for n in (1, 2, 3, 4, 5):
        for p in (2, 3, 5):
            assert eta_sp(n, p).is_trivial()


def test_eta_sp_scaling_invariance():
    from twistedgl.endoscopy import _rank_one_class
    nil = regular_nilpotent_sp(2)
    theta = theta_space(2).theta_gram
    power = identity(4)
    for _ in range(3):
        power = mat_mul(power, nil)
    scaled = tuple(tuple(4 * v for v in row) for row in mat_mul(theta, power))
    assert _rank_one_class(scaled, QP(3).p).is_trivial()


def test_regular_nilpotent_so_powers():
    for m in (1, 2, 3):
        for y in (1, 2, -3):
            q = split_odd_space(m, y, 5)
            nil = regular_nilpotent_so(q)
            power = identity(2 * m + 1)
            for _ in range(2 * m):
                power = mat_mul(power, nil)
            # N^(2m) e_1 = (-1)^m y e_-1; e_-1 sits at index m
            col0 = [power[r][0] for r in range(2 * m + 1)]
            assert col0[m] == F((-1) ** m * y)
            assert all(v == 0 for i, v in enumerate(col0) if i != m)
            assert mat_mul(power, nil) == tuple(tuple(F(0) for _ in row) for row in power)


def test_eta_so_example_and_closed_form():
    # n = 2, y = 1, split binary part: eta = -1
    vp = hyperbolic(1, 3)
    assert eta_so(vp, 1, 2).representative == square_class(-1, 3).representative
    for p in (2, 3, 5):
        reps = [c.representative for c in square_class_table(p)]
        for n in (1, 2, 3, 4):
            for y in reps:
                vprime = diag_form([y, 1], p)
                got = eta_so(vprime, y, n)
                assert got == square_class((-1) ** (n - 1) * y, p)


def test_eta_so_requires_represented_value():
    vp = diag_form([1, -3], 3)  # anisotropic: does not represent 3
    with pytest.raises(ValueError):
        eta_so(vp, 3, 2)


def test_eta_so_n1_is_represented_class():
    vp = diag_form([2, 5], 7)
    assert eta_so(vp, 2, 1) == square_class(2, 7)


# ---------------------------------------------------------------------------
# transfer factors


def pipeline_fixture(p, n, kcls, c, seed):
    q_v = quasisplit_space(2 * n, kcls, c, p)
    amb = make_ambient(q_v, 1)
    return amb, random_config(amb, seed)


def test_transfer_factor_pipeline_and_invariance():
    p, n = 3, 2
    kcls = square_class(3, p)
    amb, cfg = pipeline_fixture(p, n, kcls, square_class(1, p), 5)
    delta, _ = rigidify(cfg)
    value = transfer_factor(amb.q_V, delta, n)
    assert value in (1, -1)
    # q_delta is equivalent to -1/2 q by the rigidify identity
    half = F(-1, 2)
    from twistedgl.qform import equivalent, quad_form
    from twistedgl.linalg import mat_add, mat_scale
    sym = mat_scale(F(1, 2), mat_add(delta, transpose(delta)))
    assert equivalent(quad_form(sym, p), scale(half, amb.q_V))
    # invariance under the twisted conjugation orbit of delta
    for _ in range(10):
        while True:
            g = mat([[RNG.randint(-4, 4) for _ in range(2 * n)] for _ in range(2 * n)])
            if det(g) != 0:
                break
        moved = mat_mul(transpose(g), mat_mul(delta, g))
        assert transfer_factor(amb.q_V, moved, n) == value


def test_transfer_factor_split_trivial_case():
    p, n = 5, 2
    kcls = square_class(1, p)
    q_v = quasisplit_space(2 * n, kcls, square_class(1, p), p)
    amb = make_ambient(q_v, 1)
    cfg = random_config(amb, 1)
    delta, _ = rigidify(cfg)
    # K split and n even: q_delta ~ -1/2 q is Witt-trivial, target is too
    assert transfer_factor(amb.q_V, delta, n) == 1


def test_transfer_factor_whittaker_values():
    p, n = 3, 1
    for kcls in square_class_table(p):
        if kcls.is_trivial():
            continue
        amb, cfg = pipeline_fixture(p, n, kcls, square_class(1, p), 2)
        delta, _ = rigidify(cfg)
        lam = transfer_factor_whittaker(amb.q_V, delta, n)
        plain = transfer_factor(amb.q_V, delta, n)
        assert lam == epsilon_half(kcls, p).inverse() * Mu8.from_sign(plain)
        assert (lam ** 8) == Mu8(0)
    # split K: the epsilon factor is trivial
    amb, cfg = pipeline_fixture(5, 2, square_class(1, 5), square_class(1, 5), 3)
    delta, _ = rigidify(cfg)
    assert transfer_factor_whittaker(amb.q_V, delta, 2) == \
        Mu8.from_sign(transfer_factor(amb.q_V, delta, 2))


def test_gs_constancy_moderate_sweep():
    for p in (2, 3, 5, 7):
        for n in (1, 2):
            for kcls in square_class_table(p):
                if kcls.is_trivial() and n == 1:
                    continue
                amb, cfg = pipeline_fixture(p, n, kcls, square_class(1, p), 9)
                assert gs_constancy_check(cfg, n), (p, n, kcls)


def test_gs_constancy_independent_of_x():
    p, n = 3, 2
    amb, cfg = pipeline_fixture(p, n, square_class(3, p), square_class(1, p), 4)
    gamma = gs_norm(cfg)
    for _ in range(6):
        while True:
            x = mat([[RNG.randint(-6, 6) for _ in range(2 * n)] for _ in range(2 * n)])
            if det(x) != 0:
                break
        y = gs_section(amb, x, gamma)
        cfg2 = GSConfiguration(amb, x, y)
        assert gs_constancy_check(cfg2, n)


def test_gs_constancy_flips_under_witt_corruption():
    p, n = 3, 2
    amb, cfg = pipeline_fixture(p, n, square_class(3, p), square_class(1, p), 6)
    delta, _ = rigidify(cfg)
    lhs = transfer_factor_whittaker(amb.q_V, delta, n)
    rhs = weil_index(scale(2 * (-1) ** n, amb.q_V))
    assert lhs == rhs
    # corrupt the Witt comparison with the wrong sign of the norm form target
    kclass = invariants(amb.q_V).dpm
    from twistedgl.qform import quad_form
    from twistedgl.linalg import mat_add, mat_scale
    sym = mat_scale(F(1, 2), mat_add(delta, transpose(delta)))
    corrupted = 1 if witt_equivalent(quad_form(sym, p),
                                     scale((-1) ** (n + 1), norm_form(kclass, p))) else -1
    wrong_lhs = epsilon_half(kclass, p).inverse() * Mu8.from_sign(corrupted)
    assert wrong_lhs != rhs


def test_gs_constancy_rejects_nonquasisplit():
    # the quaternion norm form <1, -u, -p, up> is the 4-dim anisotropic space
    q = diag_form([1, -3, -7, 21], 7)
    assert witt_decompose(q)[1].aniso_dim == 4
    assert not is_quasisplit_even(q)
    cfgq = make_ambient(q, 1)
    cfg = random_config(cfgq, 0)
    with pytest.raises(ValueError):
        gs_constancy_check(cfg, 2)


def test_separation_check():
    for p in (2, 3, 5):
        for _ in range(12):
            alg = random_algebra(p, RNG, allow_split=False)
            c1 = random_fixed_invertible(alg, RNG)
            c2 = random_fixed_invertible(alg, RNG)
            assert separation_check(alg, c1, c1)
            assert separation_check(alg, c1, c2)
            # the two spaces agree in dim and det: equivalent or Hasse-twins
            from twistedgl.etale import trace_form_quadratic
            i1 = invariants(trace_form_quadratic(alg, c1))
            i2 = invariants(trace_form_quadratic(alg, c2))
            assert i1.det == i2.det and i1.dim == i2.dim
