import itertools

import pytest
from hypothesis import given
import hypothesis.strategies as st

from lqcalc.coeff import L, ONE, Q, ZERO
from lqcalc.rmatrix import (
    DimensionError,
    ShapeError,
    TensorOp,
    Variant,
    build_big_projectors,
    build_big_r,
    build_diag_ops,
    build_q_matrix,
    build_small_r,
    compose,
    embed_pair,
    hecke_inverse,
    identity,
    verify_hecke,
    verify_projector_identities,
    verify_small_projectors,
    verify_ybe,
)


def idx(*pairs):
    return tuple((a, r) for a, r in pairs)


def test_small_r_entries():
    r = build_small_r(2)
    assert r[idx((1, 1), (1, 1)), idx((1, 1), (1, 1))] == Q
    assert r[idx((1, 1), (2, 1)), idx((2, 1), (1, 1))] == ONE
    assert r[idx((1, 1), (2, 1)), idx((1, 1), (2, 1))] == Q - Q ** -1
    assert r[idx((2, 1), (1, 1)), idx((2, 1), (1, 1))] == ZERO


@pytest.mark.parametrize("n", [2, 3, 4])
def test_small_r_ybe_and_hecke(n):
    r = build_small_r(n)
    i_op, j_op = build_diag_ops(n, 1)
    assert verify_ybe(r).passed
    assert verify_hecke(r, i_op, j_op).passed
    assert r == r.transpose()


@pytest.mark.parametrize("n", [2, 3])
def test_small_projectors(n):
    assert verify_small_projectors(n).passed


def test_dimension_errors():
    with pytest.raises(DimensionError):
        build_small_r(1)
    with pytest.raises(DimensionError):
        build_big_r(1, 2)
    with pytest.raises(ShapeError):
        verify_ybe(embed_pair(build_small_r(2), "12"))


@pytest.mark.parametrize("variant", [Variant(False), Variant(True)])
def test_q_matrix_is_involution(variant):
    qm = build_q_matrix(3, variant)
    assert compose(qm, qm) == identity(3, 1)


@pytest.mark.parametrize("n,N", [(2, 2), (2, 3), (3, 2)])
@pytest.mark.parametrize("variant", [Variant(False), Variant(True)])
def test_big_hecke(n, N, variant):
    r = build_big_r(n, N, variant)
    i_op, j_op = build_diag_ops(n, N)
    rep = verify_hecke(r, i_op, j_op)
    assert rep.passed and len(rep.parts) == 2
    assert compose(r, hecke_inverse(r, i_op, j_op)) == identity(n, N)
    assert compose(r, i_op) == compose(i_op, r)
    assert compose(r, j_op) == compose(j_op, r)


@pytest.mark.parametrize("variant", [Variant(False), Variant(True)])
def test_big_ybe_residual_vanishes_at_l_equals_q(variant):
    from lqcalc.fieldalg import l_equals_q

    r = build_big_r(2, 2, variant)
    rep = verify_ybe(r)
    # the residual is a multiple of (q - 1/q) - (l - 1/l)
    assert not rep.passed
    assert verify_ybe(r.map_coeffs(l_equals_q)).passed


def test_projector_adjudication_verdict():
    a, s = build_big_projectors(2, 2)
    i_op, j_op = build_diag_ops(2, 2)
    rep = verify_projector_identities(a, s, i_op, j_op)
    assert rep.passed
    assert rep.verdict == "orthogonal; A: A^2 = (1 + I^2) A; S: S^2 = (1 + J^2) S"


def test_json_round_trip():
    r = build_big_r(2, 2, Variant(True))
    assert TensorOp.from_json(r.to_json()) == r
    assert r.to_json() == build_big_r(2, 2, Variant(True)).to_json()


@given(st.integers(0, 5), st.integers(-3, 3))
def test_scale_and_sum_commute(k, e):
    r = build_small_r(2)
    c = Q ** e * k
    assert r.scale(c) + r == r.scale(c + ONE)


def test_specialize_q_one_gives_permutation():
    r = build_small_r(3).specialize(1, 1)
    for row, col, v in r.entries():
        assert v == ONE and row == (col[1], col[0])


def test_fault_injection_breaks_ybe():
    r = build_small_r(2)
    entries = {(row, col): v for row, col, v in r.entries()}
    entries[(idx((1, 1), (2, 1)), idx((1, 1), (2, 1)))] = Q
    bad = TensorOp(2, 2, 1, entries)
    rep = verify_ybe(bad)
    assert not rep.passed and rep.witnesses
