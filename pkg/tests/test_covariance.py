import itertools
import re
from fractions import Fraction

import pytest
from hypothesis import given
import hypothesis.strategies as st

from lqcalc.coeff import ONE, Q
from lqcalc.covariance import (
    RelationDerivationError,
    UnsupportedSizeError,
    check_centrality,
    derive_rtt_relations,
    qdet,
    rtt_equations,
    verify_det_top_form,
    verify_lq_det,
    verify_plane_covariance,
)
from lqcalc.exprio import parse_coeff

A, B, C, D = range(4)


def test_derived_relations():
    rs = derive_rtt_relations(2)
    got = {r.to_text() for r in rs.relations}
    assert got == {
        "b*a -> q^-1*a*b",
        "c*a -> q^-1*a*c",
        "c*b -> b*c",
        "d*a -> a*d - (q - q^-1)*b*c",
        "d*b -> q^-1*b*d",
        "d*c -> q^-1*c*d",
    }


def test_round_trip_and_confluence():
    rs = derive_rtt_relations(2)
    assert len(rtt_equations(2)) == 16
    assert rs.check_round_trip().passed
    assert rs.check_confluence(3).passed
    assert rs.reduce({(B, C): ONE, (C, B): -ONE}) == {}


def test_pbw_degree_three():
    rs = derive_rtt_relations(2)
    assert len(rs.canonical_monomials(2)) == 10
    assert len(rs.canonical_monomials(3)) == 20


def test_classical_limit_commutative():
    rs = derive_rtt_relations(2)
    for x, y in itertools.product(range(4), repeat=2):
        nf = rs.reduce({(x, y): ONE})
        spec = {w: c.specialize(1) for w, c in nf.items()}
        spec = {w: c for w, c in spec.items() if not c.is_zero()}
        assert spec == {tuple(sorted((x, y))): ONE}


def test_unsupported_size():
    with pytest.raises(UnsupportedSizeError):
        derive_rtt_relations(3)


def test_qdet_and_centrality():
    det = qdet()
    assert det == {(A, D): ONE, (B, C): -Q}
    assert check_centrality().passed


@pytest.mark.parametrize("stat", ["grassmann", "boson"])
def test_plane_covariance(stat):
    assert verify_plane_covariance(stat).passed


def test_plane_covariance_fault_injection():
    rs = derive_rtt_relations(2)
    broken = rs.without((D, A))
    rep = verify_plane_covariance("grassmann", broken)
    assert not rep.passed and rep.witnesses


def test_det_top_form():
    rep = verify_det_top_form()
    assert rep.passed
    assert rep.details["extracted_det"] == "a*d - q*b*c"
    assert not verify_det_top_form(expected={(A, D): ONE, (B, C): -ONE}).passed


@pytest.mark.parametrize("N", [1, 2])
def test_lq_det(N):
    assert verify_lq_det(N).passed


def test_lq_det_unsupported():
    with pytest.raises(UnsupportedSizeError):
        verify_lq_det(3)


NAMES = {"a": "a[1,1]", "b": "a[1,2]", "c": "a[2,1]", "d": "a[2,2]"}


@given(st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_extracted_det_squared_is_classical_at_q_one(vals):
    # det_q^2 read off the N = 2 top form reduces to (ad - bc)^2 for commuting entries
    extracted = verify_lq_det(2).details["extracted"]
    poly = parse_coeff(re.sub(r"\b([abcd])\b", lambda m: NAMES[m.group(1)], extracted))
    a, b, c, d = (Fraction(v) for v in vals)
    val = poly.eval(1, 1, {"a[1,1]": a, "a[1,2]": b, "a[2,1]": c, "a[2,2]": d})
    assert val == (a * d - b * c) ** 2
