import itertools

import pytest
from hypothesis import given
import hypothesis.strategies as st

from lqcalc.coeff import L, ONE, Q, ZERO, CoeffPoly
from lqcalc.fieldalg import (
    AlgebraElement,
    DegreeCapError,
    DomainError,
    FieldAlgebra,
    FieldSpec,
    GeneratorId,
    IndexBoundsError,
    Kind,
    NoOpSwapError,
    SpecMismatchError,
    apply_d,
    apply_d_operator,
    apply_derivative,
    canonical_basis,
    check_local_confluence,
    check_relations,
    compare_component_tables,
    l_equals_q,
    multiply,
    normal_form,
    swap_pair,
)
from lqcalc.rmatrix import Variant

F, D, DD = Kind.FIELD, Kind.DIFFERENTIAL, Kind.DERIVATIVE
G22 = FieldSpec(2, 2)
B22 = FieldSpec(2, 2, "boson")


def el(spec, *gens, c=1):
    return AlgebraElement.word(spec, tuple(GeneratorId(k, a, r) for k, a, r in gens), c)


# -- worked examples ---------------------------------------------------------

def test_swap_examples():
    assert swap_pair(GeneratorId(F, 2, 2), GeneratorId(F, 1, 1), G22) == el(G22, (F, 1, 1), (F, 2, 2), c=-(L * Q))
    assert swap_pair(GeneratorId(F, 1, 2), GeneratorId(F, 2, 1), B22) == \
        el(B22, (F, 2, 1), (F, 1, 2), c=(L * Q) ** -1)


def test_derivative_field_swap_has_delta_term():
    spec = FieldSpec(2, 1)
    out = swap_pair(GeneratorId(DD, 1, 1), GeneratorId(F, 1, 1), spec)
    assert out.coefficient(()) == ONE
    assert out.coefficient((GeneratorId(F, 1, 1), GeneratorId(DD, 1, 1))) == -ONE


def test_swap_of_canonical_pair_is_an_error():
    with pytest.raises(NoOpSwapError):
        swap_pair(GeneratorId(F, 1, 1), GeneratorId(F, 2, 1), G22)


def test_normal_form_examples():
    spec = FieldSpec(2, 1)
    assert normal_form(el(spec, (F, 1, 1), (F, 1, 1))).is_zero()
    assert normal_form(el(spec, (F, 2, 1), (F, 1, 1))) == el(spec, (F, 1, 1), (F, 2, 1), c=-Q)


def test_multiply_examples():
    spec = FieldSpec(2, 1)
    e = el(spec, (F, 1, 1), (F, 2, 1))
    assert multiply(AlgebraElement.scalar(spec), e) == e
    assert multiply(el(spec, (F, 1, 1)), el(spec, (F, 2, 1))) == e
    assert multiply(e, el(spec, (F, 1, 1))).is_zero()


def test_apply_d_examples():
    spec = FieldSpec(2, 2)
    assert apply_d(el(spec, (F, 1, 1))) == el(spec, (D, 1, 1))
    leib = normal_form(el(spec, (D, 1, 1), (F, 2, 1)) - el(spec, (F, 1, 1), (D, 2, 1)))
    assert apply_d(el(spec, (F, 1, 1), (F, 2, 1))) == leib
    assert apply_d(apply_d(el(spec, (F, 1, 1), (F, 2, 2)))).is_zero()


def test_apply_derivative_examples():
    spec = FieldSpec(2, 1)
    assert apply_derivative(GeneratorId(DD, 1, 1), el(spec, (F, 1, 1))) == AlgebraElement.scalar(spec)
    assert apply_derivative(GeneratorId(DD, 1, 1), el(spec, (F, 2, 1))).is_zero()
    with pytest.raises(DomainError):
        apply_derivative(GeneratorId(DD, 1, 1), el(spec, (DD, 1, 1)))
    with pytest.raises(DomainError):
        apply_derivative(GeneratorId(F, 1, 1), el(spec, (F, 1, 1)))


def test_errors():
    with pytest.raises(IndexBoundsError):
        el(FieldSpec(2, 1), (F, 3, 1))
    with pytest.raises(SpecMismatchError):
        el(FieldSpec(2, 1), (F, 1, 1)) + el(FieldSpec(2, 2), (F, 1, 1))
    with pytest.raises(DegreeCapError):
        normal_form(el(FieldSpec(2, 1, "boson", degree_cap=3), *[(F, 1, 1)] * 4))
    with pytest.raises(ValueError):
        FieldSpec(0, 1)
    with pytest.raises(ValueError):
        FieldSpec(2, 1, "fermion")


# -- structural checks ---------------------------------------------------------

@pytest.mark.parametrize("stat", ["grassmann", "boson"])
@pytest.mark.parametrize("variant", [Variant(False), Variant(True)])
@pytest.mark.parametrize("kind", list(Kind))
def test_single_kind_confluence_symbolic(stat, variant, kind):
    assert check_local_confluence(FieldSpec(2, 2, stat, variant), 3, kinds=(kind,)).passed


@pytest.mark.parametrize("stat", ["grassmann", "boson"])
@pytest.mark.parametrize("n", [2, 3])
def test_full_confluence_single_site(stat, n):
    assert check_local_confluence(FieldSpec(n, 1, stat), 3).passed


@pytest.mark.parametrize("stat", ["grassmann", "boson"])
@pytest.mark.parametrize("variant", [Variant(False), Variant(True)])
def test_full_confluence_lattice_at_l_equals_q(stat, variant):
    spec = FieldSpec(2, 2, stat, variant)
    alg = FieldAlgebra(spec, transform=l_equals_q)
    assert check_local_confluence(spec, 3, alg).passed


@pytest.mark.parametrize("stat", ["grassmann", "boson"])
def test_mixed_confluence_residual_vanishes_at_l_equals_q(stat):
    spec = FieldSpec(2, 2, stat)
    alg = FieldAlgebra(spec)
    bad = 0
    for word in itertools.product(spec.generators(), repeat=3):
        left = AlgebraElement(spec, alg.normal_word(word, "left"))
        right = AlgebraElement(spec, alg.normal_word(word, "right"))
        diff = left - right
        if not diff.is_zero():
            bad += 1
            assert diff.map_coeffs(l_equals_q).is_zero()
    assert bad > 0


def test_fault_injection_breaks_confluence():
    spec = FieldSpec(2, 1)
    x, y = GeneratorId(F, 2, 1), GeneratorId(F, 1, 1)
    bad = ((-Q * 2, (y, x)),)
    alg = FieldAlgebra(spec, overrides={(x, y): bad})
    alg_ok = FieldAlgebra(spec)
    assert check_local_confluence(spec, 3, alg_ok).passed
    rep = check_local_confluence(spec, 3, alg)
    assert not rep.passed and rep.witnesses


@pytest.mark.parametrize("spec", [G22, B22, FieldSpec(2, 1), FieldSpec(3, 1, "boson")])
def test_covariant_relations_reduce_to_zero(spec):
    assert check_relations(spec).passed


def test_pbw_grassmann_fields():
    words = [w for w in canonical_basis(G22, (F,), 4)]
    assert len(words) == 16
    elems = [AlgebraElement.word(G22, w) for w in words]
    for a, b in itertools.product(elems, repeat=2):
        prod = multiply(a, b)
        assert all(w in words for w in prod.terms)
    # no collapse: the degree-2 canonical words stay independent normal forms
    for w in words:
        assert normal_form(AlgebraElement.word(G22, w)) == AlgebraElement.word(G22, w)


@pytest.mark.parametrize("stat", ["grassmann", "boson"])
@pytest.mark.parametrize("variant", [Variant(False), Variant(True)])
def test_d_squared_and_two_routes(stat, variant):
    spec = FieldSpec(2, 2, stat, variant)
    for w in canonical_basis(spec, (D, F), 3):
        if sum(g.kind == F for g in w) > 2:
            continue
        e = AlgebraElement.word(spec, w)
        de = apply_d(e)
        assert apply_d(de).is_zero()
        assert de == apply_d_operator(e)


@pytest.mark.parametrize("stat", ["grassmann", "boson"])
def test_derivative_on_single_generators(stat):
    spec = FieldSpec(2, 2, stat)
    for dg in spec.generators((DD,)):
        for x in spec.generators((F,)):
            want = 1 if dg.index == x.index else 0
            assert apply_derivative(dg, AlgebraElement.word(spec, (x,))) == want


def test_component_tables_report():
    rep = compare_component_tables()
    by_name = {p.name: p for p in rep.parts}
    for name in ("grassmann fields (default)", "boson fields (default)",
                 "grassmann fields (transpose)", "boson fields (transpose)"):
        assert by_name[name].passed, name
    deriv = by_name["grassmann derivatives (default)"]
    assert not deriv.passed and deriv.residual_count == 4
    assert "4 mismatching" in rep.verdict


def test_derivatives_obey_inverted_field_relations():
    spec = FieldSpec(2, 1)
    out = normal_form(el(spec, (DD, 2, 1), (DD, 1, 1)))
    assert out == el(spec, (DD, 1, 1), (DD, 2, 1), c=-(Q ** -1))


def test_grassmann_differentials_are_not_nilpotent():
    spec = FieldSpec(2, 1)
    sq = normal_form(el(spec, (D, 1, 1), (D, 1, 1)))
    assert sq == el(spec, (D, 1, 1), (D, 1, 1))
    assert normal_form(el(spec, (D, 2, 1), (D, 1, 1))) == el(spec, (D, 1, 1), (D, 2, 1), c=Q ** -1)


def test_boson_differentials_are_nilpotent():
    spec = FieldSpec(2, 2, "boson")
    assert normal_form(el(spec, (D, 1, 2), (D, 1, 2))).is_zero()


# -- classical limit oracles ----------------------------------------------------

def classical_sort(word, parity):
    """Sort by canonical key counting signs of odd transpositions; None when an odd generator repeats."""
    w = list(word)
    sign = 1
    for end in range(len(w) - 1, 0, -1):
        for k in range(end):
            if w[k].key > w[k + 1].key:
                if parity(w[k]) and parity(w[k + 1]):
                    sign = -sign
                w[k], w[k + 1] = w[k + 1], w[k]
    for x, y in zip(w, w[1:]):
        if x == y and parity(x):
            return None, 0
    return tuple(w), sign


def grassmann_parity(g):
    return g.kind in (F, DD)


def boson_parity(g):
    return g.kind == D


words_22 = st.lists(st.sampled_from(G22.generators((D, F))), min_size=0, max_size=4)


@given(words_22)
def test_classical_grassmann_normal_form(word):
    got = normal_form(AlgebraElement.word(G22, word)).specialize(1, 1)
    w, sign = classical_sort(word, grassmann_parity)
    want = AlgebraElement(G22, {} if w is None else {w: sign})
    assert got == want


@given(st.lists(st.sampled_from(B22.generators((D, F))), min_size=0, max_size=4))
def test_classical_boson_normal_form(word):
    got = normal_form(AlgebraElement.word(B22, word)).specialize(1, 1)
    w, sign = classical_sort(word, boson_parity)
    want = AlgebraElement(B22, {} if w is None else {w: sign})
    assert got == want


def classical_derivative(spec, target, word):
    out = AlgebraElement(spec)
    odd = 0
    for j, g in enumerate(word):
        if g.index == target.index and g.kind == F:
            rest = word[:j] + word[j + 1:]
            out = out + AlgebraElement.word(spec, rest, (-1) ** odd)
        if spec.grassmann and g.kind == F:
            odd += 1
        if not spec.grassmann and g.kind == D:
            odd += 1
    return normal_form(out).specialize(1, 1)


@given(st.lists(st.sampled_from(G22.generators((F,))), min_size=1, max_size=3),
       st.sampled_from(G22.generators((DD,))))
def test_classical_grassmann_derivative(word, dg):
    got = apply_derivative(dg, AlgebraElement.word(G22, word)).specialize(1, 1)
    assert got == classical_derivative(G22, dg, tuple(word))


@given(st.lists(st.sampled_from(B22.generators((F,))), min_size=1, max_size=3),
       st.sampled_from(B22.generators((DD,))))
def test_classical_boson_derivative(word, dg):
    got = apply_derivative(dg, AlgebraElement.word(B22, word)).specialize(1, 1)
    assert got == classical_derivative(B22, dg, tuple(word))


@given(st.lists(st.sampled_from(G22.generators((F,))), min_size=1, max_size=3))
def test_classical_grassmann_d(word):
    spec = G22
    e = AlgebraElement.word(spec, word)
    got = apply_d(e).specialize(1, 1)
    out = AlgebraElement(spec)
    for j, g in enumerate(word):
        w = tuple(word[:j]) + (GeneratorId(D, g.component, g.site),) + tuple(word[j + 1:])
        out = out + AlgebraElement.word(spec, w, (-1) ** j)
    assert got == normal_form(out).specialize(1, 1)


# -- properties -------------------------------------------------------------------

all_words_21 = st.lists(st.sampled_from(FieldSpec(2, 1).generators()), min_size=0, max_size=4)


@given(all_words_21)
def test_strategy_independence_single_site(word):
    spec = FieldSpec(2, 1)
    e = AlgebraElement.word(spec, word)
    assert normal_form(e, strategy="left") == normal_form(e, strategy="right")


@given(words_22)
def test_normal_forms_are_canonical_and_fields_never_repeat(word):
    alg = FieldAlgebra(G22)
    nf = normal_form(AlgebraElement.word(G22, word))
    for w in nf.terms:
        assert alg.is_canonical(w)
        fields = [g for g in w if g.kind == F]
        assert len(fields) == len(set(fields))
        assert [g.kind for g in w] == sorted(g.kind for g in w)


fields_22 = st.lists(st.sampled_from(G22.generators((F,))), min_size=0, max_size=3)


@given(fields_22, fields_22, fields_22)
def test_field_multiplication_is_associative(w1, w2, w3):
    a, b, c = (AlgebraElement.word(G22, w) for w in (w1, w2, w3))
    assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))


@given(all_words_21, all_words_21, all_words_21)
def test_single_site_multiplication_is_associative(w1, w2, w3):
    spec = FieldSpec(2, 1)
    a, b, c = (AlgebraElement.word(spec, w) for w in (w1, w2, w3))
    assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))
