"""The n = 2 quantum-matrix algebra and covariance checks for quantum planes.

The entries ``a, b, c, d`` of a 2x2 quantum matrix obey relations obtained
by exact elimination from ``R (A x A) = (A x A) R``.  Quantum-matrix entries
commute with field generators, so mixed expressions are stored as
``(matrix word, field word)`` pairs and each segment is normal-ordered by
its own rewriting system.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .coeff import ONE, ZERO, CoeffPoly, Q, divide_exact, poly_gcd
from .fieldalg import GRASSMANN, BOSON, FieldSpec, GeneratorId, Kind, algebra_for
from .rmatrix import VerificationReport, build_small_r

__all__ = [
    "GENERATORS",
    "MixedElement",
    "Relation",
    "RelationDerivationError",
    "RelationSet",
    "UnsupportedSizeError",
    "check_centrality",
    "derive_rtt_relations",
    "entry",
    "qdet",
    "rtt_equations",
    "verify_det_top_form",
    "verify_lq_det",
    "verify_plane_covariance",
]

GENERATORS = ("a", "b", "c", "d")
_ENTRY = {(1, 1): 0, (1, 2): 1, (2, 1): 2, (2, 2): 3}


class UnsupportedSizeError(ValueError):
    pass


class RelationDerivationError(RuntimeError):
    pass


def entry(alpha: int, beta: int) -> int:
    """Generator number of ``A[alpha][beta]`` (0..3 for a, b, c, d)."""
    return _ENTRY[(alpha, beta)]


def _word_text(w: Sequence[int]) -> str:
    return "*".join(GENERATORS[g] for g in w)


def _poly_text(terms: Mapping[tuple, CoeffPoly]) -> str:
    from .exprio import format_terms

    return format_terms([(c, _word_text(w)) for w, c in sorted(terms.items(), key=lambda kv: (len(kv[0]), kv[0]))])


# -- linear algebra over the q-Laurent ring ---------------------------------------

def _normalize_row(row: dict) -> dict:
    g = ZERO
    for v in row.values():
        g = poly_gcd(g, v)
        if g.is_unit():
            break
    if g.is_zero() or g.is_unit():
        return row
    return {k: divide_exact(v, g) for k, v in row.items()}


def _echelon(rows: list[dict], columns: list) -> list[dict]:
    """Fraction-free row reduction; ``columns`` lists pivot preference order."""
    rows = [dict(r) for r in rows if r]
    done = []
    for col in columns:
        piv = next((r for r in rows if col in r), None)
        if piv is None:
            continue
        rows.remove(piv)
        p = piv[col]
        new_rows = []
        for r in rows:
            if col in r:
                f = r[col]
                out = {}
                for k in set(r) | set(piv):
                    v = r.get(k, ZERO) * p - piv.get(k, ZERO) * f
                    if not v.is_zero():
                        out[k] = v
                r = _normalize_row(out)
            if r:
                new_rows.append(r)
        rows = new_rows
        done.append(_normalize_row(piv))
    return done


def rtt_equations(n: int = 2) -> list[dict]:
    """The ``n^4`` component equations of ``R (A x A) - (A x A) R`` as word -> coefficient maps."""
    if n != 2:
        raise UnsupportedSizeError("quantum-matrix relations are supported at n = 2 only")
    r = build_small_r(n)
    comp = lambda a: (a, 1)
    out = []
    rng = range(1, n + 1)
    for al, be, mu, nu in itertools.product(rng, repeat=4):
        eq: dict = {}
        for ga, de in itertools.product(rng, repeat=2):
            left = r[(comp(al), comp(be)), (comp(ga), comp(de))]
            if not left.is_zero():
                w = (entry(ga, mu), entry(de, nu))
                eq[w] = eq.get(w, ZERO) + left
            right = r[(comp(ga), comp(de)), (comp(mu), comp(nu))]
            if not right.is_zero():
                w = (entry(al, ga), entry(be, de))
                eq[w] = eq.get(w, ZERO) - right
        out.append({k: v for k, v in eq.items() if not v.is_zero()})
    return out


# -- relation sets ----------------------------------------------------------------

@dataclass(frozen=True)
class Relation:
    lead: tuple
    replacement: tuple  # ((coeff, word), ...)

    def to_text(self) -> str:
        rhs = _poly_text({w: c for c, w in self.replacement}) if self.replacement else "0"
        return f"{_word_text(self.lead)} -> {rhs}"


def _deglex_key(w: tuple) -> tuple:
    return (len(w), w)


@dataclass
class RelationSet:
    relations: tuple
    _memo: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        leads = [r.lead for r in self.relations]
        if len(set(leads)) != len(leads):
            raise RelationDerivationError("leading monomials are not distinct")
        for r in self.relations:
            for _, w in r.replacement:
                if _deglex_key(w) >= _deglex_key(r.lead):
                    raise RelationDerivationError(f"replacement of {_word_text(r.lead)} is not smaller")
        self._rules = {r.lead: r.replacement for r in self.relations}

    def without(self, lead: tuple) -> "RelationSet":
        return RelationSet(tuple(r for r in self.relations if r.lead != tuple(lead)))

    def leads(self) -> list[tuple]:
        return [r.lead for r in self.relations]

    def normal_word(self, word: tuple, strategy: str = "left") -> dict:
        key = (word, strategy)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        rng = range(len(word) - 1)
        pos = None
        for i in (rng if strategy == "left" else reversed(rng)):
            if word[i:i + 2] in self._rules:
                pos = i
                break
        if pos is None:
            out = {word: ONE}
        else:
            out = {}
            for c, w in self._rules[word[pos:pos + 2]]:
                for w2, c2 in self.normal_word(word[:pos] + w + word[pos + 2:], strategy).items():
                    s = out.get(w2, ZERO) + c * c2
                    if s.is_zero():
                        out.pop(w2, None)
                    else:
                        out[w2] = s
        self._memo[key] = out
        return out

    def reduce(self, terms: Mapping[tuple, CoeffPoly], strategy: str = "left") -> dict:
        out: dict = {}
        for w, c in terms.items():
            for w2, c2 in self.normal_word(tuple(w), strategy).items():
                s = out.get(w2, ZERO) + c * c2
                if s.is_zero():
                    out.pop(w2, None)
                else:
                    out[w2] = s
        return out

    def check_confluence(self, degree: int = 3) -> VerificationReport:
        witnesses = []
        count = 0
        for w in itertools.product(range(4), repeat=degree):
            left = self.normal_word(w, "left")
            right = self.normal_word(w, "right")
            if left != right:
                count += 1
                if len(witnesses) < 20:
                    diff = dict(left)
                    for k, v in right.items():
                        diff[k] = diff.get(k, ZERO) - v
                    witnesses.append((_word_text(w), _poly_text({k: v for k, v in diff.items() if not v.is_zero()})))
        return VerificationReport(f"quantum-matrix relations confluent at degree {degree}", count == 0,
                                  witnesses, count)

    def canonical_monomials(self, degree: int) -> list[tuple]:
        return [w for w in itertools.product(range(4), repeat=degree)
                if not any(w[i:i + 2] in self._rules for i in range(degree - 1))]

    def check_round_trip(self) -> VerificationReport:
        """Relations imply the component equations and vice versa."""
        eqs = rtt_equations(2)
        witnesses = []
        count = 0
        for k, eq in enumerate(eqs):
            red = self.reduce(eq)
            if red:
                count += 1
                witnesses.append((f"equation {k}", _poly_text(red)))
        cols = sorted({w for eq in eqs for w in eq}, key=_deglex_key, reverse=True)
        base_rank = len(_echelon(eqs, cols))
        for rel in self.relations:
            vec = {rel.lead: ONE}
            for c, w in rel.replacement:
                vec[w] = vec.get(w, ZERO) - c
            vec = {k: v for k, v in vec.items() if not v.is_zero()}
            allcols = cols + [w for w in vec if w not in cols]
            if len(_echelon(eqs + [vec], allcols)) != base_rank:
                count += 1
                witnesses.append((rel.to_text(), "not implied by the component equations"))
        return VerificationReport("relations equivalent to the component equations", count == 0,
                                  witnesses, count)

    def to_json_obj(self) -> list:
        return [r.to_text() for r in self.relations]


@functools.lru_cache(maxsize=4)
def derive_rtt_relations(n: int = 2) -> RelationSet:
    eqs = rtt_equations(n)
    cols = sorted({w for eq in eqs for w in eq}, key=_deglex_key, reverse=True)
    rows = _echelon(eqs, cols)
    # back-substitute so that no replacement contains another leading monomial
    leads = []
    for r in rows:
        leads.append(max(r, key=_deglex_key))
    changed = True
    while changed:
        changed = False
        for i, r in enumerate(rows):
            for j, lead in enumerate(leads):
                if i != j and lead in r:
                    p = rows[j][lead]
                    f = r[lead]
                    out = {}
                    for k in set(r) | set(rows[j]):
                        v = r.get(k, ZERO) * p - rows[j].get(k, ZERO) * f
                        if not v.is_zero():
                            out[k] = v
                    rows[i] = r = _normalize_row(out)
                    changed = True
    relations = []
    for r, lead in zip(rows, leads):
        kappa = r[lead]
        if not kappa.is_unit():
            raise RelationDerivationError(f"leading coefficient {kappa} of {_word_text(lead)} is not invertible")
        inv = -kappa.inverse()
        rep = tuple((v * inv, w) for w, v in sorted(r.items(), key=lambda kv: _deglex_key(kv[0]), reverse=True)
                    if w != lead)
        relations.append(Relation(lead, rep))
    relations.sort(key=lambda r: _deglex_key(r.lead))
    rs = RelationSet(tuple(relations))
    rep = rs.check_confluence(3)
    if not rep.passed:
        raise RelationDerivationError(f"derived relations are not confluent: {rep.witnesses[:3]}")
    return rs


# -- mixed elements -------------------------------------------------------------

class MixedElement:
    """Linear combination of ``(matrix word, field word)`` pairs."""

    __slots__ = ("spec", "relations", "_terms")

    def __init__(self, spec: FieldSpec, relations: RelationSet, terms: Mapping | None = None):
        self.spec = spec
        self.relations = relations
        out = {}
        for k, c in (terms or {}).items():
            c = CoeffPoly.coerce(c)
            if not c.is_zero():
                s = out.get(k, ZERO) + c
                if s.is_zero():
                    out.pop(k, None)
                else:
                    out[k] = s
        self._terms = out

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other: "MixedElement") -> "MixedElement":
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, ZERO) + c
        return MixedElement(self.spec, self.relations, out)

    def __sub__(self, other: "MixedElement") -> "MixedElement":
        return self + other.scale(-1)

    def scale(self, c) -> "MixedElement":
        c = CoeffPoly.coerce(c)
        return MixedElement(self.spec, self.relations, {k: v * c for k, v in self._terms.items()})

    def __mul__(self, other: "MixedElement") -> "MixedElement":
        out: dict = {}
        for (q1, f1), c1 in self._terms.items():
            for (q2, f2), c2 in other._terms.items():
                k = (q1 + q2, f1 + f2)
                out[k] = out.get(k, ZERO) + c1 * c2
        return MixedElement(self.spec, self.relations, out).normal_form()

    def normal_form(self) -> "MixedElement":
        alg = algebra_for(self.spec)
        out: dict = {}
        for (qw, fw), c in self._terms.items():
            qn = self.relations.normal_word(qw)
            fn = alg.normal_word(fw)
            for qw2, qc in qn.items():
                for fw2, fc in fn.items():
                    k = (qw2, fw2)
                    s = out.get(k, ZERO) + c * qc * fc
                    if s.is_zero():
                        out.pop(k, None)
                    else:
                        out[k] = s
        return MixedElement(self.spec, self.relations, out)

    def field_coefficient(self, fw: tuple) -> dict:
        """Matrix-word polynomial multiplying the field word ``fw``."""
        return {qw: c for (qw, f), c in self._terms.items() if f == tuple(fw)}

    def to_text(self) -> str:
        from .exprio import format_terms

        items = sorted(self._terms.items(), key=lambda kv: (len(kv[0][1]), [g.key for g in kv[0][1]],
                                                            len(kv[0][0]), kv[0][0]))
        return format_terms([(c, "*".join([GENERATORS[g] for g in qw] + [g.to_text(self.spec) for g in fw]))
                             for (qw, fw), c in items])

    __str__ = to_text


def _transformed(spec: FieldSpec, rel: RelationSet, alpha: int, site: int) -> MixedElement:
    """``sum_beta A[alpha][beta] * x[beta, site]``."""
    return MixedElement(spec, rel, {((entry(alpha, beta),), (GeneratorId(Kind.FIELD, beta, site),)): ONE
                                    for beta in (1, 2)})


def qdet(relations: RelationSet | None = None) -> dict:
    """``sum over S_2 of (-q)^length * A[1][s1] A[2][s2]`` in normal form."""
    rel = relations or derive_rtt_relations(2)
    terms = {}
    for perm in itertools.permutations((1, 2)):
        inv = sum(1 for i, j in itertools.combinations(range(2), 2) if perm[i] > perm[j])
        terms[(entry(1, perm[0]), entry(2, perm[1]))] = (-Q) ** inv
    return rel.reduce(terms)


def check_centrality(relations: RelationSet | None = None) -> VerificationReport:
    rel = relations or derive_rtt_relations(2)
    det = qdet(rel)
    witnesses = []
    for g in range(4):
        comm: dict = {}
        for w, c in det.items():
            comm[w + (g,)] = comm.get(w + (g,), ZERO) + c
            comm[(g,) + w] = comm.get((g,) + w, ZERO) - c
        red = rel.reduce(comm)
        if red:
            witnesses.append((GENERATORS[g], _poly_text(red)))
    return VerificationReport("quantum determinant is central", not witnesses, witnesses, len(witnesses))


def verify_plane_covariance(statistics: str = GRASSMANN, relations: RelationSet | None = None) -> VerificationReport:
    """Transformed coordinates satisfy the same quadratic relations."""
    rel = relations or derive_rtt_relations(2)
    spec = FieldSpec(2, 1, statistics)
    r = build_small_r(2)
    idx = [(1, 1), (2, 1)]
    witnesses = []
    for row in itertools.product(idx, repeat=2):
        total = MixedElement(spec, rel)
        for col in itertools.product(idx, repeat=2):
            # symmetrizer numerator 1 + qR for grassmann, antisymmetrizer numerator q^2 - qR for boson
            coef = r[row, col] * (Q if statistics == GRASSMANN else -Q)
            if row == col:
                coef = coef + (ONE if statistics == GRASSMANN else Q ** 2)
            if coef.is_zero():
                continue
            prod = _transformed(spec, rel, col[0][0], 1) * _transformed(spec, rel, col[1][0], 1)
            total = total + prod.scale(coef)
        total = total.normal_form()
        if not total.is_zero():
            witnesses.append((f"row {row[0][0]}{row[1][0]}", total.to_text()))
    return VerificationReport(f"{statistics} quantum plane covariance", not witnesses, witnesses, len(witnesses))


def _volume_transform(spec: FieldSpec, rel: RelationSet) -> MixedElement:
    out = MixedElement(spec, rel, {((), ()): ONE})
    for a, r in spec.indices():
        out = out * _transformed(spec, rel, a, r)
    return out


def verify_det_top_form(expected: Mapping | None = None, relations: RelationSet | None = None) -> VerificationReport:
    """The transformed volume word equals ``det_q`` times the volume word."""
    rel = relations or derive_rtt_relations(2)
    spec = FieldSpec(2, 1, GRASSMANN)
    want = rel.reduce(expected) if expected is not None else qdet(rel)
    got = _volume_transform(spec, rel)
    vol = tuple(GeneratorId(Kind.FIELD, a, r) for a, r in spec.indices())
    coeff = got.field_coefficient(vol)
    witnesses = []
    diff = dict(coeff)
    for w, c in want.items():
        diff[w] = diff.get(w, ZERO) - c
    diff = {k: v for k, v in diff.items() if not v.is_zero()}
    if diff:
        witnesses.append(("coefficient minus expected", _poly_text(diff)))
    others = [k for k in got.terms if k[1] != vol]
    if others:
        witnesses.append(("other field words", str(len(others))))
    rep = VerificationReport("transformed top form equals det_q times top form", not witnesses, witnesses,
                             len(witnesses))
    rep.details = {"extracted_det": _poly_text(coeff)}
    return rep


def verify_lq_det(N: int, relations: RelationSet | None = None) -> VerificationReport:
    """Site-independent transformation scales the lattice volume word by ``det_q^N``."""
    if N not in (1, 2):
        raise UnsupportedSizeError("lattice determinant check covers N = 1 and N = 2")
    rel = relations or derive_rtt_relations(2)
    spec = FieldSpec(2, N, GRASSMANN)
    det = qdet(rel)
    want = {(): ONE}
    for _ in range(N):
        want = rel.reduce({w1 + w2: c1 * c2 for w1, c1 in want.items() for w2, c2 in det.items()})
    got = _volume_transform(spec, rel)
    vol = tuple(GeneratorId(Kind.FIELD, a, r) for a, r in spec.indices())
    coeff = got.field_coefficient(vol)
    diff = dict(coeff)
    for w, c in want.items():
        diff[w] = diff.get(w, ZERO) - c
    diff = {k: v for k, v in diff.items() if not v.is_zero()}
    witnesses = []
    if diff:
        witnesses.append(("coefficient minus det_q^N", _poly_text(diff)))
    others = [k for k in got.terms if k[1] != vol]
    if others:
        witnesses.append(("other field words", str(len(others))))
    rep = VerificationReport(f"lattice volume scales by det_q^{N}", not witnesses, witnesses, len(witnesses))
    rep.details = {"extracted": _poly_text(coeff)}
    return rep
