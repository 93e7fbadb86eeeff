"""Berezin integration, the deformed epsilon tensor and (l,q)-Pfaffians.

The integral of a Grassmann function is the coefficient of the volume word
``psi[1,1]*psi[2,1]*...*psi[n,N]`` in its normal form.  The epsilon tensor is
computed by a separate bubble sort driven by closed-form exchange factors, so
that agreement with the integral is a real cross-check of the rewriting
engine.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .coeff import ONE, ZERO, CoeffPoly, L, Q
from .fieldalg import (
    GRASSMANN,
    AlgebraElement,
    DomainError,
    FieldAlgebra,
    FieldSpec,
    GeneratorId,
    IndexBoundsError,
    Kind,
    algebra_for,
    multiply,
    normal_form,
)
from .rmatrix import Variant, VerificationReport

__all__ = [
    "OracleInputError",
    "ParityError",
    "QuadraticForm",
    "berezin_integrate",
    "classical_pfaffian_oracle",
    "compare_wedge_with_calculus",
    "exact_determinant",
    "epsilon",
    "gaussian_integral",
    "pfaffian",
    "volume_word",
    "wedge_exchange",
]


class ParityError(ValueError):
    pass


class OracleInputError(ValueError):
    pass


def _require_grassmann(spec: FieldSpec):
    if not spec.grassmann:
        raise DomainError("Berezin integration needs grassmann statistics")


def volume_word(spec: FieldSpec) -> tuple[GeneratorId, ...]:
    return tuple(GeneratorId(Kind.FIELD, a, r) for a, r in spec.indices())


# -- epsilon ------------------------------------------------------------------

def _exchange_factor(later: tuple[int, int], earlier: tuple[int, int], variant: Variant) -> CoeffPoly:
    """Factor ``c`` with ``psi_later psi_earlier = c psi_earlier psi_later``.

    ``later`` comes after ``earlier`` in canonical order.  These are the
    closed-form single-term exchanges of the lattice Grassmann field.
    """
    (a, j), (b, i) = later, earlier
    if i == j:
        return -Q
    if a == b:
        return -L
    big_later = a > b
    if variant.q_transpose:
        big_later = not big_later
    return -(L * Q) if big_later else -(L * Q ** -1)


def epsilon(indices: Sequence[tuple[int, int]], spec: FieldSpec) -> CoeffPoly:
    """Deformed epsilon tensor for a full-length sequence of ``(component, site)`` indices."""
    _require_grassmann(spec)
    idx = [tuple(x) for x in indices]
    if len(idx) != spec.n * spec.N:
        raise ValueError(f"epsilon needs exactly {spec.n * spec.N} indices, got {len(idx)}")
    for a, r in idx:
        if not (1 <= a <= spec.n and 1 <= r <= spec.N):
            raise IndexBoundsError(f"index ({a},{r}) out of bounds for n={spec.n}, N={spec.N}")
    if len(set(idx)) != len(idx):
        return ZERO
    key = lambda ar: (ar[1], ar[0])
    coeff = ONE
    # bubble sort, accumulating one factor per adjacent transposition
    for end in range(len(idx) - 1, 0, -1):
        for k in range(end):
            if key(idx[k]) > key(idx[k + 1]):
                coeff = coeff * _exchange_factor(idx[k], idx[k + 1], spec.variant)
                idx[k], idx[k + 1] = idx[k + 1], idx[k]
    return coeff


# -- integration ----------------------------------------------------------------

def berezin_integrate(e: AlgebraElement, spec: FieldSpec | None = None) -> CoeffPoly:
    spec = spec or e.spec
    _require_grassmann(spec)
    for w in e.terms:
        if any(g.kind != Kind.FIELD for g in w):
            raise DomainError("integrand may contain field generators only")
    return normal_form(e, spec).coefficient(volume_word(spec))


# -- quadratic forms ------------------------------------------------------------

def _default_symbol(a: tuple[int, int], b: tuple[int, int], N: int) -> str:
    if N == 1:
        return f"a[{a[0]},{b[0]}]"
    return f"a[({a[0]},{a[1]}),({b[0]},{b[1]})]"


@dataclass(frozen=True)
class QuadraticForm:
    """``w = sum b[(a,i),(b,j)] psi[a,i] psi[b,j]`` over canonically ordered pairs.

    Only strictly upper entries are stored; missing ones default to a
    parameter symbol named after the index pair.
    """

    spec: FieldSpec
    entries: Mapping = field(default_factory=dict)

    def __post_init__(self):
        _require_grassmann(self.spec)
        order = {ix: k for k, ix in enumerate(self.spec.indices())}
        clean = {}
        for (x, y), c in dict(self.entries).items():
            x, y = tuple(x), tuple(y)
            if x not in order or y not in order:
                raise IndexBoundsError(f"entry {(x, y)} out of bounds")
            if order[x] >= order[y]:
                raise ValueError(f"entry {(x, y)} is not strictly upper-triangular")
            clean[(x, y)] = CoeffPoly.coerce(c)
        object.__setattr__(self, "entries", clean)

    @classmethod
    def symbolic(cls, spec: FieldSpec) -> "QuadraticForm":
        return cls(spec, {})

    def pairs(self) -> list[tuple[tuple[int, int], tuple[int, int]]]:
        return list(itertools.combinations(self.spec.indices(), 2))

    def entry(self, x, y) -> CoeffPoly:
        c = self.entries.get((tuple(x), tuple(y)))
        if c is None:
            return CoeffPoly.symbol(_default_symbol(x, y, self.spec.N))
        return c

    def element(self) -> AlgebraElement:
        terms = {(GeneratorId(Kind.FIELD, *x), GeneratorId(Kind.FIELD, *y)): self.entry(x, y)
                 for x, y in self.pairs()}
        return AlgebraElement(self.spec, terms)

    def half_order(self) -> int:
        size = self.spec.n * self.spec.N
        if size % 2:
            raise ParityError(f"nN = {size} is odd")
        return size // 2

    def to_json_obj(self) -> dict:
        return {
            "n": self.spec.n,
            "N": self.spec.N,
            "statistics": GRASSMANN,
            "variant": self.spec.variant.name,
            "entries": [[x[0], x[1], y[0], y[1], str(c)] for (x, y), c in sorted(self.entries.items())],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)

    @classmethod
    def from_json_obj(cls, obj: Mapping, spec: FieldSpec | None = None) -> "QuadraticForm":
        from .exprio import parse_coeff

        if obj.get("statistics", GRASSMANN) != GRASSMANN:
            raise DomainError("quadratic forms need grassmann statistics")
        if spec is None:
            spec = FieldSpec(int(obj["n"]), int(obj.get("N", 1)), GRASSMANN, Variant.parse(obj.get("variant")))
        elif (spec.n, spec.N) != (int(obj.get("n", spec.n)), int(obj.get("N", spec.N))):
            raise ValueError("quadratic form size does not match the requested field spec")
        entries = {}
        for row in obj.get("entries", []):
            a, i, b, j, c = row
            entries[((int(a), int(i)), (int(b), int(j)))] = parse_coeff(str(c))
        return cls(spec, entries)

    @classmethod
    def from_json(cls, text: str, spec: FieldSpec | None = None) -> "QuadraticForm":
        return cls.from_json_obj(json.loads(text), spec)


def pfaffian(w: QuadraticForm) -> CoeffPoly:
    """Coefficient of the volume word in ``w^m / m!`` with ``m = nN/2``."""
    m = w.half_order()
    spec = w.spec
    we = w.element()
    power = AlgebraElement.scalar(spec)
    for _ in range(m):
        power = multiply(power, we)
    top = power.coefficient(volume_word(spec))
    return top * CoeffPoly.const(Fraction(1, math.factorial(m)))


def gaussian_integral(w: QuadraticForm) -> CoeffPoly:
    """Berezin integral of ``exp(w)``; the series stops at ``w^(nN/2)`` by nilpotency."""
    m = w.half_order()
    spec = w.spec
    we = w.element()
    total = AlgebraElement.scalar(spec)
    term = AlgebraElement.scalar(spec)
    for k in range(1, m + 1):
        term = multiply(we, term).scale(CoeffPoly.const(Fraction(1, k)))
        total = total + term
    return berezin_integrate(total, spec)


# -- classical oracles ------------------------------------------------------------

def _as_matrix(m) -> list[list[Fraction]]:
    rows = [[Fraction(x) for x in row] for row in m]
    size = len(rows)
    if any(len(r) != size for r in rows):
        raise OracleInputError("matrix must be square")
    return rows


def classical_pfaffian_oracle(m) -> Fraction:
    """Classical Pfaffian by recursive expansion along the first row."""
    rows = _as_matrix(m)
    size = len(rows)
    if size % 2:
        raise OracleInputError("Pfaffian needs even dimension")
    for i in range(size):
        for j in range(size):
            if rows[i][j] != -rows[j][i]:
                raise OracleInputError("matrix is not antisymmetric")

    def pf(ix: tuple) -> Fraction:
        if not ix:
            return Fraction(1)
        first, rest = ix[0], ix[1:]
        total = Fraction(0)
        for k, j in enumerate(rest):
            if rows[first][j]:
                sub = rest[:k] + rest[k + 1:]
                total += (-1) ** k * rows[first][j] * pf(sub)
        return total

    return pf(tuple(range(size)))


def exact_determinant(m) -> Fraction:
    """Determinant by fraction-exact Gaussian elimination."""
    a = _as_matrix(m)
    size = len(a)
    det = Fraction(1)
    for col in range(size):
        piv = next((r for r in range(col, size) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, size):
            f = a[r][col] / a[col][col]
            if f:
                for k in range(col, size):
                    a[r][k] -= f * a[col][k]
    return det


# -- exterior multiplication of differentials ----------------------------------

def wedge_exchange(spec: FieldSpec) -> dict:
    """Exchange rules for ``dpsi ^ dpsi`` defined through the symmetrizer.

    The wedge product is declared annihilated by ``J + J_cal.R``, which gives
    the same pattern as the Grassmann fields themselves.  Returned as a map
    from each disordered index pair to its single-pair rule.
    """
    _require_grassmann(spec)
    field_alg = FieldAlgebra(FieldSpec(spec.n, spec.N, GRASSMANN, spec.variant))
    out = {}
    for x, y in itertools.product(spec.indices(), repeat=2):
        gx, gy = GeneratorId(Kind.FIELD, *x), GeneratorId(Kind.FIELD, *y)
        if field_alg.disordered(gx, gy):
            out[(x, y)] = tuple((c, tuple(g.index for g in w)) for c, w in field_alg.rule(gx, gy))
    return out


def compare_wedge_with_calculus(spec: FieldSpec) -> VerificationReport:
    """Compare the wedge rules for differentials with the calculus product of differentials."""
    _require_grassmann(spec)
    alg = algebra_for(spec)
    wedge = wedge_exchange(spec)
    witnesses = []
    count = 0
    for x, y in itertools.product(spec.indices(), repeat=2):
        gx, gy = GeneratorId(Kind.DIFFERENTIAL, *x), GeneratorId(Kind.DIFFERENTIAL, *y)
        if alg.disordered(gx, gy):
            calc = tuple((c, tuple(g.index for g in w)) for c, w in alg.rule(gx, gy))
        else:
            calc = None if (x, y) in wedge else "canonical"
        want = wedge.get((x, y), "canonical")
        if calc != want:
            count += 1
            if len(witnesses) < 20:
                witnesses.append((f"d{x}*d{y}", f"calculus {_show_rule(calc)}", f"wedge {_show_rule(want)}"))
    return VerificationReport("differential wedge rules agree with calculus rules", count == 0, witnesses, count)


def _show_rule(rule) -> str:
    if rule is None:
        return "no rule"
    if rule == "canonical":
        return "already canonical"
    if rule == ():
        return "0"
    return " + ".join(f"({c})*{w}" for c, w in rule)
