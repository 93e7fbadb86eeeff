"""Exact commutative coefficients: Laurent polynomials in ``q`` and ``l``.

A :class:`CoeffPoly` is a finite sum of terms ``c * q^i * l^j * prod(s^k)``
with ``c`` a :class:`fractions.Fraction`, ``i, j`` arbitrary integers and
``s`` commuting parameter symbols (Pfaffian entries such as ``a[1,2]``) with
non-negative exponents.  Values are immutable and hashable.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

__all__ = [
    "BindingError",
    "CoeffError",
    "CoeffPoly",
    "EvaluationDomainError",
    "ParamUniverse",
    "Rational",
    "UniverseError",
    "ONE",
    "ZERO",
    "Q",
    "L",
    "poly_add",
    "poly_mul",
    "poly_eval",
    "poly_is_zero",
    "poly_gcd",
]

Rational = Fraction
Number = Union[int, Fraction]
# (q-exponent, l-exponent, ((symbol, exponent), ...) sorted by symbol)
Key = tuple


class CoeffError(ValueError):
    """Base class for coefficient-ring errors."""


class UniverseError(CoeffError):
    """Two operands were built over different parameter universes."""


class EvaluationDomainError(CoeffError):
    """Evaluation at ``q = 0`` or ``l = 0`` (a Laurent pole)."""


class BindingError(CoeffError):
    """A parameter symbol had no value during evaluation."""


@dataclass(frozen=True)
class ParamUniverse:
    """A declared, finite set of parameter symbols for one computation."""

    symbols: frozenset
    label: str = ""

    @classmethod
    def of(cls, names: Iterable[str], label: str = "") -> "ParamUniverse":
        return cls(frozenset(names), label)

    def symbol(self, name: str) -> "CoeffPoly":
        if name not in self.symbols:
            raise UniverseError(f"symbol {name!r} is not declared in universe {self.label!r}")
        return CoeffPoly({(0, 0, ((name, 1),)): Fraction(1)}, universe=self)


def _merge_params(a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    out = dict(a)
    for name, e in b:
        out[name] = out.get(name, 0) + e
    return tuple(sorted(out.items()))


def _join_universe(u, v):
    if u is None:
        return v
    if v is None or u is v or u == v:
        return u
    raise UniverseError(f"parameter universes differ: {u.label!r} vs {v.label!r}")


class CoeffPoly:
    __slots__ = ("_terms", "_universe", "_hash")

    def __init__(self, terms: Mapping | None = None, universe: ParamUniverse | None = None):
        clean = {}
        if terms:
            for key, c in terms.items():
                if c:
                    qe, le, params = key
                    for name, e in params:
                        if e < 0:
                            raise CoeffError(f"negative exponent on parameter {name}")
                        if universe is not None and name not in universe.symbols:
                            raise UniverseError(f"symbol {name!r} outside universe {universe.label!r}")
                    clean[key] = Fraction(c)
        self._terms = clean
        self._universe = universe
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def const(cls, c: Number) -> "CoeffPoly":
        return cls({(0, 0, ()): Fraction(c)})

    @classmethod
    def monomial(cls, c: Number = 1, q: int = 0, l: int = 0, params: Mapping[str, int] | None = None,
                 universe: ParamUniverse | None = None) -> "CoeffPoly":
        p = tuple(sorted((k, v) for k, v in (params or {}).items() if v))
        return cls({(q, l, p): Fraction(c)}, universe=universe)

    @classmethod
    def symbol(cls, name: str, universe: ParamUniverse | None = None) -> "CoeffPoly":
        return cls({(0, 0, ((name, 1),)): Fraction(1)}, universe=universe)

    @classmethod
    def coerce(cls, x) -> "CoeffPoly":
        if isinstance(x, CoeffPoly):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.const(x)
        raise TypeError(f"cannot use {type(x).__name__} as a coefficient")

    # -- accessors ----------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    @property
    def universe(self) -> ParamUniverse | None:
        return self._universe

    def items(self):
        """Terms in canonical (lexicographic key) order."""
        return sorted(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(k == (0, 0, ()) for k in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise CoeffError(f"{self} is not a constant")
        return self._terms.get((0, 0, ()), Fraction(0))

    def is_unit(self) -> bool:
        """True for a single term with no parameter symbols (invertible in the Laurent ring)."""
        if len(self._terms) != 1:
            return False
        (key,) = self._terms
        return not key[2]

    def symbols(self) -> set:
        return {name for key in self._terms for name, _ in key[2]}

    def uses_l(self) -> bool:
        return any(k[1] for k in self._terms)

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        try:
            other = CoeffPoly.coerce(other)
        except TypeError:
            return NotImplemented
        uni = _join_universe(self._universe, other._universe)
        if not other._terms:
            return self if uni is self._universe else CoeffPoly(self._terms, uni)
        out = dict(self._terms)
        for k, c in other._terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return CoeffPoly(out, uni)

    __radd__ = __add__

    def __neg__(self):
        return CoeffPoly({k: -c for k, c in self._terms.items()}, self._universe)

    def __sub__(self, other):
        try:
            other = CoeffPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return CoeffPoly.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return CoeffPoly(universe=self._universe)
            return CoeffPoly({k: c * other for k, c in self._terms.items()}, self._universe)
        if not isinstance(other, CoeffPoly):
            return NotImplemented
        uni = _join_universe(self._universe, other._universe)
        out: dict = {}
        for (q1, l1, p1), c1 in self._terms.items():
            for (q2, l2, p2), c2 in other._terms.items():
                k = (q1 + q2, l1 + l2, _merge_params(p1, p2))
                v = out.get(k, 0) + c1 * c2
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
        return CoeffPoly(out, uni)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        if isinstance(other, CoeffPoly):
            return self * other.inverse()
        return NotImplemented

    def inverse(self) -> "CoeffPoly":
        """Inverse of a unit ``c * q^i * l^j``; anything else raises."""
        if not self.is_unit():
            raise CoeffError(f"{self} is not invertible in the Laurent ring")
        ((qe, le, _), c), = self._terms.items()
        return CoeffPoly({(-qe, -le, ()): 1 / c}, self._universe)

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        result = CoeffPoly.const(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        if self._universe is not None and result._universe is None:
            result = CoeffPoly(result._terms, self._universe)
        return result

    # -- comparison ---------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CoeffPoly.const(other)
        if not isinstance(other, CoeffPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    # -- substitution / evaluation -----------------------------------
    def specialize(self, q0: Number | None = None, l0: Number | None = None,
                   params: Mapping[str, Number] | None = None) -> "CoeffPoly":
        """Substitute any subset of ``q``, ``l`` and parameter symbols by rationals."""
        if q0 is not None and Fraction(q0) == 0 or l0 is not None and Fraction(l0) == 0:
            raise EvaluationDomainError("q and l must be nonzero (Laurent poles at 0)")
        params = params or {}
        out: dict = {}
        for (qe, le, ps), c in self._terms.items():
            if q0 is not None:
                c = c * Fraction(q0) ** qe
                qe = 0
            if l0 is not None:
                c = c * Fraction(l0) ** le
                le = 0
            rest = []
            for name, e in ps:
                if name in params:
                    c = c * Fraction(params[name]) ** e
                else:
                    rest.append((name, e))
            k = (qe, le, tuple(rest))
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return CoeffPoly(out, self._universe)

    def eval(self, q0: Number, l0: Number, params: Mapping[str, Number] | None = None) -> Fraction:
        params = params or {}
        missing = self.symbols() - set(params)
        if missing:
            raise BindingError(f"no binding for {sorted(missing)}")
        return self.specialize(q0, l0, params).constant_value()

    # -- text form ----------------------------------------------------
    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for key, c in sorted(self._terms.items(), reverse=True):
            parts.append(_term_str(key, c))
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __repr__(self):
        return f"CoeffPoly({str(self)!r})"


def _term_str(key, c: Fraction) -> str:
    qe, le, ps = key
    factors = []
    for name, e in ps:
        factors.append(name if e == 1 else f"{name}^{e}")
    for var, e in (("l", le), ("q", qe)):
        if e == 1:
            factors.append(var)
        elif e:
            factors.append(f"{var}^{e}")
    sign = "-" if c < 0 else ""
    mag = abs(c)
    if not factors:
        return sign + str(mag)
    if mag == 1:
        return sign + "*".join(factors)
    return sign + str(mag) + "*" + "*".join(factors)


ZERO = CoeffPoly()
ONE = CoeffPoly.const(1)
Q = CoeffPoly.monomial(q=1)
L = CoeffPoly.monomial(l=1)


def poly_add(p: CoeffPoly, r: CoeffPoly) -> CoeffPoly:
    return p + r


def poly_mul(p: CoeffPoly, r: CoeffPoly) -> CoeffPoly:
    return p * r


def poly_eval(p: CoeffPoly, q0: Number, l0: Number, params: Mapping[str, Number] | None = None) -> Fraction:
    return p.eval(q0, l0, params)


def poly_is_zero(p: CoeffPoly) -> bool:
    return p.is_zero()


# -- univariate helpers (q only) used for row normalisation ---------------

def _to_dense_q(p: CoeffPoly) -> tuple[int, list]:
    """Write a q-only Laurent polynomial as ``q^shift * sum(coeffs[i] q^i)``."""
    if p.symbols() or p.uses_l():
        raise CoeffError(f"{p} is not a polynomial in q alone")
    exps = [k[0] for k in p.terms]
    lo, hi = min(exps), max(exps)
    coeffs = [Fraction(0)] * (hi - lo + 1)
    for (qe, _, _), c in p.terms.items():
        coeffs[qe - lo] = c
    return lo, coeffs


def _from_dense_q(shift: int, coeffs: list) -> CoeffPoly:
    return CoeffPoly({(shift + i, 0, ()): c for i, c in enumerate(coeffs) if c})


def _dense_divmod(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    out = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and any(a):
        f = a[-1] / b[-1]
        d = len(a) - len(b)
        out[d] = f
        for i, c in enumerate(b):
            a[d + i] -= f * c
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return out, a


def poly_gcd(p: CoeffPoly, r: CoeffPoly) -> CoeffPoly:
    """Monic gcd of two q-only Laurent polynomials, up to units."""
    if p.is_zero():
        return r
    if r.is_zero():
        return p
    _, a = _to_dense_q(p)
    _, b = _to_dense_q(r)
    while a and a[0] == 0:
        a.pop(0)
    while b and b[0] == 0:
        b.pop(0)
    while any(b):
        _, rem = _dense_divmod(a, b)
        a, b = b, rem
    lead = a[-1]
    return _from_dense_q(0, [c / lead for c in a])


def divide_exact(p: CoeffPoly, r: CoeffPoly) -> CoeffPoly:
    """``p / r`` for q-only Laurent polynomials; raises unless the division is exact."""
    if r.is_unit():
        return p * r.inverse()
    sp, a = _to_dense_q(p)
    sr, b = _to_dense_q(r)
    quot, rem = _dense_divmod(a, b)
    if any(rem):
        raise CoeffError(f"{r} does not divide {p}")
    return _from_dense_q(sp - sr, quot)
