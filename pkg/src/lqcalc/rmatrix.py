"""Constant matrices of the (l,q)-deformed lattice calculus as exact sparse operators.

Every operator acts on tensor powers of the ``n*N``-dimensional generator
space.  A basis index is a pair ``(component, site)`` with both entries
1-based; a row or column multi-index is a tuple of such pairs, one per
tensor factor.  Entry ``t[row, col]`` is the coefficient in
``t(e_row) = sum_col t[row, col] e_col``, matching the way the R-matrix
rewrites ``x^a x^b`` into ``x^c x^d``.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping

from .coeff import ONE, ZERO, CoeffPoly, L, Q

__all__ = [
    "DimensionError",
    "ShapeError",
    "TensorOp",
    "ScaledOp",
    "Variant",
    "VerificationReport",
    "basis",
    "build_small_r",
    "build_projectors_small",
    "build_q_matrix",
    "build_big_r",
    "build_diag_ops",
    "build_big_projectors",
    "compose",
    "embed_pair",
    "identity",
    "scalar_op",
    "verify_ybe",
    "verify_hecke",
    "verify_projector_identities",
    "verify_small_projectors",
    "hecke_inverse",
]

MAX_WITNESSES = 20


class DimensionError(ValueError):
    pass


class ShapeError(ValueError):
    pass


@dataclass(frozen=True)
class Variant:
    """Which block matrix glues distinct sites: ``Q`` (default) or its transpose."""

    q_transpose: bool = False

    @classmethod
    def parse(cls, text: str | None) -> "Variant":
        if text in (None, "", "q", "default"):
            return cls(False)
        if text in ("qt", "transpose"):
            return cls(True)
        raise ValueError(f"unknown variant {text!r} (expected 'q' or 'qt')")

    @property
    def name(self) -> str:
        return "qt" if self.q_transpose else "q"


def _site_key(idx: tuple) -> tuple:
    return tuple((s, c) for c, s in idx)


def basis(n: int, N: int) -> list[tuple[int, int]]:
    """Single-factor basis in (site, component) lexicographic order."""
    return [(a, r) for r in range(1, N + 1) for a in range(1, n + 1)]


class TensorOp:
    """Immutable sparse operator on ``arity`` tensor factors of dimension ``n*N``."""

    __slots__ = ("arity", "n", "N", "_rows")

    def __init__(self, arity: int, n: int, N: int, entries: Mapping | None = None):
        self.arity = arity
        self.n = n
        self.N = N
        rows: dict = {}
        for (r, c), v in (entries or {}).items():
            if len(r) != arity or len(c) != arity:
                raise ShapeError(f"multi-index length must equal arity {arity}")
            v = CoeffPoly.coerce(v)
            if v.is_zero():
                continue
            rows.setdefault(r, {})[c] = v
        self._rows = rows

    @classmethod
    def _from_rows(cls, arity, n, N, rows) -> "TensorOp":
        t = cls.__new__(cls)
        t.arity, t.n, t.N = arity, n, N
        t._rows = {r: d for r, d in rows.items() if d}
        return t

    @property
    def dim(self) -> int:
        return self.n * self.N

    def entries(self) -> Iterator[tuple[tuple, tuple, CoeffPoly]]:
        for r in sorted(self._rows, key=_site_key):
            row = self._rows[r]
            for c in sorted(row, key=_site_key):
                yield r, c, row[c]

    def row(self, r: tuple) -> dict:
        return dict(self._rows.get(r, {}))

    def __getitem__(self, rc) -> CoeffPoly:
        r, c = rc
        return self._rows.get(r, {}).get(c, ZERO)

    def nnz(self) -> int:
        return sum(len(d) for d in self._rows.values())

    def is_zero(self) -> bool:
        return not self._rows

    def _check(self, other: "TensorOp"):
        if (self.arity, self.n, self.N) != (other.arity, other.n, other.N):
            raise ShapeError(
                f"shape mismatch: arity/n/N {(self.arity, self.n, self.N)} vs {(other.arity, other.n, other.N)}")

    def __add__(self, other: "TensorOp") -> "TensorOp":
        self._check(other)
        rows = {r: dict(d) for r, d in self._rows.items()}
        for r, d in other._rows.items():
            tgt = rows.setdefault(r, {})
            for c, v in d.items():
                s = tgt.get(c, ZERO) + v
                if s.is_zero():
                    tgt.pop(c, None)
                else:
                    tgt[c] = s
        return TensorOp._from_rows(self.arity, self.n, self.N, rows)

    def __neg__(self) -> "TensorOp":
        return self.scale(-1)

    def __sub__(self, other: "TensorOp") -> "TensorOp":
        return self + (-other)

    def scale(self, c) -> "TensorOp":
        c = CoeffPoly.coerce(c)
        rows = {}
        for r, d in self._rows.items():
            nd = {}
            for k, v in d.items():
                p = v * c
                if not p.is_zero():
                    nd[k] = p
            rows[r] = nd
        return TensorOp._from_rows(self.arity, self.n, self.N, rows)

    def __matmul__(self, other: "TensorOp") -> "TensorOp":
        return compose(self, other)

    def transpose(self) -> "TensorOp":
        rows: dict = {}
        for r, d in self._rows.items():
            for c, v in d.items():
                rows.setdefault(c, {})[r] = v
        return TensorOp._from_rows(self.arity, self.n, self.N, rows)

    def map_coeffs(self, fn: Callable[[CoeffPoly], CoeffPoly]) -> "TensorOp":
        return TensorOp(self.arity, self.n, self.N,
                        {(r, c): fn(v) for r, c, v in self.entries()})

    def specialize(self, q0=None, l0=None) -> "TensorOp":
        return self.map_coeffs(lambda v: v.specialize(q0, l0))

    def restrict(self, row_sites: tuple, col_sites: tuple) -> "TensorOp":
        """Block of entries whose row/column site patterns are as given."""
        return TensorOp(self.arity, self.n, self.N, {
            (r, c): v for r, c, v in self.entries()
            if tuple(s for _, s in r) == row_sites and tuple(s for _, s in c) == col_sites})

    def __eq__(self, other):
        if not isinstance(other, TensorOp):
            return NotImplemented
        return (self.arity, self.n, self.N) == (other.arity, other.n, other.N) and self._rows == other._rows

    def __hash__(self):
        return hash((self.arity, self.n, self.N, frozenset(
            (r, c, v) for r, d in self._rows.items() for c, v in d.items())))

    def __repr__(self):
        return f"TensorOp(arity={self.arity}, n={self.n}, N={self.N}, nnz={self.nnz()})"

    # -- serialization ----------------------------------------------------
    def to_json_obj(self) -> dict:
        return {
            "arity": self.arity,
            "n": self.n,
            "N": self.N,
            "entries": [[[list(p) for p in r], [list(p) for p in c], str(v)] for r, c, v in self.entries()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj: dict) -> "TensorOp":
        from .exprio import parse_coeff

        entries = {}
        for r, c, text in obj["entries"]:
            entries[(tuple(tuple(p) for p in r), tuple(tuple(p) for p in c))] = parse_coeff(text)
        return cls(obj["arity"], obj["n"], obj["N"], entries)

    @classmethod
    def from_json(cls, text: str) -> "TensorOp":
        return cls.from_json_obj(json.loads(text))


@dataclass(frozen=True)
class ScaledOp:
    """An operator with a rational-function prefactor: ``numerator / denominator``."""

    numerator: TensorOp
    denominator: CoeffPoly


def compose(t1: TensorOp, t2: TensorOp) -> TensorOp:
    """Exact sparse product ``t1 . t2``."""
    t1._check(t2)
    rows = {}
    other = t2._rows
    for r, d in t1._rows.items():
        acc: dict = {}
        for m, a in d.items():
            d2 = other.get(m)
            if not d2:
                continue
            for c, b in d2.items():
                prev = acc.get(c)
                acc[c] = a * b if prev is None else prev + a * b
        rows[r] = {c: v for c, v in acc.items() if not v.is_zero()}
    return TensorOp._from_rows(t1.arity, t1.n, t1.N, rows)


def _multi_basis(n: int, N: int, arity: int) -> Iterable[tuple]:
    return itertools.product(basis(n, N), repeat=arity)


def scalar_op(n: int, N: int, arity: int, c) -> TensorOp:
    c = CoeffPoly.coerce(c)
    return TensorOp(arity, n, N, {(m, m): c for m in _multi_basis(n, N, arity)})


def identity(n: int, N: int, arity: int = 2) -> TensorOp:
    return scalar_op(n, N, arity, ONE)


# -- component tables -------------------------------------------------------

def _theta(a: int, b: int) -> int:
    return 1 if a < b else 0


def small_r_table(n: int) -> dict:
    """R^{ab}_{cd} = d^a_d d^b_c (1 + (q-1) d^{ab}) + d^a_c d^b_d (q - 1/q) Theta^{ab}."""
    out = {}
    for a in range(1, n + 1):
        for b in range(1, n + 1):
            if a == b:
                out[((a, a), (a, a))] = Q
            else:
                out[((a, b), (b, a))] = ONE
                if a < b:
                    out[((a, b), (a, b))] = Q - Q ** -1
    return out


def q_table(n: int, q_transpose: bool = False) -> dict:
    """Q^{ab}_{cd} = d^a_c d^b_d d^{ab} + q^-1 d^a_d d^b_c Theta^{ab} + q d^a_d d^b_c Theta^{ba}."""
    out = {}
    for a in range(1, n + 1):
        for b in range(1, n + 1):
            if a == b:
                out[((a, a), (a, a))] = ONE
            else:
                out[((a, b), (b, a))] = Q ** -1 if a < b else Q
    if q_transpose:
        out = {(c, r): v for (r, c), v in out.items()}
    return out


# -- builders ---------------------------------------------------------------

def build_small_r(n: int) -> TensorOp:
    if n < 2:
        raise DimensionError(f"n must be >= 2, got {n}")
    return _small_r(n)


def _small_r(n: int) -> TensorOp:
    return TensorOp(2, n, 1, {(((a, 1), (b, 1)), ((c, 1), (d, 1))): v
                              for ((a, b), (c, d)), v in small_r_table(n).items()})


def build_projectors_small(n: int) -> tuple[ScaledOp, ScaledOp]:
    """``A_q = q^2/(1+q^2) (I - R/q)`` and ``S_q = 1/(1+q^2) (I + qR)`` as (numerator, denominator)."""
    r = build_small_r(n)
    ident = identity(n, 1)
    den = ONE + Q ** 2
    a_num = ident.scale(Q ** 2) - r.scale(Q)
    s_num = ident + r.scale(Q)
    return ScaledOp(a_num, den), ScaledOp(s_num, den)


def build_q_matrix(n: int, variant: Variant = Variant()) -> TensorOp:
    if n < 2:
        raise DimensionError(f"n must be >= 2, got {n}")
    return TensorOp(2, n, 1, {(((a, 1), (b, 1)), ((c, 1), (d, 1))): v
                              for ((a, b), (c, d)), v in q_table(n, variant.q_transpose).items()})


def build_big_r(n: int, N: int, variant: Variant = Variant()) -> TensorOp:
    """Block R-matrix gluing ``N`` single-site quantum spaces.

    Equal-site sectors carry the small R-matrix; an ordered distinct-site pair
    ``(i, j)``, ``i < j``, carries ``(l - 1/l)`` on its diagonal; both
    site-swapping blocks carry ``Q`` (or ``Q^t``).
    """
    if n < 2 or N < 1:
        raise DimensionError(f"need n >= 2 and N >= 1, got n={n}, N={N}")
    return _big_r(n, N, variant)


def _big_r(n: int, N: int, variant: Variant = Variant()) -> TensorOp:
    r_tab = small_r_table(n)
    q_tab = q_table(n, variant.q_transpose)
    shift = L - L ** -1
    entries = {}
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            if i == j:
                for ((a, b), (c, d)), v in r_tab.items():
                    entries[(((a, i), (b, i)), ((c, i), (d, i)))] = v
                continue
            for ((a, b), (c, d)), v in q_tab.items():
                entries[(((a, i), (b, j)), ((c, j), (d, i)))] = v
            if i < j:
                for a in range(1, n + 1):
                    for b in range(1, n + 1):
                        entries[(((a, i), (b, j)), ((a, i), (b, j)))] = shift
    return TensorOp(2, n, N, entries)


def build_diag_ops(n: int, N: int) -> tuple[TensorOp, TensorOp]:
    """Diagonal ``(I_cal, J_cal)``: ``1/q, q`` on equal-site sectors and ``1/l, l`` elsewhere."""
    i_ent, j_ent = {}, {}
    for m in _multi_basis(n, N, 2):
        same = m[0][1] == m[1][1]
        i_ent[(m, m)] = Q ** -1 if same else L ** -1
        j_ent[(m, m)] = Q if same else L
    return TensorOp(2, n, N, i_ent), TensorOp(2, n, N, j_ent)


def build_big_projectors(n: int, N: int, variant: Variant = Variant()) -> tuple[TensorOp, TensorOp]:
    """``A = J - I_cal R``, ``S = J + J_cal R`` (unnormalized)."""
    r = build_big_r(n, N, variant)
    i_op, j_op = build_diag_ops(n, N)
    ident = identity(n, N)
    return ident - compose(i_op, r), ident + compose(j_op, r)


def hecke_inverse(r: TensorOp, i_op: TensorOp, j_op: TensorOp) -> TensorOp:
    """``R^-1 = R - (J_cal - I_cal)``, valid whenever R satisfies the Hecke relation."""
    return r - (j_op - i_op)


def embed_pair(t: TensorOp, position: str | int) -> TensorOp:
    """Lift an arity-2 operator to three factors as ``t (x) id`` (12) or ``id (x) t`` (23)."""
    if t.arity != 2:
        raise ShapeError(f"embed_pair needs arity 2, got {t.arity}")
    position = str(position)
    if position not in ("12", "23"):
        raise ValueError("position must be '12' or '23'")
    one = basis(t.n, t.N)
    entries = {}
    for r, c, v in t.entries():
        for z in one:
            if position == "12":
                entries[(r + (z,), c + (z,))] = v
            else:
                entries[((z,) + r, (z,) + c)] = v
    return TensorOp(3, t.n, t.N, entries)


# -- verification -------------------------------------------------------------

@dataclass
class VerificationReport:
    """Outcome of an exact identity check.

    ``witnesses`` lists nonzero residual entries (truncated to
    ``MAX_WITNESSES``); ``residual_count`` is the untruncated number.
    """

    name: str
    passed: bool
    witnesses: list = field(default_factory=list)
    residual_count: int = 0
    parts: list = field(default_factory=list)
    verdict: str | None = None
    details: dict = field(default_factory=dict)

    @classmethod
    def from_residual(cls, name: str, residual: TensorOp, limit: int = MAX_WITNESSES) -> "VerificationReport":
        wit = list(itertools.islice(residual.entries(), limit))
        return cls(name, residual.is_zero(), wit, residual.nnz())

    @classmethod
    def combine(cls, name: str, parts: list, verdict: str | None = None) -> "VerificationReport":
        return cls(name, all(p.passed for p in parts), [], sum(p.residual_count for p in parts),
                   list(parts), verdict)

    def to_dict(self) -> dict:
        out = {"identity": self.name, "passed": self.passed}
        if self.witnesses or self.residual_count:
            out["witnesses"] = [_render(w) for w in self.witnesses]
            out["residual_count"] = self.residual_count
            out["truncated"] = self.residual_count > len(self.witnesses)
        if self.parts:
            out["parts"] = [p.to_dict() for p in self.parts]
        if self.verdict is not None:
            out["verdict"] = self.verdict
        if self.details:
            out["details"] = _render(self.details)
        return out


def _render(x):
    if isinstance(x, CoeffPoly):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _render(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_render(v) for v in x]
    if hasattr(x, "to_text"):
        return x.to_text()
    return x


def verify_ybe(t: TensorOp) -> VerificationReport:
    if t.arity != 2:
        raise ShapeError("Yang-Baxter check needs an arity-2 operator")
    t12 = embed_pair(t, "12")
    t23 = embed_pair(t, "23")
    lhs = compose(compose(t12, t23), t12)
    rhs = compose(compose(t23, t12), t23)
    return VerificationReport.from_residual("yang-baxter R12 R23 R12 = R23 R12 R23", lhs - rhs)


def verify_hecke(t: TensorOp, i_op: TensorOp, j_op: TensorOp) -> VerificationReport:
    """Both forms: ``t^2 - (J-I) t - 1 = 0`` and ``(1 + J t)(1 - I t) = 0``."""
    t._check(i_op)
    t._check(j_op)
    ident = identity(t.n, t.N, t.arity)
    t2 = compose(t, t)
    form1 = t2 - compose(j_op - i_op, t) - ident
    form2 = compose(ident + compose(j_op, t), ident - compose(i_op, t))
    return VerificationReport.combine("hecke", [
        VerificationReport.from_residual("hecke: R^2 - (J - I) R - 1 = 0", form1),
        VerificationReport.from_residual("hecke: (1 + J R)(1 - I R) = 0", form2),
    ])


def verify_projector_identities(a: TensorOp, s: TensorOp, i_op: TensorOp, j_op: TensorOp) -> VerificationReport:
    """Orthogonality of ``A``, ``S`` plus adjudication of the normalization of ``A^2``, ``S^2``.

    Two candidates are tested for each square: ``I^2 (I + J) A`` versus
    ``(1 + I^2) A`` (and ``J^2 (I + J) S`` versus ``(1 + J^2) S``).  The
    report passes when orthogonality holds and each square matches at least
    one candidate; ``verdict`` names the candidates that hold.
    """
    ident = identity(a.n, a.N, a.arity)
    a2 = compose(a, a)
    s2 = compose(s, s)
    i_plus_j = i_op + j_op
    i_sq = compose(i_op, i_op)
    j_sq = compose(j_op, j_op)
    checks = {
        "A.S = 0": compose(a, s),
        "S.A = 0": compose(s, a),
        "A^2 = I^2 (I + J) A": a2 - compose(compose(i_sq, i_plus_j), a),
        "A^2 = (1 + I^2) A": a2 - compose(ident + i_sq, a),
        "S^2 = J^2 (I + J) S": s2 - compose(compose(j_sq, i_plus_j), s),
        "S^2 = (1 + J^2) S": s2 - compose(ident + j_sq, s),
    }
    parts = [VerificationReport.from_residual(k, v) for k, v in checks.items()]
    ok = {p.name: p.passed for p in parts}
    held_a = [k for k in list(checks)[2:4] if ok[k]]
    held_s = [k for k in list(checks)[4:6] if ok[k]]
    verdict = "; ".join([
        "orthogonal" if ok["A.S = 0"] and ok["S.A = 0"] else "NOT orthogonal",
        "A: " + (", ".join(held_a) if held_a else "no candidate normalization holds"),
        "S: " + (", ".join(held_s) if held_s else "no candidate normalization holds"),
    ])
    passed = ok["A.S = 0"] and ok["S.A = 0"] and bool(held_a) and bool(held_s)
    return VerificationReport("projectors", passed, [], sum(p.residual_count for p in parts), parts, verdict)


def verify_small_projectors(n: int) -> VerificationReport:
    """Exact orthogonality and idempotence of the single-site ``A_q``, ``S_q``."""
    a, s = build_projectors_small(n)
    checks = {
        "A_q S_q = 0": compose(a.numerator, s.numerator),
        "S_q A_q = 0": compose(s.numerator, a.numerator),
        "A_q^2 = A_q": compose(a.numerator, a.numerator) - a.numerator.scale(a.denominator),
        "S_q^2 = S_q": compose(s.numerator, s.numerator) - s.numerator.scale(s.denominator),
        "R = q S_q - A_q / q": (build_small_r(n).scale(a.denominator)
                                - s.numerator.scale(Q) + a.numerator.scale(Q ** -1)),
    }
    return VerificationReport.combine("small projectors", [VerificationReport.from_residual(k, v)
                                                           for k, v in checks.items()])
