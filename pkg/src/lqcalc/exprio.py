"""Expression parser, canonical printer and the ``lqcalc`` command line.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := atom ('^' int)?
    atom   := rational | 'q' | 'l' | 'a' '[' idx ',' idx ']' | gen | '(' expr ')'
    gen    := ('psi' | 'dpsi' | 'dd' | 'phi' | 'dphi') '[' comp ',' site ']'

A leading ``-`` on a term is accepted as negation.  ``idx`` is either an
integer or a ``(component,site)`` pair.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .coeff import ONE, CoeffError, CoeffPoly, L, Q

__all__ = [
    "ExprSyntaxError",
    "GeneratorKindError",
    "Gen",
    "Literal",
    "Neg",
    "Power",
    "Product",
    "Sum",
    "evaluate",
    "format_element",
    "format_terms",
    "main",
    "parse",
    "parse_coeff",
    "parse_element",
    "run_cli",
]


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, column: int):
        super().__init__(f"{message} at column {column}")
        self.column = column


class GeneratorKindError(ValueError):
    def __init__(self, message: str, column: int):
        super().__init__(f"{message} at column {column}")
        self.column = column


class ExprBoundsError(IndexError):
    def __init__(self, message: str, column: int):
        super().__init__(f"{message} at column {column}")
        self.column = column


# -- AST ------------------------------------------------------------------------

@dataclass(frozen=True)
class Literal:
    value: CoeffPoly


@dataclass(frozen=True)
class Gen:
    name: str
    component: int
    site: int
    column: int = 0


@dataclass(frozen=True)
class Product:
    factors: tuple


@dataclass(frozen=True)
class Sum:
    terms: tuple


@dataclass(frozen=True)
class Power:
    base: object
    exponent: int


@dataclass(frozen=True)
class Neg:
    operand: object


# -- tokenizer -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_]+)|(?P<op>[-+*^()\[\],]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            col = pos + 1 + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ExprSyntaxError(f"unexpected character {text[col - 1]!r}", col)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind) + 1))
        pos = m.end()
    out.append(("end", "", len(text) + 1))
    return out


_FIELD_NAMES = {"psi", "phi"}
_DIFF_NAMES = {"dpsi", "dphi"}
_GEN_NAMES = _FIELD_NAMES | _DIFF_NAMES | {"dd"}


class _Parser:
    def __init__(self, text: str, spec=None, allow_generators: bool = True):
        self.toks = _tokenize(text)
        self.i = 0
        self.spec = spec
        self.allow_generators = allow_generators

    def peek(self):
        return self.toks[self.i]

    def take(self, value: str | None = None, kind: str | None = None):
        tok = self.toks[self.i]
        if (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind):
            want = value or kind
            got = tok[1] or "end of input"
            raise ExprSyntaxError(f"expected {want!r}, found {got!r}", tok[2])
        self.i += 1
        return tok

    def parse(self):
        node = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ExprSyntaxError(f"unexpected {tok[1]!r}", tok[2])
        return node

    def expr(self):
        terms = []
        neg = False
        if self.peek()[1] in ("-", "+"):
            neg = self.take()[1] == "-"
        t = self.term()
        terms.append(Neg(t) if neg else t)
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            t = self.term()
            terms.append(Neg(t) if op == "-" else t)
        return terms[0] if len(terms) == 1 else Sum(tuple(terms))

    def term(self):
        factors = [self.factor()]
        while self.peek()[1] == "*":
            self.take("*")
            factors.append(self.factor())
        return factors[0] if len(factors) == 1 else Product(tuple(factors))

    def factor(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.take("^")
            sign = 1
            if self.peek()[1] == "-":
                self.take("-")
                sign = -1
            tok = self.take(kind="num")
            if "/" in tok[1]:
                raise ExprSyntaxError("exponent must be an integer", tok[2])
            return Power(base, sign * int(tok[1]))
        return base

    def _int(self) -> tuple[int, int]:
        tok = self.take(kind="num")
        if "/" in tok[1]:
            raise ExprSyntaxError("index must be an integer", tok[2])
        return int(tok[1]), tok[2]

    def _idx(self):
        if self.peek()[1] == "(":
            self.take("(")
            a, _ = self._int()
            self.take(",")
            r, _ = self._int()
            self.take(")")
            return (a, r)
        return self._int()[0]

    def atom(self):
        kind, val, col = self.peek()
        if kind == "num":
            self.take()
            return Literal(CoeffPoly.const(Fraction(val)))
        if val == "(":
            self.take("(")
            node = self.expr()
            self.take(")")
            return node
        if kind == "name":
            self.take()
            if val == "q":
                return Literal(Q)
            if val == "l":
                return Literal(L)
            if val == "a":
                self.take("[")
                x = self._idx()
                self.take(",")
                y = self._idx()
                self.take("]")
                if isinstance(x, tuple) != isinstance(y, tuple):
                    raise ExprSyntaxError("mixed index styles in parameter symbol", col)
                name = f"a[{x},{y}]" if not isinstance(x, tuple) else f"a[({x[0]},{x[1]}),({y[0]},{y[1]})]"
                return Literal(CoeffPoly.symbol(name))
            if val in _GEN_NAMES:
                if not self.allow_generators:
                    raise GeneratorKindError(f"generator {val!r} not allowed in a coefficient", col)
                self.take("[")
                comp, _ = self._int()
                self.take(",")
                site, _ = self._int()
                self.take("]")
                self._check_gen(val, comp, site, col)
                return Gen(val, comp, site, col)
            raise ExprSyntaxError(f"unknown name {val!r}", col)
        raise ExprSyntaxError(f"unexpected {val or 'end of input'!r}", col)

    def _check_gen(self, name: str, comp: int, site: int, col: int):
        spec = self.spec
        if spec is None:
            return
        if spec.grassmann and name in ("phi", "dphi"):
            raise GeneratorKindError(f"{name} is a boson generator but statistics is grassmann", col)
        if not spec.grassmann and name in ("psi", "dpsi"):
            raise GeneratorKindError(f"{name} is a grassmann generator but statistics is boson", col)
        if not (1 <= comp <= spec.n and 1 <= site <= spec.N):
            raise ExprBoundsError(f"{name}[{comp},{site}] out of bounds for n={spec.n}, N={spec.N}", col)


def parse(text: str, spec=None):
    """Parse ``text`` into an AST, checking generator kinds and bounds against ``spec``."""
    return _Parser(text, spec).parse()


def _coeff_value(node) -> CoeffPoly:
    if isinstance(node, Literal):
        return node.value
    if isinstance(node, Neg):
        return -_coeff_value(node.operand)
    if isinstance(node, Sum):
        out = CoeffPoly()
        for t in node.terms:
            out = out + _coeff_value(t)
        return out
    if isinstance(node, Product):
        out = ONE
        for f in node.factors:
            out = out * _coeff_value(f)
        return out
    if isinstance(node, Power):
        base = _coeff_value(node.base)
        if node.exponent < 0 and not base.is_unit():
            raise ExprSyntaxError(f"negative power of non-unit {base}", 1)
        return base ** node.exponent
    raise GeneratorKindError("generator inside a coefficient", getattr(node, "column", 1))


def parse_coeff(text: str) -> CoeffPoly:
    """Parse a pure coefficient such as ``1/2*a[1,2]*q^-1 - l``."""
    return _coeff_value(_Parser(text, None, allow_generators=False).parse())


def evaluate(node, spec):
    """Evaluate an AST to a normal-ordered :class:`AlgebraElement`."""
    from .fieldalg import AlgebraElement, GeneratorId, Kind, multiply

    if isinstance(node, Literal):
        return AlgebraElement.scalar(spec, node.value)
    if isinstance(node, Gen):
        kind = Kind.FIELD if node.name in _FIELD_NAMES else Kind.DIFFERENTIAL if node.name in _DIFF_NAMES \
            else Kind.DERIVATIVE
        return AlgebraElement.word(spec, (GeneratorId(kind, node.component, node.site),))
    if isinstance(node, Neg):
        return -evaluate(node.operand, spec)
    if isinstance(node, Sum):
        out = AlgebraElement(spec)
        for t in node.terms:
            out = out + evaluate(t, spec)
        return out
    if isinstance(node, Product):
        out = AlgebraElement.scalar(spec)
        for f in node.factors:
            out = multiply(out, evaluate(f, spec))
        return out
    if isinstance(node, Power):
        base = evaluate(node.base, spec)
        if node.exponent < 0:
            if base.max_degree() > 0:
                raise ExprSyntaxError("negative power of a noncommuting expression", 1)
            return AlgebraElement.scalar(spec, _coeff_value(node))
        out = AlgebraElement.scalar(spec)
        for _ in range(node.exponent):
            out = multiply(out, base)
        return out
    raise TypeError(f"unknown node {node!r}")


def parse_element(text: str, spec):
    return evaluate(parse(text, spec), spec)


# -- printing -------------------------------------------------------------------

def format_terms(items: Sequence[tuple[CoeffPoly, str]]) -> str:
    """Join ``(coefficient, word text)`` pairs; an empty word is a scalar term."""
    parts = []
    for c, word in items:
        if c.is_zero():
            continue
        nterms = len(c.terms)
        neg = False
        if nterms == 1:
            (key, v), = c.terms.items()
            if v < 0:
                neg, c = True, -c
        else:
            lead = max(c.terms)
            if c.terms[lead] < 0:
                neg, c = True, -c
        cs = str(c)
        if not word:
            body = f"({cs})" if nterms > 1 and (neg or parts) else cs
        elif cs == "1":
            body = word
        elif nterms == 1:
            body = f"{cs}*{word}"
        else:
            body = f"({cs})*{word}"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts) if parts else "0"


def format_element(e) -> str:
    return format_terms([(c, "*".join(g.to_text(e.spec) for g in w)) for w, c in e.items()])


# -- command line ---------------------------------------------------------------

class UsageError(Exception):
    pass


class _ArgParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> argparse.ArgumentParser:
    p = _ArgParser(prog="lqcalc", description="Exact (l,q)-deformed R-matrix and lattice field calculus.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_ArgParser)

    def size(sp, sites_default=1):
        sp.add_argument("--n", type=int, default=2, help="components per site")
        sp.add_argument("--sites", type=int, default=sites_default, help="number of lattice sites N")
        sp.add_argument("--variant", choices=["q", "qt"], default="q", help="site-gluing matrix Q or its transpose")

    v = sub.add_parser("verify", help="check Yang-Baxter, Hecke or projector identities")
    v.add_argument("identity", choices=["ybe", "hecke", "projectors"])
    size(v)
    v.add_argument("--small", action="store_true", help="use the single-site R-matrix")

    nf = sub.add_parser("nf", help="normal form of an expression")
    nf.add_argument("expr")
    size(nf)
    nf.add_argument("--stat", choices=["grassmann", "boson"], default="grassmann")
    nf.add_argument("--eval", dest="eval_at", default=None, help="evaluation point such as q=2,l=3,a[1,2]=1/2")
    nf.add_argument("--degree-cap", type=int, default=16)

    ep = sub.add_parser("epsilon", help="deformed epsilon tensor")
    ep.add_argument("--indices", required=True, help="comma separated a:r pairs, or components when N=1")
    size(ep)

    ig = sub.add_parser("integrate", help="Berezin integral of a field expression")
    ig.add_argument("expr")
    size(ig)

    for name, helptext in (("pfaffian", "(l,q)-Pfaffian of a quadratic form"),
                           ("gaussian", "Gaussian Berezin integral of a quadratic form")):
        sp = sub.add_parser(name, help=helptext)
        size(sp)
        sp.add_argument("--entries", default=None, help="quadratic form JSON file")

    cf = sub.add_parser("confluence", help="exhaustive local confluence check")
    size(cf, 2)
    cf.add_argument("--stat", choices=["grassmann", "boson"], default="grassmann")
    cf.add_argument("--max-len", type=int, default=3)

    cv = sub.add_parser("covariance", help="n = 2 quantum-matrix checks")
    cv.add_argument("--check", choices=["all", "plane", "det", "lqdet"], default="all")
    cv.add_argument("--sites", type=int, default=None)
    return p


def _parse_eval(text: str):
    q0 = l0 = None
    params = {}
    for part in filter(None, (s.strip() for s in re.split(r",(?![^\[]*\])", text))):
        if "=" not in part:
            raise UsageError(f"bad binding {part!r}")
        k, v = part.split("=", 1)
        val = Fraction(v.strip())
        k = k.strip()
        if k == "q":
            q0 = val
        elif k == "l":
            l0 = val
        else:
            params[k] = val
    return q0, l0, params


def _parse_indices(text: str, N: int) -> list[tuple[int, int]]:
    out = []
    for part in filter(None, (s.strip() for s in text.split(","))):
        if ":" in part:
            a, r = part.split(":")
            out.append((int(a), int(r)))
        elif N == 1:
            out.append((int(part), 1))
        else:
            raise UsageError("lattice indices need component:site form")
    return out


def _report(rep) -> tuple[bool, dict]:
    d = rep.to_dict()
    return rep.passed, d


def _dispatch(args) -> dict:
    from . import berezin, covariance, fieldalg, rmatrix

    cmd = args.command
    out: dict = {}
    if cmd == "verify":
        variant = rmatrix.Variant.parse(args.variant)
        if args.small:
            r = rmatrix.build_small_r(args.n)
            i_op, j_op = rmatrix.build_diag_ops(args.n, 1)
        else:
            r = rmatrix.build_big_r(args.n, args.sites, variant)
            i_op, j_op = rmatrix.build_diag_ops(args.n, args.sites)
        if args.identity == "ybe":
            rep = rmatrix.verify_ybe(r)
        elif args.identity == "hecke":
            rep = rmatrix.verify_hecke(r, i_op, j_op)
        elif args.small:
            rep = rmatrix.verify_small_projectors(args.n)
        else:
            a, s = rmatrix.build_big_projectors(args.n, args.sites, variant)
            rep = rmatrix.verify_projector_identities(a, s, i_op, j_op)
        out["passed"], out["result"] = _report(rep)
    elif cmd in ("nf", "integrate"):
        stat = getattr(args, "stat", "grassmann")
        spec = fieldalg.FieldSpec(args.n, args.sites, stat, rmatrix.Variant.parse(args.variant),
                                  degree_cap=getattr(args, "degree_cap", 16))
        e = parse_element(args.expr, spec)
        if cmd == "nf":
            if args.eval_at:
                q0, l0, params = _parse_eval(args.eval_at)
                e = e.specialize(q0, l0, params)
            out["result"] = format_element(e)
        else:
            out["result"] = str(berezin.berezin_integrate(e, spec))
    elif cmd == "epsilon":
        spec = fieldalg.FieldSpec(args.n, args.sites, "grassmann", rmatrix.Variant.parse(args.variant))
        out["result"] = str(berezin.epsilon(_parse_indices(args.indices, args.sites), spec))
    elif cmd in ("pfaffian", "gaussian"):
        spec = fieldalg.FieldSpec(args.n, args.sites, "grassmann", rmatrix.Variant.parse(args.variant))
        if args.entries:
            with open(args.entries, encoding="utf-8") as fh:
                w = berezin.QuadraticForm.from_json(fh.read(), spec)
        else:
            w = berezin.QuadraticForm.symbolic(spec)
        fn = berezin.pfaffian if cmd == "pfaffian" else berezin.gaussian_integral
        out["result"] = str(fn(w))
    elif cmd == "confluence":
        spec = fieldalg.FieldSpec(args.n, args.sites, args.stat, rmatrix.Variant.parse(args.variant))
        rep = fieldalg.check_local_confluence(spec, args.max_len)
        out["passed"], out["result"] = _report(rep)
        out["witnesses"] = out["result"].pop("witnesses", [])
    elif cmd == "covariance":
        rel = covariance.derive_rtt_relations(2)
        reports = []
        if args.check in ("all", "plane"):
            reports += [covariance.verify_plane_covariance("grassmann", rel),
                        covariance.verify_plane_covariance("boson", rel)]
        if args.check in ("all", "det"):
            reports += [covariance.verify_det_top_form(relations=rel), covariance.check_centrality(rel)]
        if args.check in ("all", "lqdet"):
            sites = [args.sites] if args.sites else [1, 2]
            reports += [covariance.verify_lq_det(N, rel) for N in sites]
        out["passed"] = all(r.passed for r in reports)
        out["result"] = {
            "relations": rel.to_json_obj(),
            "qdet": format_terms([(c, "*".join(covariance.GENERATORS[g] for g in w))
                                  for w, c in sorted(covariance.qdet(rel).items())]),
            "checks": [r.to_dict() for r in reports],
        }
    return out


def _config(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k != "command"}


def run_cli(argv: Sequence[str] | None = None, stdout=None) -> int:
    """Run one command and write its JSON document; returns the exit code."""
    from .fieldalg import DomainError, IndexBoundsError
    from .rmatrix import DimensionError

    stdout = stdout or sys.stdout
    start = time.perf_counter()
    doc: dict = {"command": None, "config": {}}
    code = 0
    try:
        args = _build_parser().parse_args(argv)
        doc["command"] = args.command
        doc["config"] = _config(args)
        doc.update(_dispatch(args))
        if doc.get("passed") is False:
            code = 1
    except (UsageError, ExprSyntaxError, GeneratorKindError, ExprBoundsError, IndexBoundsError,
            DimensionError, DomainError, CoeffError, ValueError, OSError) as exc:
        doc["passed"] = False
        doc["error"] = {"reason": type(exc).__name__, "message": str(exc)}
        code = 2
    doc["timing-ms"] = round((time.perf_counter() - start) * 1000, 3)
    stdout.write(json.dumps(doc, sort_keys=True) + "\n")
    return code


def main() -> None:  # pragma: no cover - thin wrapper
    sys.exit(run_cli())
