"""Acceptance criteria as runnable checks.

Each ``criterion_k`` returns a :class:`CriterionResult`.  The checks are
exact (symbolic ``q``, ``l``) unless noted; runtime bounds are enforced by
timing the whole check.
"""
from __future__ import annotations

import io
import itertools
import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import berezin, covariance, fieldalg, rmatrix
from .coeff import ONE, Q
from .exprio import parse_coeff, run_cli
from .fieldalg import AlgebraElement, FieldSpec, Kind
from .rmatrix import Variant

VARIANTS = (Variant(False), Variant(True))
STATISTICS = ("grassmann", "boson")


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    seconds: float = 0.0
    failures: list = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"criterion {self.number:2d} {status}  {self.title} ({self.seconds:.2f}s)"
        if self.failures:
            text += " -- " + "; ".join(self.failures[:4])
            if len(self.failures) > 4:
                text += f"; ... {len(self.failures) - 4} more"
        return text


class _Run:
    def __init__(self, number: int, title: str):
        self.result = CriterionResult(number, title, True)
        self._start = time.perf_counter()

    def require(self, ok: bool, what: str):
        if not ok:
            self.result.passed = False
            self.result.failures.append(what)

    def within(self, seconds: float, start: float, what: str):
        spent = time.perf_counter() - start
        self.require(spent < seconds, f"{what} took {spent:.1f}s (limit {seconds:g}s)")

    def done(self) -> CriterionResult:
        self.result.seconds = time.perf_counter() - self._start
        return self.result


def criterion_1() -> CriterionResult:
    run = _Run(1, "single-site R: YBE, Hecke, symmetry, eigenvalue annihilation")
    for n in (2, 3, 4):
        start = time.perf_counter()
        r = rmatrix.build_small_r(n)
        i_op, j_op = rmatrix.build_diag_ops(n, 1)
        run.require(rmatrix.verify_ybe(r).passed, f"n={n} YBE")
        run.require(rmatrix.verify_hecke(r, i_op, j_op).passed, f"n={n} Hecke")
        run.require(r.transpose() == r, f"n={n} index symmetry")
        ident = rmatrix.identity(n, 1)
        ann = rmatrix.compose(r - ident.scale(Q), r + ident.scale(Q ** -1))
        run.require(ann.is_zero(), f"n={n} (R - q)(R + 1/q) != 0")
        run.within(10, start, f"n={n}")
    return run.done()


def criterion_2() -> CriterionResult:
    run = _Run(2, "single-site projectors are orthogonal idempotents")
    for n in (2, 3):
        run.require(rmatrix.verify_small_projectors(n).passed, f"n={n}")
    return run.done()


def criterion_3() -> CriterionResult:
    run = _Run(3, "lattice R: YBE and Hecke at (2,2), (2,3), (3,2), both variants")
    for (n, N), v in itertools.product([(2, 2), (2, 3), (3, 2)], VARIANTS):
        start = time.perf_counter()
        r = rmatrix.build_big_r(n, N, v)
        i_op, j_op = rmatrix.build_diag_ops(n, N)
        ybe = rmatrix.verify_ybe(r)
        run.require(ybe.passed, f"({n},{N},{v.name}) YBE: {ybe.residual_count} residual entries")
        run.require(rmatrix.verify_hecke(r, i_op, j_op).passed, f"({n},{N},{v.name}) Hecke")
        run.within(120, start, f"({n},{N},{v.name})")
    return run.done()


def criterion_4() -> CriterionResult:
    run = _Run(4, "lattice projectors: orthogonality and normalization verdict at (2,2)")
    for v in VARIANTS:
        a, s = rmatrix.build_big_projectors(2, 2, v)
        i_op, j_op = rmatrix.build_diag_ops(2, 2)
        rep = rmatrix.verify_projector_identities(a, s, i_op, j_op)
        ok = {p.name: p.passed for p in rep.parts}
        run.require(ok["A.S = 0"] and ok["S.A = 0"], f"{v.name}: not orthogonal")
        run.require(bool(rep.verdict) and "no candidate" not in rep.verdict, f"{v.name}: verdict {rep.verdict!r}")
        run.require(rep.passed, f"{v.name}: report did not pass")
    return run.done()


def criterion_5() -> CriterionResult:
    run = _Run(5, "local confluence, all kinds, length <= 3 at (2,2)")
    start = time.perf_counter()
    for stat, v in itertools.product(STATISTICS, VARIANTS):
        rep = fieldalg.check_local_confluence(FieldSpec(2, 2, stat, v), 3)
        run.require(rep.passed, f"{stat}/{v.name}: {rep.residual_count} non-confluent words")
    run.within(60, start, "confluence")
    return run.done()


def criterion_6() -> CriterionResult:
    run = _Run(6, "differential calculus: d^2 = 0, derivatives, component tables")
    for stat, v in itertools.product(STATISTICS, VARIANTS):
        spec = FieldSpec(2, 2, stat, v)
        bad = 0
        for w in fieldalg.canonical_basis(spec, (Kind.DIFFERENTIAL, Kind.FIELD), 3):
            if sum(g.kind == Kind.FIELD for g in w) > 2:
                continue
            if not fieldalg.apply_d(fieldalg.apply_d(AlgebraElement.word(spec, w))).is_zero():
                bad += 1
        run.require(bad == 0, f"{stat}/{v.name}: d^2 != 0 on {bad} words")
        for dg in spec.generators((Kind.DERIVATIVE,)):
            for x in spec.generators((Kind.FIELD,)):
                got = fieldalg.apply_derivative(dg, AlgebraElement.word(spec, (x,)))
                want = AlgebraElement.scalar(spec, 1 if dg.index == x.index else 0)
                run.require(got == want, f"{stat}: {dg.to_text(spec)} on {x.to_text(spec)}")
    rep = fieldalg.compare_component_tables()
    for p in rep.parts:
        if "fields" in p.name:
            run.require(p.passed, f"{p.name}: {p.residual_count} mismatching lines")
    run.require(bool(rep.verdict), "derivative table report has no verdict")
    return run.done()


CLOSED_FORM_PFAFFIAN_4 = "1/2*(1+q^4)*a[1,2]*a[3,4] - 1/2*q*(1+q^2)*a[1,3]*a[2,4] + q^2*a[1,4]*a[2,3]"


def criterion_7() -> CriterionResult:
    run = _Run(7, "Pfaffian closed form at (4,1)")
    got = berezin.pfaffian(berezin.QuadraticForm.symbolic(FieldSpec(4, 1)))
    run.require(got == parse_coeff(CLOSED_FORM_PFAFFIAN_4), f"got {got}")
    return run.done()


def criterion_8() -> CriterionResult:
    run = _Run(8, "Gaussian integral equals Pfaffian at (2,1), (4,1), (2,2)")
    for (n, N), v in itertools.product([(2, 1), (4, 1), (2, 2)], VARIANTS):
        start = time.perf_counter()
        w = berezin.QuadraticForm.symbolic(FieldSpec(n, N, variant=v))
        run.require(berezin.gaussian_integral(w) == berezin.pfaffian(w), f"({n},{N},{v.name})")
        run.within(60, start, f"({n},{N},{v.name})")
    return run.done()


def random_antisymmetric(rng: random.Random, size: int) -> list[list[Fraction]]:
    m = [[Fraction(0)] * size for _ in range(size)]
    for i, j in itertools.combinations(range(size), 2):
        m[i][j] = Fraction(rng.randint(-20, 20), rng.randint(1, 7))
        m[j][i] = -m[i][j]
    return m


def criterion_9(samples_per_size: int = 8, seed: int = 20240917) -> CriterionResult:
    run = _Run(9, "classical limit q = l = 1 against the classical Pfaffian")
    rng = random.Random(seed)
    count = 0
    for size in (2, 4, 6):
        spec = FieldSpec(size, 1)
        for _ in range(samples_per_size):
            m = random_antisymmetric(rng, size)
            entries = {((i + 1, 1), (j + 1, 1)): m[i][j] for i, j in itertools.combinations(range(size), 2)}
            pf = berezin.pfaffian(berezin.QuadraticForm(spec, entries)).eval(1, 1)
            oracle = berezin.classical_pfaffian_oracle(m)
            run.require(pf == oracle, f"size {size}: {pf} != {oracle}")
            run.require(pf * pf == berezin.exact_determinant(m), f"size {size}: Pf^2 != det")
            count += 1
    run.require(count >= 20, f"only {count} samples")
    return run.done()


def criterion_10() -> CriterionResult:
    run = _Run(10, "quantum-matrix covariance at n = 2")
    rel = covariance.derive_rtt_relations(2)
    run.require(rel.check_round_trip().passed, "round trip")
    run.require(covariance.check_centrality(rel).passed, "qdet not central")
    for stat in STATISTICS:
        run.require(covariance.verify_plane_covariance(stat, rel).passed, f"{stat} plane")
    det = covariance.verify_det_top_form(relations=rel)
    run.require(det.passed and det.details.get("extracted_det") == "a*d - q*b*c",
                f"det top form {det.details.get('extracted_det')!r}")
    for N in (1, 2):
        run.require(covariance.verify_lq_det(N, rel).passed, f"lq det N={N}")
    return run.done()


def _integration_rules(run: _Run, spec: FieldSpec, orderings):
    vol = berezin.volume_word(spec)
    run.require(berezin.berezin_integrate(AlgebraElement.word(spec, vol)) == ONE,
                f"({spec.n},{spec.N}) unit normalization")
    for perm in orderings:
        word = fieldalg.field_word(perm)
        got = berezin.berezin_integrate(AlgebraElement.word(spec, word))
        run.require(got == berezin.epsilon(perm, spec), f"({spec.n},{spec.N}) ordering {perm}")
    gens = spec.generators((Kind.FIELD,))
    for length in range(1, len(gens)):
        for w in itertools.product(gens, repeat=length):
            if not berezin.berezin_integrate(AlgebraElement.word(spec, w)).is_zero():
                run.require(False, f"({spec.n},{spec.N}) short word {w} integrates to nonzero")


def criterion_11(samples: int = 50, seed: int = 11) -> CriterionResult:
    run = _Run(11, "Berezin rules against the independent epsilon tensor")
    for v in VARIANTS:
        small = FieldSpec(2, 1, variant=v)
        _integration_rules(run, small, itertools.permutations(small.indices()))
        lattice = FieldSpec(2, 2, variant=v)
        # all 24 orderings, plus a sample of full-length index sequences where
        # repeated indices must give zero on both sides
        sequences = sorted(itertools.product(lattice.indices(), repeat=4))
        sample = random.Random(seed).sample(sequences, samples)
        _integration_rules(run, lattice, list(itertools.permutations(lattice.indices())) + sample)
    return run.done()


CLI_RUNS = [
    ["verify", "ybe", "--small", "--n", "3"],
    ["verify", "hecke", "--small", "--n", "3"],
    ["verify", "projectors", "--small", "--n", "3"],
    ["verify", "ybe", "--sites", "2"],
    ["verify", "hecke", "--sites", "2"],
    ["verify", "projectors", "--sites", "2"],
    ["verify", "hecke", "--sites", "2", "--variant", "qt"],
    ["confluence", "--sites", "2"],
    ["covariance"],
    ["nf", "psi[2,2]*psi[1,1]", "--sites", "2"],
    ["epsilon", "--indices", "2:1,1:2,2:2,1:1", "--sites", "2"],
    ["pfaffian", "--n", "4"],
    ["gaussian", "--sites", "2"],
]


def _cli_once(argv) -> tuple[int, str, dict]:
    buf = io.StringIO()
    code = run_cli(list(argv), buf)
    doc = json.loads(buf.getvalue())
    doc.pop("timing-ms", None)
    return code, json.dumps(doc, sort_keys=True), doc


def criterion_12() -> CriterionResult:
    run = _Run(12, "CLI payloads are byte-identical across runs with correct exit codes")
    for argv in CLI_RUNS:
        code1, text1, doc = _cli_once(argv)
        code2, text2, _ = _cli_once(argv)
        name = " ".join(argv)
        run.require(text1 == text2, f"{name}: payload differs between runs")
        run.require(code1 == code2, f"{name}: exit code differs between runs")
        want = 2 if "error" in doc else (1 if doc.get("passed") is False else 0)
        run.require(code1 == want, f"{name}: exit code {code1}, expected {want}")
    return run.done()


CRITERIA: dict[int, Callable[[], CriterionResult]] = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4,
    5: criterion_5, 6: criterion_6, 7: criterion_7, 8: criterion_8,
    9: criterion_9, 10: criterion_10, 11: criterion_11, 12: criterion_12,
}


def run_all(numbers=None) -> list[CriterionResult]:
    return [CRITERIA[k]() for k in (numbers or sorted(CRITERIA))]
