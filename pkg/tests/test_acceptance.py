"""Acceptance criteria 1-9, one PASS/FAIL line each.

Every criterion collects named comparisons, prints a single summary line to
the terminal and then asserts.  Criteria whose published reference values
disagree with exact computation are marked strict xfail: the computation is
reported faithfully and the mismatch is listed in the FAIL line.  The
disagreements are explained in README.md under "Known discrepancies".
"""

import os
import subprocess
import sys
from math import comb

import pytest

from bcwb import corpus
from bcwb.cohomology import bott_chern, dolbeault, map_C, map_I
from bcwb.diamond import (
    HodgeDiamond,
    invariance_check,
    kahler_tables,
    point_tables,
    surface_invariants,
    tables_from_model,
)
from bcwb.invariants import consistency_report
from bcwb.io import diamond_from_json, loads, surface_from_json

from conftest import CORPUS
from forms import span


class Criterion:
    def __init__(self, number):
        self.number = number
        self.failures = []
        self.count = 0

    def eq(self, label, got, want):
        self.count += 1
        if got != want:
            self.failures.append(f"{label}: got {got}, expected {want}")

    def true(self, label, ok, detail=""):
        self.count += 1
        if not ok:
            self.failures.append(f"{label}{': ' + detail if detail else ''}")

    def report(self, capsys):
        n = self.number
        if self.failures:
            line = f"FAIL criterion {n}: " + "; ".join(self.failures)
        else:
            line = f"PASS criterion {n}: {self.count} checks"
        with capsys.disabled():
            print("\n" + line)
        assert not self.failures, line


def rows(T, n=3):
    """Diamond rows from the top, each listed with p decreasing."""
    return [[T[p][k - p] for p in range(n, -1, -1) if 0 <= k - p <= n] for k in range(2 * n + 1)]


def tables(m):
    r = consistency_report(m)
    return r, {
        "betti": r.betti[1:],
        "hyper_c1": r.hyper_c1,
        "hyper_bc11": r.hyper_bc11,
        "spade": r.spade,
        "club": r.club,
    }


def test_criterion_1(capsys, iwasawa):
    c = Criterion(1)
    _, t = tables(iwasawa)
    c.eq("betti", t["betti"], [4, 8, 10, 8, 4, 1])
    c.eq("hyper_c1", t["hyper_c1"], [2, 6, 9, 8, 4, 1])
    c.eq("hyper_bc11", t["hyper_bc11"], [1, 4, 8, 8, 4, 1])
    c.eq("spade", t["spade"], [1, 2, 1, 0, 0, 0])
    c.eq("club", t["club"], [3, 4, 2, 0, 0, 0])
    c.report(capsys)


def test_criterion_2(capsys, iwasawa):
    c = Criterion(2)
    m = iwasawa
    groups = [
        ("BC(1,1)", bott_chern(m, 1, 1), 4, span("1|1", "1|2", "2|1", "2|2")),
        ("Dol(1,1)", dolbeault(m, 1, 1), 6, span("1|1", "1|2", "2|1", "2|2", "3|1", "3|2")),
        ("BC(1,2)", bott_chern(m, 1, 2), 6, span("1|12", "1|13", "1|23", "2|12", "2|13", "2|23")),
        ("BC(2,2)", bott_chern(m, 2, 2), 8,
         span("12|13", "12|23", "13|12", "13|13", "13|23", "23|12", "23|13", "23|23")),
    ]  # fmt: skip
    for label, G, dim, gens in groups:
        c.eq(f"dim {label}", G.dim, dim)
        c.true(f"span {label}", G.spanned_by(gens))
    maps = [
        ((1, 1), (0, 2), [], span("3|1", "3|2")),
        ((1, 2), (2, 2), span("1|12", "2|12"), span("3|13", "3|23")),
        ((2, 2), (2, 0), span("13|12", "23|12"), []),
    ]
    for (p, q), dims, ker, coker in maps:
        s = map_I(m, p, q)
        c.eq(f"I({p},{q}) ker/coker", (s.ker_dim, s.coker_dim), dims)
        c.true(f"I({p},{q}) spans", s.kernel_spanned_by(ker) and s.cokernel_spanned_by(coker))
    c.report(capsys)


H6_HODGE = [[1], [2, 2], [2, 5, 2], [1, 5, 5, 1], [2, 5, 2], [2, 2], [1]]
H6_BC = [[1], [2, 2], [2, 5, 2], [1, 6, 6, 1], [2, 6, 2], [3, 3], [1]]
H7_HODGE = [[1], [1, 2], [2, 4, 2], [1, 5, 5, 1], [3, 4, 2], [2, 2], [1]]
H7_BC = [[1], [1, 1], [3, 5, 3], [1, 6, 6, 1], [2, 5, 2], [3, 3], [1]]


@pytest.mark.xfail(strict=True, reason="published b3 = 11 contradicts the published Hodge diamond (sum 12)")
def test_criterion_3(capsys, h6):
    c = Criterion(3)
    r, t = tables(h6)
    c.eq("betti", t["betti"], [4, 9, 11, 9, 4, 1])
    c.eq("hyper_c1", t["hyper_c1"], [2, 7, 11, 9, 4, 1])
    c.eq("hyper_bc11", t["hyper_bc11"], [1, 5, 10, 9, 4, 1])
    c.eq("spade", t["spade"], [1, 2, 1, 0, 0, 0])
    c.eq("club", t["club"], [3, 4, 1, 0, 0, 0])
    c.eq("Hodge diamond", rows(r.hodge), H6_HODGE)
    c.eq("Bott-Chern diamond", rows(r.bc), H6_BC)
    c.true("Frolicher E1", r.frolicher_e1)
    c.true("ddbar verdict false", not r.ddbar_lemma)
    c.report(capsys)


@pytest.mark.xfail(strict=True, reason="published degree-3 values, diamonds and I(2,2) disagree with exact computation")
def test_criterion_4(capsys, h7):
    c = Criterion(4)
    m = h7
    r, t = tables(m)
    c.eq("betti", t["betti"], [3, 8, 12, 8, 3, 1])
    c.eq("hyper_c1", t["hyper_c1"], [1, 6, 12, 8, 3, 1])
    c.eq("hyper_bc11", t["hyper_bc11"], [1, 5, 11, 8, 3, 1])
    c.eq("spade", t["spade"], [0, 1, 1, 0, 0, 0])
    c.eq("club", t["club"], [2, 3, 1, 0, 0, 0])
    s2, s3 = map_C(m, 2), map_C(m, 3)
    c.eq("C2 ker/coker", (s2.ker_dim, s2.coker_dim), (1, 2))
    c.true("C2 spans", s2.kernel_spanned_by(span("1|1")) and s2.cokernel_spanned_by(span("13|", ("23|", "-3|2"))))
    c.eq("C3 ker/coker", (s3.ker_dim, s3.coker_dim), (0, 1))
    c.true("C3 spans", s3.cokernel_spanned_by(span("123|")))
    for (p, q), dims in [((1, 1), (2, 1)), ((1, 2), (2, 1)), ((2, 1), (1, 0)), ((2, 2), (2, 0))]:
        s = map_I(m, p, q)
        c.eq(f"I({p},{q}) ker/coker", (s.ker_dim, s.coker_dim), dims)
    c.eq("Hodge diamond", rows(r.hodge), H7_HODGE)
    c.eq("Bott-Chern diamond", rows(r.bc), H7_BC)
    c.report(capsys)


@pytest.mark.xfail(strict=True, reason="the BC(2,2) equality with b1 fails on the Iwasawa model")
def test_criterion_5(capsys, models):
    c = Criterion(5)
    required = [
        "del-squared",
        "delbar-squared",
        "del-delbar-anticommute",
        "d-squared",
        "L-complex-identification",
        "hyper-bc-duality",
        "bc-aeppli-duality",
        "euler-bc-vs-c1",
        "euler-bc-vs-top",
        "bc22-equals-b1",
        "high-degree-vanishing",
        "spade-from-map-C",
    ]
    for name in CORPUS:
        r = consistency_report(models[name])
        for check in required:
            if check == "bc22-equals-b1" and r.n < 2:
                continue
            ck = r.check(check)
            c.true(f"{name} {check}", ck.passed, ck.detail)
        n = r.n
        c.true(f"{name} spade/club zero beyond n+1",
               all(r.spade[k - 1] == r.club[k - 1] == 0 for k in range(n + 2, 2 * n + 1)))
    c.report(capsys)


def test_criterion_6(capsys):
    c = Criterion(6)
    for name, want in [("p2", (-1, 0, 0, 0)), ("k3", (-1, 1, 0, 0)), ("torus_surface", (1, 1, 0, 0))]:
        c.eq(name, surface_invariants(surface_from_json(loads(corpus.data(name)))), want)
    c.eq("kodaira_primary engine", consistency_report(corpus.load("kodaira_primary")).spade, [0, 0, 0, 0])
    c.eq("torus2 engine", consistency_report(corpus.load("torus2")).spade, [1, 1, 0, 0])
    c.report(capsys)


def test_criterion_7(capsys):
    c = Criterion(7)
    q = kahler_tables(diamond_from_json(loads(corpus.data("quintic"))))
    c.eq("quintic spade", q.spade(), [-1, 0, 1, 0, 0, 0])
    c.eq("quintic club", q.club(), [-1, 0, 2, 0, 0, 0])
    cu = kahler_tables(diamond_from_json(loads(corpus.data("cubic"))))
    c.eq("cubic spade", cu.spade(), [-1, 0, 0, 0, 0, 0])
    c.eq("cubic club", cu.club(), [-1, 0, 0, 0, 0, 0])
    K = kahler_tables(HodgeDiamond.from_rows([[comb(3, p) * comb(3, q) for q in range(4)] for p in range(4)]))
    E = tables_from_model(corpus.load("torus3"))
    c.eq("T3 betti", K.betti.window(0, 6), E.betti.window(0, 6))
    c.true("T3 keys", set(K.hyper_bc) <= set(E.hyper_bc) and set(K.hyper_c) <= set(E.hyper_c))
    for key in K.hyper_bc:
        c.eq(f"T3 hyper_bc{key}", K.hyper_bc[key].window(0, 7), E.hyper_bc[key].window(0, 7))
    for p in K.hyper_c:
        c.eq(f"T3 hyper_c({p})", K.hyper_c[p].window(0, 6), E.hyper_c[p].window(0, 6))
    c.eq("T3 hodge", K.hodge, E.hodge)
    c.eq("T3 bc", K.bc, E.bc)
    c.eq("T3 aeppli", K.aeppli, E.aeppli)
    c.report(capsys)


def test_criterion_8(capsys, models):
    c = Criterion(8)
    curve = tables_from_model(models["torus1"])
    for name in CORPUS:
        if models[name].n != 3:
            continue
        X = tables_from_model(models[name])
        for label, Z, codim in [("point", point_tables(), 3), ("curve", curve, 2)]:
            r = invariance_check(X, Z, codim)
            c.true(f"{name}/{label} checks", r.passed)
            c.eq(f"{name}/{label} spade", r.spade_after, r.spade_before)
            c.eq(f"{name}/{label} club", r.club_after, r.club_before)
            gain = [sum(Z.betti[k - 2 * i] for i in range(1, codim)) for k in range(7)]
            c.eq(f"{name}/{label} betti gain", r.betti_gain, gain)
    c.report(capsys)


def test_criterion_9(capsys):
    c = Criterion(9)
    out = {}
    for threads in ("1", "8"):
        env = dict(os.environ, BCWB_THREADS=threads)
        p = subprocess.run([sys.executable, "-m", "bcwb.cli", "compute", "corpus:iwasawa"],
                           capture_output=True, env=env, check=False)  # fmt: skip
        c.eq(f"exit code threads={threads}", p.returncode, 0)
        out[threads] = p.stdout
    c.true("byte-identical", out["1"] == out["8"] and len(out["1"]) > 0)
    c.report(capsys)
