"""Numerical invariants of a Lie model and the cross-identity report."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .cohomology import (
    aeppli,
    bott_chern,
    de_rham,
    dolbeault,
    hyper_bc,
    hyper_truncated,
    map_C,
)
from .complexes import build_L
from .cohomology import cohomology
from .exterior import LieModel, validate_model


def thread_count(default: int = 1) -> int:
    """Parallelism cap from ``BCWB_THREADS`` (positive int), else ``default``."""
    raw = os.environ.get("BCWB_THREADS")
    if raw is None:
        return default
    try:
        v = int(raw)
    except ValueError:
        raise ValueError(f"BCWB_THREADS must be a positive integer, got {raw!r}") from None
    if v < 1:
        raise ValueError(f"BCWB_THREADS must be a positive integer, got {raw!r}")
    return v


def parallel_map(fn, items, threads: int | None = None) -> list:
    """``[fn(x) for x in items]``, possibly threaded; results keep input order."""
    items = list(items)
    threads = thread_count() if threads is None else threads
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _grid(n, fn):
    return [[fn(p, q) for q in range(n + 1)] for p in range(n + 1)]


def betti_numbers(m: LieModel) -> list[int]:
    return [de_rham(m, k).dim for k in range(2 * m.n + 1)]


def hodge_numbers(m: LieModel) -> list[list[int]]:
    return _grid(m.n, lambda p, q: dolbeault(m, p, q).dim)


def bc_numbers(m: LieModel) -> list[list[int]]:
    return _grid(m.n, lambda p, q: bott_chern(m, p, q).dim)


def aeppli_numbers(m: LieModel) -> list[list[int]]:
    return _grid(m.n, lambda p, q: aeppli(m, p, q).dim)


def hyper_c1(m: LieModel) -> list[int]:
    """``dim ℍ^k(ℂ(1))`` for k = 1..2n."""
    return [hyper_truncated(m, k, 1).dim for k in range(1, 2 * m.n + 1)]


def hyper_bc11(m: LieModel) -> list[int]:
    """``dim H^k_BC(ℂ(1,1))`` for k = 1..2n."""
    return [hyper_bc(m, k, 1, 1).dim for k in range(1, 2 * m.n + 1)]


def spade(m: LieModel) -> list[int]:
    return [a - b for a, b in zip(hyper_c1(m), hyper_bc11(m))]


def club(m: LieModel) -> list[int]:
    b = betti_numbers(m)[1:]
    return [a - c for a, c in zip(b, hyper_bc11(m))]


def delta_bc_dol(m: LieModel) -> list[list[int]]:
    bc, h = bc_numbers(m), hodge_numbers(m)
    return [[bc[p][q] - h[p][q] for q in range(m.n + 1)] for p in range(m.n + 1)]


def nk_degrees(m: LieModel) -> tuple[list[int], bool]:
    """Non-Kählerness degrees for k = 0..2n and the ∂∂̄-lemma verdict."""
    n = m.n
    bc, ae, b = bc_numbers(m), aeppli_numbers(m), betti_numbers(m)
    out = []
    for k in range(2 * n + 1):
        s = sum(bc[p][k - p] + ae[p][k - p] for p in range(n + 1) if 0 <= k - p <= n)
        out.append(s - 2 * b[k])
    return out, all(v == 0 for v in out)


def alternating(values, start: int) -> int:
    return sum((-1) ** (start + i) * v for i, v in enumerate(values))


@dataclass
class Check:
    name: str
    passed: bool
    detail: str
    structural: bool = True

    def as_tuple(self):
        return (self.name, self.passed, self.detail)


@dataclass
class InvariantReport:
    model: str
    n: int
    betti: list
    hodge: list
    bc: list
    aeppli: list
    hyper_c1: list
    hyper_bc11: list
    spade: list
    club: list
    delta_bc_dol: list
    nk_degree: list
    ddbar_lemma: bool
    frolicher_e1: bool
    checks: list = field(default_factory=list)

    @property
    def structural_ok(self) -> bool:
        return all(c.passed for c in self.checks if c.structural)

    def failed(self, structural_only: bool = True) -> list:
        return [c for c in self.checks if not c.passed and (c.structural or not structural_only)]

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def _prefetch(m: LieModel, threads: int | None):
    """Warm the model cache in parallel; assembly later reads in fixed order."""
    n = m.n
    jobs = [lambda k=k: de_rham(m, k) for k in range(2 * n + 1)]
    jobs += [lambda p=p, q=q: (dolbeault(m, p, q), bott_chern(m, p, q), aeppli(m, p, q))
             for p in range(n + 1) for q in range(n + 1)]
    jobs += [lambda k=k: (hyper_truncated(m, k, 1), hyper_bc(m, k, 1, 1)) for k in range(1, 2 * n + 1)]
    parallel_map(lambda f: f(), jobs, threads)


def consistency_report(m: LieModel, threads: int | None = None) -> InvariantReport:
    """Evaluate every invariant and the identity checks; failures are data."""
    val = validate_model(m)
    if not val.ok:
        raise ValueError("model fails validation: " + "; ".join(d for _, d in val.failures()))
    _prefetch(m, threads)
    n = m.n
    b = betti_numbers(m)
    h = hodge_numbers(m)
    bc = bc_numbers(m)
    ae = aeppli_numbers(m)
    c1 = hyper_c1(m)
    b11 = hyper_bc11(m)
    sp = [x - y for x, y in zip(c1, b11)]
    cl = [x - y for x, y in zip(b[1:], b11)]
    nk, ddbar = nk_degrees(m)
    frol = all(sum(h[p][k - p] for p in range(n + 1) if 0 <= k - p <= n) == b[k] for k in range(2 * n + 1))
    rep = InvariantReport(
        model=m.name, n=n, betti=b, hodge=h, bc=bc, aeppli=ae, hyper_c1=c1, hyper_bc11=b11,
        spade=sp, club=cl, delta_bc_dol=[[bc[p][q] - h[p][q] for q in range(n + 1)] for p in range(n + 1)],
        nk_degree=nk, ddbar_lemma=ddbar, frolicher_e1=frol,
    )
    add = rep.checks.append
    for name, passed, detail in val.entries:
        add(Check(name, passed, detail))

    # (a) Euler characteristics
    chi_top = alternating(b, 0)
    chi_O = alternating([h[0][q] for q in range(n + 1)], 0)
    chi_c1 = alternating(c1, 1)
    chi_b11 = alternating(b11, 1)
    add(Check("euler-bc-vs-c1", chi_b11 == chi_c1 - chi_O,
              f"chi(B(1,1))={chi_b11}, chi(C(1))={chi_c1}, chi(O)={chi_O}"))
    add(Check("euler-bc-vs-top", chi_b11 == chi_top - 2 * chi_O,
              f"chi(B(1,1))={chi_b11}, chi_top={chi_top}, chi(O)={chi_O}"))

    # (b) dualities
    bad = [
        (k, p, q)
        for p in range(1, n + 1)
        for q in range(1, n + 1)
        for k in range(0, 2 * n + 2)
        if hyper_bc(m, k, p, q).dim != hyper_bc(m, 2 * n + 1 - k, n - p + 1, n - q + 1).dim
    ]
    add(Check("hyper-bc-duality", not bad, "all (k,p,q)" if not bad else f"fails at (k,p,q)={bad[0]}"))
    bad = [(p, q) for p in range(n + 1) for q in range(n + 1) if bc[p][q] != ae[n - p][n - q]]
    add(Check("bc-aeppli-duality", not bad, "all (p,q)" if not bad else f"fails at (p,q)={bad[0]}"))

    # identification of BC/Aeppli groups inside the L complexes
    bad = []
    for p in range(n + 1):
        for q in range(n + 1):
            if p + q >= 1:
                L = cohomology(build_L(m, p, q), p + q - 1, n)
                if not _same_span(L, bott_chern(m, p, q)):
                    bad.append(("bc", p, q))
            L = cohomology(build_L(m, p + 1, q + 1), p + q, n)
            if not _same_span(L, aeppli(m, p, q)):
                bad.append(("aeppli", p, q))
    add(Check("L-complex-identification", not bad, "BC and Aeppli agree with L" if not bad else f"mismatch {bad[0]}"))

    # (c) Frölicher degeneration: informational
    add(Check("frolicher-e1", frol, "sum of Hodge numbers equals Betti numbers" if frol
              else "Hodge sums " + str([sum(h[p][k - p] for p in range(n + 1) if 0 <= k - p <= n)
                                        for k in range(2 * n + 1)]) + f" vs betti {b}", structural=False))
    add(Check("ddbar-lemma", ddbar, f"non-Kählerness degrees {nk}", structural=False))

    # (d) the (n-1,n-1)/(2,2) coincidence with b1; informational (see README)
    if n >= 2:
        a1 = hyper_bc(m, 2 * n - 1, n - 1, n - 1).dim
        a2 = hyper_bc(m, 2, 2, 2).dim
        ok = a1 == a2 == b[1]
        add(Check("bc22-equals-b1", ok, f"H^{2*n-1}_BC(C({n-1},{n-1}))={a1}, H^2_BC(C(2,2))={a2}, b1={b[1]}",
                  structural=False))

    # (e) H^1_BC(C(p,q)) = 1
    bad = [(p, q) for p in range(1, n + 1) for q in range(1, n + 1) if hyper_bc(m, 1, p, q).dim != 1]
    add(Check("h1-bc-is-one", not bad, "all p,q >= 1" if not bad else f"fails at {bad[0]}"))

    # (f) vanishing of the invariants in high degree
    bad = [k for k in range(n + 2, 2 * n + 1) if b11[k - 1] != b[k] or sp[k - 1] != 0]
    add(Check("high-degree-vanishing", not bad, f"k >= {n+2}" if not bad else f"fails at k={bad[0]}"))

    # spade as cokernel minus kernel of the comparison map
    bad = []
    for k in range(1, 2 * n + 1):
        s = map_C(m, k)
        if s.coker_dim - s.ker_dim != sp[k - 1]:
            bad.append(k)
    add(Check("spade-from-map-C", not bad, "coker - ker matches" if not bad else f"fails at k={bad[0]}"))

    add(Check("nilpotent", val.nilpotent, "nilpotent" if val.nilpotent else
              "not nilpotent: manifold-level interpretation not guaranteed", structural=False))
    return rep


def _same_span(a, b) -> bool:
    if a.dim != b.dim or a.labels != b.labels and set(a.labels) != set(b.labels):
        return False
    if a.dim == 0:
        return True
    # compare as subspaces mod boundaries: each rep of ``a`` must be a cycle of ``b``
    forms = a.generators
    return all(b.is_cycle(f) for f in forms) and b.class_rank(forms) == b.dim
