"""Dimension-table calculus: Kähler and surface closed forms, blow-up and
projective-bundle predictors.

Nothing here touches a Lie model except :func:`tables_from_model`, which fills
a :class:`DimTables` from the cohomology engine so engine output and closed
forms can be compared entry for entry.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .exterior import LieModel


class AsymmetricDiamond(ValueError):
    pass


class MissingTableEntry(KeyError):
    def __init__(self, holes):
        self.holes = list(holes)
        super().__init__("missing center table entries: " + ", ".join(self.holes))

    def __str__(self):
        return self.args[0]


class TableError(ValueError):
    pass


@dataclass(frozen=True)
class Series:
    """Integers indexed by degree ``k_min, k_min+1, ...``; zero elsewhere."""

    k_min: int
    values: tuple

    def __getitem__(self, k: int) -> int:
        i = k - self.k_min
        return self.values[i] if 0 <= i < len(self.values) else 0

    @property
    def k_max(self) -> int:
        return self.k_min + len(self.values) - 1

    def window(self, lo: int, hi: int) -> list:
        return [self[k] for k in range(lo, hi + 1)]

    @classmethod
    def from_fn(cls, lo: int, hi: int, fn) -> "Series":
        return cls(lo, tuple(fn(k) for k in range(lo, hi + 1)))


@dataclass(frozen=True)
class HodgeDiamond:
    n: int
    h: tuple  # h[p][q]

    def __post_init__(self):
        if len(self.h) != self.n + 1 or any(len(r) != self.n + 1 for r in self.h):
            raise TableError(f"diamond must be {self.n + 1}x{self.n + 1}")
        if any(v < 0 for r in self.h for v in r):
            raise TableError("Hodge numbers must be non-negative")

    @classmethod
    def from_rows(cls, h) -> "HodgeDiamond":
        return cls(len(h) - 1, tuple(tuple(r) for r in h))

    def is_symmetric(self) -> bool:
        n = self.n
        return all(self.h[p][q] == self.h[q][p] for p in range(n + 1) for q in range(n + 1))


@dataclass(frozen=True)
class SurfaceData:
    h10: int
    h01: int
    h20: int
    h11_dol: int
    h11_bc: int
    b1: int
    chi_top: int
    chi_O: int

    def __post_init__(self):
        for name in ("h10", "h01", "h20", "h11_dol", "h11_bc", "b1"):
            if getattr(self, name) < 0:
                raise TableError(f"{name} must be non-negative")


@dataclass
class DimTables:
    n: int
    betti: Series
    hyper_bc: dict = field(default_factory=dict)  # (p, q) -> Series
    hyper_c: dict = field(default_factory=dict)  # p -> Series
    hodge: list | None = None
    bc: list | None = None
    aeppli: list | None = None
    closed: bool = True
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.betti[0] != 1:
            raise TableError("betti[0] must be 1")
        for s in [self.betti, *self.hyper_bc.values(), *self.hyper_c.values()]:
            if any(v < 0 for v in s.values):
                raise TableError("table entries must be non-negative")

    def spade(self) -> list[int]:
        c1, b11 = self._need_c(1), self._need_bc(1, 1)
        return [c1[k] - b11[k] for k in range(1, 2 * self.n + 1)]

    def club(self) -> list[int]:
        b11 = self._need_bc(1, 1)
        return [self.betti[k] - b11[k] for k in range(1, 2 * self.n + 1)]

    def _need_bc(self, p, q) -> Series:
        if (p, q) not in self.hyper_bc:
            raise MissingTableEntry([f"hyper_bc({p},{q})"])
        return self.hyper_bc[(p, q)]

    def _need_c(self, p) -> Series:
        if p not in self.hyper_c:
            raise MissingTableEntry([f"hyper_c({p})"])
        return self.hyper_c[p]

    def poincare_defect(self) -> int | None:
        """First degree ``k`` with ``b_k != b_{2n-k}``, or None."""
        for k in range(2 * self.n + 1):
            if self.betti[k] != self.betti[2 * self.n - k]:
                return k
        return None


# ---------------------------------------------------------------------------
# closed forms


def kahler_tables(H: HodgeDiamond) -> DimTables:
    """Tables of a compact Kähler manifold with Hodge diamond ``H``."""
    if not H.is_symmetric():
        bad = next((p, q) for p in range(H.n + 1) for q in range(H.n + 1) if H.h[p][q] != H.h[q][p])
        raise AsymmetricDiamond(f"h[{bad[0]}][{bad[1]}] != h[{bad[1]}][{bad[0]}]")
    n, h = H.n, H.h

    def hh(p, q):
        return h[p][q] if 0 <= p <= n and 0 <= q <= n else 0

    betti = Series.from_fn(0, 2 * n, lambda k: sum(hh(p, k - p) for p in range(n + 1)))
    hyper_c = {
        p: Series.from_fn(0, 2 * n, lambda k, p=p: sum(hh(s, k - s) for s in range(p, n + 1)))
        for p in range(n + 1)
    }

    def pluri(k):
        if k == 1:
            return 1
        if 2 <= k <= 2 * n:
            return betti[k] - hh(0, k) - hh(k, 0)
        return 0

    grid = [list(r) for r in h]
    return DimTables(
        n=n,
        betti=betti,
        hyper_bc={(1, 1): Series.from_fn(0, 2 * n + 1, pluri)},
        hyper_c=hyper_c,
        hodge=grid,
        bc=[list(r) for r in h],
        aeppli=[list(r) for r in h],
        provenance={"betti": "kahler", "hyper_bc": "kahler", "hyper_c": "kahler", "hodge": "user",
                    "bc": "kahler", "aeppli": "kahler"},
    )


def surface_invariants(S: SurfaceData) -> tuple[int, int, int, int]:
    return (
        S.h10 - 1,
        S.h11_dol - S.h11_bc + S.h20,
        S.b1 - S.h11_bc - 2 * S.chi_O + S.chi_top,
        0,
    )


# ---------------------------------------------------------------------------
# blow-ups and projective bundles


def _center_bc(Z: DimTables, p: int, q: int, holes: list):
    if (p, q) in Z.hyper_bc:
        return Z.hyper_bc[(p, q)]
    if p <= 0 and q <= 0:
        return Z.betti
    holes.append(f"hyper_bc({p},{q})")
    return None


def _center_c(Z: DimTables, p: int, p_top: int, holes: list):
    if p in Z.hyper_c:
        return Z.hyper_c[p]
    if p == 0 or (p < 0 and p_top == 1):
        return Z.betti
    holes.append(f"hyper_c({p})")
    return None


def _sum_series(base: Series | None, parts: list, lo: int, hi: int) -> Series:
    def at(k):
        v = base[k] if base is not None else 0
        for shift, s in parts:
            v += s[k - shift]
        return v

    return Series.from_fn(lo, hi, at)


def _predict(X: DimTables | None, Z: DimTables, c: int, i0: int, n_out: int, keys_bc, keys_c) -> DimTables:
    holes: list = []
    rng = range(i0, c)
    hi_bc = 2 * n_out + 1
    bc = {}
    for p, q in keys_bc:
        parts = [(2 * i, _center_bc(Z, p - i, q - i, holes)) for i in rng]
        base = X.hyper_bc[(p, q)] if X is not None else None
        bc[(p, q)] = (base, parts)
    hc = {}
    for p in keys_c:
        parts = [(2 * i, _center_c(Z, p - i, p, holes)) for i in rng]
        base = X.hyper_c[p] if X is not None else None
        hc[p] = (base, parts)
    if holes:
        raise MissingTableEntry(sorted(set(holes), key=holes.index))
    betti = _sum_series(X.betti if X is not None else None, [(2 * i, Z.betti) for i in rng], 0, 2 * n_out)
    return DimTables(
        n=n_out,
        betti=betti,
        hyper_bc={k: _sum_series(b, parts, 0, hi_bc) for k, (b, parts) in bc.items()},
        hyper_c={k: _sum_series(b, parts, 0, 2 * n_out) for k, (b, parts) in hc.items()},
        closed=(X.closed if X is not None else True) and Z.closed,
        provenance={"betti": "predicted", "hyper_bc": "predicted", "hyper_c": "predicted"},
    )


def blowup_predict(X: DimTables, Z: DimTables, c: int, keys_bc=None, keys_c=None) -> DimTables:
    """Tables of the blow-up of ``X`` along a center ``Z`` of codimension ``c``.

    ``keys_bc`` / ``keys_c`` select which of X's hyper tables to carry over;
    by default all of them.
    """
    if c < 2:
        raise TableError("codimension ≥ 2 required")
    if Z.n != X.n - c:
        raise TableError(f"center has dimension {Z.n}, expected {X.n - c}")
    keys_bc = sorted(X.hyper_bc) if keys_bc is None else list(keys_bc)
    keys_c = sorted(X.hyper_c) if keys_c is None else list(keys_c)
    missing = [f"base hyper_bc{k}" for k in keys_bc if k not in X.hyper_bc]
    missing += [f"base hyper_c({p})" for p in keys_c if p not in X.hyper_c]
    if missing:
        raise MissingTableEntry(missing)
    return _predict(X, Z, c, 1, X.n, keys_bc, keys_c)


def bundle_predict(Z: DimTables, c: int, keys_bc=((1, 1),), keys_c=(1,)) -> DimTables:
    """Tables of the projectivization of a rank-``c`` bundle over ``Z``."""
    if c < 1:
        raise TableError("rank must be ≥ 1")
    return _predict(None, Z, c, 0, Z.n + c - 1, list(keys_bc), list(keys_c))


@dataclass
class InvarianceReport:
    spade_before: list
    spade_after: list
    club_before: list
    club_after: list
    betti_gain: list
    checks: list  # (name, passed, detail)
    predicted: DimTables

    @property
    def passed(self) -> bool:
        return all(p for _, p, _ in self.checks)


def invariance_check(X: DimTables, Z: DimTables, c: int) -> InvarianceReport:
    Xt = blowup_predict(X, Z, c, keys_bc=[(1, 1)], keys_c=[1])
    checks = []
    for label, T in (("base", X), ("center", Z), ("blow-up", Xt)):
        if T.closed:
            k = T.poincare_defect()
            checks.append((f"poincare-{label}", k is None,
                           "symmetric" if k is None else f"b_{k} != b_{2 * T.n - k}"))
        if 0 in T.hyper_c:
            bad = [k for k in range(2 * T.n + 1) if T.hyper_c[0][k] != T.betti[k]]
            checks.append((f"untruncated-{label}", not bad,
                           "hyper_c(0) = betti" if not bad else f"hyper_c(0) != betti at k={bad[0]}"))
    s0, s1, c0, c1 = X.spade(), Xt.spade(), X.club(), Xt.club()
    diff = [k + 1 for k, (a, b) in enumerate(zip(s0, s1)) if a != b]
    checks.append(("spade-invariant", not diff, "unchanged" if not diff else f"changes at k={diff[0]}"))
    diff = [k + 1 for k, (a, b) in enumerate(zip(c0, c1)) if a != b]
    checks.append(("club-invariant", not diff, "unchanged" if not diff else f"changes at k={diff[0]}"))
    gain = [Xt.betti[k] - X.betti[k] for k in range(2 * X.n + 1)]
    expected = [sum(Z.betti[k - 2 * i] for i in range(1, c)) for k in range(2 * X.n + 1)]
    checks.append(("betti-gain", gain == expected, f"gain {gain}"))
    return InvarianceReport(s0, s1, c0, c1, gain, checks, Xt)


# ---------------------------------------------------------------------------
# engine bridge


def tables_from_model(m: LieModel) -> DimTables:
    """Full tables from the cohomology engine.

    ``hyper_bc`` covers ``0 <= p,q <= n+1`` with ``p+q >= 1``; each value is
    the invariant-model value of the literal complex.
    """
    from .cohomology import hyper_bc, hyper_truncated
    from .invariants import aeppli_numbers, bc_numbers, betti_numbers, hodge_numbers

    n = m.n
    betti = Series(0, tuple(betti_numbers(m)))
    bc_t = {}
    for p in range(n + 2):
        for q in range(n + 2):
            if p + q >= 1:
                bc_t[(p, q)] = Series.from_fn(0, 2 * n + 1, lambda k, p=p, q=q: hyper_bc(m, k, p, q).dim)
    c_t = {
        p: Series.from_fn(0, 2 * n, (lambda k, p=p: hyper_truncated(m, k, p).dim) if p <= n else (lambda k: 0))
        for p in range(n + 2)
    }
    return DimTables(
        n=n,
        betti=betti,
        hyper_bc=bc_t,
        hyper_c=c_t,
        hodge=hodge_numbers(m),
        bc=bc_numbers(m),
        aeppli=aeppli_numbers(m),
        provenance={k: "engine" for k in ("betti", "hyper_bc", "hyper_c", "hodge", "bc", "aeppli")},
    )


def point_tables() -> DimTables:
    return tables_from_model(LieModel(name="point", n=0, d1=()))
