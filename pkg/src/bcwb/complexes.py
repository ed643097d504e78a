"""Chain complexes built from a Lie model.

Every complex is a finite sequence of coordinate spaces labelled by
monomials, with differential matrices ``diff[d]: spaces[d] -> spaces[d+1]``
acting on column vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .exterior import (
    LieModel,
    Monomial,
    RangeError,
    basis,
    monomial_key,
    operator_matrix,
)
from .linalg import MatrixQI


class ComplexError(ValueError):
    pass


@dataclass(frozen=True)
class ChainComplex:
    """Cochain complex concentrated in degrees ``lo..hi``."""

    name: str
    lo: int
    hi: int
    spaces: dict  # degree -> tuple[Monomial, ...]
    diff: dict  # degree -> MatrixQI from spaces[d] to spaces[d+1]

    def basis(self, d: int) -> tuple:
        return self.spaces.get(d, ())

    def dim(self, d: int) -> int:
        return len(self.basis(d))

    def differential(self, d: int) -> MatrixQI:
        """``diff[d]``, or a zero matrix of the right shape outside the stored range."""
        if d in self.diff:
            return self.diff[d]
        return MatrixQI.zeros(self.dim(d + 1), self.dim(d))

    @property
    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def check(self) -> None:
        """Raise :class:`ComplexError` unless ``diff[d+1] ∘ diff[d] = 0`` everywhere."""
        for d in self.degrees:
            for lab in (self.basis(d),):
                if len(set(lab)) != len(lab):
                    raise ComplexError(f"{self.name}: duplicate basis label in degree {d}")
            M = self.differential(d + 1) @ self.differential(d)
            if not M.is_zero():
                raise ComplexError(f"{self.name}: δ∘δ != 0 from degree {d}")

    def is_complex(self) -> bool:
        try:
            self.check()
        except ComplexError:
            return False
        return True


@dataclass(frozen=True)
class ChainMap:
    src: ChainComplex
    dst: ChainComplex
    shift: int
    maps: dict  # degree d -> MatrixQI from src.spaces[d] to dst.spaces[d+shift]

    def component(self, d: int) -> MatrixQI:
        if d in self.maps:
            return self.maps[d]
        return MatrixQI.zeros(self.dst.dim(d + self.shift), self.src.dim(d))

    def check(self) -> None:
        for d in range(self.src.lo - 1, self.src.hi + 1):
            left = self.dst.differential(d + self.shift) @ self.component(d)
            right = self.component(d + 1) @ self.src.differential(d)
            if left != right:
                raise ComplexError(f"chain map fails to commute at degree {d}")

    def is_chain_map(self) -> bool:
        try:
            self.check()
        except ComplexError:
            return False
        return True


def _sorted_labels(labels) -> tuple:
    return tuple(sorted(labels, key=monomial_key))


def _summands(n: int, total: int, keep: Callable[[int, int], bool]) -> tuple:
    labels = []
    for s in range(0, n + 1):
        t = total - s
        if 0 <= t <= n and keep(s, t):
            labels.extend(basis(n, s, t))
    return _sorted_labels(labels)


def _assemble(name: str, m: LieModel, spaces: dict, op_for_degree: Callable[[int], Callable]) -> ChainComplex:
    degs = sorted(spaces)
    lo, hi = degs[0], degs[-1]
    diff = {}
    for d in range(lo, hi):
        op = op_for_degree(d)
        diff[d] = operator_matrix(m.n, spaces[d], spaces[d + 1], op)
    C = ChainComplex(name=name, lo=lo, hi=hi, spaces=spaces, diff=diff)
    C.check()
    return C


def _del_op(m: LieModel):
    def op(mono: Monomial):
        s, t = mono.bidegree
        return m.d_monomial(mono).component(s + 1, t)

    return op


def _delbar_op(m: LieModel):
    def op(mono: Monomial):
        s, t = mono.bidegree
        return m.d_monomial(mono).component(s, t + 1)

    return op


def _ddbar_op(m: LieModel):
    dl, db = _del_op(m), _delbar_op(m)

    def op(mono: Monomial):
        return m.del_(db(mono))

    return op


def build_dolbeault_row(m: LieModel, p: int) -> ChainComplex:
    """``A^{p,0} -> A^{p,1} -> ... -> A^{p,n}`` with ``∂̄``; degree = t."""
    if not 0 <= p <= m.n:
        raise RangeError(f"p={p} outside 0..{m.n}")
    key = ("dolbeault", p)
    hit = m.cache_get(key)
    if hit is not None:
        return hit
    spaces = {t: tuple(basis(m.n, p, t)) for t in range(m.n + 1)}
    C = _assemble(f"dolbeault[{p}]", m, spaces, lambda d: _delbar_op(m))
    return m.cache_put(key, C)


def build_del_row(m: LieModel, q: int) -> ChainComplex:
    """``A^{0,q} -> ... -> A^{n,q}`` with ``∂``; degree = s."""
    if not 0 <= q <= m.n:
        raise RangeError(f"q={q} outside 0..{m.n}")
    spaces = {s: tuple(basis(m.n, s, q)) for s in range(m.n + 1)}
    return _assemble(f"del[{q}]", m, spaces, lambda d: _del_op(m))


def build_L(m: LieModel, p: int, q: int) -> ChainComplex:
    """The complex ``L(p,q)`` whose degree-``k-1`` cohomology is ``H^k_BC(ℂ(p,q))``.

    Below the hinge (degrees ``l <= p+q-2``) the spaces are
    ``⊕_{s+t=l, s<p, t<q} A^{s,t}`` with projected ``d``; the hinge map out of
    degree ``p+q-2`` is ``∂∂̄``; from degree ``p+q-1`` on the spaces are
    ``⊕_{s+t=l+1, s>=p, t>=q} A^{s,t}`` with ``d``.  Nonpositive ``p`` or
    ``q`` are applied literally.
    """
    if p + q < 1 and not (p <= 0 and q <= 0):
        raise RangeError(f"(p,q)=({p},{q}) needs p+q >= 1")
    key = ("L", p, q)
    hit = m.cache_get(key)
    if hit is not None:
        return hit
    n = m.n
    k = p + q
    spaces = {}
    top = max(2 * n - 1, min(k - 2, 2 * n))
    for l in range(min(0, k - 2), top + 1):
        if l <= k - 2:
            lab = _summands(n, l, lambda s, t: s < p and t < q)
        else:
            lab = _summands(n, l + 1, lambda s, t: s >= p and t >= q)
        spaces[l] = lab
    # trim empty ends so lo/hi describe the support
    nonempty = [d for d, lab in spaces.items() if lab]
    if nonempty:
        spaces = {d: spaces[d] for d in range(min(nonempty), max(nonempty) + 1)}
    else:
        spaces = {0: ()}

    def op_for(l: int):
        if l == k - 2:
            return _ddbar_op(m)
        return m.d_monomial

    C = _assemble(f"L({p},{q})", m, spaces, op_for)
    return m.cache_put(key, C)


def build_truncated_total(m: LieModel, smin: int, smax: int) -> ChainComplex:
    """Total complex of the columns ``smin <= s <= smax`` in natural grading."""
    if not (0 <= smin <= smax <= m.n):
        raise RangeError(f"need 0 <= smin <= smax <= {m.n}, got {smin}, {smax}")
    key = ("trunc", smin, smax)
    hit = m.cache_get(key)
    if hit is not None:
        return hit
    spaces = {d: _summands(m.n, d, lambda s, t: smin <= s <= smax) for d in range(2 * m.n + 1)}
    C = _assemble(f"trunc[{smin}..{smax}]", m, spaces, lambda d: m.d_monomial)
    return m.cache_put(key, C)


def build_de_rham(m: LieModel) -> ChainComplex:
    return build_truncated_total(m, 0, m.n)


def _embedding(src: Sequence[Monomial], dst: Sequence[Monomial]) -> MatrixQI:
    index = {mono: i for i, mono in enumerate(dst)}
    ent = {}
    for j, mono in enumerate(src):
        if mono not in index:
            raise ComplexError(f"{mono} has no place in the target space")
        ent[(index[mono], j)] = 1
    return MatrixQI(len(dst), len(src), ent)


def chain_map_C(m: LieModel) -> ChainMap:
    """``L(1,1) -> Ω^{≥1}`` (shift +1): ``-∂`` on functions, inclusion above.

    The sign on the degree-0 leg makes the square with ``∂∂̄`` commute on
    the nose, since ``d∂f = ∂̄∂f = -∂∂̄f``.
    """
    key = ("chainC",)
    hit = m.cache_get(key)
    if hit is not None:
        return hit
    src = build_L(m, 1, 1)
    dst = build_truncated_total(m, 1, m.n) if m.n >= 1 else None
    if dst is None:
        raise RangeError("the comparison map needs n >= 1")
    maps = {}
    for d in src.degrees:
        if d == 0:
            neg_del = lambda mono: -_del_op(m)(mono)  # noqa: E731
            maps[d] = operator_matrix(m.n, src.basis(0), dst.basis(1), neg_del)
        else:
            maps[d] = _embedding(src.basis(d), dst.basis(d + 1))
    F = ChainMap(src=src, dst=dst, shift=1, maps=maps)
    F.check()
    return m.cache_put(key, F)
