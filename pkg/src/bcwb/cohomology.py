"""Cohomology groups of Lie models with representative generators.

All groups are subquotients ``Z/B`` of a labelled coordinate space; the
generators are the echelon representatives chosen by
:func:`bcwb.linalg.subquotient`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .complexes import (
    ChainComplex,
    build_de_rham,
    build_dolbeault_row,
    build_L,
    build_truncated_total,
    chain_map_C,
)
from .exterior import (
    Form,
    LieModel,
    RangeError,
    basis,
    ddbar_matrix,
    del_matrix,
    delbar_matrix,
)
from .linalg import (
    MatrixQI,
    SubquotientSpace,
    image_basis,
    induced_map,
    kernel_basis,
    subquotient,
    vstack,
)


@dataclass(frozen=True)
class CohomologySpace:
    kind: str
    indices: tuple
    n: int
    labels: tuple  # Monomial basis of the ambient space
    presentation: SubquotientSpace

    @property
    def dim(self) -> int:
        return self.presentation.dim

    @property
    def generators(self) -> list[Form]:
        return [Form.from_vector(self.n, self.labels, r) for r in self.presentation.reps]

    @property
    def label(self) -> tuple:
        return (self.kind, self.indices)

    def vector(self, f: Form) -> tuple:
        return f.to_vector(self.labels)

    def is_cycle(self, f: Form) -> bool:
        try:
            v = self.vector(f)
        except ValueError:
            return False
        return self.presentation.is_cycle(v)

    def is_zero_class(self, f: Form) -> bool:
        return self.presentation.is_boundary(self.vector(f))

    def class_rank(self, forms: Sequence[Form]) -> int:
        return self.presentation.class_rank([self.vector(f) for f in forms])

    def spanned_by(self, forms: Sequence[Form]) -> bool:
        """True if ``forms`` are cycles whose classes span the whole group."""
        return all(self.is_cycle(f) for f in forms) and self.class_rank(forms) == self.dim

    def __repr__(self):
        return f"CohomologySpace({self.kind}{self.indices}, dim={self.dim})"


@dataclass(frozen=True)
class MapSummary:
    name: str
    src: CohomologySpace
    dst: CohomologySpace
    matrix: MatrixQI
    rank: int
    ker_generators: tuple  # Forms in the source ambient
    coker_generators: tuple  # Forms in the target ambient

    @property
    def ker_dim(self) -> int:
        return len(self.ker_generators)

    @property
    def coker_dim(self) -> int:
        return len(self.coker_generators)

    def kernel_spanned_by(self, forms: Sequence[Form]) -> bool:
        """``forms`` are cycles of the source, map to zero, and span the kernel."""
        if not all(self.src.is_cycle(f) for f in forms):
            return False
        if self.src.class_rank(forms) != self.ker_dim or len(forms) < self.ker_dim:
            return False
        image = [self.src.presentation.coordinates(self.src.vector(f)) for f in forms]
        return all(not any(self.matrix @ c) for c in image)

    def cokernel_spanned_by(self, forms: Sequence[Form]) -> bool:
        """``forms`` together with the image span the whole target."""
        if not all(self.dst.is_cycle(f) for f in forms):
            return False
        img = [tuple(self.matrix.column(j)) for j in range(self.matrix.cols)]
        coords = [self.dst.presentation.coordinates(self.dst.vector(f)) for f in forms]
        from .linalg import rank_of_vectors

        return rank_of_vectors(img + coords) == self.dst.dim and rank_of_vectors(coords) == self.coker_dim


def _space(kind, indices, n, labels, Z, B) -> CohomologySpace:
    return CohomologySpace(
        kind=kind,
        indices=tuple(indices),
        n=n,
        labels=tuple(labels),
        presentation=subquotient(Z, B, ambient_dim=len(labels)),
    )


def cohomology(C: ChainComplex, d: int, n: int, kind: str = "H", indices: tuple = ()) -> CohomologySpace:
    """``ker diff[d] / im diff[d-1]``; zero outside the complex's range."""
    labels = C.basis(d)
    if not labels:
        return _space(kind, indices or (d,), n, (), [], [])
    Z = kernel_basis(C.differential(d))
    B = image_basis(C.differential(d - 1)) if C.dim(d - 1) else []
    return _space(kind, indices or (d,), n, labels, Z, B)


def _cached(m: LieModel, key, build):
    hit = m.cache_get(key)
    if hit is not None:
        return hit
    return m.cache_put(key, build())


def _check_bidegree(m: LieModel, p: int, q: int):
    if not (0 <= p <= m.n and 0 <= q <= m.n):
        raise RangeError(f"bidegree ({p},{q}) outside 0..{m.n}")


def de_rham(m: LieModel, k: int) -> CohomologySpace:
    return _cached(m, ("dR", k), lambda: cohomology(build_de_rham(m), k, m.n, "de_rham", (k,)))


def dolbeault(m: LieModel, p: int, q: int) -> CohomologySpace:
    """``H^{p,q}_∂̄``."""
    _check_bidegree(m, p, q)
    return _cached(m, ("dol", p, q), lambda: cohomology(build_dolbeault_row(m, p), q, m.n, "dolbeault", (p, q)))


def del_cohomology(m: LieModel, p: int, q: int) -> CohomologySpace:
    """``H^{p,q}_∂``."""
    _check_bidegree(m, p, q)

    def build():
        labels = basis(m.n, p, q)
        Z = kernel_basis(del_matrix(m, p, q))
        B = image_basis(del_matrix(m, p - 1, q)) if p >= 1 else []
        return _space("del", (p, q), m.n, labels, Z, B)

    return _cached(m, ("del", p, q), build)


def bott_chern(m: LieModel, p: int, q: int) -> CohomologySpace:
    """``(ker ∂ ∩ ker ∂̄) / im ∂∂̄`` on ``A^{p,q}``, computed directly."""
    _check_bidegree(m, p, q)

    def build():
        labels = basis(m.n, p, q)
        Z = kernel_basis(vstack(del_matrix(m, p, q), delbar_matrix(m, p, q)))
        B = image_basis(ddbar_matrix(m, p - 1, q - 1)) if p >= 1 and q >= 1 else []
        return _space("bott_chern", (p, q), m.n, labels, Z, B)

    return _cached(m, ("bc", p, q), build)


def aeppli(m: LieModel, p: int, q: int) -> CohomologySpace:
    """``ker ∂∂̄ / (im ∂ + im ∂̄)`` on ``A^{p,q}``."""
    _check_bidegree(m, p, q)

    def build():
        labels = basis(m.n, p, q)
        Z = kernel_basis(ddbar_matrix(m, p, q))
        B = []
        if p >= 1:
            B += image_basis(del_matrix(m, p - 1, q))
        if q >= 1:
            B += image_basis(delbar_matrix(m, p, q - 1))
        return _space("aeppli", (p, q), m.n, labels, Z, B)

    return _cached(m, ("ae", p, q), build)


def hyper_bc(m: LieModel, k: int, p: int, q: int) -> CohomologySpace:
    """``H^k_BC(ℂ(p,q))`` as degree ``k-1`` cohomology of ``L(p,q)``."""
    return _cached(
        m, ("hbc", k, p, q), lambda: cohomology(build_L(m, p, q), k - 1, m.n, "hyper_bc", (k, p, q))
    )


def hyper_truncated(m: LieModel, k: int, p: int) -> CohomologySpace:
    """``ℍ^k(ℂ(p))`` as degree ``k`` cohomology of the columns ``s >= p``."""
    if not 0 <= p <= m.n:
        raise RangeError(f"p={p} outside 0..{m.n}")
    return _cached(
        m,
        ("htr", k, p),
        lambda: cohomology(build_truncated_total(m, p, m.n), k, m.n, "hyper_c", (k, p)),
    )


def _summary(name, F: MatrixQI, src: CohomologySpace, dst: CohomologySpace) -> MapSummary:
    im = induced_map(F, src.presentation, dst.presentation)
    return MapSummary(
        name=name,
        src=src,
        dst=dst,
        matrix=im.matrix,
        rank=im.rank,
        ker_generators=tuple(Form.from_vector(src.n, src.labels, v) for v in im.kernel),
        coker_generators=tuple(Form.from_vector(dst.n, dst.labels, v) for v in im.cokernel),
    )


def map_I(m: LieModel, p: int, q: int) -> MapSummary:
    """``H^{p,q}_BC -> H^{p,q}_∂̄``, identity on representatives."""
    src, dst = bott_chern(m, p, q), dolbeault(m, p, q)
    return _cached(m, ("mapI", p, q), lambda: _summary(f"I[{p},{q}]", MatrixQI.identity(len(src.labels)), src, dst))


def map_C(m: LieModel, k: int) -> MapSummary:
    """``H^k_BC(ℂ(1,1)) -> ℍ^k(ℂ(1))`` induced by :func:`chain_map_C`."""
    if k < 1:
        raise RangeError("k must be >= 1")

    def build():
        F = chain_map_C(m)
        src = hyper_bc(m, k, 1, 1)
        dst = hyper_truncated(m, k, 1)
        M = F.component(k - 1)
        if M.shape != (len(dst.labels), len(src.labels)):
            M = MatrixQI.zeros(len(dst.labels), len(src.labels))
        return _summary(f"C[{k}]", M, src, dst)

    return _cached(m, ("mapC", k), build)
