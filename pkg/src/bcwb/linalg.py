"""Exact linear algebra over the Gaussian rationals Q(i).

Vectors are plain tuples of :class:`GaussianRational`; matrices are sparse
(:class:`MatrixQI`).  Elimination works on sparse rows (``dict`` column ->
value), so the same code path serves tiny and large systems.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence


class ContainmentViolation(ValueError):
    """A boundary vector does not lie in the span of the cycles."""


class NotAChainMap(ValueError):
    """A linear map does not send cycles to cycles or boundaries to boundaries."""


class GaussianRational:
    """An exact complex number ``re + im*i`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussianRational):
            if im:
                raise TypeError("cannot combine a GaussianRational real part with an imaginary part")
            re, im = re.re, re.im
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            return cls(Fraction(x.real), Fraction(x.imag))
        return cls(x)

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return GaussianRational(
            (self.re * o.re + self.im * o.im) / n, (self.im * o.re - self.re * o.im) / n
        )

    def __rtruediv__(self, other):
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        """``a^2 + b^2``."""
        return self.re * self.re + self.im * self.im

    # comparison / hashing -------------------------------------------------
    def __eq__(self, other):
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_real(self) -> bool:
        return self.im == 0

    # text -----------------------------------------------------------------
    def __repr__(self):
        return f"GaussianRational({self})"

    def __str__(self):
        if self.im == 0:
            return _frac_str(self.re)
        im = "i" if self.im == 1 else "-i" if self.im == -1 else f"{_frac_str(self.im)}*i"
        if self.re == 0:
            return im
        sign = "" if im.startswith("-") else "+"
        return f"{_frac_str(self.re)}{sign}{im}"

    @classmethod
    def parse(cls, text: str) -> "GaussianRational":
        """Parse the ``a/b+c/d*i`` notation produced by ``str``."""
        s = text.replace(" ", "")
        m = _GR_RE.fullmatch(s)
        if not m:
            raise ValueError(f"not a Gaussian rational: {text!r}")
        re_part = m.group("re")
        im_part = m.group("im") or m.group("im_only")
        re_val = Fraction(re_part) if re_part else Fraction(0)
        if im_part is None:
            if not re_part:
                raise ValueError(f"not a Gaussian rational: {text!r}")
            return cls(re_val)
        coef = im_part[:-1].rstrip("*")
        if coef in ("", "+"):
            im_val = Fraction(1)
        elif coef == "-":
            im_val = Fraction(-1)
        else:
            im_val = Fraction(coef)
        return cls(re_val, im_val)


_NUM = r"\d+(?:/\d+)?"
# an imaginary part after a real part needs its own sign
_GR_RE = re.compile(
    rf"(?P<re>[+-]?{_NUM})(?P<im>[+-](?:{_NUM}\*?)?i)?|(?P<im_only>[+-]?(?:{_NUM}\*?)?i)"
)

ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


def _coerce_or_none(x):
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Fraction)):
        return GaussianRational(x)
    if isinstance(x, complex):
        return GaussianRational.coerce(x)
    return None


def _frac_str(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


Vector = tuple  # tuple[GaussianRational, ...]


def vec(values: Iterable) -> Vector:
    return tuple(GaussianRational.coerce(v) for v in values)


def zero_vector(n: int) -> Vector:
    return (ZERO,) * n


def is_zero(v: Sequence) -> bool:
    return not any(v)


@dataclass(frozen=True)
class MatrixQI:
    """Sparse ``rows x cols`` matrix over Q(i); absent entries are zero."""

    rows: int
    cols: int
    entries: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        clean = {}
        for (r, c), v in self.entries.items():
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise IndexError(f"entry ({r},{c}) outside a {self.rows}x{self.cols} matrix")
            v = GaussianRational.coerce(v)
            if v:
                clean[(r, c)] = v
        object.__setattr__(self, "entries", clean)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "MatrixQI":
        nrows = len(rows)
        ncols = cols if cols is not None else (len(rows[0]) if rows else 0)
        ent = {}
        for r, row in enumerate(rows):
            if len(row) != ncols:
                raise ValueError("ragged rows")
            for c, v in enumerate(row):
                if v:
                    ent[(r, c)] = v
        return cls(nrows, ncols, ent)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "MatrixQI":
        ent = {}
        for c, col in enumerate(columns):
            if len(col) != rows:
                raise ValueError("column length does not match row count")
            for r, v in enumerate(col):
                if v:
                    ent[(r, c)] = v
        return cls(rows, len(columns), ent)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "MatrixQI":
        return cls(rows, cols, {})

    @classmethod
    def identity(cls, n: int) -> "MatrixQI":
        return cls(n, n, {(i, i): ONE for i in range(n)})

    def __eq__(self, other):
        if not isinstance(other, MatrixQI):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and self.entries == other.entries

    def __hash__(self):
        return hash((self.rows, self.cols, frozenset(self.entries.items())))

    def __getitem__(self, rc):
        return self.entries.get(rc, ZERO)

    @property
    def shape(self):
        return (self.rows, self.cols)

    def is_zero(self) -> bool:
        return not self.entries

    def to_rows(self) -> list[list[GaussianRational]]:
        out = [[ZERO] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def sparse_rows(self) -> list[dict]:
        out = [dict() for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def column(self, c: int) -> Vector:
        return tuple(self.entries.get((r, c), ZERO) for r in range(self.rows))

    def columns(self) -> list[Vector]:
        return [self.column(c) for c in range(self.cols)]

    def transpose(self) -> "MatrixQI":
        return MatrixQI(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})

    def conjugate(self) -> "MatrixQI":
        return MatrixQI(self.rows, self.cols, {k: v.conjugate() for k, v in self.entries.items()})

    def __neg__(self):
        return MatrixQI(self.rows, self.cols, {k: -v for k, v in self.entries.items()})

    def __add__(self, other: "MatrixQI") -> "MatrixQI":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        ent = dict(self.entries)
        for k, v in other.entries.items():
            ent[k] = ent.get(k, ZERO) + v
        return MatrixQI(self.rows, self.cols, ent)

    def __sub__(self, other: "MatrixQI") -> "MatrixQI":
        return self + (-other)

    def __matmul__(self, other):
        if isinstance(other, MatrixQI):
            if self.cols != other.rows:
                raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
            right = other.sparse_rows()
            ent: dict = {}
            for (r, k), a in self.entries.items():
                for c, b in right[k].items():
                    ent[(r, c)] = ent.get((r, c), ZERO) + a * b
            return MatrixQI(self.rows, other.cols, ent)
        v = tuple(other)
        if len(v) != self.cols:
            raise ValueError(f"vector of length {len(v)} for a {self.shape} matrix")
        out = [ZERO] * self.rows
        for (r, c), a in self.entries.items():
            if v[c]:
                out[r] = out[r] + a * v[c]
        return tuple(out)

    def __repr__(self):
        return f"MatrixQI({self.rows}x{self.cols}, nnz={len(self.entries)})"


def vstack(top: MatrixQI, bottom: MatrixQI) -> MatrixQI:
    if top.cols != bottom.cols:
        raise ValueError("column mismatch in vstack")
    ent = dict(top.entries)
    ent.update({(r + top.rows, c): v for (r, c), v in bottom.entries.items()})
    return MatrixQI(top.rows + bottom.rows, top.cols, ent)


# --------------------------------------------------------------------------
# elimination


def _rref_rows(rows: Iterable[dict]) -> list[tuple[int, dict]]:
    """Reduced row echelon form of sparse rows.

    Returns ``(pivot_column, row)`` pairs sorted by pivot column; every row
    has a 1 at its pivot and zeros at all other pivots.
    """
    basis: dict[int, dict] = {}
    for row in rows:
        r = {c: v for c, v in row.items() if v}
        # basis rows vanish at each other's pivots, so one pass suffices
        for pc in [c for c in r if c in basis]:
            f = r[pc]
            for c, v in basis[pc].items():
                nv = r.get(c, ZERO) - f * v
                if nv:
                    r[c] = nv
                else:
                    r.pop(c, None)
        if not r:
            continue
        p = min(r)
        inv = ONE / r[p]
        r = {c: v * inv for c, v in r.items()}
        # clear the new pivot column from earlier rows
        for pc, brow in basis.items():
            f = brow.get(p)
            if f:
                for c, v in r.items():
                    nv = brow.get(c, ZERO) - f * v
                    if nv:
                        brow[c] = nv
                    else:
                        brow.pop(c, None)
        basis[p] = r
    return sorted(basis.items())


def _as_sparse(v: Sequence) -> dict:
    return {i: GaussianRational.coerce(x) for i, x in enumerate(v) if x}


def _dense(row: dict, n: int) -> Vector:
    out = [ZERO] * n
    for c, v in row.items():
        out[c] = v
    return tuple(out)


def rref(M: MatrixQI) -> list[tuple[int, Vector]]:
    """Nonzero rows of the reduced row echelon form of ``M``, with pivot columns."""
    return [(p, _dense(r, M.cols)) for p, r in _rref_rows(M.sparse_rows())]


def rank(M: MatrixQI) -> int:
    """Exact rank over Q(i)."""
    return len(_rref_rows(M.sparse_rows()))


def rank_of_vectors(vectors: Sequence[Sequence]) -> int:
    return len(_rref_rows(_as_sparse(v) for v in vectors))


def kernel_basis(M: MatrixQI) -> list[Vector]:
    """Basis of ``ker M``, one vector per free column, in column order."""
    piv = _rref_rows(M.sparse_rows())
    pivot_cols = {p for p, _ in piv}
    out = []
    for f in range(M.cols):
        if f in pivot_cols:
            continue
        v = {f: ONE}
        for p, row in piv:
            x = row.get(f)
            if x:
                v[p] = -x
        out.append(_dense(v, M.cols))
    return out


def image_basis(M: MatrixQI) -> list[Vector]:
    """Echelon basis of the column space of ``M``."""
    return [_dense(r, M.rows) for _, r in _rref_rows(_as_sparse(c) for c in M.columns())]


def span_basis(vectors: Sequence[Sequence], dim: int) -> list[Vector]:
    """Reduced echelon basis of the span of ``vectors`` in a ``dim``-space."""
    return [_dense(r, dim) for _, r in _rref_rows(_as_sparse(v) for v in vectors)]


def intersection_dim(U: Sequence[Sequence], V: Sequence[Sequence]) -> int:
    """``dim(span U ∩ span V)`` via ``dim U + dim V - dim(U + V)``."""
    return rank_of_vectors(U) + rank_of_vectors(V) - rank_of_vectors(list(U) + list(V))


class _Reducer:
    """Reduces vectors modulo a fixed subspace given in reduced echelon form."""

    def __init__(self, rows: list[tuple[int, dict]]):
        self.rows = rows

    def reduce(self, v: dict) -> dict:
        r = dict(v)
        for p, row in self.rows:
            f = r.get(p)
            if f:
                for c, x in row.items():
                    nv = r.get(c, ZERO) - f * x
                    if nv:
                        r[c] = nv
                    else:
                        r.pop(c, None)
        return r

    def contains(self, v: dict) -> bool:
        return not self.reduce(v)


# --------------------------------------------------------------------------
# subquotients


@dataclass(frozen=True, eq=False)
class SubquotientSpace:
    """``Z / B`` inside a coordinate space of dimension ``ambient_dim``.

    ``cycles`` and ``boundaries`` are reduced echelon bases; ``reps`` are the
    chosen lifts of a basis of the quotient.  Each rep vanishes at every
    boundary pivot, and the reps are in reduced echelon form among themselves.
    """

    ambient_dim: int
    cycles: tuple
    boundaries: tuple
    reps: tuple
    _z: _Reducer = field(repr=False)
    _b: _Reducer = field(repr=False)
    _reps: list = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.reps)

    def is_cycle(self, v: Sequence) -> bool:
        return self._z.contains(_as_sparse(v))

    def is_boundary(self, v: Sequence) -> bool:
        return self._b.contains(_as_sparse(v))

    def coordinates(self, v: Sequence) -> Vector:
        """Coordinates of the class of the cycle ``v`` in the rep basis."""
        if len(v) != self.ambient_dim:
            raise ValueError("vector length does not match ambient dimension")
        r = self._b.reduce(_as_sparse(v))
        coords = []
        for p, row in self._reps:
            f = r.get(p, ZERO)
            coords.append(f)
            if f:
                for c, x in row.items():
                    nv = r.get(c, ZERO) - f * x
                    if nv:
                        r[c] = nv
                    else:
                        r.pop(c, None)
        if r:
            raise ValueError("vector is not a cycle of this subquotient")
        return tuple(coords)

    def class_rank(self, vectors: Sequence[Sequence]) -> int:
        """Dimension of the span of the classes of the given cycles."""
        return rank_of_vectors([self.coordinates(v) for v in vectors])

    def spans_equal(self, vectors: Sequence[Sequence]) -> bool:
        """True if the given cycles' classes form a spanning set of ``Z/B``."""
        return all(self.is_cycle(v) for v in vectors) and self.class_rank(vectors) == self.dim


def subquotient(Z: Sequence[Sequence], B: Sequence[Sequence], ambient_dim: int | None = None) -> SubquotientSpace:
    """Build ``span Z / span B``; raises :class:`ContainmentViolation` unless ``B ⊆ Z``."""
    if ambient_dim is None:
        vs = list(Z) + list(B)
        if not vs:
            raise ValueError("ambient_dim is required when Z and B are both empty")
        ambient_dim = len(vs[0])
    for v in list(Z) + list(B):
        if len(v) != ambient_dim:
            raise ValueError("vector length does not match ambient dimension")
    z_rows = _rref_rows(_as_sparse(v) for v in Z)
    b_rows = _rref_rows(_as_sparse(v) for v in B)
    zred = _Reducer(z_rows)
    for i, (_, b) in enumerate(b_rows):
        if not zred.contains(b):
            raise ContainmentViolation(f"boundary vector {i} is not in the span of the cycles")
    bred = _Reducer(b_rows)
    residues = [bred.reduce(r) for _, r in z_rows]
    rep_rows = _rref_rows(residues)
    return SubquotientSpace(
        ambient_dim=ambient_dim,
        cycles=tuple(_dense(r, ambient_dim) for _, r in z_rows),
        boundaries=tuple(_dense(r, ambient_dim) for _, r in b_rows),
        reps=tuple(_dense(r, ambient_dim) for _, r in rep_rows),
        _z=zred,
        _b=bred,
        _reps=rep_rows,
    )


@dataclass(frozen=True)
class InducedMap:
    """Matrix of a map between subquotients in rep bases, with kernel and cokernel."""

    matrix: MatrixQI
    rank: int
    kernel: tuple  # ambient vectors in the source, leading coefficient 1
    cokernel: tuple  # dst reps completing the image

    @property
    def ker_dim(self) -> int:
        return len(self.kernel)

    @property
    def coker_dim(self) -> int:
        return len(self.cokernel)


def normalize_leading(v: Sequence) -> Vector:
    """Scale ``v`` so its first nonzero entry is 1."""
    for x in v:
        if x:
            inv = ONE / x
            return tuple(y * inv for y in v)
    return tuple(v)


def induced_map(F: MatrixQI, src: SubquotientSpace, dst: SubquotientSpace) -> InducedMap:
    """The map ``src -> dst`` induced by ``F`` on ambient spaces.

    Raises :class:`NotAChainMap` if ``F`` does not carry cycles into cycles and
    boundaries into boundaries.
    """
    if F.shape != (dst.ambient_dim, src.ambient_dim):
        raise ValueError(f"map of shape {F.shape} between ambients {src.ambient_dim} -> {dst.ambient_dim}")
    for z in src.cycles:
        if not dst.is_cycle(F @ z):
            raise NotAChainMap("image of a cycle is not a cycle")
    for b in src.boundaries:
        if not dst.is_boundary(F @ b):
            raise NotAChainMap("image of a boundary is not a boundary")
    cols = [dst.coordinates(F @ r) for r in src.reps]
    mat = MatrixQI.from_columns(cols, dst.dim)
    ker = []
    for k in kernel_basis(mat):
        v = [ZERO] * src.ambient_dim
        for coef, r in zip(k, src.reps):
            if coef:
                for i, x in enumerate(r):
                    if x:
                        v[i] = v[i] + coef * x
        ker.append(normalize_leading(v))
    img = _rref_rows(_as_sparse(c) for c in cols)
    pivots = {p for p, _ in img}
    coker = [dst.reps[j] for j in range(dst.dim) if j not in pivots]
    return InducedMap(matrix=mat, rank=len(img), kernel=tuple(ker), cokernel=tuple(coker))
