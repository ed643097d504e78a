"""Bigraded exterior algebra on invariant (1,0)- and (0,1)-forms.

A monomial ``ω^{I} ∧ ω^{J̄}`` is stored with the unbarred block first and each
block ascending.  Forms are sparse maps from monomials to Q(i) coefficients.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Iterable, NamedTuple, Sequence

from .linalg import ONE, ZERO, GaussianRational, MatrixQI, kernel_basis, rank_of_vectors, span_basis


class ModelError(ValueError):
    """Base class for problems with a Lie model or its forms."""


class IndexOutOfRange(ModelError):
    pass


class DimensionMismatch(ModelError):
    pass


class RangeError(ModelError):
    pass


class IntegrabilityError(ModelError):
    pass


class Monomial(NamedTuple):
    holo: tuple
    anti: tuple

    @property
    def bidegree(self) -> tuple[int, int]:
        return (len(self.holo), len(self.anti))

    @property
    def degree(self) -> int:
        return len(self.holo) + len(self.anti)

    def factors(self) -> list[tuple[int, bool]]:
        return [(k, False) for k in self.holo] + [(k, True) for k in self.anti]

    def __str__(self):
        if not self.holo and not self.anti:
            return "1"
        return "^".join([f"w{k}" for k in self.holo] + [f"cw{k}" for k in self.anti])

    def pretty(self) -> str:
        """Compact ``w^{12\\bar3}``-style label."""
        if not self.holo and not self.anti:
            return "1"
        return "w" + "".join(str(k) for k in self.holo) + "".join(f"~{k}" for k in self.anti)


UNIT = Monomial((), ())


def canonicalize_monomial(factors: Sequence[tuple[int, bool]], n: int | None = None):
    """Sort generator factors into canonical order.

    ``factors`` is a sequence of ``(index, barred)`` pairs.  Returns
    ``(sign, Monomial)`` with ``sign`` in ``{1, -1}``, or ``(0, None)`` if a
    factor repeats.
    """
    fs = list(factors)
    for k, _ in fs:
        if k < 1 or (n is not None and k > n):
            raise IndexOutOfRange(f"generator index {k} outside 1..{n}")
    keys = [(bool(b), k) for k, b in fs]
    if len(set(keys)) != len(keys):
        return 0, None
    inversions = sum(1 for a in range(len(keys)) for b in range(a + 1, len(keys)) if keys[a] > keys[b])
    keys.sort()
    holo = tuple(k for b, k in keys if not b)
    anti = tuple(k for b, k in keys if b)
    return (-1 if inversions % 2 else 1), Monomial(holo, anti)


def _colex(s: tuple) -> tuple:
    return tuple(reversed(s))


def basis(n: int, s: int, t: int) -> list[Monomial]:
    """Canonical monomial basis of ``A^{s,t}``, colexicographic in ``(I, J)``."""
    if not (0 <= s <= n and 0 <= t <= n):
        return []
    holos = sorted(combinations(range(1, n + 1), s), key=_colex)
    antis = sorted(combinations(range(1, n + 1), t), key=_colex)
    return [Monomial(I, J) for J in antis for I in holos]


def space_dim(n: int, s: int, t: int) -> int:
    if not (0 <= s <= n and 0 <= t <= n):
        return 0
    return comb(n, s) * comb(n, t)


class Form:
    """A sparse exterior form ``Σ c_m · m`` over Q(i)."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict | None = None):
        self.n = n
        clean = {}
        for m, c in (terms or {}).items():
            c = GaussianRational.coerce(c)
            if c:
                if any(k < 1 or k > n for k in m.holo + m.anti):
                    raise IndexOutOfRange(f"monomial {m} outside 1..{n}")
                clean[m] = c
        self.terms = clean

    @classmethod
    def monomial(cls, n: int, holo=(), anti=(), coeff=1) -> "Form":
        sign, m = canonicalize_monomial([(k, False) for k in holo] + [(k, True) for k in anti], n)
        if sign == 0:
            return cls(n)
        return cls(n, {m: GaussianRational.coerce(coeff) * sign})

    @classmethod
    def generator(cls, n: int, k: int, barred: bool = False) -> "Form":
        return cls.monomial(n, anti=(k,)) if barred else cls.monomial(n, holo=(k,))

    def _check(self, other: "Form"):
        if not isinstance(other, Form):
            raise TypeError("expected a Form")
        if other.n != self.n:
            raise DimensionMismatch(f"forms on n={self.n} and n={other.n}")

    def __add__(self, other: "Form") -> "Form":
        self._check(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, ZERO) + c
        return Form(self.n, t)

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def __neg__(self) -> "Form":
        return Form(self.n, {m: -c for m, c in self.terms.items()})

    def scale(self, c) -> "Form":
        c = GaussianRational.coerce(c)
        return Form(self.n, {m: c * v for m, v in self.terms.items()})

    __rmul__ = scale

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"Form({format_form(self)!r})"

    def bidegrees(self) -> set:
        return {m.bidegree for m in self.terms}

    def component(self, s: int, t: int) -> "Form":
        return Form(self.n, {m: c for m, c in self.terms.items() if m.bidegree == (s, t)})

    def wedge(self, other: "Form") -> "Form":
        return wedge(self, other)

    __xor__ = wedge

    def conjugate(self) -> "Form":
        return conjugate(self)

    def to_vector(self, labels: Sequence[Monomial]) -> tuple:
        index = {m: i for i, m in enumerate(labels)}
        out = [ZERO] * len(labels)
        for m, c in self.terms.items():
            if m not in index:
                raise ValueError(f"monomial {m} not in the given basis")
            out[index[m]] = c
        return tuple(out)

    @classmethod
    def from_vector(cls, n: int, labels: Sequence[Monomial], v: Sequence) -> "Form":
        return cls(n, {m: c for m, c in zip(labels, v) if c})


def _mono_wedge(a: Monomial, b: Monomial, n: int | None = None):
    return canonicalize_monomial(a.factors() + b.factors(), n)


def wedge(f: Form, g: Form) -> Form:
    if f.n != g.n:
        raise DimensionMismatch(f"forms on n={f.n} and n={g.n}")
    out: dict = {}
    for a, ca in f.terms.items():
        for b, cb in g.terms.items():
            sign, m = _mono_wedge(a, b)
            if sign:
                out[m] = out.get(m, ZERO) + ca * cb * sign
    return Form(f.n, out)


def conjugate_monomial(m: Monomial) -> tuple[int, Monomial]:
    """``conj(ω^I ∧ ω^{J̄}) = (-1)^{|I||J|} ω^J ∧ ω^{Ī}``."""
    sign = -1 if (len(m.holo) * len(m.anti)) % 2 else 1
    return sign, Monomial(m.anti, m.holo)


def conjugate(f: Form) -> Form:
    out = {}
    for m, c in f.terms.items():
        sign, cm = conjugate_monomial(m)
        out[cm] = c.conjugate() * sign
    return Form(f.n, out)


# --------------------------------------------------------------------------
# Lie models


@dataclass(frozen=True, eq=False)
class LieModel:
    """Structure equations ``dω^k`` (k = 1..n) of an invariant complex structure.

    ``d1[k-1]`` is ``dω^k``; its conjugate equation is derived, never stored.
    """

    name: str
    n: int
    d1: tuple
    source: str | None = field(default=None, compare=False)
    _cache: dict = field(default_factory=dict, repr=False, compare=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise ModelError("dimension must be non-negative")
        if len(self.d1) != self.n:
            raise ModelError(f"expected {self.n} structure equations, got {len(self.d1)}")
        for k, f in enumerate(self.d1, start=1):
            if f.n != self.n:
                raise DimensionMismatch(f"dω^{k} lives on n={f.n}")
            for m in f.terms:
                if m.degree != 2:
                    raise ModelError(f"dω^{k} has a term {m} of degree {m.degree}")
                if m.bidegree == (0, 2):
                    raise IntegrabilityError(f"dω^{k} has a (0,2) component {m}")

    def __eq__(self, other):
        if not isinstance(other, LieModel):
            return NotImplemented
        return (self.name, self.n, self.d1) == (other.name, other.n, other.d1)

    def __hash__(self):
        return hash((self.name, self.n, self.d1))

    @cached_property
    def _d_generators(self) -> dict:
        out = {}
        for k, f in enumerate(self.d1, start=1):
            out[(k, False)] = f
            out[(k, True)] = conjugate(f)
        return out

    def d_generator(self, k: int, barred: bool = False) -> Form:
        return self._d_generators[(k, barred)]

    def d_monomial(self, m: Monomial) -> Form:
        """Exterior derivative of a basis monomial by the graded Leibniz rule."""
        with self._lock:
            hit = self._cache.get(("d", m))
        if hit is not None:
            return hit
        n = self.n
        out: dict = {}
        fs = m.factors()
        for r, (k, barred) in enumerate(fs):
            sign_r = -1 if r % 2 else 1
            before, after = fs[:r], fs[r + 1 :]
            for dm, c in self.d_generator(k, barred).terms.items():
                sign, mm = canonicalize_monomial(before + dm.factors() + after, n)
                if sign:
                    out[mm] = out.get(mm, ZERO) + c * (sign * sign_r)
        res = Form(n, out)
        with self._lock:
            self._cache[("d", m)] = res
        return res

    def d(self, f: Form) -> Form:
        out = Form(self.n)
        for m, c in f.terms.items():
            out = out + self.d_monomial(m).scale(c)
        return out

    def del_(self, f: Form) -> Form:
        out: dict = {}
        for m, c in f.terms.items():
            s, t = m.bidegree
            for mm, v in self.d_monomial(m).terms.items():
                if mm.bidegree == (s + 1, t):
                    out[mm] = out.get(mm, ZERO) + c * v
        return Form(self.n, out)

    def delbar(self, f: Form) -> Form:
        out: dict = {}
        for m, c in f.terms.items():
            s, t = m.bidegree
            for mm, v in self.d_monomial(m).terms.items():
                if mm.bidegree == (s, t + 1):
                    out[mm] = out.get(mm, ZERO) + c * v
        return Form(self.n, out)

    @property
    def is_abelian(self) -> bool:
        return all(not f for f in self.d1)

    def cache_get(self, key):
        with self._lock:
            return self._cache.get(key)

    def cache_put(self, key, value):
        with self._lock:
            return self._cache.setdefault(key, value)


def operator_matrix(n: int, src: Sequence[Monomial], dst: Sequence[Monomial], op) -> MatrixQI:
    """Matrix of ``op`` (monomial -> Form) from ``src`` into ``dst``, dropping
    components outside ``dst`` (the projection onto retained summands)."""
    index = {m: i for i, m in enumerate(dst)}
    ent = {}
    for j, m in enumerate(src):
        for mm, c in op(m).terms.items():
            i = index.get(mm)
            if i is not None:
                ent[(i, j)] = c
    return MatrixQI(len(dst), len(src), ent)


def differential_matrices(m: LieModel, s: int, t: int) -> tuple[MatrixQI, MatrixQI]:
    """Matrices of ``∂: A^{s,t} -> A^{s+1,t}`` and ``∂̄: A^{s,t} -> A^{s,t+1}``."""
    if not (0 <= s <= m.n and 0 <= t <= m.n):
        raise RangeError(f"bidegree ({s},{t}) outside 0..{m.n}")
    key = ("dmat", s, t)
    hit = m.cache_get(key)
    if hit is not None:
        return hit
    src = basis(m.n, s, t)
    dl = operator_matrix(m.n, src, basis(m.n, s + 1, t), m.d_monomial)
    db = operator_matrix(m.n, src, basis(m.n, s, t + 1), m.d_monomial)
    return m.cache_put(key, (dl, db))


def del_matrix(m: LieModel, s: int, t: int) -> MatrixQI:
    if not (0 <= s <= m.n and 0 <= t <= m.n):
        return MatrixQI.zeros(space_dim(m.n, s + 1, t), space_dim(m.n, s, t))
    return differential_matrices(m, s, t)[0]


def delbar_matrix(m: LieModel, s: int, t: int) -> MatrixQI:
    if not (0 <= s <= m.n and 0 <= t <= m.n):
        return MatrixQI.zeros(space_dim(m.n, s, t + 1), space_dim(m.n, s, t))
    return differential_matrices(m, s, t)[1]


def ddbar_matrix(m: LieModel, s: int, t: int) -> MatrixQI:
    """``∂∂̄ : A^{s,t} -> A^{s+1,t+1}``."""
    return del_matrix(m, s, t + 1) @ delbar_matrix(m, s, t)


# --------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    model: str
    entries: list = field(default_factory=list)  # (name, passed, detail)
    abelian: bool = False
    nilpotent: bool = False

    @property
    def ok(self) -> bool:
        return all(p for _, p, _ in self.entries)

    def failures(self) -> list:
        return [(n, d) for n, p, d in self.entries if not p]


def _first_nonzero(M: MatrixQI, src: Sequence[Monomial]):
    if M.is_zero():
        return None
    (_, c) = min(M.entries)
    return src[c]


def validate_model(m: LieModel) -> ValidationReport:
    """Check ``∂² = 0``, ``∂̄² = 0`` and ``∂∂̄ + ∂̄∂ = 0`` on every bidegree."""
    rep = ValidationReport(model=m.name, abelian=m.is_abelian, nilpotent=is_nilpotent(m))
    n = m.n
    bad = {"del-squared": None, "delbar-squared": None, "del-delbar-anticommute": None}
    for s in range(n + 1):
        for t in range(n + 1):
            src = basis(n, s, t)
            dl = del_matrix(m, s, t)
            db = delbar_matrix(m, s, t)
            checks = {
                "del-squared": del_matrix(m, s + 1, t) @ dl,
                "delbar-squared": delbar_matrix(m, s, t + 1) @ db,
                "del-delbar-anticommute": del_matrix(m, s, t + 1) @ db + delbar_matrix(m, s + 1, t) @ dl,
            }
            for name, M in checks.items():
                if bad[name] is None:
                    mono = _first_nonzero(M, src)
                    if mono is not None:
                        bad[name] = (s, t, mono)
    for name, hit in bad.items():
        if hit is None:
            rep.entries.append((name, True, "holds on all bidegrees"))
        else:
            s, t, mono = hit
            rep.entries.append((name, False, f"fails in bidegree ({s},{t}) on {mono}"))
    # the combined statement d∘d = 0 is what users usually look for
    d2 = all(bad[k] is None for k in bad)
    first = next((h for h in bad.values() if h is not None), None)
    rep.entries.append(
        ("d-squared", d2, "d^2 = 0 on all monomials" if d2 else f"d^2 != 0 on {first[2]} in bidegree ({first[0]},{first[1]})")
    )
    return rep


def is_nilpotent(m: LieModel) -> bool:
    """Nilpotency of the underlying real Lie algebra.

    Builds the ascending chain ``V_0 = ker d ∩ Λ^1``,
    ``V_{j+1} = {α : dα ∈ Λ^2 V_j}`` and checks that it exhausts ``Λ^1``.
    """
    n = m.n
    gens = [(k, False) for k in range(1, n + 1)] + [(k, True) for k in range(1, n + 1)]
    two = [Monomial(I, J) for s in range(3) for I, J in _bideg2(n, s)]
    idx2 = {mm: i for i, mm in enumerate(two)}

    def dvec(coeffs):
        out = [ZERO] * len(two)
        for (k, b), c in zip(gens, coeffs):
            if c:
                for mm, v in m.d_generator(k, b).terms.items():
                    out[idx2[mm]] += c * v
        return out

    dim1 = 2 * n
    Dcols = [dvec([ONE if i == j else ZERO for i in range(dim1)]) for j in range(dim1)]
    current: list = []
    for _ in range(dim1 + 1):
        # Λ^2 V_j spanned by wedges of basis vectors of V_j (as 1-forms)
        wedges = []
        for a in range(len(current)):
            for b in range(a, len(current)):
                fa = _one_form(n, gens, current[a])
                fb = _one_form(n, gens, current[b])
                w = wedge(fa, fb)
                wv = [ZERO] * len(two)
                for mm, c in w.terms.items():
                    wv[idx2[mm]] = c
                wedges.append(wv)
        W = span_basis(wedges, len(two)) if wedges else []
        # α with dα ∈ span W: solve via kernel of [D | -W]
        cols = [list(c) for c in Dcols] + [[-x for x in w] for w in W]
        if not cols:
            return True
        M = MatrixQI.from_columns([tuple(c) for c in cols], len(two))
        sols = [tuple(k[:dim1]) for k in kernel_basis(M)]
        new = span_basis(sols, dim1) if sols else []
        if len(new) == dim1:
            return True
        if len(new) == len(current):
            return False
        current = new
    return False


def _bideg2(n: int, s: int):
    return [(mm.holo, mm.anti) for mm in basis(n, s, 2 - s)]


def _one_form(n, gens, coeffs) -> Form:
    out = Form(n)
    for (k, b), c in zip(gens, coeffs):
        if c:
            out = out + Form.generator(n, k, b).scale(c)
    return out


# --------------------------------------------------------------------------
# printing


def format_coefficient(c: GaussianRational) -> str:
    """Coefficient text for the DSL / generator strings (no sign handling)."""
    if c.im == 0:
        return str(c)
    return f"({c})"


def format_form(f: Form) -> str:
    """Print a form with terms in basis order, e.g. ``w1^cw3 + w3^cw1``."""
    if not f.terms:
        return "0"
    ordered = sorted(f.terms.items(), key=lambda mc: monomial_key(mc[0]))
    parts = []
    for i, (m, c) in enumerate(ordered):
        mono = str(m)
        if c.im == 0:
            neg = c.re < 0
            a = -c if neg else c
            body = mono if a == ONE else (str(a) if mono == "1" else f"{a}*{mono}")
            if i == 0:
                parts.append(("- " if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        else:
            body = f"({c})" if mono == "1" else f"({c})*{mono}"
            parts.append(body if i == 0 else " + " + body)
    return "".join(parts)


def monomial_key(m: Monomial):
    """Global basis order: by degree, then holomorphic degree descending,
    then colexicographic in ``(I, J)``."""
    return (m.degree, -len(m.holo), _colex(m.anti), _colex(m.holo))


def rank_form_family(forms: Iterable[Form], labels: Sequence[Monomial]) -> int:
    return rank_of_vectors([f.to_vector(labels) for f in forms])
