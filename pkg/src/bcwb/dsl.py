"""Parser and printer for the ``.lie`` structure-equation language.

Example::

    model iwasawa {
      dim 3
      d w1 = 0
      d w2 = 0
      d w3 = - w1^w2
    }

``w<k>`` is ω^k and ``cw<k>`` its conjugate.  Coefficients are Gaussian
rationals: ``2``, ``3/4``, ``i``, ``(1/2+3i)``, ``(1-2/3*i)``.  The same term
syntax is used for generator strings in result documents (see
:func:`parse_form`), where a single generator or ``1`` is also allowed.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .exterior import (
    Form,
    IndexOutOfRange,
    IntegrabilityError,
    LieModel,
    ModelError,
    UNIT,
    canonicalize_monomial,
    format_form,
)
from .linalg import ONE, GaussianRational


class DSLSyntaxError(ModelError):
    """Malformed model text; carries 1-based line and column."""

    def __init__(self, message: str, line: int, col: int, expected: str | None = None):
        self.line = line
        self.col = col
        self.expected = expected
        loc = f"line {line}, column {col}"
        super().__init__(f"{loc}: {message}" + (f" (expected {expected})" if expected else ""))


class DuplicateDeclaration(ModelError):
    pass


class MissingDeclaration(ModelError):
    pass


@dataclass(frozen=True)
class Token:
    kind: str  # INT, IDENT, GEN, SYM, EOF
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<gen>c?w\d+)\b
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_\-]*)
  | (?P<sym>[{}()=+\-*/^]|−|∧)
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[Token]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise DSLSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        col = pos - line_start + 1
        s = m.group()
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind in ("ws", "comment"):
            pass
        elif kind == "sym":
            s = {"−": "-", "∧": "^"}.get(s, s)
            toks.append(Token("SYM", s, line, col))
        else:
            toks.append(Token(kind.upper(), s, line, col))
        pos = m.end()
    toks.append(Token("EOF", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str, n: int | None = None):
        self.toks = tokenize(text)
        self.i = 0
        self.n = n

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, expected: str | None = None, tok: Token | None = None):
        t = tok or self.tok
        shown = t.text or "end of input"
        raise DSLSyntaxError(f"{msg}, found {shown!r}", t.line, t.col, expected)

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def at(self, kind: str, text: str | None = None) -> bool:
        t = self.tok
        return t.kind == kind and (text is None or t.text == text)

    def expect(self, kind: str, text: str | None = None, what: str | None = None) -> Token:
        if not self.at(kind, text):
            self.error("unexpected token", what or (repr(text) if text else kind))
        return self.advance()

    # grammar ---------------------------------------------------------------
    def rational(self) -> Fraction:
        num = int(self.expect("INT", what="integer").text)
        if self.at("SYM", "/"):
            self.advance()
            den = int(self.expect("INT", what="denominator").text)
            if den == 0:
                self.error("zero denominator", tok=self.toks[self.i - 1])
            return Fraction(num, den)
        return Fraction(num)

    def _imag_unit(self) -> bool:
        return self.at("IDENT", "i")

    def complex_in_parens(self) -> GaussianRational:
        self.expect("SYM", "(")
        lead = 1
        if self.at("SYM", "-") or self.at("SYM", "+"):
            lead = -1 if self.advance().text == "-" else 1
        if self._imag_unit():
            self.advance()
            val = GaussianRational(0, lead)
        else:
            re_part = lead * self.rational()
            if self.at("SYM", "*") or self._imag_unit():
                # pure imaginary: (2i) or (2*i)
                if self.at("SYM", "*"):
                    self.advance()
                self.expect("IDENT", "i", what="'i'")
                val = GaussianRational(0, re_part)
            elif self.at("SYM", "+") or self.at("SYM", "-"):
                sign = -1 if self.advance().text == "-" else 1
                if self._imag_unit():
                    im = Fraction(1)
                else:
                    im = self.rational()
                    if self.at("SYM", "*"):
                        self.advance()
                self.expect("IDENT", "i", what="'i'")
                val = GaussianRational(re_part, sign * im)
            else:
                val = GaussianRational(re_part)
        self.expect("SYM", ")", what="')'")
        return val

    def coefficient(self) -> GaussianRational | None:
        """Parse ``coeff "*"`` if present; returns None when the term starts with a generator."""
        if self.at("INT"):
            c = GaussianRational(self.rational())
            if self._imag_unit():  # 3i
                self.advance()
                c = GaussianRational(0, c.re)
        elif self._imag_unit():
            self.advance()
            c = GaussianRational(0, 1)
        elif self.at("SYM", "("):
            c = self.complex_in_parens()
        else:
            return None
        return c

    def gen(self) -> tuple[int, bool]:
        t = self.expect("GEN", what="generator w<k> or cw<k>")
        barred = t.text.startswith("c")
        k = int(t.text[2:] if barred else t.text[1:])
        if self.n is not None and not (1 <= k <= self.n):
            raise IndexOutOfRange(f"line {t.line}, column {t.col}: generator {t.text} outside 1..{self.n}")
        if k < 1:
            raise IndexOutOfRange(f"line {t.line}, column {t.col}: generator {t.text} outside 1..{self.n}")
        return k, barred

    def term(self, min_factors: int) -> tuple[GaussianRational, list, Token]:
        start = self.tok
        coeff = self.coefficient()
        if coeff is not None:
            if self.at("SYM", "*"):
                self.advance()
            elif min_factors == 0 and not self.at("GEN"):
                return coeff, [], start
            else:
                self.error("unexpected token", "'*'")
        else:
            coeff = ONE
        factors = [self.gen()]
        while self.at("SYM", "^"):
            self.advance()
            factors.append(self.gen())
        if len(factors) < min_factors:
            self.error(f"a term needs at least {min_factors} generators", "'^'")
        return coeff, factors, start

    def sum_of_terms(self, n: int, min_factors: int, check_integrable: bool = False) -> Form:
        out = Form(n)
        sign = 1
        if self.at("SYM", "-") or self.at("SYM", "+"):
            sign = -1 if self.advance().text == "-" else 1
        while True:
            coeff, factors, start = self.term(min_factors)
            if factors:
                s, mono = canonicalize_monomial(factors, n)
                if check_integrable and mono is not None and mono.bidegree == (0, 2):
                    raise IntegrabilityError(
                        f"line {start.line}, column {start.col}: (0,2) term {mono} in a structure equation"
                    )
                if s:
                    out = out + Form(n, {mono: coeff * (s * sign)})
            else:
                out = out + Form(n, {UNIT: coeff * sign})
            if self.at("SYM", "+") or self.at("SYM", "-"):
                sign = -1 if self.advance().text == "-" else 1
                continue
            return out

    def model(self) -> LieModel:
        self.expect("IDENT", "model", what="'model'")
        name = self.expect("IDENT", what="model name").text
        self.expect("SYM", "{", what="'{'")
        self.expect("IDENT", "dim", what="'dim'")
        n = int(self.expect("INT", what="dimension").text)
        self.n = n
        decls: dict[int, Form] = {}
        while self.at("IDENT", "d"):
            dtok = self.advance()
            gtok = self.tok
            k, barred = self.gen()
            if barred:
                self.error("conjugate generators are not allowed on the left-hand side", "w<k>", tok=gtok)
            self.expect("SYM", "=", what="'='")
            nxt = self.toks[self.i + 1]
            if self.at("INT", "0") and nxt.text not in ("*", "/", "i"):
                self.advance()
                rhs = Form(n)
            else:
                rhs = self.sum_of_terms(n, 2, check_integrable=True)
            if k in decls:
                raise DuplicateDeclaration(f"line {dtok.line}, column {dtok.col}: d w{k} declared twice")
            decls[k] = rhs
        if not decls and not self.at("SYM", "}"):
            self.error("unexpected token", "'d'")
        self.expect("SYM", "}", what="'d' or '}'")
        self.expect("EOF", what="end of input")
        missing = [k for k in range(1, n + 1) if k not in decls]
        if missing:
            raise MissingDeclaration("no declaration for " + ", ".join(f"d w{k}" for k in missing))
        return LieModel(name=name, n=n, d1=tuple(decls[k] for k in range(1, n + 1)))


def parse_model(text: str) -> LieModel:
    """Parse ``.lie`` source into a :class:`LieModel` (not yet validated)."""
    m = _Parser(text).model()
    return LieModel(name=m.name, n=m.n, d1=m.d1, source=text)


def parse_form(text: str, n: int) -> Form:
    """Parse a form written in the generator-string syntax, e.g. ``w2^w3 - w3^cw2``."""
    p = _Parser(text, n)
    if p.at("INT", "0") and p.toks[p.i + 1].kind == "EOF":
        return Form(n)
    f = p.sum_of_terms(n, 0)
    p.expect("EOF", what="end of input")
    return f


def format_model(m: LieModel) -> str:
    """Canonical source text; ``parse_model(format_model(m)) == m``."""
    lines = [f"model {m.name} {{", f"  dim {m.n}"]
    for k, f in enumerate(m.d1, start=1):
        lines.append(f"  d w{k} = {format_form(f)}")
    lines.append("}")
    return "\n".join(lines) + "\n"
