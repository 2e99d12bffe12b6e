"""Structure-table text: ``ab = c, ac = d`` with optional parameters.

Basis vectors are the first ``n`` lowercase letters (a -> e_1, b -> e_2, ...).
Coefficients are arithmetic expressions in integers, declared parameter
symbols (single characters such as r, t) and the imaginary unit ``i`` (when
``i`` is neither a basis letter nor a parameter).  Juxtaposition multiplies,
``^`` takes integer powers, ``/`` divides by a constant, so ``be = rtf+(1-t)g``
and ``ad = (1+t^3/2)f`` mean what they do in print.

Parsing produces a :class:`SymbolicTable` whose coefficients are polynomials
in the parameters; evaluating at rational (or Gaussian) parameter values
yields exact :class:`~nilcohom.liealg.StructureConstants`, and differentiation
in a parameter is exact term-by-term.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import TableError
from .polynomials import MultiPoly
from .scalars import FIELD_Q, FIELD_QI, QI, format_scalar

_SEPS = {",", ";", "\n"}


class _Tok:
    __slots__ = ("kind", "value", "line", "col")

    def __init__(self, kind, value, line, col):
        self.kind = kind
        self.value = value
        self.line = line
        self.col = col


def _tokenize(src):
    toks = []
    line, col = 1, 1
    idx = 0
    while idx < len(src):
        ch = src[idx]
        if ch == "\n":
            toks.append(_Tok("sep", "\n", line, col))
            line += 1
            col = 1
            idx += 1
            continue
        if ch in " \t\r":
            idx += 1
            col += 1
            continue
        if ch.isdigit():
            start = idx
            while idx < len(src) and src[idx].isdigit():
                idx += 1
            toks.append(_Tok("num", int(src[start:idx]), line, col))
            col += idx - start
            continue
        if ch.isalpha():
            toks.append(_Tok("sym", ch, line, col))
            idx += 1
            col += 1
            continue
        if ch in ",;":
            toks.append(_Tok("sep", ch, line, col))
        elif ch in "+-*/^()=":
            toks.append(_Tok(ch, ch, line, col))
        else:
            raise TableError(f"unexpected character {ch!r}", line, col)
        idx += 1
        col += 1
    toks.append(_Tok("end", None, line, col))
    return toks


class _Val:
    """Either a pure scalar polynomial or a linear combination of letters."""

    __slots__ = ("scal", "vec")

    def __init__(self, scal=None, vec=None):
        self.scal = scal if scal is not None else MultiPoly()
        self.vec = vec or {}

    def is_scalar(self):
        return not self.vec


class _Parser:
    def __init__(self, src, n, params=()):
        if n < 1 or n > 26:
            raise TableError(f"dimension {n} outside 1..26")
        self.toks = _tokenize(src)
        self.pos = 0
        self.n = n
        self.params = set(params)
        bad = [p for p in self.params if self._letter_index(p) is not None]
        if bad:
            raise TableError(f"parameter symbols collide with basis letters: {bad}")
        self.allow_i = "i" not in self.params and self._letter_index("i") is None

    # -- token plumbing ----------------------------------------------------

    def peek(self):
        return self.toks[self.pos]

    def take(self, kind=None):
        tok = self.toks[self.pos]
        if kind is not None and tok.kind != kind:
            raise TableError(f"expected {kind!r}, found {tok.value!r}", tok.line, tok.col)
        self.pos += 1
        return tok

    def _letter_index(self, ch):
        k = ord(ch) - ord("a")
        return k if 0 <= k < self.n else None

    # -- expressions ---------------------------------------------------------

    def expr(self):
        tok = self.peek()
        if tok.kind == "-":
            self.take()
            val = self._neg(self.term())
        elif tok.kind == "+":
            self.take()
            val = self.term()
        else:
            val = self.term()
        while self.peek().kind in "+-":
            op = self.take().kind
            rhs = self.term()
            if op == "-":
                rhs = self._neg(rhs)
            val = self._add(val, rhs)
        return val

    def term(self):
        val = self.factor()
        while True:
            tok = self.peek()
            if tok.kind == "*":
                self.take()
                val = self._mul(val, self.factor(), tok)
            elif tok.kind == "/":
                self.take()
                val = self._div(val, self.factor(), tok)
            elif tok.kind in ("num", "sym", "("):
                val = self._mul(val, self.factor(), tok)
            else:
                return val

    def factor(self):
        tok = self.peek()
        if tok.kind == "-":
            self.take()
            return self._neg(self.factor())
        base = self.primary()
        if self.peek().kind == "^":
            self.take()
            etok = self.take("num")
            if not base.is_scalar():
                raise TableError("cannot raise a basis vector to a power", etok.line, etok.col)
            return _Val(base.scal ** etok.value)
        return base

    def primary(self):
        tok = self.take()
        if tok.kind == "num":
            return _Val(MultiPoly.const(tok.value))
        if tok.kind == "(":
            val = self.expr()
            self.take(")")
            return val
        if tok.kind == "sym":
            ch = tok.value
            idx = self._letter_index(ch)
            if idx is not None:
                return _Val(vec={idx: MultiPoly.const(1)})
            if ch in self.params:
                return _Val(MultiPoly.var(ch))
            if ch == "i" and self.allow_i:
                return _Val(MultiPoly.const(QI(0, 1)))
            raise TableError(
                f"unknown symbol {ch!r} (not a basis letter a..{chr(ord('a') + self.n - 1)},"
                f" not a declared parameter)",
                tok.line,
                tok.col,
            )
        raise TableError(f"unexpected {tok.value!r}", tok.line, tok.col)

    @staticmethod
    def _neg(v):
        return _Val(-v.scal, {k: -p for k, p in v.vec.items()})

    @staticmethod
    def _add(a, b):
        vec = dict(a.vec)
        for k, p in b.vec.items():
            s = vec.get(k, MultiPoly()) + p
            if s:
                vec[k] = s
            elif k in vec:
                del vec[k]
        return _Val(a.scal + b.scal, vec)

    @staticmethod
    def _mul(a, b, tok):
        if not a.is_scalar() and not b.is_scalar():
            raise TableError("product of two basis-vector expressions", tok.line, tok.col)
        if b.is_scalar():
            a, b = b, a
        return _Val(a.scal * b.scal, {k: a.scal * p for k, p in b.vec.items()})

    @staticmethod
    def _div(a, b, tok):
        if not b.is_scalar():
            raise TableError("division by a basis-vector expression", tok.line, tok.col)
        c = b.scal.as_scalar()
        if c is None:
            raise TableError("division by a non-constant coefficient", tok.line, tok.col)
        if not c:
            raise TableError("division by zero", tok.line, tok.col)
        return _Val(a.scal / c, {k: p / c for k, p in a.vec.items()})


class SymbolicTable:
    """A structure table whose coefficients are polynomials in parameters."""

    __slots__ = ("n", "entries", "params")

    def __init__(self, n, entries, params=()):
        self.n = n
        self.entries = entries  # {(i, j): {k: MultiPoly}}, 0-based, i < j
        self.params = tuple(params)

    def free_symbols(self):
        out = set()
        for coeffs in self.entries.values():
            for p in coeffs.values():
                out |= p.variables()
        return out

    def derivative(self, sym):
        entries = {}
        for pair, coeffs in self.entries.items():
            d = {k: p.diff(sym) for k, p in coeffs.items()}
            d = {k: p for k, p in d.items() if p}
            if d:
                entries[pair] = d
        return SymbolicTable(self.n, entries, self.params)

    def evaluate(self, assignment=None):
        from .liealg import StructureConstants

        assignment = dict(assignment or {})
        missing = sorted(self.free_symbols() - set(assignment))
        if missing:
            raise TableError(f"unresolved parameter symbols: {', '.join(missing)}")
        field = FIELD_Q
        brackets = {}
        for pair, coeffs in self.entries.items():
            row = {}
            for k, p in coeffs.items():
                v = p.evaluate(assignment)
                if isinstance(v, QI):
                    field = FIELD_QI
                if v:
                    row[k] = v
            if row:
                brackets[pair] = row
        if field == FIELD_Q and any(
            isinstance(v, QI) for row in brackets.values() for v in row.values()
        ):
            field = FIELD_QI
        return StructureConstants(self.n, brackets, field=field)


def parse_symbolic(src, n, params=()) -> SymbolicTable:
    parser = _Parser(src, n, params)
    entries = {}
    while True:
        while parser.peek().kind == "sep":
            parser.take()
        if parser.peek().kind == "end":
            break
        t1 = parser.take("sym")
        t2 = parser.take("sym")
        i = parser._letter_index(t1.value)
        j = parser._letter_index(t2.value)
        if i is None:
            raise TableError(f"unknown basis letter {t1.value!r}", t1.line, t1.col)
        if j is None:
            raise TableError(f"unknown basis letter {t2.value!r}", t2.line, t2.col)
        if i == j:
            raise TableError(f"bracket of {t1.value!r} with itself", t1.line, t1.col)
        parser.take("=")
        val = parser.expr()
        if val.scal:
            raise TableError(
                "right-hand side has a scalar part (not a combination of letters)",
                t1.line,
                t1.col,
            )
        sign = 1
        if i > j:
            i, j, sign = j, i, -1
        if (i, j) in entries:
            raise TableError(f"bracket {t1.value}{t2.value} defined twice", t1.line, t1.col)
        coeffs = {}
        for k, p in val.vec.items():
            if sign < 0:
                p = -p
            if p:
                coeffs[k] = p
        entries[(i, j)] = coeffs
    entries = {pair: cs for pair, cs in entries.items() if cs}
    return SymbolicTable(n, entries, params)


def parse_table(src, n, params=None):
    """Parse and evaluate at the given parameter assignment (may be empty)."""
    assignment = dict(params or {})
    return parse_symbolic(src, n, tuple(assignment)).evaluate(assignment)


def parse_vector(src, n, params=()):
    """A basis-vector expression like ``2t(tb-d)`` -> length-n coefficient list."""
    parser = _Parser(src, n, params)
    val = parser.expr()
    end = parser.peek()
    if end.kind != "end":
        raise TableError(f"trailing input {end.value!r}", end.line, end.col)
    if val.scal:
        raise TableError("expression is not a vector (has a scalar part)")
    out = [MultiPoly() for _ in range(n)]
    for k, p in val.vec.items():
        out[k] = p
    return out


def format_table(mu) -> str:
    """Render structure constants back to table text; zero bracket -> ''."""
    letters = "abcdefghijklmnopqrstuvwxyz"
    chunks = []
    for (i, j) in sorted(mu.brackets()):
        coeffs = mu.bracket_basis(i, j)
        parts = []
        for k in sorted(coeffs):
            c = coeffs[k]
            parts.append(_coeff_prefix(c, bool(parts)) + letters[k])
        chunks.append(f"{letters[i]}{letters[j]} = {''.join(parts)}")
    return ", ".join(chunks)


def _coeff_prefix(c, inner):
    if isinstance(c, QI) and c.im != 0:
        s = format_scalar(c).replace(" i", "i")
        return ("+" if inner else "") + f"({s})"
    c = c.to_fraction() if isinstance(c, QI) else Fraction(c)
    if c == 1:
        return "+" if inner else ""
    if c == -1:
        return "-"
    s = str(c)
    if inner and not s.startswith("-"):
        s = "+" + s
    return s
