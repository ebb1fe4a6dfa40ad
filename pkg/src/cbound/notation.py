"""Text formats: braid words, two-variable skein polynomials, planar
diagrams, and oval forest files.

All parsers report positions.  The polynomial grammar accepts the usual
hand-written shapes: ``2-3*v^2 + v^4 + z^(-2)-(2*v^2)/z^2`` as well as
``-3/v^6 + 1/(v^8*z^2)`` and bare negative exponents like ``z^-2``.
"""

from __future__ import annotations

from .braids import BraidWord
from .diagrams import Diagram, from_pd
from .homfly import LaurentPoly2
from .splice import Oval, OvalForest, OvalError


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, col: int = 1):
        super().__init__("line %d, col %d: %s" % (line, col, message))
        self.line = line
        self.col = col


_SYMBOLS = "+-*/^(){}[],"


class _Tokens:
    """Simple scanner: integers, names, single-char symbols."""

    def __init__(self, text: str):
        self.toks: list[tuple[str, str, int, int]] = []  # (kind, value, line, col)
        line, col = 1, 1
        i = 0
        while i < len(text):
            ch = text[i]
            if ch == "\n":
                line += 1
                col = 1
                i += 1
                continue
            if ch.isspace():
                col += 1
                i += 1
                continue
            if ch.isdigit():
                j = i
                while j < len(text) and text[j].isdigit():
                    j += 1
                self.toks.append(("int", text[i:j], line, col))
                col += j - i
                i = j
                continue
            if ch.isalpha() or ch == "_":
                j = i
                while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                self.toks.append(("name", text[i:j], line, col))
                col += j - i
                i = j
                continue
            if ch in _SYMBOLS:
                self.toks.append(("sym", ch, line, col))
                col += 1
                i += 1
                continue
            raise ParseError("unexpected character %r" % ch, line, col)
        self.pos = 0

    def peek(self):
        if self.pos < len(self.toks):
            return self.toks[self.pos]
        return ("eof", "", *self._end())

    def _end(self):
        if self.toks:
            k, v, l, c = self.toks[-1]
            return l, c + len(v)
        return 1, 1

    def next(self):
        t = self.peek()
        self.pos += 1
        return t

    def expect(self, kind, value=None):
        k, v, l, c = self.next()
        if k != kind or (value is not None and v != value):
            want = value if value is not None else kind
            raise ParseError("expected %s, found %r" % (want, v or k), l, c)
        return v, l, c

    def at(self, kind, value=None):
        k, v, _, _ = self.peek()
        return k == kind and (value is None or v == value)

    def done(self):
        if self.pos != len(self.toks):
            k, v, l, c = self.peek()
            raise ParseError("trailing input %r" % (v or k), l, c)


def _int(tk: _Tokens) -> int:
    neg = False
    if tk.at("sym", "-"):
        tk.next()
        neg = True
    elif tk.at("sym", "+"):
        tk.next()
    v, l, c = tk.expect("int")
    return -int(v) if neg else int(v)


# -- braid words -------------------------------------------------------------


def parse_braid(text: str) -> BraidWord:
    """Read ``BR[n, {e1, e2, ...}]``."""
    tk = _Tokens(text)
    _, l, c = tk.expect("name", "BR")
    tk.expect("sym", "[")
    strands = _int(tk)
    tk.expect("sym", ",")
    tk.expect("sym", "{")
    letters = []
    if not tk.at("sym", "}"):
        letters.append(_int(tk))
        while tk.at("sym", ","):
            tk.next()
            letters.append(_int(tk))
    tk.expect("sym", "}")
    tk.expect("sym", "]")
    tk.done()
    try:
        return BraidWord(strands, tuple(letters))
    except ValueError as exc:
        raise ParseError(str(exc), l, c)


def render_braid(b: BraidWord) -> str:
    return "BR[%d, {%s}]" % (b.strands, ", ".join(str(x) for x in b.letters))


# -- skein polynomials -------------------------------------------------------


def parse_poly(text: str) -> LaurentPoly2:
    tk = _Tokens(text)
    p = _poly_expr(tk)
    tk.done()
    return p


def _poly_expr(tk: _Tokens) -> LaurentPoly2:
    if tk.at("sym", "-"):
        tk.next()
        acc = -_poly_term(tk)
    else:
        if tk.at("sym", "+"):
            tk.next()
        acc = _poly_term(tk)
    while tk.at("sym", "+") or tk.at("sym", "-"):
        _, op, _, _ = tk.next()
        t = _poly_term(tk)
        acc = acc - t if op == "-" else acc + t
    return acc


def _poly_term(tk: _Tokens) -> LaurentPoly2:
    acc = _poly_factor(tk)
    while tk.at("sym", "*") or tk.at("sym", "/"):
        _, op, l, c = tk.next()
        rhs = _poly_factor(tk)
        if op == "*":
            acc = acc * rhs
        else:
            acc = _poly_div(acc, rhs, l, c)
    return acc


def _poly_div(num: LaurentPoly2, den: LaurentPoly2, l: int, c: int) -> LaurentPoly2:
    terms = list(den.terms.items())
    if len(terms) != 1:
        raise ParseError("can only divide by a single monomial", l, c)
    (dv, dz), coeff = terms[0]
    shifted = num.shift(-dv, -dz)
    if coeff in (1, -1):
        return shifted if coeff == 1 else -shifted
    out = {}
    for key, val in shifted.terms.items():
        if val % coeff:
            raise ParseError("non-integer coefficient in division", l, c)
        out[key] = val // coeff
    return LaurentPoly2(out)


def _poly_factor(tk: _Tokens) -> LaurentPoly2:
    base = _poly_atom(tk)
    if tk.at("sym", "^"):
        _, _, l, c = tk.next()
        e = _poly_exponent(tk)
        if e >= 0:
            return base ** e
        terms = list(base.terms.items())
        if len(terms) != 1 or terms[0][1] not in (1, -1):
            raise ParseError("negative power needs a monomial base", l, c)
        (dv, dz), coeff = terms[0]
        out = LaurentPoly2.const(1)
        inv = LaurentPoly2({(-dv, -dz): coeff})
        for _ in range(-e):
            out = out * inv
        return out
    return base


def _poly_exponent(tk: _Tokens) -> int:
    if tk.at("sym", "("):
        tk.next()
        e = _int(tk)
        tk.expect("sym", ")")
        return e
    return _int(tk)


def _poly_atom(tk: _Tokens) -> LaurentPoly2:
    k, v, l, c = tk.peek()
    if k == "int":
        tk.next()
        return LaurentPoly2.const(int(v))
    if k == "name" and v == "v":
        tk.next()
        return LaurentPoly2.monomial(1, 1, 0)
    if k == "name" and v == "z":
        tk.next()
        return LaurentPoly2.monomial(1, 0, 1)
    if k == "sym" and v == "(":
        tk.next()
        p = _poly_expr(tk)
        tk.expect("sym", ")")
        return p
    raise ParseError("expected a number, v, z, or parenthesis, found %r" % (v or k), l, c)


def render_poly(p: LaurentPoly2) -> str:
    """Canonical text: terms by falling v-degree then z-degree."""
    if not p.terms:
        return "0"
    items = sorted(p.terms.items(), key=lambda kv: (-kv[0][0], -kv[0][1]))
    out = []
    for (dv, dz), coeff in items:
        mono = []
        if dv:
            mono.append("v" if dv == 1 else "v^%d" % dv)
        if dz:
            mono.append("z" if dz == 1 else "z^%d" % dz)
        mag = abs(coeff)
        if mag != 1 or not mono:
            mono.insert(0, str(mag))
        body = "*".join(mono)
        if not out:
            out.append("-" + body if coeff < 0 else body)
        else:
            out.append((" - " if coeff < 0 else " + ") + body)
    return "".join(out)


# -- planar diagrams ---------------------------------------------------------


def parse_pd(text: str, unknots: int | None = None) -> Diagram:
    """Read ``PD[X[a,b,c,d], ...]``.

    A bare ``PD[]`` carries no component information, so it is rejected
    unless the caller supplies how many unknotted circles it stands for.
    """
    tk = _Tokens(text)
    _, l0, c0 = tk.expect("name", "PD")
    tk.expect("sym", "[")
    tuples = []
    while not tk.at("sym", "]"):
        _, l, c = tk.expect("name", "X")
        tk.expect("sym", "[")
        vals = [_int(tk)]
        for _ in range(3):
            tk.expect("sym", ",")
            vals.append(_int(tk))
        tk.expect("sym", "]")
        tuples.append(tuple(vals))
        if tk.at("sym", ","):
            tk.next()
        elif not tk.at("sym", "]"):
            k, v, l, c = tk.peek()
            raise ParseError("expected , or ], found %r" % (v or k), l, c)
    tk.expect("sym", "]")
    tk.done()
    if not tuples:
        if unknots is None:
            raise ParseError("empty diagram needs an explicit unknot count", l0, c0)
        return Diagram([], [], free_loops=unknots)
    try:
        return from_pd(tuples, free_loops=unknots or 0)
    except Exception as exc:
        raise ParseError(str(exc), l0, c0)


def render_pd(d: Diagram) -> str:
    from .diagrams import pd_tuples
    if not d.crossings:
        return "PD[]"
    return "PD[%s]" % ",".join("X[%d,%d,%d,%d]" % t for t in pd_tuples(d))


# -- oval forests ------------------------------------------------------------


def parse_ovals(text: str) -> OvalForest:
    """One oval per line: ``id parent winding`` with optional ``cx cy r``.

    ``#`` starts a comment; parents may be declared after their children.
    A radius of exactly 0 marks a fiber circle.
    """
    ovals = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        parts = body.split()
        if len(parts) not in (3, 6):
            raise ParseError("expected 3 or 6 fields, found %d" % len(parts), lineno, 1)
        try:
            ident, parent, winding = int(parts[0]), int(parts[1]), int(parts[2])
        except ValueError:
            raise ParseError("id, parent, winding must be integers", lineno, 1)
        if len(parts) == 6:
            try:
                cx, cy, r = float(parts[3]), float(parts[4]), float(parts[5])
            except ValueError:
                raise ParseError("geometry fields must be numbers", lineno, 1)
            if r < 0:
                raise ParseError("radius cannot be negative", lineno, 1)
            ovals.append(Oval(ident, parent, winding, fiber=(r == 0.0),
                              cx=cx, cy=cy, r=r))
        else:
            ovals.append(Oval(ident, parent, winding))
    if not ovals:
        raise ParseError("no ovals in input")
    try:
        return OvalForest(ovals)
    except OvalError as exc:
        raise ParseError(str(exc))


def render_ovals(forest: OvalForest) -> str:
    lines = []
    for o in forest.ovals:
        if o.has_geometry:
            lines.append("%d %d %d %g %g %g" % (o.ident, o.parent, o.winding, o.cx, o.cy, o.r))
        elif o.is_fiber:
            # only a zero radius marks a fiber in the file format
            raise OvalError("fiber %d needs geometry to be written out" % o.ident)
        else:
            lines.append("%d %d %d" % (o.ident, o.parent, o.winding))
    return "\n".join(lines)
