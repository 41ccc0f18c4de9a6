"""Operator expressions, problem files, and the canonical printer.

Expressions are written over the declared variable names: each position
variable `x` brings a differentiation symbol `dx` and the Euler-operator
shorthand `tx` (for `x*dx`) along with it.  Multiplication is the
noncommutative Weyl product, applied left to right, so `dx*x` parses to
x*dx + 1 in normal order.  A problem file declares one ring and any number
of named ideals, modules, and polynomials, each statement ending in `;`,
with `#` starting a comment.
"""

from fractions import Fraction

from .errors import MissingPresentationError, ParseError
from .groebner import ModulePresentation, VecElement
from .polys import CommPoly, _drl_key
from .weyl import WeylElement, WeylRing

_SYMBOLS = "+-*^(),;=[]"


class _Token:
    __slots__ = ("kind", "value", "line", "col")

    def __init__(self, kind, value, line, col):
        self.kind = kind
        self.value = value
        self.line = line
        self.col = col

    def __repr__(self):
        return f"_Token({self.kind!r}, {self.value!r}, {self.line}, {self.col})"


def _tokenize(src):
    """Token stream with positions; kinds are 'ident', 'num', 'end', or the
    symbol character itself.  Rational literals like 3/4 are single tokens
    (no whitespace around the slash)."""
    out = []
    line, col = 1, 1
    i, n = 0, len(src)
    while i < n:
        ch = src[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        if ch == "#":
            while i < n and src[i] != "\n":
                i += 1
            continue
        if ch == "−":
            ch = "-"
        if ch in _SYMBOLS:
            out.append(_Token(ch, ch, line, col))
            i += 1
            col += 1
            continue
        if ch.isdigit():
            start = i
            while i < n and src[i].isdigit():
                i += 1
            numer = int(src[start:i])
            if i < n and src[i] == "/" and i + 1 < n and src[i + 1].isdigit():
                i += 1
                dstart = i
                while i < n and src[i].isdigit():
                    i += 1
                value = Fraction(numer, int(src[dstart:i]))
            else:
                value = Fraction(numer)
            out.append(_Token("num", value, line, col))
            col += i - start
            continue
        if ch.isalpha() or ch == "_":
            start = i
            while i < n and (src[i].isalnum() or src[i] == "_"):
                i += 1
            out.append(_Token("ident", src[start:i], line, col))
            col += i - start
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    out.append(_Token("end", None, line, col))
    return out


def _shown(tok):
    return "end of input" if tok.kind == "end" else repr(tok.value)


class _Parser:
    def __init__(self, tokens, ring=None):
        self.tokens = tokens
        self.pos = 0
        self.ring = ring

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def expect(self, kind):
        t = self.next()
        if t.kind != kind:
            raise ParseError(f"expected {kind!r}, found {_shown(t)}",
                             t.line, t.col)
        return t

    def fail(self, message, tok=None):
        tok = tok or self.peek()
        raise ParseError(message, tok.line, tok.col)

    # expression grammar: expr := ['-'] term (('+'|'-') term)*
    #                     term := factor ('*' factor)*
    #                     factor := atom ['^' integer]
    #                     atom := '(' expr ')' | identifier | number

    def expr(self):
        negate = False
        if self.peek().kind == "-":
            self.next()
            negate = True
        acc = self.term()
        if negate:
            acc = acc.scale(-1)
        while self.peek().kind in "+-":
            op = self.next().kind
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self):
        acc = self.factor()
        while self.peek().kind == "*":
            self.next()
            acc = acc * self.factor()
        return acc

    def factor(self):
        base = self.atom()
        if self.peek().kind != "^":
            return base
        self.next()
        t = self.next()
        if t.kind != "num" or t.value.denominator != 1 or t.value < 0:
            raise ParseError("exponent must be a nonnegative integer",
                             t.line, t.col)
        out = self.ring.one()
        for _ in range(int(t.value)):
            out = out * base
        return out

    def atom(self):
        t = self.next()
        if t.kind == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        if t.kind == "num":
            return self.ring.constant(t.value)
        if t.kind == "ident":
            return self.resolve(t)
        raise ParseError(f"expected an operand, found {_shown(t)}",
                         t.line, t.col)

    def resolve(self, tok):
        ring, name = self.ring, tok.value
        if name in ring.xnames or name in ring.dnames:
            return ring.gen(name)
        if name.startswith("t") and name[1:] in ring.xnames:
            i = ring.xnames.index(name[1:])
            if i < ring.nd:
                return ring.theta(i)
        raise ParseError(f"unknown identifier {name!r}", tok.line, tok.col)


def parse_operator(src, ring):
    """One operator expression over the ring's variables."""
    p = _Parser(_tokenize(src), ring)
    el = p.expr()
    tail = p.peek()
    if tail.kind != "end":
        raise ParseError(f"unexpected trailing input {tail.value!r}",
                         tail.line, tail.col)
    return el


class ProblemFile:
    """Parsed problem file: one ring plus named ideals, modules, polys."""

    def __init__(self, ring, ideals, modules, polys):
        self.ring = ring
        self.ideals = ideals
        self.modules = modules
        self.polys = polys

    def ideal(self, name=None):
        """Generators of the named (default: first declared) ideal."""
        if name is None:
            if not self.ideals:
                raise MissingPresentationError("file declares no ideal")
            name = next(iter(self.ideals))
        return self.ideals[name]

    def ideal_presentation(self, name=None):
        return ModulePresentation.cyclic(self.ring, self.ideal(name))

    def presentation(self, name=None):
        """Module presentation for Ext coefficients: the first declared
        module if any, else the first ideal taken cyclically."""
        if name is not None:
            if name in self.modules:
                return self.modules[name]
            return self.ideal_presentation(name)
        if self.modules:
            return next(iter(self.modules.values()))
        return self.ideal_presentation()


def parse_problem_file(text):
    """ProblemFile from source text; the ring statement must come first."""
    p = _Parser(_tokenize(text))
    ideals, modules, polys = {}, {}, {}
    names_seen = set()

    def declared_name():
        t = p.expect("ident")
        if t.value in names_seen:
            p.fail(f"duplicate name {t.value!r}", t)
        names_seen.add(t.value)
        return t.value

    while p.peek().kind != "end":
        head = p.next()
        if head.kind != "ident":
            p.fail("expected a statement keyword", head)
        if head.value == "ring":
            if p.ring is not None:
                p.fail("ring already declared", head)
            names = [p.expect("ident").value]
            while p.peek().kind == ",":
                p.next()
                names.append(p.expect("ident").value)
            p.expect(";")
            if len(set(names)) != len(names):
                p.fail("repeated variable name", head)
            p.ring = WeylRing(tuple(names))
            continue
        if p.ring is None:
            p.fail("ring must be declared first", head)
        if head.value == "ideal":
            name = declared_name()
            p.expect("=")
            gens = [p.expr()]
            while p.peek().kind == ",":
                p.next()
                gens.append(p.expr())
            p.expect(";")
            ideals[name] = gens
        elif head.value == "poly":
            name = declared_name()
            p.expect("=")
            el = p.expr()
            p.expect(";")
            nx, nd = p.ring.nx, p.ring.nd
            if any(any(e[nx:nx + nd]) for e in el.terms):
                p.fail("polynomial statement contains a differentiation "
                       "symbol", head)
            polys[name] = CommPoly(nx, {e[:nx]: c for e, c in el.terms.items()})
        elif head.value == "module":
            name = declared_name()
            p.expect("=")
            p.expect("[")
            rows = [_module_row(p)]
            while p.peek().kind == ",":
                p.next()
                rows.append(_module_row(p))
            p.expect("]")
            p.expect(";")
            rank = len(rows[0])
            if any(len(r) != rank for r in rows):
                p.fail("module rows must all have the same length", head)
            vecs = []
            for row in rows:
                terms = {}
                for j, el in enumerate(row):
                    for e, c in el.terms.items():
                        terms[(j, e)] = c
                vecs.append(VecElement(p.ring, rank, terms))
            modules[name] = ModulePresentation(p.ring, rank, vecs)
        else:
            p.fail(f"unknown statement {head.value!r}", head)
    if not ideals and not modules:
        raise ParseError("file declares no ideal or module")
    return ProblemFile(p.ring, ideals, modules, polys)


def _module_row(p):
    p.expect("[")
    row = [p.expr()]
    while p.peek().kind == ",":
        p.next()
        row.append(p.expr())
    p.expect("]")
    return row


# canonical printing; parse_operator(render_element(e), e.ring) == e

def _render_terms(items, names):
    parts = []
    for exps, coeff in items:
        factors = []
        for name, e in zip(names, exps):
            if e == 1:
                factors.append(name)
            elif e:
                factors.append(f"{name}^{e}")
        mag = abs(coeff)
        body = "*".join(factors)
        if not factors:
            body = _coeff_str(mag)
        elif mag != 1:
            body = f"{_coeff_str(mag)}*{body}"
        if not parts:
            parts.append(body if coeff > 0 else f"-{body}")
        else:
            parts.append(f" + {body}" if coeff > 0 else f" - {body}")
    return "".join(parts)


def _coeff_str(c):
    return str(c.numerator) if c.denominator == 1 else \
        f"{c.numerator}/{c.denominator}"


def render_element(el: WeylElement):
    """Canonical string form: terms in descending degrevlex, normal order."""
    if el.is_zero():
        return "0"
    items = sorted(el.terms.items(), key=lambda t: _drl_key(t[0]),
                   reverse=True)
    return _render_terms(items, el.ring.varnames)


def render_poly(p: CommPoly, names):
    if p.is_zero():
        return "0"
    return _render_terms(p.sort_terms(), names)
