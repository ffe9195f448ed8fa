"""Text input: polynomial expressions and the job file format.

A job file describes one ring, then any number of named ideals, named
extension stanzas and decomposition hints:

    ring { p = 2 ; vars = x y ; mod = x*y }
    ideal I = x, y
    extend E { var = t ; rel = t^2 + t ; rel = (x+y)*t + x }
    hint I = [ x ] [ y ]

Polynomial syntax: +, -, * (or juxtaposition), ^, parentheses, integer
coefficients taken mod p.  `extend` stanzas with the same name accumulate:
each stanza adjoins its variable and its relations may use every variable
declared so far under that name.  Keywords ring/ideal/extend/hint are
reserved and cannot name variables.
"""

from dataclasses import dataclass, field

from .ring import PolyRing, Polynomial

KEYWORDS = ("ring", "ideal", "extend", "hint")


class ParseError(ValueError):
    def __init__(self, msg, line, col):
        super().__init__(f"parse error at {line}:{col}: {msg}")
        self.line = line
        self.col = col


@dataclass
class Token:
    kind: str  # int | ident | sym | eof
    text: str
    line: int
    col: int


def tokenize(src: str):
    toks = []
    line, col, i = 1, 1, 0
    n = len(src)
    while i < n:
        ch = src[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and src[i] != "\n":
                i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            toks.append(Token("int", src[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            toks.append(Token("ident", src[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch in "+-*^(){}[]=;,":
            toks.append(Token("sym", ch, line, col))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    toks.append(Token("eof", "", line, col))
    return toks


class _Cursor:
    def __init__(self, toks, pos=0):
        self.toks = toks
        self.pos = pos

    def peek(self) -> Token:
        return self.toks[self.pos]

    def next(self) -> Token:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect_sym(self, s) -> Token:
        t = self.peek()
        if t.kind != "sym" or t.text != s:
            raise ParseError(f"expected {s!r}, found {t.text or 'end of input'!r}",
                             t.line, t.col)
        return self.next()

    def expect_ident(self) -> Token:
        t = self.peek()
        if t.kind != "ident":
            raise ParseError(f"expected a name, found {t.text or 'end of input'!r}",
                             t.line, t.col)
        return self.next()

    def at_sym(self, s) -> bool:
        t = self.peek()
        return t.kind == "sym" and t.text == s


# -- expression parser ------------------------------------------------------

def _parse_expr(cur: _Cursor, ring: PolyRing) -> Polynomial:
    out = _parse_term(cur, ring)
    while True:
        t = cur.peek()
        if t.kind == "sym" and t.text in "+-":
            cur.next()
            rhs = _parse_term(cur, ring)
            out = out + rhs if t.text == "+" else out - rhs
        else:
            return out


def _starts_factor(t: Token) -> bool:
    if t.kind == "int":
        return True
    if t.kind == "ident":
        return t.text not in KEYWORDS
    return t.kind == "sym" and t.text == "("


def _parse_term(cur: _Cursor, ring: PolyRing) -> Polynomial:
    out = _parse_factor(cur, ring)
    while True:
        t = cur.peek()
        if t.kind == "sym" and t.text == "*":
            cur.next()
            out = out * _parse_factor(cur, ring)
        elif _starts_factor(t):
            # juxtaposition
            out = out * _parse_factor(cur, ring)
        else:
            return out


def _parse_factor(cur: _Cursor, ring: PolyRing) -> Polynomial:
    if cur.at_sym("-"):
        cur.next()
        return -_parse_factor(cur, ring)
    out = _parse_atom(cur, ring)
    while cur.at_sym("^"):
        cur.next()
        t = cur.peek()
        if t.kind != "int":
            raise ParseError("exponent must be a nonnegative integer", t.line, t.col)
        cur.next()
        out = out ** int(t.text)
    return out


def _parse_atom(cur: _Cursor, ring: PolyRing) -> Polynomial:
    t = cur.peek()
    if t.kind == "int":
        cur.next()
        return ring.const(int(t.text))
    if t.kind == "ident":
        if t.text in KEYWORDS:
            raise ParseError(f"{t.text!r} is a reserved word", t.line, t.col)
        cur.next()
        try:
            return ring.variable(ring.var_index(t.text))
        except KeyError:
            raise ParseError(f"unknown variable {t.text!r}", t.line, t.col) from None
    if t.kind == "sym" and t.text == "(":
        cur.next()
        out = _parse_expr(cur, ring)
        cur.expect_sym(")")
        return out
    raise ParseError(f"expected a polynomial, found {t.text or 'end of input'!r}",
                     t.line, t.col)


def parse_poly(ring: PolyRing, s: str) -> Polynomial:
    cur = _Cursor(tokenize(s))
    out = _parse_expr(cur, ring)
    t = cur.peek()
    if t.kind != "eof":
        raise ParseError(f"trailing input {t.text!r}", t.line, t.col)
    return out


def _parse_poly_list(cur: _Cursor, ring: PolyRing):
    polys = [_parse_expr(cur, ring)]
    while cur.at_sym(","):
        cur.next()
        polys.append(_parse_expr(cur, ring))
    return polys


# -- job files ---------------------------------------------------------------

@dataclass
class ExtensionSpec:
    varnames: list = field(default_factory=list)
    relations: list = field(default_factory=list)  # in ring.extend(varnames)


@dataclass
class JobSpec:
    ring: PolyRing
    modulus: Polynomial
    ideals: dict = field(default_factory=dict)
    extensions: dict = field(default_factory=dict)
    hints: dict = field(default_factory=dict)


def _skip_expr(cur: _Cursor):
    """Skip one expression; return the start position."""
    start = cur.pos
    depth = 0
    while True:
        t = cur.peek()
        if t.kind == "eof":
            break
        if t.kind == "sym":
            if t.text == "(":
                depth += 1
            elif t.text == ")":
                if depth == 0:
                    break
                depth -= 1
            elif depth == 0 and t.text in ";}],":
                break
        cur.next()
    if cur.pos == start:
        t = cur.peek()
        raise ParseError("expected a polynomial", t.line, t.col)
    return start


def _parse_ring_block(cur: _Cursor) -> tuple:
    cur.expect_sym("{")
    p = None
    names = None
    modulus = None
    ring = None
    while not cur.at_sym("}"):
        key = cur.expect_ident()
        cur.expect_sym("=")
        if key.text == "p":
            t = cur.peek()
            if t.kind != "int":
                raise ParseError("p must be an integer", t.line, t.col)
            cur.next()
            p = int(t.text)
        elif key.text == "vars":
            names = []
            while cur.peek().kind == "ident":
                nm = cur.next().text
                if nm in KEYWORDS:
                    raise ParseError(f"{nm!r} is a reserved word", key.line, key.col)
                names.append(nm)
            if not names:
                raise ParseError("vars needs at least one name", key.line, key.col)
        elif key.text == "mod":
            if p is None or names is None:
                raise ParseError("p and vars must come before mod", key.line, key.col)
            ring = ring or PolyRing(p, names)
            modulus = _parse_expr(cur, ring)
        else:
            raise ParseError(f"unknown ring entry {key.text!r}", key.line, key.col)
        if cur.at_sym(";"):
            cur.next()
    cur.expect_sym("}")
    if p is None or names is None or modulus is None:
        t = cur.peek()
        raise ParseError("ring block needs p, vars and mod", t.line, t.col)
    return PolyRing(p, names), modulus


def parse_job(src: str) -> JobSpec:
    cur = _Cursor(tokenize(src))
    t = cur.peek()
    if not (t.kind == "ident" and t.text == "ring"):
        raise ParseError("job file must begin with a ring block", t.line, t.col)
    cur.next()
    ring, modulus = _parse_ring_block(cur)
    job = JobSpec(ring, modulus)
    pending = {}  # extension name -> (varnames, [rel token positions])
    while True:
        t = cur.peek()
        if t.kind == "eof":
            break
        if t.kind != "ident" or t.text not in KEYWORDS:
            raise ParseError(f"expected a statement, found {t.text!r}", t.line, t.col)
        cur.next()
        if t.text == "ring":
            raise ParseError("only one ring block allowed", t.line, t.col)
        name = cur.expect_ident().text
        if t.text == "ideal":
            cur.expect_sym("=")
            job.ideals[name] = _parse_poly_list(cur, ring)
        elif t.text == "hint":
            cur.expect_sym("=")
            comps = []
            while cur.at_sym("["):
                cur.next()
                comps.append(_parse_poly_list(cur, ring))
                cur.expect_sym("]")
            if not comps:
                tt = cur.peek()
                raise ParseError("hint needs at least one [ ... ] component",
                                 tt.line, tt.col)
            job.hints[name] = comps
        else:  # extend
            varnames, rels = pending.setdefault(name, ([], []))
            cur.expect_sym("{")
            var = None
            while not cur.at_sym("}"):
                key = cur.expect_ident()
                cur.expect_sym("=")
                if key.text == "var":
                    nm = cur.expect_ident().text
                    if nm in KEYWORDS:
                        raise ParseError(f"{nm!r} is a reserved word",
                                         key.line, key.col)
                    if var is not None:
                        raise ParseError("one var per extend block", key.line, key.col)
                    var = nm
                    if nm not in varnames:
                        if nm in ring.names:
                            raise ParseError(f"{nm!r} is already a ring variable",
                                             key.line, key.col)
                        varnames.append(nm)
                elif key.text == "rel":
                    if var is None:
                        raise ParseError("var must come before rel", key.line, key.col)
                    rels.append(_skip_expr(cur))
                else:
                    raise ParseError(f"unknown extend entry {key.text!r}",
                                     key.line, key.col)
                if cur.at_sym(";"):
                    cur.next()
            cur.expect_sym("}")
            if var is None:
                raise ParseError("extend block needs a var", t.line, t.col)
    # relations may use every variable the stanza set declared
    for name, (varnames, rel_pos) in pending.items():
        ext_ring = ring.extend(varnames)
        rels = [_parse_expr(_Cursor(cur.toks, pos), ext_ring) for pos in rel_pos]
        job.extensions[name] = ExtensionSpec(varnames, rels)
    return job


def parse_job_file(path: str) -> JobSpec:
    with open(path) as fh:
        return parse_job(fh.read())
