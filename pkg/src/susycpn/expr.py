"""Exact symbolic expressions in the two polarized coordinates x+ and x-.

The two coordinates are treated as independent complex variables, so that
identities between holomorphic and antiholomorphic quantities can be tested
off the real slice x- = conj(x+).  Expressions are immutable trees that are
closed under exact differentiation and structural conjugation; equality is
decided by evaluation at sample points, never by canonical forms.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from math import inf, sqrt, pi, cos, sin

import numpy as np

__all__ = [
    "Expr", "Const", "Var", "Add", "Mul", "Neg", "Pow", "Log",
    "X_PLUS", "X_MINUS", "ZERO", "ONE",
    "add", "mul", "neg", "sub", "div", "pow_", "log",
    "differentiate", "conjugate", "evaluate", "evaluate_many",
    "clearance", "collect_divisors", "uses_variable", "is_zero",
    "to_text", "parse",
    "EvalPoint", "real_slice_point", "random_point",
    "SingularPointError", "ExprSyntaxError",
]


class SingularPointError(ArithmeticError):
    """Evaluation hit a zero divisor or a zero logarithm argument."""

    def __init__(self, subtree: "Expr", point: "EvalPoint | None" = None):
        self.subtree = subtree
        self.point = point
        where = f" at {point}" if point is not None else ""
        super().__init__(f"singular point in {describe(subtree)}{where}")


class ExprSyntaxError(ValueError):
    """Parse failure, with the offending position in the input text."""

    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(f"{message} (at position {position})")


class Expr:
    """Base node.  Instances are immutable and shared freely."""

    __slots__ = ()

    def __add__(self, other):
        return add(self, _coerce(other))

    def __radd__(self, other):
        return add(_coerce(other), self)

    def __sub__(self, other):
        return add(self, neg(_coerce(other)))

    def __rsub__(self, other):
        return add(_coerce(other), neg(self))

    def __mul__(self, other):
        return mul(self, _coerce(other))

    def __rmul__(self, other):
        return mul(_coerce(other), self)

    def __truediv__(self, other):
        return div(self, _coerce(other))

    def __rtruediv__(self, other):
        return div(_coerce(other), self)

    def __pow__(self, exponent):
        return pow_(self, exponent)

    def __neg__(self):
        return neg(self)

    def __repr__(self):
        return f"<Expr {describe(self)}>"


class Const(Expr):
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = complex(value)


class Var(Expr):
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name


class Add(Expr):
    __slots__ = ("terms",)

    def __init__(self, terms):
        self.terms = tuple(terms)


class Mul(Expr):
    __slots__ = ("factors",)

    def __init__(self, factors):
        self.factors = tuple(factors)


class Neg(Expr):
    __slots__ = ("child",)

    def __init__(self, child: Expr):
        self.child = child


class Pow(Expr):
    """Integer or half-integer power; half-integer exponents are internal
    (created by nilpotent series for inverse square roots) and evaluate on
    the principal branch."""

    __slots__ = ("base", "exponent")

    def __init__(self, base: Expr, exponent: Fraction):
        self.base = base
        self.exponent = exponent


class Log(Expr):
    __slots__ = ("child",)

    def __init__(self, child: Expr):
        self.child = child


X_PLUS = Var("x+")
X_MINUS = Var("x-")
ZERO = Const(0)
ONE = Const(1)


def _coerce(value) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, (int, float, complex, Fraction)):
        return Const(complex(value))
    raise TypeError(f"cannot coerce {type(value).__name__} to Expr")


def is_zero(e: Expr) -> bool:
    return isinstance(e, Const) and e.value == 0


# ---------------------------------------------------------------------------
# Folding constructors.  Folding is limited to constants and neutral elements;
# no algebraic rewriting beyond that.

def add(*terms) -> Expr:
    flat = []
    const = 0j
    for t in terms:
        t = _coerce(t)
        if isinstance(t, Add):
            flat.extend(t.terms)
        elif isinstance(t, Const):
            const += t.value
        else:
            flat.append(t)
    # nested Adds were built by this factory, so their terms are already flat
    # apart from a possible trailing Const
    clean = []
    for t in flat:
        if isinstance(t, Const):
            const += t.value
        else:
            clean.append(t)
    if const != 0:
        clean.append(Const(const))
    if not clean:
        return ZERO
    if len(clean) == 1:
        return clean[0]
    return Add(clean)


def mul(*factors) -> Expr:
    flat = []
    const = 1 + 0j
    negations = 0
    stack = list(factors)
    for f in stack:
        f = _coerce(f)
        if isinstance(f, Neg):
            negations += 1
            f = f.child
        if isinstance(f, Mul):
            for g in f.factors:
                if isinstance(g, Const):
                    const *= g.value
                else:
                    flat.append(g)
        elif isinstance(f, Const):
            const *= f.value
        else:
            flat.append(f)
    if negations % 2:
        const = -const
    if const == 0:
        return ZERO
    if not flat:
        return Const(const)
    if const != 1:
        flat.insert(0, Const(const))
    if len(flat) == 1:
        return flat[0]
    return Mul(flat)


def neg(e) -> Expr:
    e = _coerce(e)
    if isinstance(e, Const):
        return Const(-e.value)
    if isinstance(e, Neg):
        return e.child
    return Neg(e)


def sub(a, b) -> Expr:
    return add(a, neg(b))


def div(a, b) -> Expr:
    return mul(a, pow_(b, -1))


def pow_(base, exponent) -> Expr:
    base = _coerce(base)
    if not isinstance(exponent, Fraction):
        exponent = Fraction(exponent)
    if exponent.denominator not in (1, 2):
        raise ValueError("only integer and half-integer exponents are supported")
    if exponent == 0:
        return ONE
    if exponent == 1:
        return base
    if isinstance(base, Pow) and exponent.denominator == 1:
        return pow_(base.base, base.exponent * exponent)
    if isinstance(base, Const):
        try:
            if exponent.denominator == 1:
                return Const(base.value ** int(exponent))
            return Const(base.value ** float(exponent))
        except ZeroDivisionError:
            pass  # keep the node; evaluation reports the singularity
    return Pow(base, exponent)


def log(e) -> Expr:
    e = _coerce(e)
    if isinstance(e, Const) and e.value != 0:
        import cmath

        return Const(cmath.log(e.value))
    return Log(e)


def _children(e: Expr):
    if isinstance(e, Add):
        return e.terms
    if isinstance(e, Mul):
        return e.factors
    if isinstance(e, Neg):
        return (e.child,)
    if isinstance(e, Pow):
        return (e.base,)
    if isinstance(e, Log):
        return (e.child,)
    return ()


def _postorder(root: Expr):
    """Yield nodes children-first, visiting each shared node once."""
    seen = set()
    stack = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        nid = id(node)
        if nid in seen:
            continue
        if expanded:
            seen.add(nid)
            yield node
        else:
            stack.append((node, True))
            for c in _children(node):
                if id(c) not in seen:
                    stack.append((c, False))


# ---------------------------------------------------------------------------
# Differentiation, conjugation, structure queries.

def differentiate(e: Expr, var: Var) -> Expr:
    """Exact derivative with respect to X_PLUS or X_MINUS."""
    if var is not X_PLUS and var is not X_MINUS:
        raise ValueError("differentiation variable must be X_PLUS or X_MINUS")
    memo: dict[int, Expr] = {}
    for node in _postorder(e):
        memo[id(node)] = _diff_node(node, var, memo)
    return memo[id(e)]


def _diff_node(node: Expr, var: Var, memo) -> Expr:
    if isinstance(node, Const):
        return ZERO
    if isinstance(node, Var):
        return ONE if node is var else ZERO
    if isinstance(node, Add):
        return add(*(memo[id(t)] for t in node.terms))
    if isinstance(node, Neg):
        return neg(memo[id(node.child)])
    if isinstance(node, Mul):
        pieces = []
        factors = node.factors
        for i, f in enumerate(factors):
            dfi = memo[id(f)]
            if is_zero(dfi):
                continue
            pieces.append(mul(*factors[:i], dfi, *factors[i + 1:]))
        return add(*pieces)
    if isinstance(node, Pow):
        db = memo[id(node.base)]
        if is_zero(db):
            return ZERO
        return mul(Const(complex(node.exponent)),
                   pow_(node.base, node.exponent - 1), db)
    if isinstance(node, Log):
        db = memo[id(node.child)]
        if is_zero(db):
            return ZERO
        return mul(db, pow_(node.child, -1))
    raise TypeError(f"unknown node {type(node).__name__}")


def conjugate(e: Expr) -> Expr:
    """Structural conjugate: swap x+ <-> x-, conjugate every constant."""
    memo: dict[int, Expr] = {}
    for node in _postorder(e):
        if isinstance(node, Const):
            out = Const(node.value.conjugate())
        elif isinstance(node, Var):
            out = X_MINUS if node is X_PLUS else X_PLUS
        elif isinstance(node, Add):
            out = add(*(memo[id(t)] for t in node.terms))
        elif isinstance(node, Mul):
            out = mul(*(memo[id(f)] for f in node.factors))
        elif isinstance(node, Neg):
            out = neg(memo[id(node.child)])
        elif isinstance(node, Pow):
            out = pow_(memo[id(node.base)], node.exponent)
        else:
            out = log(memo[id(node.child)])
        memo[id(node)] = out
    return memo[id(e)]


def uses_variable(e: Expr, var: Var) -> bool:
    return any(node is var for node in _postorder(e))


def collect_divisors(e: Expr) -> list[Expr]:
    """Bases of negative/half-integer powers and logarithm arguments."""
    out = []
    for node in _postorder(e):
        if isinstance(node, Pow) and (node.exponent < 0 or node.exponent.denominator == 2):
            out.append(node.base)
        elif isinstance(node, Log):
            out.append(node.child)
    return out


# ---------------------------------------------------------------------------
# Evaluation.

@dataclass(frozen=True)
class EvalPoint:
    """A polarized sample point; x+ and x- are independent."""

    xp: complex
    xm: complex

    def __str__(self):
        return f"(x+={self.xp:.6g}, x-={self.xm:.6g})"


def real_slice_point(x: complex) -> EvalPoint:
    return EvalPoint(x, complex(x).conjugate())


def random_point(rng: random.Random, real_slice: bool = False) -> EvalPoint:
    """Uniform draw from the unit disc in each coordinate."""

    def draw():
        r = sqrt(rng.random())
        phi = 2 * pi * rng.random()
        return complex(r * cos(phi), r * sin(phi))

    xp = draw()
    return real_slice_point(xp) if real_slice else EvalPoint(xp, draw())


def _eval_core(root: Expr, xp, xm, point=None):
    """Evaluate at vectors of points; returns (values, divisor clearance)."""
    memo: dict[int, object] = {}
    clear = inf
    for node in _postorder(root):
        if isinstance(node, Const):
            v = node.value
        elif isinstance(node, Var):
            v = xp if node is X_PLUS else xm
        elif isinstance(node, Add):
            v = memo[id(node.terms[0])]
            for t in node.terms[1:]:
                v = v + memo[id(t)]
        elif isinstance(node, Mul):
            v = memo[id(node.factors[0])]
            for f in node.factors[1:]:
                v = v * memo[id(f)]
        elif isinstance(node, Neg):
            v = -memo[id(node.child)]
        elif isinstance(node, Pow):
            b = np.asarray(memo[id(node.base)])
            r = node.exponent
            if r < 0 or r.denominator == 2:
                mags = np.abs(b)
                m = float(mags.min()) if mags.size else float(mags)
                if m < clear:
                    clear = m
                if r < 0 and np.any(b == 0):
                    raise SingularPointError(node.base, point)
            v = b ** int(r) if r.denominator == 1 else b ** float(r)
        else:  # Log
            b = np.asarray(memo[id(node.child)])
            mags = np.abs(b)
            m = float(mags.min()) if mags.size else float(mags)
            if m < clear:
                clear = m
            if np.any(b == 0):
                raise SingularPointError(node.child, point)
            v = np.log(b)
        memo[id(node)] = v
    return memo[id(root)], clear


def evaluate(e: Expr, point: EvalPoint) -> complex:
    """Value at one point; raises SingularPointError on zero divisors."""
    xp = np.array([point.xp], dtype=np.complex128)
    xm = np.array([point.xm], dtype=np.complex128)
    values, _ = _eval_core(e, xp, xm, point)
    return complex(np.asarray(values).reshape(-1)[0])


def evaluate_many(e: Expr, points) -> np.ndarray:
    """Values at a sequence of points, as a complex array."""
    xp = np.array([p.xp for p in points], dtype=np.complex128)
    xm = np.array([p.xm for p in points], dtype=np.complex128)
    values, _ = _eval_core(e, xp, xm)
    return np.broadcast_to(np.asarray(values, dtype=np.complex128), xp.shape).copy()


def clearance(e: Expr, point: EvalPoint) -> float:
    """Smallest divisor-body magnitude met while evaluating at the point.

    The value of the expression itself is also treated as a divisor body,
    since guards are the denominators of downstream formulas.
    """
    xp = np.array([point.xp], dtype=np.complex128)
    xm = np.array([point.xm], dtype=np.complex128)
    values, clear = _eval_core(e, xp, xm, point)
    own = float(np.abs(np.asarray(values).reshape(-1)[0]))
    return min(clear, own)


# ---------------------------------------------------------------------------
# Printing.

_PREC_ADD, _PREC_MUL, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4


def _fmt_real(v: float) -> str:
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return format(Decimal(repr(v)), "f")


def _const_text(value: complex) -> tuple[str, int]:
    re, im = value.real, value.imag
    if im == 0:
        s = _fmt_real(re)
        return (f"({s})", _PREC_ATOM) if re < 0 else (s, _PREC_ATOM)
    if re == 0:
        if im == 1:
            return "i", _PREC_ATOM
        s = _fmt_real(im) + "i"
        return (f"({s})", _PREC_ATOM) if im < 0 else (s, _PREC_ATOM)
    sign = "+" if im > 0 else "-"
    return f"({_fmt_real(re)} {sign} {_fmt_real(abs(im))}i)", _PREC_ATOM


def _render(e: Expr, memo) -> tuple[str, int]:
    if isinstance(e, Const):
        return _const_text(e.value)
    if isinstance(e, Var):
        return ("x" if e is X_PLUS else "xbar"), _PREC_ATOM
    if isinstance(e, Add):
        parts = []
        for t in e.terms:
            txt, prec = memo[id(t)]
            if isinstance(t, Neg):
                inner, iprec = memo[id(t.child)]
                if iprec < _PREC_MUL:
                    inner = f"({inner})"
                parts.append(("- ", inner))
            else:
                if prec < _PREC_ADD:
                    txt = f"({txt})"
                parts.append(("+ ", txt))
        first_sign, first = parts[0]
        out = ("-" + first) if first_sign == "- " else first
        for sign, txt in parts[1:]:
            out += f" {sign}{txt}"
        return out, _PREC_ADD
    if isinstance(e, Mul):
        parts = []
        for f in e.factors:
            txt, prec = memo[id(f)]
            if prec < _PREC_MUL:
                txt = f"({txt})"
            parts.append(txt)
        return "*".join(parts), _PREC_MUL
    if isinstance(e, Neg):
        txt, prec = memo[id(e.child)]
        if prec < _PREC_MUL:
            txt = f"({txt})"
        return f"-{txt}", _PREC_ADD
    if isinstance(e, Pow):
        txt, prec = memo[id(e.base)]
        if prec < _PREC_ATOM:
            txt = f"({txt})"
        r = e.exponent
        if r.denominator == 1:
            return f"{txt}^{int(r)}", _PREC_POW
        return f"{txt}^({r.numerator}/{r.denominator})", _PREC_POW
    txt, _ = memo[id(e.child)]
    return f"ln({txt})", _PREC_ATOM


def to_text(e: Expr) -> str:
    """Grammar-conformant rendering (half-integer powers excepted)."""
    memo: dict[int, tuple[str, int]] = {}
    for node in _postorder(e):
        memo[id(node)] = _render(node, memo)
    return memo[id(e)][0]


def describe(e: Expr, limit: int = 120) -> str:
    txt = to_text(e)
    return txt if len(txt) <= limit else txt[: limit - 3] + "..."


# ---------------------------------------------------------------------------
# Parser.  Grammar:
#   expr   := term (('+'|'-') term)*
#   term   := factor (('*'|'/') factor)*
#   factor := base ('^' INT)?
#   base   := NUMBER | 'i' | 'x' | '(' expr ')' | '-' base
# NUMBER is a decimal literal, optionally with a trailing 'i' (imaginary
# literal); 'i' alone is the imaginary unit; 'x' is the x+ coordinate.
# With polarized=True the extra variable 'xbar' (the x- coordinate) is
# accepted; it exists so that deliberately non-holomorphic profiles can be
# written in configuration files.

_NUM, _IMAG, _VAR_P, _VAR_M = "num", "imag", "x", "xbar"
_OPS = set("+-*/^()")


def _lex(text: str, polarized: bool):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _OPS:
            tokens.append((ch, None, i))
            i += 1
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            start = i
            while i < n and text[i].isdigit():
                i += 1
            if i < n and text[i] == ".":
                i += 1
                while i < n and text[i].isdigit():
                    i += 1
            literal = text[start:i]
            try:
                value = float(literal)
            except ValueError:
                raise ExprSyntaxError(f"bad number {literal!r}", start) from None
            if i < n and text[i] == "i":
                i += 1
                tokens.append((_IMAG, value, start))
            else:
                tokens.append((_NUM, value, start))
            continue
        if ch.isalpha():
            start = i
            while i < n and text[i].isalpha():
                i += 1
            word = text[start:i]
            if word == "i":
                tokens.append((_IMAG, 1.0, start))
            elif word == "x":
                tokens.append((_VAR_P, None, start))
            elif word == "xbar" and polarized:
                tokens.append((_VAR_M, None, start))
            else:
                raise ExprSyntaxError(f"unknown name {word!r}", start)
            continue
        raise ExprSyntaxError(f"unexpected character {ch!r}", i)
    tokens.append(("end", None, n))
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind, what):
        tok = self.advance()
        if tok[0] != kind:
            raise ExprSyntaxError(f"expected {what}", tok[2])
        return tok

    def expr(self) -> Expr:
        node = self.term()
        while self.peek()[0] in "+-":
            op, _, _ = self.advance()
            rhs = self.term()
            node = add(node, rhs) if op == "+" else sub(node, rhs)
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.peek()[0] in "*/":
            op, _, _ = self.advance()
            rhs = self.factor()
            node = mul(node, rhs) if op == "*" else div(node, rhs)
        return node

    def factor(self) -> Expr:
        node = self.base()
        if self.peek()[0] == "^":
            self.advance()
            node = pow_(node, self.exponent())
        return node

    def exponent(self) -> int:
        sign = 1
        if self.peek()[0] == "-":
            self.advance()
            sign = -1
        kind, value, pos = self.advance()
        if kind == _IMAG or (kind == _NUM and not float(value).is_integer()):
            raise ExprSyntaxError("exponent must be an integer", pos)
        if kind != _NUM:
            raise ExprSyntaxError("expected integer exponent", pos)
        return sign * int(value)

    def base(self) -> Expr:
        kind, value, pos = self.advance()
        if kind == _NUM:
            return Const(value)
        if kind == _IMAG:
            return Const(complex(0, value))
        if kind == _VAR_P:
            return X_PLUS
        if kind == _VAR_M:
            return X_MINUS
        if kind == "(":
            node = self.expr()
            self.expect(")", "')'")
            return node
        if kind == "-":
            return neg(self.base())
        raise ExprSyntaxError("expected a number, 'i', 'x' or '('", pos)


def parse(text: str, polarized: bool = False) -> Expr:
    """Parse the expression grammar; 'x' denotes the x+ coordinate."""
    parser = _Parser(_lex(text, polarized))
    node = parser.expr()
    kind, _, pos = parser.peek()
    if kind != "end":
        raise ExprSyntaxError("unexpected trailing input", pos)
    return node
