"""Text front end: quaternion literals, operator expressions, ODE strings.

Hand-written recursive descent over a small grammar (kept deliberately free
of parser-generator machinery so syntax errors can carry byte offsets):

    expr    := term (('+'|'-') term)*
    term    := factor ('*' factor | basis-symbol)*      # implicit product
    factor  := number | basis-symbol | 'D' ['^' int] | '(' expr ')'
             | '-' factor

Basis symbols are ``L_i L_j L_k R_i R_j R_k`` (case-sensitive); implicit
multiplication is accepted between adjacent basis symbols only, mirroring
the usual typography ``L_iR_j``.  The derivative symbol ``D`` is only legal
when parsing a whole equation, and only to the first power per product.

Quaternion literals are sums of signed components: ``j``, ``-k``,
``1+2i-3j+4k``, ``0.5-1e-3k``.
"""

import re
from dataclasses import dataclass

from .errors import ParseError
from .operators import RealLinearOperator
from .quaternion import Quaternion

_NUMBER = re.compile(r"(\d+\.\d*|\.\d+|\d+)([eE][+-]?\d+)?")
_BASIS = {"L_i": (1, 0), "L_j": (2, 0), "L_k": (3, 0),
          "R_i": (0, 1), "R_j": (0, 2), "R_k": (0, 3)}


@dataclass
class OdeSkeleton:
    """Order and coefficient operators of a parsed equation, no initial data.

    ``coefficients[p]`` is the operator applied to the p-th derivative after
    the equation is normalized to  D^n phi - sum_p a(p) D^p phi = 0.
    """

    order: int
    coefficients: list


class _Tokenizer:
    def __init__(self, src, allow_d):
        self.src = src
        self.pos = 0
        self.allow_d = allow_d
        self.tokens = []
        self._scan()
        self.idx = 0

    def _scan(self):
        src = self.src
        p = 0
        while p < len(src):
            ch = src[p]
            if ch.isspace():
                p += 1
                continue
            if src.startswith(("L_", "R_"), p):
                name = src[p:p + 3]
                if name not in _BASIS:
                    raise ParseError("unknown symbol %r" % src[p:p + 3], p)
                self.tokens.append(("sym", name, p))
                p += 3
                continue
            if ch == "D":
                if not self.allow_d:
                    raise ParseError(
                        "derivative symbol D is not allowed here", p)
                self.tokens.append(("D", "D", p))
                p += 1
                continue
            m = _NUMBER.match(src, p)
            if m:
                self.tokens.append(("num", m.group(0), p))
                p = m.end()
                continue
            if ch in "+-*^()":
                self.tokens.append((ch, ch, p))
                p += 1
                continue
            raise ParseError("unexpected character %r" % ch, p)
        self.tokens.append(("end", "", len(src)))

    def peek(self):
        return self.tokens[self.idx]

    def next(self):
        tok = self.tokens[self.idx]
        self.idx += 1
        return tok

    def expect(self, kind):
        tok = self.next()
        if tok[0] != kind:
            raise ParseError("expected %r, found %r" % (kind, tok[1] or
                                                        "end of input"),
                             tok[2])
        return tok


class _DPoly:
    """Operator-valued polynomial in the derivative symbol."""

    def __init__(self, coeffs=None):
        self.coeffs = dict(coeffs or {})

    @classmethod
    def const(cls, op):
        return cls({0: op})

    @property
    def degree(self):
        live = [p for p, op in self.coeffs.items() if _nonzero(op)]
        return max(live) if live else 0

    def coeff(self, p):
        return self.coeffs.get(p, RealLinearOperator.zero())

    def __add__(self, other):
        out = dict(self.coeffs)
        for p, op in other.coeffs.items():
            out[p] = out.get(p, RealLinearOperator.zero()) + op
        return _DPoly(out)

    def __sub__(self, other):
        return self + other.__neg__()

    def __neg__(self):
        return _DPoly({p: -op for p, op in self.coeffs.items()})

    def mul(self, other, offset):
        if self.degree > 0 and other.degree > 0:
            raise ParseError(
                "derivative symbol inside an operator product", offset)
        if other.degree > 0:
            lead, poly = self.coeff(0), other
        else:
            lead, poly = other.coeff(0), self
        return _DPoly({p: op * lead for p, op in poly.coeffs.items()})


def _nonzero(op):
    return bool((op.coeffs != 0).any())


def _parse_expr(tz):
    node = _parse_term(tz)
    while tz.peek()[0] in "+-":
        op, _, _ = tz.next()
        rhs = _parse_term(tz)
        node = node + rhs if op == "+" else node - rhs
    return node


def _parse_term(tz):
    node = _parse_factor(tz)
    prev_sym = tz.tokens[tz.idx - 1][0] in ("sym", "D")
    while True:
        kind, _, off = tz.peek()
        if kind == "*":
            tz.next()
            rhs = _parse_factor(tz)
            node = node.mul(rhs, off)
            prev_sym = tz.tokens[tz.idx - 1][0] in ("sym", "D")
        elif kind == "sym" and prev_sym:
            # implicit product between adjacent basis symbols: L_iR_j
            rhs = _parse_factor(tz)
            node = node.mul(rhs, off)
            prev_sym = True
        else:
            return node


def _parse_factor(tz):
    kind, text, off = tz.next()
    if kind == "num":
        return _DPoly.const(RealLinearOperator.identity() * float(text))
    if kind == "sym":
        return _DPoly.const(RealLinearOperator.basis(*_BASIS[text]))
    if kind == "D":
        power = 1
        if tz.peek()[0] == "^":
            tz.next()
            ptok = tz.expect("num")
            if not ptok[1].isdigit():
                raise ParseError("derivative power must be an integer",
                                 ptok[2])
            power = int(ptok[1])
        return _DPoly({power: RealLinearOperator.identity()})
    if kind == "(":
        node = _parse_expr(tz)
        tz.expect(")")
        return node
    if kind == "-":
        return -_parse_factor(tz)
    raise ParseError("expected a number, symbol, or '('; found %r"
                     % (text or "end of input"), off)


def parse_operator(src):
    """Parse an operator expression into its 16-coefficient form."""
    tz = _Tokenizer(src, allow_d=False)
    poly = _parse_expr(tz)
    tz.expect("end")
    return poly.coeff(0)


def parse_ode(src):
    """Parse an equation like ``D^2 - L_i*R_j*D - L_j*R_i``.

    The expression is the differential operator applied to the unknown; the
    leading derivative must be monic.  Everything below the leading power is
    moved to the right-hand side, flipping signs, so the returned
    coefficients satisfy  D^n phi = sum_p coefficients[p] D^p phi.
    """
    tz = _Tokenizer(src, allow_d=True)
    poly = _parse_expr(tz)
    tz.expect("end")
    order = poly.degree
    if order < 1:
        raise ParseError("equation contains no derivative symbol", 0)
    lead = poly.coeff(order)
    if not lead.isclose(RealLinearOperator.identity(), atol=0.0):
        raise ParseError("leading derivative term must have coefficient 1", 0)
    coeffs = [-poly.coeff(p) for p in range(order)]
    return OdeSkeleton(order=order, coefficients=coeffs)


_QCOMP = re.compile(
    r"\s*([+-]?)\s*(?:"
    r"((?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)\s*([ijk])?"
    r"|([ijk])"
    r")")


def parse_quaternion(src):
    """Parse a compact quaternion literal such as ``1+2i-3j+4k``."""
    comps = [0.0, 0.0, 0.0, 0.0]
    pos = 0
    index = {"i": 1, "j": 2, "k": 3}
    first = True
    while pos < len(src):
        if src[pos:].strip() == "":
            break
        m = _QCOMP.match(src, pos)
        if not m:
            raise ParseError("malformed quaternion literal", pos)
        sign_s, num, unit_after, unit_only = m.groups()
        if not first and sign_s == "" :
            raise ParseError("missing '+' or '-' between components", pos)
        sign = -1.0 if sign_s == "-" else 1.0
        if unit_only:
            comps[index[unit_only]] += sign
        else:
            value = sign * float(num)
            comps[index[unit_after] if unit_after else 0] += value
        pos = m.end()
        first = False
    if first:
        raise ParseError("empty quaternion literal", 0)
    return Quaternion(*comps)


# -- canonical printing ----------------------------------------------------

_BASIS_NAME = {}
for _name, (_mu, _nu) in _BASIS.items():
    _BASIS_NAME[(_mu, _nu)] = _name


def _op_name(mu, nu):
    if (mu, nu) == (0, 0):
        return "1"
    if nu == 0:
        return _BASIS_NAME[(mu, 0)]
    if mu == 0:
        return _BASIS_NAME[(0, nu)]
    return "%s*%s" % (_BASIS_NAME[(mu, 0)], _BASIS_NAME[(0, nu)])


def format_operator(op):
    """Canonical text form; ``parse_operator`` inverts it exactly."""
    parts = []
    for mu in range(4):
        for nu in range(4):
            c = float(op.coeffs[mu, nu])
            if c == 0.0:
                continue
            name = _op_name(mu, nu)
            mag = abs(c)
            if name == "1":
                body = repr(mag)
            elif mag == 1.0:
                body = name
            else:
                body = "%s*%s" % (repr(mag), name)
            parts.append(("-" if c < 0 else "+", body))
    if not parts:
        return "0"
    sign, body = parts[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        out += " %s %s" % (sign, body)
    return out


def format_quaternion(q):
    """Compact literal; ``parse_quaternion`` inverts it exactly."""
    parts = []
    for value, unit in zip(q.components(), ("", "i", "j", "k")):
        if value == 0.0:
            continue
        mag = abs(value)
        if unit and mag == 1.0:
            body = unit
        else:
            body = repr(mag) + unit
        parts.append(("-" if value < 0 else "+", body))
    if not parts:
        return "0"
    sign, body = parts[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        out += "%s%s" % (sign, body)
    return out
