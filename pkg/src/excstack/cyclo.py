"""Exact arithmetic in cyclotomic fields Q(zeta_n).

Numbers are stored on the power basis 1, zeta, ..., zeta^(phi(n)-1) with
rational coefficients, so equality is coefficient equality.  The reduction
of zeta^k for phi(n) <= k < n is precomputed from the n-th cyclotomic
polynomial once per conductor.
"""

from .rationals import QQ, QQ0, QQ1, qq


def _poly_divide_int(num, den):
    "Exact division of integer polynomials (coefficient lists, low degree first)."
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + len(den) - 1]
        assert c % den[-1] == 0
        q = c // den[-1]
        out[k] = q
        for i, d in enumerate(den):
            num[k + i] -= q * d
    assert all(c == 0 for c in num)
    return out


def cyclotomic_polynomial(n):
    "Integer coefficients of Phi_n, low degree first, monic."
    poly = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divide_int(poly, cyclotomic_polynomial(d))
    return tuple(poly)


_CONTEXTS = {}


class CycContext:
    """Conductor-n cyclotomic field with precomputed power reductions.

    Contexts with equal conductor are interchangeable; get one via
    make_context (cached).
    """

    def __init__(self, n):
        if n < 1:
            raise ValueError("conductor must be a positive integer")
        self.n = n
        phi = cyclotomic_polynomial(n)
        self.degree = len(phi) - 1
        self.minpoly = phi
        d = self.degree
        # power_red[e] = coefficients of zeta^e on the power basis, 0 <= e < n
        red = [[0] * d for _ in range(n)]
        for e in range(min(d, n)):
            red[e][e] = 1
        if d < n:
            red[d] = [-c for c in phi[:d]]  # x^d mod Phi_n
            for e in range(d + 1, n):
                prev = red[e - 1]
                shifted = [0] + prev[: d - 1]
                overflow = prev[d - 1]
                if overflow:
                    base = red[d]
                    for i in range(d):
                        shifted[i] += overflow * base[i]
                red[e] = shifted
        self.power_red = tuple(tuple(row) for row in red)
        self.zero = CycNumber(self, (QQ0,) * d)
        self.one = self.from_rational(1)
        self.zeta_ = self.zeta_power(1)

    def from_rational(self, r):
        c = [QQ0] * self.degree
        c[0] = qq(r)
        return CycNumber(self, tuple(c))

    def zeta_power(self, k):
        "zeta_n^k as a CycNumber (k any integer)."
        row = self.power_red[k % self.n]
        return CycNumber(self, tuple(QQ(c) for c in row))

    def __eq__(self, other):
        return isinstance(other, CycContext) and other.n == self.n

    def __hash__(self):
        return hash(("CycContext", self.n))

    def __repr__(self):
        return "CycContext(%d)" % self.n


def make_context(n):
    if n not in _CONTEXTS:
        _CONTEXTS[n] = CycContext(n)
    return _CONTEXTS[n]


class ContextMismatch(ValueError):
    pass


def _same_ctx(a, b):
    if a.ctx.n != b.ctx.n:
        raise ContextMismatch(
            "cyclotomic contexts differ: zeta(%d) vs zeta(%d)" % (a.ctx.n, b.ctx.n)
        )


class CycNumber:
    "Element of Q(zeta_n) in canonical power-basis form."

    __slots__ = ("ctx", "c")

    def __init__(self, ctx, coeffs):
        self.ctx = ctx
        self.c = coeffs

    def _lift(self, other):
        if isinstance(other, CycNumber):
            _same_ctx(self, other)
            return other
        return self.ctx.from_rational(other)

    def __add__(self, other):
        o = self._lift(other)
        return CycNumber(self.ctx, tuple(x + y for x, y in zip(self.c, o.c)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return CycNumber(self.ctx, tuple(x - y for x, y in zip(self.c, o.c)))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __neg__(self):
        return CycNumber(self.ctx, tuple(-x for x in self.c))

    def __mul__(self, other):
        o = self._lift(other)
        ctx = self.ctx
        d = ctx.degree
        if d == 1:
            return CycNumber(ctx, (self.c[0] * o.c[0],))
        acc = [QQ0] * d
        n = ctx.n
        red = ctx.power_red
        for i, ai in enumerate(self.c):
            if not ai:
                continue
            for j, bj in enumerate(o.c):
                if not bj:
                    continue
                p = ai * bj
                e = i + j
                if e < d:
                    acc[e] += p
                else:
                    for k, rk in enumerate(red[e % n]):
                        if rk:
                            acc[k] += p * rk
        return CycNumber(ctx, tuple(acc))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def inverse(self):
        if not self:
            raise ZeroDivisionError("inverse of zero cyclotomic number")
        ctx = self.ctx
        if ctx.degree == 1:
            return CycNumber(ctx, (QQ1 / self.c[0],))
        # extended Euclid for self (as a polynomial) against Phi_n over Q
        r0 = [QQ(c) for c in ctx.minpoly]
        r1 = list(self.c)
        s0, s1 = [QQ0], [QQ1]
        while True:
            while r1 and not r1[-1]:
                r1.pop()
            assert r1, "minimal polynomial is not coprime to a nonzero element"
            if len(r1) == 1:
                inv = [x / r1[0] for x in s1]
                c = [QQ0] * ctx.degree
                for e, x in enumerate(inv):
                    if x:
                        for k, rk in enumerate(ctx.power_red[e % ctx.n]):
                            if rk:
                                c[k] += x * rk
                return CycNumber(ctx, tuple(c))
            q, rem = _poly_divmod(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))

    def conj(self):
        "The automorphism zeta -> zeta^(n-1), i.e. complex conjugation."
        ctx = self.ctx
        n = ctx.n
        if n <= 2:
            return self
        acc = [QQ0] * ctx.degree
        for i, ai in enumerate(self.c):
            if not ai:
                continue
            for k, rk in enumerate(ctx.power_red[(i * (n - 1)) % n]):
                if rk:
                    acc[k] += ai * rk
        return CycNumber(ctx, tuple(acc))

    def is_rational(self):
        return all(not x for x in self.c[1:])

    def rational_value(self):
        assert self.is_rational()
        return self.c[0]

    def __bool__(self):
        return any(self.c)

    def __eq__(self, other):
        if isinstance(other, CycNumber):
            return self.ctx.n == other.ctx.n and self.c == other.c
        if isinstance(other, (int,)) or type(other) is type(QQ0):
            return self.is_rational() and self.c[0] == other
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.c[0])
        return hash((self.ctx.n, self.c))

    def canonical_str(self):
        return "[%s] @ zeta(%d)" % (", ".join(str(x) for x in self.c), self.ctx.n)

    def __repr__(self):
        if self.is_rational():
            return str(self.c[0])
        return self.canonical_str()


def _poly_divmod(num, den):
    num = list(num)
    dn = len(den) - 1
    out = [QQ0] * max(len(num) - dn, 0)
    for k in range(len(out) - 1, -1, -1):
        q = num[k + dn] / den[dn]
        out[k] = q
        if q:
            for i, d in enumerate(den):
                num[k + i] -= q * d
    return out, num[:dn]


def _poly_mul(a, b):
    out = [QQ0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def _poly_sub(a, b):
    out = [QQ0] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, y in enumerate(b):
        out[i] -= y
    return out


# spec-level operation names

def cyc_add(a, b):
    return a + b


def cyc_mul(a, b):
    return a * b


def cyc_neg(a):
    return -a


def cyc_inv(a):
    return a.inverse()


def cyc_conj(a):
    return a.conj()


# ---------------------------------------------------------------------------
# literal grammar
#
#   expr   := term (('+'|'-') term)*
#   term   := factor ('*' factor)*
#   factor := ['-'] atom ['^' ['-'] digits]
#   atom   := rational | 'zeta' '(' digits ')' | '(' expr ')'
#   rational := digits ['/' digits]
# ---------------------------------------------------------------------------

import re

_TOKEN = re.compile(r"\s*(zeta|\d+|[()+\-*/^])")


def _tokenize(text):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ValueError("bad cyclotomic literal near %r" % text[pos:])
            break
        out.append(m.group(1))
        pos = m.end()
    return out


def literal_conductor(text):
    "Least conductor mentioned by a literal (lcm of zeta arguments, or 1)."
    from math import lcm

    n = 1
    for m in re.finditer(r"zeta\s*\(\s*(\d+)\s*\)", text):
        n = lcm(n, int(m.group(1)))
    return n


class _Parser:
    def __init__(self, tokens, ctx):
        self.toks = tokens
        self.i = 0
        self.ctx = ctx

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expect=None):
        tok = self.peek()
        if tok is None or (expect is not None and tok != expect):
            raise ValueError("bad cyclotomic literal: expected %r, got %r" % (expect, tok))
        self.i += 1
        return tok

    def expr(self):
        v = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            t = self.term()
            v = v + t if op == "+" else v - t
        return v

    def term(self):
        v = self.factor()
        while self.peek() == "*":
            self.take()
            v = v * self.factor()
        return v

    def factor(self):
        neg = False
        while self.peek() == "-":
            self.take()
            neg = not neg
        v = self.atom()
        if self.peek() == "^":
            self.take()
            sign = 1
            if self.peek() == "-":
                self.take()
                sign = -1
            k = sign * int(self.take())
            v = _power(v, k)
        return -v if neg else v

    def atom(self):
        tok = self.peek()
        if tok == "(":
            self.take()
            v = self.expr()
            self.take(")")
            return v
        if tok == "zeta":
            self.take()
            self.take("(")
            m = int(self.take())
            self.take(")")
            if m < 1 or self.ctx.n % m != 0:
                raise ValueError(
                    "zeta(%d) does not live in the zeta(%d) context" % (m, self.ctx.n)
                )
            return self.ctx.zeta_power(self.ctx.n // m)
        num = int(self.take())
        if self.peek() == "/":
            self.take()
            den = int(self.take())
            return self.ctx.from_rational(qq(num, den))
        return self.ctx.from_rational(num)


def _power(v, k):
    if k < 0:
        return _power(v.inverse(), -k)
    out = v.ctx.one
    for _ in range(k):
        out = out * v
    return out


def parse_cyclotomic(text, ctx=None):
    """Parse a literal like '1/2 + zeta(3)^2' into a CycNumber.

    With ctx=None the least sufficient conductor is used.
    """
    if ctx is None:
        ctx = make_context(literal_conductor(text))
    toks = _tokenize(text)
    p = _Parser(toks, ctx)
    v = p.expr()
    if p.peek() is not None:
        raise ValueError("trailing junk in cyclotomic literal: %r" % text)
    return v
