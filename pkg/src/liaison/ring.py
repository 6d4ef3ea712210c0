"""Exact sparse polynomial arithmetic over prime fields with graded orders.

Monomials are encoded as tuples ``(wdeg, -e[m-1], ..., -e[0])`` where ``wdeg``
is the weighted total degree.  Plain tuple comparison of two such encodings is
exactly the (weighted-)degree reverse lexicographic order, so the hot loops in
the Groebner engine can use builtin ``max``/``<`` on dictionary keys.
"""

from __future__ import annotations

import re

from .errors import (
    InhomogeneousInput,
    LengthMismatch,
    NonPrimeCharacteristic,
    RingMismatch,
)


DEFAULT_CHARACTERISTIC = 32003


def _is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# ---------------------------------------------------------------------------
# monomial encoding


def mono_one(m):
    return (0,) * (m + 1)


def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a, b):
    """Does a divide b?  (exponentwise a <= b; negrev encoding flips this)"""
    return all(x >= y for x, y in zip(a[1:], b[1:]))


def mono_div(b, a):
    """Quotient b / a; caller guarantees divisibility."""
    return tuple(x - y for x, y in zip(b, a))


def mono_lcm(a, b, wrev):
    neg = tuple(min(x, y) for x, y in zip(a[1:], b[1:]))
    deg = -sum(w * x for w, x in zip(wrev, neg))
    return (deg,) + neg


def mono_exponents(mono, m):
    """Recover the exponent vector (e_0, ..., e_{m-1})."""
    return tuple(-mono[m - i] for i in range(m))


def mono_from_exponents(exps, weights):
    deg = sum(w * e for w, e in zip(weights, exps))
    return (deg,) + tuple(-e for e in reversed(exps))


def compare_monomials(ea, eb, weights=None):
    """Graded reverse lexicographic comparison of two exponent vectors.

    Returns -1, 0 or 1.  Degrees are weighted when ``weights`` is given.
    """
    if len(ea) != len(eb):
        raise LengthMismatch(f"exponent vectors of length {len(ea)} vs {len(eb)}")
    w = weights or (1,) * len(ea)
    a = mono_from_exponents(ea, w)
    b = mono_from_exponents(eb, w)
    return (a > b) - (a < b)


# ---------------------------------------------------------------------------
# ring contexts


class RingCtx:
    """An immutable context R = F_p[x_1..x_m]/J with a graded monomial order.

    ``defining`` holds the reduced Groebner basis of J (possibly empty).  All
    variables carry positive integer weights; the default weight is 1
    (standard grading).  Values are safe to share between threads.
    """

    __slots__ = ("p", "names", "weights", "m", "wrev", "defining", "_ambient", "_cache")

    def __init__(self, p, names, weights, defining=()):
        self.p = p
        self.names = tuple(names)
        self.weights = tuple(weights)
        self.m = len(self.names)
        self.wrev = tuple(reversed(self.weights))
        self.defining = tuple(defining)
        self._ambient = None
        self._cache = {}

    # -- basic constructors ------------------------------------------------

    def zero(self):
        return Poly(self, {})

    def one(self):
        return self.const(1)

    def const(self, c):
        c %= self.p
        return Poly(self, {mono_one(self.m): c} if c else {})

    def var(self, i):
        e = [0] * self.m
        e[i] = 1
        return Poly(self, {mono_from_exponents(e, self.weights): 1})

    def gens(self):
        return [self.var(i) for i in range(self.m)]

    def monomial(self, exps, coeff=1):
        coeff %= self.p
        if not coeff:
            return self.zero()
        return Poly(self, {mono_from_exponents(exps, self.weights): coeff})

    # -- structural helpers --------------------------------------------------

    def ambient(self):
        """The polynomial ring S underneath (J = 0)."""
        if not self.defining:
            return self
        if self._ambient is None:
            self._ambient = RingCtx(self.p, self.names, self.weights)
        return self._ambient

    def same_polynomial_ring(self, other):
        return (
            self.p == other.p
            and self.names == other.names
            and self.weights == other.weights
        )

    def lift_poly(self, f):
        """Reinterpret a polynomial from a compatible context in this one."""
        if f.ctx is self:
            return f
        if not self.same_polynomial_ring(f.ctx):
            raise RingMismatch("polynomial from an incompatible ring")
        return Poly(self, dict(f.terms))

    def is_standard_graded(self):
        return all(w == 1 for w in self.weights)

    def is_graded(self):
        """True when the defining ideal is homogeneous, so R is graded.

        Groebner-level operations tolerate inhomogeneous ideals; the module
        layer requires a graded context and refuses to work otherwise.
        """
        return all(g.is_homogeneous() for g in self.defining)

    def __repr__(self):
        base = f"F_{self.p}[{','.join(self.names)}]"
        if any(w != 1 for w in self.weights):
            base += f" weights={self.weights}"
        if self.defining:
            base += f" / ({', '.join(render_poly(g) for g in self.defining)})"
        return base


# ---------------------------------------------------------------------------
# polynomials


class Poly:
    """Sparse polynomial: dict from encoded monomial to coefficient in F_p."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx, terms):
        self.ctx = ctx
        self.terms = terms

    def _check(self, other):
        if self.ctx is not other.ctx and not (
            self.ctx.same_polynomial_ring(other.ctx)
            and self.ctx.defining == other.ctx.defining
        ):
            raise RingMismatch("operands live in different rings")

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        self._check(other)
        t = dict(self.terms)
        p = self.ctx.p
        for mono, c in other.terms.items():
            r = (t.get(mono, 0) + c) % p
            if r:
                t[mono] = r
            else:
                t.pop(mono, None)
        return Poly(self.ctx, t)

    def __neg__(self):
        p = self.ctx.p
        return Poly(self.ctx, {mono: p - c for mono, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        t = {}
        p = self.ctx.p
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                mono = mono_mul(ma, mb)
                r = (t.get(mono, 0) + ca * cb) % p
                if r:
                    t[mono] = r
                else:
                    t.pop(mono, None)
        return Poly(self.ctx, t)

    __rmul__ = __mul__

    def scale(self, c):
        c %= self.ctx.p
        if not c:
            return self.ctx.zero()
        p = self.ctx.p
        return Poly(self.ctx, {mono: (c * v) % p for mono, v in self.terms.items()})

    def term_mul(self, mono, coeff):
        p = self.ctx.p
        return Poly(
            self.ctx,
            {mono_mul(mono, mb): (coeff * cb) % p for mb, cb in self.terms.items()},
        )

    def lead_mono(self):
        return max(self.terms) if self.terms else None

    def lead_coeff(self):
        return self.terms[max(self.terms)] if self.terms else 0

    def monic(self):
        lc = self.lead_coeff()
        if lc in (0, 1):
            return self
        return self.scale(pow(lc, -1, self.ctx.p))

    def degree(self):
        """Weighted degree of the leading monomial (None for 0)."""
        return max(self.terms)[0] if self.terms else None

    def is_homogeneous(self):
        degs = {mono[0] for mono in self.terms}
        return len(degs) <= 1

    def homogeneous_degree(self):
        if not self.is_homogeneous():
            raise InhomogeneousInput(f"{render_poly(self)} is not homogeneous")
        return self.degree()

    def __repr__(self):
        return render_poly(self)


def arith(op, a, b):
    """Spec-surface dispatcher for exact ring arithmetic."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "scalar":
        return a.scale(b) if isinstance(b, int) else b.scale(a)
    raise ValueError(f"unknown arithmetic op {op!r}")


# ---------------------------------------------------------------------------
# the polynomial literal grammar (shared by CLI, fixtures and tests)

_TOKEN = re.compile(r"\s*([A-Za-z_][A-Za-z_0-9]*|\d+|\^|\*\*|\*|\+|-)")


def parse_poly(ctx, text):
    """Parse ``c*x^e*y*... +- ...`` into a Poly; coefficients reduce mod p."""
    pos = 0
    n = len(text)
    tokens = []
    while pos < n:
        mt = _TOKEN.match(text, pos)
        if not mt:
            if text[pos:].strip():
                raise ValueError(f"bad character in polynomial at {text[pos:]!r}")
            break
        tokens.append(mt.group(1))
        pos = mt.end()
    if not tokens:
        return ctx.zero()

    name_index = {nm: i for i, nm in enumerate(ctx.names)}
    result = ctx.zero()
    i = 0
    while i < len(tokens):
        sign = 1
        while i < len(tokens) and tokens[i] in "+-":
            if tokens[i] == "-":
                sign = -sign
            i += 1
        if i >= len(tokens):
            raise ValueError("dangling sign in polynomial literal")
        coeff = sign
        exps = [0] * ctx.m
        expect_factor = True
        while i < len(tokens):
            tok = tokens[i]
            if tok in "+-" and not expect_factor:
                break
            if tok in ("*",):
                i += 1
                expect_factor = True
                continue
            if tok.isdigit():
                coeff *= int(tok)
                i += 1
            elif tok in name_index:
                v = name_index[tok]
                e = 1
                i += 1
                if i < len(tokens) and tokens[i] in ("^", "**"):
                    if i + 1 >= len(tokens) or not tokens[i + 1].isdigit():
                        raise ValueError("exponent expected after '^'")
                    e = int(tokens[i + 1])
                    i += 2
                exps[v] += e
            else:
                raise ValueError(f"unknown variable {tok!r}")
            expect_factor = False
        result = result + ctx.monomial(exps, coeff)
    return result


def render_poly(f):
    """Canonical rendering: terms descending, coefficients in (-p/2, p/2]."""
    if not f.terms:
        return "0"
    ctx = f.ctx
    parts = []
    for mono in sorted(f.terms, reverse=True):
        c = f.terms[mono]
        if c > ctx.p // 2:
            c -= ctx.p
        sign = "-" if c < 0 else "+"
        c = abs(c)
        exps = mono_exponents(mono, ctx.m)
        factors = []
        for nm, e in zip(ctx.names, exps):
            if e == 1:
                factors.append(nm)
            elif e > 1:
                factors.append(f"{nm}^{e}")
        if not factors:
            body = str(c)
        elif c == 1:
            body = "*".join(factors)
        else:
            body = f"{c}*" + "*".join(factors)
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# ---------------------------------------------------------------------------
# ring construction


def make_ring(p, names, defining=(), weights=None):
    """Build R = F_p[names]/(defining); the defining ideal is replaced by its
    reduced Groebner basis.  Contexts are immutable afterwards."""
    if not isinstance(p, int) or not _is_prime(p) or p >= 2**31:
        raise NonPrimeCharacteristic(f"characteristic {p!r} is not a prime < 2^31")
    names = tuple(names)
    if len(set(names)) != len(names) or not names:
        raise ValueError("variable names must be nonempty and distinct")
    weights = tuple(weights) if weights else (1,) * len(names)
    if len(weights) != len(names) or any(
        not isinstance(w, int) or w < 1 for w in weights
    ):
        raise ValueError("weights must be positive integers, one per variable")
    ctx = RingCtx(p, names, weights)
    polys = []
    for f in defining:
        if isinstance(f, str):
            f = parse_poly(ctx, f)
        else:
            f = ctx.lift_poly(f)
        if f:
            polys.append(f)
    if not polys:
        return ctx
    from . import groebner

    gb = groebner.reduced_ideal_gb(ctx, polys)
    if any(g.degree() == 0 for g in gb):
        raise ValueError("defining ideal is the whole ring")
    return RingCtx(p, names, weights, gb)
