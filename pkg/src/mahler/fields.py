"""Exact scalar arithmetic: rationals, dense polynomials over Q, and
rational functions in the parameter lambda."""
from __future__ import annotations

from fractions import Fraction

from .errors import DivisionByZero, PoleAtEvaluationPoint


def q(a, b=None):
    """Rational constructor accepting ints, "n/d" strings and Fractions."""
    return Fraction(a) if b is None else Fraction(a, b)


def rat_str(x):
    return str(Fraction(x))


class Poly:
    """Dense univariate polynomial over Q, coefficients by ascending degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [c if isinstance(c, Fraction) else Fraction(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, c):
        return cls((Fraction(c),))

    @classmethod
    def x(cls):
        return cls((Fraction(0), Fraction(1)))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __neg__(self):
        return Poly(tuple(-c for c in self.coeffs))

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other if isinstance(other, Poly) else Poly.const(-Fraction(other)))

    def __rsub__(self, other):
        return Poly.const(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            co = Fraction(other)
            return Poly(tuple(c * co for c in self.coeffs))
        if not self or not other:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative polynomial power")
        out, base = Poly.const(1), self
        for _ in range(n):
            out = out * base
        return out

    def __divmod__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        if not other:
            raise DivisionByZero("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly(), self
        quo = [Fraction(0)] * (dq + 1)
        lead = other.coeffs[-1]
        for k in range(dq, -1, -1):
            c = rem[k + other.degree] / lead
            quo[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return Poly(quo), Poly(rem[: other.degree])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def eval(self, c):
        c = Fraction(c)
        acc = Fraction(0)
        for a in reversed(self.coeffs):
            acc = acc * c + a
        return acc

    def derivative(self):
        return Poly(tuple(i * c for i, c in enumerate(self.coeffs) if i))

    def monic(self):
        if not self:
            return self
        lead = self.coeffs[-1]
        return Poly(tuple(c / lead for c in self.coeffs))

    def shift(self, k):
        """Multiply by x**k."""
        if not self:
            return self
        return Poly((Fraction(0),) * k + self.coeffs)

    def __str__(self):
        return poly_str(self, "λ")

    __repr__ = __str__


def poly_gcd(a, b):
    while b:
        a, b = b, a % b
    return a.monic()


def poly_str(p, var):
    if not p:
        return "0"
    parts = []
    for i in range(p.degree, -1, -1):
        c = p.coeffs[i]
        if not c:
            continue
        if i == 0:
            term = str(c)
        else:
            xi = var if i == 1 else "%s^%d" % (var, i)
            term = xi if c == 1 else ("-" + xi if c == -1 else "%s*%s" % (c, xi))
        parts.append(term)
    out = parts[0]
    for t in parts[1:]:
        out += " - " + t[1:] if t.startswith("-") else " + " + t
    return out


class RatFun:
    """Rational function num/den over Q, kept reduced with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = num if isinstance(num, Poly) else Poly.const(num)
        den = Poly.const(1) if den is None else (den if isinstance(den, Poly) else Poly.const(den))
        if not den:
            raise DivisionByZero("rational function with zero denominator")
        if not num:
            self.num, self.den = Poly(), Poly.const(1)
            return
        g = poly_gcd(num, den)
        if g.degree > 0:
            num, den = num // g, den // g
        lead = den.coeffs[-1]
        if lead != 1:
            num, den = num * (1 / lead), den * (1 / lead)
        self.num, self.den = num, den

    @classmethod
    def const(cls, c):
        return cls(Poly.const(c))

    @classmethod
    def lam(cls):
        return cls(Poly.x())

    def is_const(self):
        return self.num.degree <= 0 and self.den.degree == 0

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __neg__(self):
        out = RatFun.__new__(RatFun)
        out.num, out.den = -self.num, self.den
        return out

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFun(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFun(self.num * other.den - other.num * self.den, self.den * other.den)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den.degree == 0 and other.den.degree == 0:
            out = RatFun.__new__(RatFun)
            out.num, out.den = self.num * other.num, Poly.const(1)
            return out
        return RatFun(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.num:
            raise DivisionByZero("division by zero rational function")
        return RatFun(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def __pow__(self, n):
        if n < 0:
            if not self.num:
                raise DivisionByZero("inverse of zero")
            return RatFun(self.den, self.num) ** (-n)
        return RatFun(self.num ** n, self.den ** n)

    def eval_at(self, c):
        """Value at lambda = c; raises PoleAtEvaluationPoint on a pole."""
        d = self.den.eval(c)
        if not d:
            raise PoleAtEvaluationPoint("pole at lambda = %s" % Fraction(c))
        return self.num.eval(c) / d

    def derivative(self):
        return RatFun(self.num.derivative() * self.den - self.num * self.den.derivative(),
                      self.den * self.den)

    def subst_scale(self, c):
        """f(c * lambda) for a nonzero rational c."""
        c = Fraction(c)
        scale = lambda p: Poly(tuple(a * c ** i for i, a in enumerate(p.coeffs)))
        return RatFun(scale(self.num), scale(self.den))

    def __str__(self):
        ns = poly_str(self.num, "λ")
        if self.den.degree == 0:
            return ns
        if self.num.degree > 0:
            ns = "(%s)" % ns
        return "%s/(%s)" % (ns, poly_str(self.den, "λ"))

    __repr__ = __str__


def _coerce(x):
    if isinstance(x, RatFun):
        return x
    if isinstance(x, Poly):
        return RatFun(x)
    if isinstance(x, (int, Fraction)):
        return RatFun.const(x)
    return NotImplemented


def pole_order(f, c):
    """Multiplicity of (lambda - c) in the denominator of a reduced f."""
    c = Fraction(c)
    n, den = 0, f.den
    while den.degree > 0 and not den.eval(c):
        den = den // Poly((-c, Fraction(1)))
        n += 1
    return n


def rational_roots(p):
    """All rational roots of p with multiplicities, plus the rootless residual.

    Returns ([(root, mult), ...] sorted by root, residual Poly).
    """
    if not p:
        raise DivisionByZero("rational_roots of the zero polynomial")
    import sympy

    x = sympy.Symbol("x")
    sp = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(p.coeffs)],
                    x, domain="QQ")
    found = sp.ground_roots()
    roots = sorted((Fraction(int(r.p), int(r.q)), int(m)) for r, m in found.items())
    residual = p
    for r, m in roots:
        lin = Poly((-r, Fraction(1)))
        for _ in range(m):
            residual, rem = divmod(residual, lin)
            assert not rem
    return roots, residual
