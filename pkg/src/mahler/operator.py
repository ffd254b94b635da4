"""Mahler operators: noncommutative polynomials in phi_p with Hahn-series
coefficients, phi_p acting by z -> z**p."""
from __future__ import annotations

from fractions import Fraction

from .errors import ZeroDivisor
from .fields import RatFun
from .hahn import HahnSeries, Mask, hs_mul, zero

_Z = zero()


class MahlerOperator:
    """sum_i a_i phi**i acting on series as sum_i a_i * phi**i(f).

    Coefficients are HahnSeries; only nonnegative powers of phi are stored.
    Interior coefficients may be zero; analysis entry points additionally
    require certified nonzero a_0 and a_n.
    """

    __slots__ = ("p", "coeffs")

    def __init__(self, p, coeffs):
        if p < 2:
            raise ValueError("radix must be >= 2")
        coeffs = list(coeffs)
        while len(coeffs) > 1 and coeffs[-1].is_exact_zero():
            coeffs.pop()
        self.p = p
        self.coeffs = tuple(coeffs) if coeffs else (_Z,)

    @property
    def order(self):
        return len(self.coeffs) - 1

    def apply(self, f):
        out = _Z
        for i, ai in enumerate(self.coeffs):
            if not ai.is_exact_zero():
                out = out + hs_mul(ai, f.mal(i, self.p))
        return out

    def __mul__(self, other):
        """Operator composition (self after other), with the Mahler twist."""
        p = self.p
        n = self.order + other.order
        out = [_Z] * (n + 1)
        for i, ai in enumerate(self.coeffs):
            if ai.is_exact_zero():
                continue
            for j, bj in enumerate(other.coeffs):
                if bj.is_exact_zero():
                    continue
                out[i + j] = out[i + j] + hs_mul(ai, bj.mal(i, p))
        return MahlerOperator(p, out)

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return MahlerOperator(self.p, out)

    def __sub__(self, other):
        return self + MahlerOperator(other.p, [-c for c in other.coeffs])

    def right_divide(self, other, ceiling, lead_inverse=None):
        """Euclidean division self = Q * other + R with order(R) < order(other).

        `lead_inverse` may supply an exact inverse of the divisor's leading
        coefficient (it is inverted at `ceiling` otherwise).
        """
        p = self.p
        bcs = list(other.coeffs)
        while bcs and bcs[-1].is_exact_zero():
            bcs.pop()
        if not bcs:
            raise ZeroDivisor("right division by the zero operator")
        s = len(bcs) - 1
        btop_inv = lead_inverse if lead_inverse is not None else bcs[-1].invert(ceiling)
        work = list(self.coeffs)
        qlen = len(work) - 1 - s
        if qlen < 0:
            return MahlerOperator(p, [_Z]), self
        quo = [_Z] * (qlen + 1)
        for d in range(len(work) - 1, s - 1, -1):
            cd = work[d]
            if cd.is_exact_zero():
                continue
            qd = hs_mul(cd, btop_inv.mal(d - s, p))
            quo[d - s] = qd
            for j, bj in enumerate(bcs):
                work[d - s + j] = work[d - s + j] - hs_mul(qd, bj.mal(d - s, p))
        rem = work[:s] if s else [_Z]
        return MahlerOperator(p, quo), MahlerOperator(p, rem)

    # -- gauge transforms -----------------------------------------------------

    def gauge_theta(self, mu):
        """Conjugate by theta_mu = z**(mu/(p-1)): a_i picks up z**(mu*(p^i-1)/(p-1))."""
        p = self.p
        mu = Fraction(mu)
        return MahlerOperator(p, [ai.shift(mu * (p ** i - 1) / (p - 1))
                                  for i, ai in enumerate(self.coeffs)])

    def gauge_exp(self, c):
        """Conjugate by e_c: a_i -> c**i a_i."""
        c = Fraction(c)
        return MahlerOperator(self.p, [ai.scale(c ** i) for i, ai in enumerate(self.coeffs)])

    def gauge_exp_param(self):
        """Conjugate by e_lambda: coefficients lifted to Q(lambda), a_i -> lambda**i a_i."""
        lam = RatFun.lam()
        out = []
        for i, ai in enumerate(self.coeffs):
            li = lam ** i
            out.append(ai.map_coeffs(lambda c, li=li: RatFun.const(c) * li))
        return MahlerOperator(self.p, out)

    def gauge_unit(self, g, ceiling):
        """Conjugate by a unit series g of valuation 0: a_i -> a_i phi^i(g) / g."""
        ginv = g.invert(ceiling)
        return MahlerOperator(self.p, [hs_mul(hs_mul(ai, g.mal(i, self.p)), ginv)
                                       for i, ai in enumerate(self.coeffs)])

    def __repr__(self):
        parts = []
        for i in range(self.order, -1, -1):
            if not self.coeffs[i].is_zero() or i == 0:
                parts.append("[%r]*phi^%d" % (self.coeffs[i], i))
        return " + ".join(parts)

    def to_json(self, coeff=str):
        return {"p": self.p, "coeffs": [c.to_json(coeff) for c in self.coeffs]}


def phi_minus(p, c, nu=0):
    """The operator z**nu * phi - c."""
    from .hahn import monomial, one
    a1 = monomial(Fraction(nu))
    return MahlerOperator(p, [one().scale(Fraction(-c)), a1])


def op_apply(L, f):
    return L.apply(f)


def op_mul(A, B):
    return A * B


def op_right_divide(A, B, ceiling, lead_inverse=None):
    return A.right_divide(B, ceiling, lead_inverse)
