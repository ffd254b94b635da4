"""Factorization of a Mahler operator into first-order pieces.

An operator with rational exponents factors as a(z) * L_k ... L_1, one layer
L_j per slope (ascending), each layer a product of r_j factors
(z**nu_j phi - c) h(z)**-1 with h tangent to the identity.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction

from .errors import NonRationalExponent, PlanMismatch, UnknownLeadingTerm, VerificationError
from .hahn import HahnSeries, hs, series_from_json
from .newton import analyze
from .operator import MahlerOperator


@dataclass(frozen=True)
class FirstOrderFactor:
    """The factor (z**nu phi - c) h**-1."""

    nu: Fraction
    c: Fraction
    h: HahnSeries

    def to_json(self):
        return {"nu": str(self.nu), "c": str(self.c), "h": self.h.to_json()}

    @classmethod
    def from_json(cls, data):
        return cls(Fraction(data["nu"]), Fraction(data["c"]),
                   series_from_json(data["h"]))


@dataclass(frozen=True)
class Factorization:
    """L = a * L_k ... L_1; layers[j] lists the factors of L_{j+1} in peel order.

    Within a layer the composed operator is factor[r-1] * ... * factor[0].
    """

    p: int
    a: HahnSeries
    layers: tuple

    def all_factors(self):
        return [f for layer in self.layers for f in layer]

    def to_json(self):
        return {"a": self.a.to_json(),
                "layers": [[f.to_json() for f in layer] for layer in self.layers]}


def slope_zero_unit_solution(M, c, ceiling):
    """Tangent-to-identity h with sum_i c**i a_i phi_p**i(h) = 0.

    Requires the smallest slope of M to be 0 and c to be a root of the
    slope-0 characteristic polynomial.  The recursion is a strict forward
    solve: the coefficient of z**gamma depends only on exponents < gamma.
    """
    p = M.p
    c = Fraction(c)
    v0 = M.coeffs[0].val()
    bs = [ai.shift(-v0).scale(c ** i) for i, ai in enumerate(M.coeffs)]
    cap = Fraction(ceiling)
    for bi in bs:
        if bi.is_zero() and bi.mask.empty:
            raise UnknownLeadingTerm("coefficient with no certified region")
        if bi.first_possible() < 0:
            raise ValueError("smallest slope is not zero")
        gap = bi.mask.first_gap()
        if gap < cap:
            cap = gap
    heads = [bi.coeff_at(Fraction(0)) for bi in bs]
    b00 = heads[0]
    if not b00:
        raise ValueError("slope-zero edge does not start at the order-0 vertex")
    if sum(heads):
        raise ValueError("%s is not a root of the slope-zero characteristic polynomial" % c)
    mults = [i for i in range(1, len(bs)) if heads[i]]
    tails = [tuple((e, v) for e, v in bi.terms if 0 < e < cap) for bi in bs]

    hvals = {Fraction(0): Fraction(1)}
    queue = []
    seen = set()

    def push(e):
        if e < cap and e not in seen:
            seen.add(e)
            heapq.heappush(queue, e)

    for tail in tails:
        for e, _ in tail:
            push(e)
    while queue:
        g = heapq.heappop(queue)
        acc = Fraction(0)
        for i in mults:
            v = hvals.get(g / p ** i)
            if v is not None:
                acc += heads[i] * v
        for i, tail in enumerate(tails):
            q = p ** i
            for e, coe in tail:
                if e > g:
                    break
                v = hvals.get((g - e) / q)
                if v is not None:
                    acc += coe * v
        if acc:
            hvals[g] = -acc / b00
        for i in mults:
            push(p ** i * g)
        for i, tail in enumerate(tails):
            q = p ** i
            for e, _ in tail:
                push(e + q * g)

    h = hs(hvals, [(Fraction(0), cap)])
    residual = M.gauge_exp(c).apply(h)
    if not residual.is_zero() or residual.mask.empty:
        raise VerificationError("unit solution does not annihilate the operator")
    return h


def factor_operator(L, ceiling, plan=None):
    """Peel first-order right factors slope by slope; verifies each division.

    When a FrobeniusPlan is supplied, the recomputed slope data is checked
    against it (PlanMismatch otherwise).
    """
    p = L.p
    a0 = L.coeffs[0]
    va0, ca0 = a0.val(), a0.cld()
    M = L
    layers = []
    while M.order > 0:
        nd = analyze(M)
        sigma, r = nd.slopes[0]
        nu = (p - 1) * sigma
        if plan is not None:
            j = len(layers)
            if j >= len(plan.nus) or plan.nus[j] != nu:
                raise PlanMismatch("slope %s of the remainder disagrees with the plan" % sigma)
        Mg = M.gauge_theta(-(p - 1) * sigma)
        layer = []
        for _ in range(r):
            ndg = analyze(Mg)
            if ndg.slopes[0][0] != 0:
                raise VerificationError("gauged remainder lost its zero slope")
            exps = ndg.exponents[0]
            if not exps:
                raise NonRationalExponent(
                    "slope %s has no rational exponent left to factor out" % sigma)
            c = exps[0][0]
            h = slope_zero_unit_solution(Mg, c, ceiling)
            hinv = h.invert(ceiling)
            B = MahlerOperator(p, [hinv.scale(-c), hinv.mal(1, p)])
            Q, R = Mg.right_divide(B, ceiling, lead_inverse=h.mal(1, p))
            for rc in R.coeffs:
                if not rc.is_zero() or rc.mask.empty:
                    raise VerificationError("nonzero remainder when dividing out a factor")
            layer.append(FirstOrderFactor(nu, c, h))
            Mg = Q
        M = Mg.gauge_theta((p - 1) * sigma)
        layers.append(tuple(layer))
    fact = Factorization(p, M.coeffs[0], tuple(layers))
    if fact.a.val() != va0:
        raise VerificationError("val of the order-0 leftover differs from val a_0")
    prod = Fraction(1)
    for f in fact.all_factors():
        prod *= -f.c
    if fact.a.cld() * prod != ca0:
        raise VerificationError("cld invariant of the factorization fails")
    return fact


def factor_reconstruct(fact, ceiling):
    """Compose a * L_k ... L_1 back into a single operator."""
    p = fact.p
    M = MahlerOperator(p, [fact.a])
    for layer in reversed(fact.layers):
        for f in reversed(layer):
            hinv = f.h.invert(ceiling)
            B = MahlerOperator(p, [hinv.scale(-f.c), hinv.mal(1, p).shift(f.nu)])
            M = M * B
    return M


factorize = factor_operator
