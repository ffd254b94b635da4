"""Shared reference operators and independent oracles.

Every oracle here recomputes its answer from first principles (dictionary
convolutions, orbit recursions, direct hull walks, explicit double sums) so
that the library is never checked against itself.
"""
from __future__ import annotations

from fractions import Fraction

from mahler.fields import Poly, RatFun
from mahler.hahn import hs
from mahler.operator import MahlerOperator


def ladder_operator(p, nu, ceiling=Fraction(30)):
    """Order-2 operator (phi - z^nu) h^-1 (phi - 1) with h = 1 + z^(-nu/(p-1)).

    For nu < 0 it has slopes 0 and -nu/((p-1)p), exponent 1 at both, and its
    second basis solution carries an accumulation ladder, so it exercises
    every branch of the solver.  Expanded: a2 = phi(h^-1), a0 = z^nu h^-1,
    a1 = -(a2 + a0).
    """
    nu = Fraction(nu)
    h = hs([(0, 1), (-nu / (p - 1), 1)])
    hinv = h.invert(ceiling)
    a2 = hinv.mal(1, p)
    a0 = hinv.shift(nu)
    return MahlerOperator(p, [a0, -(a2 + a0), a2])


def brute_conv(f, g):
    """Dictionary convolution of the stored terms, no mask logic at all."""
    out = {}
    for e1, c1 in f.terms:
        for e2, c2 in g.terms:
            e = e1 + e2
            out[e] = out.get(e, 0) + c1 * c2
    return {e: v for e, v in out.items() if v}


def apply_brute(L, f):
    """True coefficients of L(f) for exactly known inputs, as a dict."""
    out = {}
    for i, ai in enumerate(L.coeffs):
        q = Fraction(L.p) ** i
        for e1, c1 in ai.terms:
            for e2, c2 in f.terms:
                e = e1 + q * e2
                out[e] = out.get(e, 0) + c1 * c2
    return {e: v for e, v in out.items() if v}


def hull_walk(points):
    """Lower convex hull by repeated minimal-slope steps.

    `points` are (index, x, y) with x strictly increasing; on slope ties the
    farthest point wins, so collinear interior points are dropped.
    """
    pts = sorted(points, key=lambda t: t[1])
    out = [pts[0]]
    while out[-1] != pts[-1]:
        _, x0, y0 = out[-1]
        best, best_sl = None, None
        for cand in pts:
            if cand[1] <= x0:
                continue
            sl = (cand[2] - y0) / Fraction(cand[1] - x0)
            if best is None or sl < best_sl or (sl == best_sl and cand[1] > best[1]):
                best, best_sl = cand, sl
        out.append(best)
    return tuple(out)


def order1_coeff_oracle(p, mu, c, g, gamma):
    """Coefficient at z**gamma of the f solving (z**-mu lambda phi - c) f = g.

    Works directly from the coefficient relation
        lambda * f((gamma + mu)/p) = g(gamma) + c * f(gamma):
    below the fixed point mu/(p-1) the value unrolls downward along the orbit
    gamma -> p*gamma - mu, above it upward along gamma -> (gamma + mu)/p, and
    at the fixed point a single division by lambda - c remains.  Both
    unrollings terminate because a Hahn solution cannot support an infinite
    descending orbit, so f vanishes once the orbit leaves the support of g.
    Exact for finitely supported g.
    """
    mu, c = Fraction(mu), Fraction(c)
    lam = RatFun.lam()
    star = mu / (p - 1)
    gd = {}
    for e, v in g.terms:
        gd[e] = v if isinstance(v, RatFun) else RatFun.const(v)
    out = RatFun.const(0)
    if gamma == star:
        return gd[star] / (lam - c) if star in gd else out
    if gamma < star:
        lows = [e for e in gd if e < star]
        if not lows:
            return out
        floor_e = min(lows)
        src, k = p * gamma - mu, 1
        while src >= floor_e:
            if src in gd:
                out = out + gd[src] * c ** (k - 1) / lam ** k
            src, k = p * src - mu, k + 1
        return out
    highs = [e for e in gd if e > star]
    if not highs:
        return out
    floor_e = min(highs)
    t, k = gamma, 0
    while t >= floor_e:
        if t in gd:
            out = out - gd[t] * lam ** k / c ** (k + 1)
        t, k = (t + mu) / p, k + 1
    return out


def ladder_g1_terms(p, nu, cap):
    """Closed form of the first parametric right-hand side solution:

        -1 + (lam-1) [ sum_{j>=0,k>=1} lam^(j+k) z^(p^j nu (1-p^k)/(p-1))
                       + sum_{l>=0} (l+1) lam^l z^(-nu p^l/(p-1)) ]

    collected as {exponent: RatFun} over exponents below `cap` (nu < 0)."""
    nu, cap = Fraction(nu), Fraction(cap)
    lam = RatFun.lam()
    lm1 = lam - 1
    acc = {Fraction(0): RatFun.const(-1)}
    j = 0
    while Fraction(p) ** j * (-nu) < cap:
        base = Fraction(p) ** j * nu / (p - 1)
        k = 1
        while True:
            e = base * (1 - Fraction(p) ** k)
            if e >= cap:
                break
            acc[e] = acc.get(e, RatFun.const(0)) + lm1 * lam ** (j + k)
            k += 1
        j += 1
    l = 0
    while -nu * Fraction(p) ** l / (p - 1) < cap:
        e = -nu * Fraction(p) ** l / (p - 1)
        acc[e] = acc.get(e, RatFun.const(0)) + lm1 * (l + 1) * lam ** l
        l += 1
    return {e: v for e, v in acc.items() if v}


def ladder_g2_terms(p, nu, kmin):
    """Closed form of the second parametric right-hand side solution:

        1 + (lam-1) sum_{k<=-1} lam^k z^(p^k nu/(p-1)),

    with the ladder truncated at k = kmin."""
    nu = Fraction(nu)
    lam = RatFun.lam()
    acc = {Fraction(0): RatFun.const(1)}
    for k in range(-1, kmin - 1, -1):
        acc[Fraction(p) ** k * nu / (p - 1)] = (lam - 1) * lam ** k
    return acc


def canon(poly):
    """Polynomial normalized modulo scalars (and X-powers are pre-stripped)."""
    return poly.monic()


def subst_scale(poly, c):
    """poly(c*X)."""
    c = Fraction(c)
    return Poly(tuple(a * c ** i for i, a in enumerate(poly.coeffs)))


def series_dict_on_mask(f, expected, extra=()):
    """True when f agrees with the {exp: coeff} dict at every certified point.

    Checks both directions: stored terms against the dict, and dict entries
    (plus any `extra` probe exponents) against coeff_at.
    """
    zero = 0
    for e, v in f.terms:
        if f.mask.certifies(e) and expected.get(e, zero) != v:
            return False
    for e in list(expected) + list(extra):
        e = Fraction(e)
        if f.mask.certifies(e) and f.coeff_at(e) != expected.get(e, zero):
            return False
    return True
