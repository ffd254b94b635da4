"""Construction of a full basis of solutions.

The parametric order-1 solver works over Q(lambda)-coefficient series; the
triangular solve chains it through the factorization to produce g_{c,j};
specialization (differentiate in lambda, evaluate at c) turns each g_{c,j}
into solutions written on the symbols l_{c,u} (with e_c = l_{c,0}) that obey
phi_p(l_{c,u}) = c*l_{c,u} + l_{c,u-1}.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import PlanMismatch, VerificationError
from .factorize import factor_operator
from .fields import Poly, RatFun, pole_order
from .hahn import NEG, POS, HahnSeries, Mask, _build, _iv_inter, hs_mul, monomial, zero
from .newton import analyze, frobenius_plan


def lift(f):
    """Reinterpret a series over Q as a series over Q(lambda)."""
    return f.map_coeffs(RatFun.const)


def ev_c(f, c):
    """Evaluate every coefficient at lambda = c."""
    return f.map_coeffs(lambda r: r.eval_at(c))


def d_lambda(f):
    """Differentiate every coefficient with respect to lambda."""
    return f.map_coeffs(lambda r: r.derivative())


def _lam_minus(c):
    return RatFun(Poly((-Fraction(c), Fraction(1))))


def _first_uncertified_above(ext, start):
    t = start
    for lo, hi in ext:
        if hi <= t:
            continue
        if lo > t:
            break
        t = hi
    return t


def solve_order1_param(p, mu, c, g, ceiling, depth):
    """The unique f over Q(lambda) with (z**(-mu) lambda phi_p - c) f = g.

    In the frame twisted by z**(mu/(p-1)) the right-hand side splits at
    exponent 0; the negative part is summed over phi**k, k = -1..-depth
    (leaving a recorded mask gap just below 0 for the dropped tail), the
    exponent-0 coefficient is divided by lambda - c, and the positive part is
    summed over phi**k, k >= 0 until the terms leave the requested ceiling.
    """
    c = Fraction(c)
    if not c:
        raise ValueError("c must be nonzero")
    if g.is_exact_zero():
        return g
    shift = Fraction(mu) / (p - 1)
    cap = Fraction(ceiling) - shift
    G = g.shift(-shift)
    lam = RatFun.lam()

    low = G.restrict(NEG, Fraction(0))
    if low.is_exact_zero():
        um = low
    elif low.mask.empty:
        um = HahnSeries((), Mask(()))
    else:
        vb = low.first_possible()
        um = zero()
        for k in range(-1, -depth - 1, -1):
            um = um + low.mal(k, p).scale(RatFun.const(c ** (-k - 1)) * lam ** k)
        um = um.forget(vb * Fraction(p) ** (-depth - 1), Fraction(0))

    if G.mask.certifies(0):
        g0 = G.coeff_at(Fraction(0))
        u0 = monomial(0, g0 / _lam_minus(c)) if g0 else zero()
    else:
        u0 = _build((), [(NEG, Fraction(0))])

    pos_terms = [(e, r) for e, r in G.terms if e > 0]
    fp = _first_uncertified_above(G.mask.extended, Fraction(0))
    if pos_terms and pos_terms[0][0] < fp:
        fp = pos_terms[0][0]
    if fp == POS:
        up = zero()
    elif fp <= 0:
        up = _build((), [(NEG, Fraction(0))])
    else:
        ext = [(NEG, fp)] + _iv_inter(G.mask.extended, [(fp, POS)])
        high = _build(pos_terms, ext)
        up = zero()
        k = 0
        while p ** k * fp < cap:
            up = up + high.mal(k, p).scale(RatFun.const(c ** (-k - 1)) * lam ** k)
            k += 1
        up = up.cap(cap)

    u = um + u0 - up
    return u.cap(cap).shift(shift)


def solve_gcj(L, plan, fact, c, j, ceiling, depth):
    """Parametric series g with L(g e_lambda) = z**(val a_0 - nu_j/(p-1)) (lambda-c)**(s+m) e_lambda.

    Solves the triangular system through every layer of the factorization,
    top slope first; within a layer the factors are undone right-to-left
    (solve, then multiply by the unit h).
    """
    p = L.p
    c = Fraction(c)
    m, s = plan.lookup(j, c)
    if len(fact.layers) != len(plan.nus):
        raise PlanMismatch("factorization layers do not match the plan")
    nuj = plan.nus[j]
    ceil2 = Fraction(ceiling) + max(Fraction(0), nuj / (p - 1))
    lamc = _lam_minus(c)
    x = lift(fact.a.invert(ceil2).shift(plan.val_a0)).scale(lamc ** m)
    for i in reversed(range(len(fact.layers))):
        mu = nuj - fact.layers[i][0].nu
        for f in reversed(fact.layers[i]):
            x = solve_order1_param(p, mu, f.c, x, ceil2, depth)
            x = hs_mul(lift(f.h), x)
    return x.shift(-nuj / (p - 1)).scale(lamc ** s)


def expected_gcj_cld(L, plan, fact, c, j):
    """Closed form for the leading coefficient of g_{c,j}."""
    m, s = plan.lookup(j, c)
    rs = [len(layer) for layer in fact.layers]
    num = Fraction(1)
    for layer in fact.layers[: j + 1]:
        for f in layer:
            num *= -f.c
    expect = RatFun.lam() ** (-sum(rs[:j]))
    expect = expect * RatFun.const(num / L.coeffs[0].cld()) * _lam_minus(c) ** (s + m)
    for f in fact.layers[j]:
        expect = expect / _lam_minus(f.c)
    return expect


def check_gcj(L, plan, fact, c, j, mu, g, residual=False):
    """Certified invariants of g_{c,j}: valuation, leading coefficient,
    regularity at lambda = c, and (optionally) the defining residual."""
    c = Fraction(c)
    m, s = plan.lookup(j, c)
    if g.val() != -mu:
        raise VerificationError("val of g is %s, expected %s" % (g.val(), -mu))
    if g.cld() != expected_gcj_cld(L, plan, fact, c, j):
        raise VerificationError("leading coefficient of g disagrees with the closed form")
    for _, r in g.terms:
        if pole_order(r, c):
            raise VerificationError("coefficient of g has a pole at lambda = %s" % c)
    if residual:
        rmask = gcj_residual_mask(L, plan, c, j, g)
        if rmask.empty:
            raise VerificationError("defining residual certified nowhere")


def gcj_residual_mask(L, plan, c, j, g):
    """Check L^[e_lambda](g) against its closed form; returns the certified mask."""
    c = Fraction(c)
    m, s = plan.lookup(j, c)
    rhs = monomial(plan.val_a0 - plan.nus[j] / (L.p - 1), _lam_minus(c) ** (s + m))
    res = L.gauge_exp_param().apply(g) - rhs
    if not res.is_zero():
        raise VerificationError("defining equation residual is nonzero")
    return res.mask


@dataclass(frozen=True)
class SolutionObject:
    """Element sum f_{c,u}(z) l_{c,u} of the solution module."""

    p: int
    parts: tuple  # ((c, u, HahnSeries over Q), ...) sorted by (c, u)

    def part(self, c, u):
        for cc, uu, fs in self.parts:
            if cc == c and uu == u:
                return fs
        return None

    def is_zero(self):
        """No certified nonzero coefficient in any part."""
        return all(fs.is_zero() for _, _, fs in self.parts)

    def certified_zero(self):
        """Every part vanishes and is certified somewhere."""
        return all(fs.is_zero() and not fs.mask.empty for _, _, fs in self.parts)

    def to_json(self):
        by_c = {}
        for c, u, fs in self.parts:
            by_c.setdefault(c, []).append({"u": u, "series": fs.to_json()})
        return [{"c": str(c), "terms": entries} for c, entries in sorted(by_c.items())]


def _solution(p, parts):
    kept = tuple((c, u, fs) for (c, u), fs in sorted(parts.items())
                 if not fs.is_exact_zero())
    return SolutionObject(p, kept)


def specialize_solutions(p, g, c, s, m_count):
    """Solutions ev_c(d_lambda**(s+m)(g e_lambda)) for m = 0..m_count-1,
    expanded by the Leibniz rule on the l_{c,u} symbols."""
    c = Fraction(c)
    derivs = [g]
    for _ in range(s + m_count - 1):
        derivs.append(d_lambda(derivs[-1]))
    out = []
    for m in range(m_count):
        t = s + m
        parts = {}
        for u in range(t + 1):
            w = Fraction(math.factorial(u) * math.comb(t, u))
            parts[(c, u)] = ev_c(derivs[t - u], c).scale(w)
        out.append(_solution(p, parts))
    return out


def apply_to_solution(L, y):
    """Apply the operator to an l-expansion, using
    phi_p**i(l_{c,u}) = sum_t binom(i,t) c**(i-t) l_{c,u-t}."""
    p = L.p
    acc = {}
    for i, ai in enumerate(L.coeffs):
        if ai.is_exact_zero():
            continue
        for c, u, fs in y.parts:
            moved = hs_mul(ai, fs.mal(i, p))
            for t in range(min(i, u) + 1):
                w = math.comb(i, t) * c ** (i - t)
                key = (c, u - t)
                piece = moved.scale(w)
                acc[key] = piece if key not in acc else acc[key] + piece
    return _solution(p, acc)


@dataclass(frozen=True)
class ExponentBlock:
    """Everything attached to one exponent c of one slope mu_j."""

    j: int
    mu: Fraction
    c: Fraction
    s: int
    m: int
    g: HahnSeries          # coefficients in Q(lambda)
    solutions: tuple

    def to_json(self):
        return {"j": self.j, "mu": str(self.mu), "c": str(self.c),
                "s": self.s, "m": self.m, "g": self.g.to_json(),
                "solutions": [sol.to_json() for sol in self.solutions]}


@dataclass(frozen=True)
class FrobeniusOutput:
    p: int
    newton: object
    plan: object
    factorization: object    # None when the basis is partial
    blocks: tuple
    partial: bool
    verification: dict

    @property
    def solutions(self):
        return [sol for block in self.blocks for sol in block.solutions]

    def to_json(self):
        return {
            "p": self.p,
            "newton": self.newton.to_json(),
            "plan": self.plan.to_json(),
            "factorization": None if self.factorization is None
            else self.factorization.to_json(),
            "blocks": [b.to_json() for b in self.blocks],
            "partial": self.partial,
            "verification": self.verification,
        }


def verify_independence(out, nd=None):
    """Triangular valuation pattern of the parts across (j, m), per exponent.

    For the solution indexed (c, j, m): parts below m must have valuation
    lower bound >= -mu_j, the part at m must have certified valuation exactly
    -mu_j, parts above m must stay strictly above -mu_j.
    """
    details = []
    ok_all = True
    for block in out.blocks:
        for m, sol in enumerate(block.solutions):
            target = -block.mu
            ok = True
            for u in range(block.s + m + 1):
                fs = sol.part(block.c, u)
                if fs is None:
                    bound, exact = POS, True
                else:
                    bound, exact = fs.val_bound()
                if u < m:
                    good = bound >= target
                elif u == m:
                    good = exact and bound == target
                else:
                    good = bound > target
                ok = ok and good
            details.append({"c": str(block.c), "j": block.j, "m": m, "ok": ok})
            ok_all = ok_all and ok
    return {"ok": ok_all, "solutions": details}


def frobenius_basis(L, ceiling, depth, verify=True):
    """Newton analysis, factorization, triangular solve and specialization.

    Returns a FrobeniusOutput; when some characteristic polynomial has
    non-rational roots no solutions are constructed and the output is
    flagged partial.
    """
    p = L.p
    nd = analyze(L)
    plan = frobenius_plan(L, nd)
    if not nd.full:
        report = {"ok": False, "partial": True, "reason": "non-rational exponents"}
        return FrobeniusOutput(p, nd, plan, None, (), True, report)
    fact = factor_operator(L, ceiling, plan)
    blocks = []
    for j, exps in enumerate(nd.exponents):
        mu = nd.slopes[j][0]
        for c, m in exps:
            _, s = plan.lookup(j, c)
            g = solve_gcj(L, plan, fact, c, j, ceiling, depth)
            if verify:
                check_gcj(L, plan, fact, c, j, mu, g)
            sols = specialize_solutions(p, g, c, s, m)
            blocks.append(ExponentBlock(j, mu, c, s, m, g, tuple(sols)))
    out = FrobeniusOutput(p, nd, plan, fact, tuple(blocks), False, {})
    total = len(out.solutions)
    if total != L.order:
        raise VerificationError("built %d solutions for an order-%d operator"
                                % (total, L.order))
    # ok is None when the checks were skipped: only a run can claim success
    report = {"ok": True if verify else None, "partial": False, "solutions": []}
    if verify:
        for block in out.blocks:
            for m, sol in enumerate(block.solutions):
                res = apply_to_solution(L, sol)
                good = res.certified_zero()
                report["solutions"].append({
                    "c": str(block.c), "j": block.j, "m": m,
                    "residual_zero": bool(good),
                    "residual_masks": [
                        {"c": str(c), "u": u, "mask": fs.mask.to_json()}
                        for c, u, fs in res.parts],
                })
                report["ok"] = report["ok"] and good
        indep = verify_independence(out, nd)
        report["independence"] = indep
        report["ok"] = report["ok"] and indep["ok"]
    return FrobeniusOutput(p, nd, plan, fact, tuple(blocks), False, report)
