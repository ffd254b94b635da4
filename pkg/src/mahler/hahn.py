"""Truncated Hahn series over an exact coefficient field.

A series is stored as finitely many (exponent, coefficient) terms together
with a guarantee mask: a finite list of disjoint half-open intervals
[lo, hi) of rational exponents.  Inside the mask the stored coefficients are
exact; outside it nothing is claimed.  A nonempty mask additionally
guarantees that the true series has no support below the mask's smallest
lower endpoint, so the region certified by a series is really
(-inf, hi_0) united with the later intervals.  All mask propagation below is
conservative: results may certify less than mathematically possible, never
more.

Instances are immutable by convention and safe to share.
"""
from __future__ import annotations

from fractions import Fraction

from .errors import UnknownLeadingTerm, ZeroDivisor, ZeroSeries

NEG = float("-inf")
POS = float("inf")


# ---------------------------------------------------------------------------
# interval-list algebra; intervals are (lo, hi) half-open pairs, lo < hi,
# endpoints rational except for the +-inf sentinels


def _iv_norm(ivs):
    ivs = sorted((lo, hi) for lo, hi in ivs if lo < hi)
    out = []
    for lo, hi in ivs:
        if out and lo <= out[-1][1]:
            if hi > out[-1][1]:
                out[-1] = (out[-1][0], hi)
        else:
            out.append((lo, hi))
    return out


def _iv_inter(a, b):
    out, i, j = [], 0, 0
    while i < len(a) and j < len(b):
        lo = max(a[i][0], b[j][0])
        hi = min(a[i][1], b[j][1])
        if lo < hi:
            out.append((lo, hi))
        if a[i][1] < b[j][1]:
            i += 1
        else:
            j += 1
    return out


def _iv_union(a, b):
    return _iv_norm(list(a) + list(b))


def _iv_diff(a, b):
    out = []
    for lo, hi in a:
        cur = lo
        for blo, bhi in b:
            if bhi <= cur or blo >= hi:
                continue
            if blo > cur:
                out.append((cur, blo))
            cur = max(cur, bhi)
            if cur >= hi:
                break
        if cur < hi:
            out.append((cur, hi))
    return out


def _iv_contains(ivs, x):
    for lo, hi in ivs:
        if lo <= x < hi:
            return True
    return False


def _iv_shift(ivs, d):
    return [(lo + d, hi + d) for lo, hi in ivs]


def _iv_scale(ivs, s):
    return [(NEG if lo == NEG else lo * s, POS if hi == POS else hi * s) for lo, hi in ivs]


class Mask:
    """Certification mask: disjoint sorted half-open intervals of exponents."""

    __slots__ = ("ivs",)

    def __init__(self, ivs=()):
        norm = []
        for lo, hi in _iv_norm(ivs):
            if lo == NEG:
                raise ValueError("stored mask intervals need a rational lower endpoint")
            lo = lo if isinstance(lo, Fraction) else Fraction(lo)
            if hi != POS and not isinstance(hi, Fraction):
                hi = Fraction(hi)
            norm.append((lo, hi))
        self.ivs = tuple(norm)

    @property
    def empty(self):
        return not self.ivs

    @property
    def extended(self):
        """Certified region including the implicit no-support-below guarantee."""
        if not self.ivs:
            return []
        return [(NEG, self.ivs[0][1])] + list(self.ivs[1:])

    def certifies(self, x):
        return _iv_contains(self.extended, x)

    def lower(self):
        return self.ivs[0][0]

    def first_gap(self):
        """First exponent above which (and at which) nothing is certified."""
        return self.ivs[0][1]

    def __eq__(self, other):
        return isinstance(other, Mask) and self.ivs == other.ivs

    def __hash__(self):
        return hash(self.ivs)

    def __repr__(self):
        if not self.ivs:
            return "Mask(empty)"
        return "Mask(%s)" % " ".join(
            "[%s,%s)" % (lo, "inf" if hi == POS else hi) for lo, hi in self.ivs)

    def to_json(self):
        return [{"lo": str(lo), "hi": "inf" if hi == POS else str(hi)} for lo, hi in self.ivs]

    @classmethod
    def from_json(cls, data):
        return cls([(Fraction(d["lo"]), POS if d["hi"] == "inf" else Fraction(d["hi"]))
                    for d in data])


_FULL = [(NEG, POS)]


def _build(terms, ext):
    """Canonical series from (exp, coeff) pairs and an extended certified set.

    The head interval of `ext` must reach down to -inf: the stored mask's
    no-support-below guarantee is only deducible when some ray (-inf, hi) is
    certified.  The head is converted to the stored [lo, hi) form with lo at
    the lowest retained exponent (the choice of lo is arbitrary below the
    support, any value keeps the same certified region).  An `ext` with a
    finite head carries a claim the mask cannot represent, so everything is
    conservatively dropped.
    """
    ext = _iv_norm(ext)
    if not ext or ext[0][0] != NEG:
        return HahnSeries((), Mask(()))
    tl = sorted((e, c) for e, c in terms if c and _iv_contains(ext, e))
    _, hi0 = ext[0]
    below = [e for e, _ in tl if e < hi0]
    if below:
        lo0 = below[0]
    elif hi0 > 0:
        lo0 = Fraction(0)
    else:
        lo0 = hi0 - 1
    ext[0] = (lo0, hi0)
    return HahnSeries(tuple(tl), Mask(ext))


class HahnSeries:
    """Certified truncation of a Hahn series; coefficients live in Q or Q(lambda)."""

    __slots__ = ("terms", "mask")

    def __init__(self, terms, mask):
        self.terms = terms
        self.mask = mask

    # -- queries ------------------------------------------------------------

    def is_zero(self):
        """No certified nonzero coefficient (the truncation looks like 0)."""
        return not self.terms

    def is_exact_zero(self):
        return not self.terms and self.mask.extended == _FULL

    def support(self):
        return tuple(e for e, _ in self.terms)

    def val(self):
        """Valuation; requires a certified leading term."""
        if not self.terms:
            raise ZeroSeries("valuation of a series with no certified terms")
        e = self.terms[0][0]
        if self.mask.empty or e >= self.mask.first_gap():
            raise UnknownLeadingTerm("leading term at %s is not certified" % e)
        return e

    def cld(self):
        self.val()
        return self.terms[0][1]

    def val_bound(self):
        """(bound, exact): the valuation when certified, else a sound lower bound."""
        if self.mask.empty:
            return NEG, False
        gap = self.mask.first_gap()
        if self.terms:
            e = self.terms[0][0]
            return (e, True) if e < gap else (gap, False)
        return (POS, True) if gap == POS else (gap, False)

    def first_possible(self):
        """Smallest exponent where the true series might be nonzero."""
        if self.mask.empty:
            return NEG
        gap = self.mask.first_gap()
        return min(gap, self.terms[0][0]) if self.terms else gap

    def coeff_at(self, e):
        """Certified coefficient at exponent e (0 when certified absent)."""
        if not self.mask.certifies(e):
            raise UnknownLeadingTerm("coefficient at %s is not certified" % e)
        for ee, c in self.terms:
            if ee == e:
                return c
            if ee > e:
                break
        return 0

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        ext = _iv_inter(self.mask.extended, other.mask.extended)
        acc = dict(self.terms)
        for e, c in other.terms:
            s = acc.get(e)
            acc[e] = c if s is None else s + c
        return _build(acc.items(), ext)

    def __neg__(self):
        return HahnSeries(tuple((e, -c) for e, c in self.terms), self.mask)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        return hs_mul(self, other)

    def scale(self, a):
        """Multiply every coefficient by the scalar a."""
        if not a:
            return _build((), _FULL)
        return HahnSeries(tuple((e, c * a) for e, c in self.terms), self.mask)

    def map_coeffs(self, fn):
        """Apply fn to every coefficient, dropping zero images; mask unchanged."""
        return HahnSeries(tuple((e, v) for e, c in self.terms for v in (fn(c),) if v),
                          self.mask)

    def shift(self, d):
        """Multiply by the monomial z**d."""
        if not d:
            return self
        d = Fraction(d)
        return HahnSeries(tuple((e + d, c) for e, c in self.terms),
                          Mask(_iv_shift(self.mask.ivs, d)))

    def mal(self, k, p):
        """Apply the Mahler automorphism phi_p**k: z -> z**(p**k)."""
        if not k:
            return self
        s = Fraction(p) ** k
        return HahnSeries(tuple((e * s, c) for e, c in self.terms),
                          Mask(_iv_scale(self.mask.ivs, s)))

    def cap(self, bound):
        """Forget everything at or above `bound` (truncation, not restriction)."""
        ext = _iv_inter(self.mask.extended, [(NEG, bound)])
        return _build(self.terms, ext)

    def forget(self, lo, hi):
        """Give up certification on [lo, hi) (used to record truncated tails)."""
        return _build(self.terms, _iv_diff(self.mask.extended, [(lo, hi)]))

    def restrict(self, lo, hi):
        """The restriction of the series to [lo, hi): zero outside by fiat."""
        inside = _iv_inter(self.mask.extended, [(lo, hi)])
        outside = [iv for iv in ((NEG, lo), (hi, POS)) if iv[0] < iv[1]]
        terms = [(e, c) for e, c in self.terms if lo <= e < hi]
        return _build(terms, _iv_union(inside, outside))

    def invert(self, ceiling):
        """Multiplicative inverse, certified as far as `ceiling` lets it be."""
        if not self.terms:
            raise ZeroDivisor("cannot invert a series with no certified nonzero term")
        try:
            v = self.val()
        except UnknownLeadingTerm:
            raise ZeroDivisor("cannot invert: leading term not certified")
        c = self.terms[0][1]
        inv_c = 1 / c
        if len(self.terms) == 1 and self.mask.extended == _FULL:
            return _build([(-v, inv_c)], _FULL)
        one = _build([(Fraction(0), c * inv_c)], _FULL)
        t = self.shift(-v).scale(inv_c) - one
        bound = Fraction(ceiling) - v
        fp = t.first_possible()
        assert fp > 0
        total, power, m = one, one, 0
        while m * fp <= bound:
            m += 1
            power = hs_mul(power, -t).cap(bound)
            total = total + power
            if power.is_exact_zero():
                break
        return total.cap(bound).shift(-v).scale(inv_c)

    # -- comparisons ----------------------------------------------------------

    def eq_on_mask(self, other):
        """(equal, common): compare coefficients on the common certified region."""
        common = _iv_inter(self.mask.extended, other.mask.extended)
        a, b = dict(self.terms), dict(other.terms)
        equal = all(a.get(e, 0) == b.get(e, 0)
                    for e in set(a) | set(b) if _iv_contains(common, e))
        return equal, _build((), common).mask

    def __eq__(self, other):
        return (isinstance(other, HahnSeries) and self.terms == other.terms
                and self.mask == other.mask)

    def __hash__(self):
        return hash((self.terms, self.mask))

    def __repr__(self):
        if not self.terms:
            body = "0"
        else:
            body = " + ".join("(%s)*z^(%s)" % (c, e) for e, c in self.terms)
        return "%s  %r" % (body, self.mask)

    def to_json(self, coeff=str):
        return {"terms": [{"exp": str(e), "coeff": coeff(c)} for e, c in self.terms],
                "mask": self.mask.to_json()}


def _coeff(c):
    """Exact coefficient: plain integers become Fractions, others pass through."""
    return Fraction(c) if isinstance(c, int) else c


def hs(terms=(), mask=None):
    """Build a series from a dict or pair list; mask None means exactly known."""
    if isinstance(terms, dict):
        items = [(Fraction(e), _coeff(c)) for e, c in terms.items()]
    else:
        acc = {}
        for e, c in terms:
            e = Fraction(e)
            acc[e] = acc.get(e, 0) + _coeff(c)
        items = list(acc.items())
    items = [(e, c) for e, c in items if c]
    if mask is None:
        return _build(items, _FULL)
    if not isinstance(mask, Mask):
        mask = Mask([(Fraction(lo), hi if hi == POS else Fraction(hi)) for lo, hi in mask])
    items.sort()
    for e, _ in items:
        if not mask.certifies(e):
            raise ValueError("term at %s lies outside the mask" % e)
    return HahnSeries(tuple(items), mask)


def zero():
    return _build((), _FULL)


def one(unit=Fraction(1)):
    return _build([(Fraction(0), _coeff(unit))], _FULL)


def monomial(e, c=Fraction(1)):
    return _build([(Fraction(e), _coeff(c))], _FULL)


def hs_mul(f, g):
    """Product.  A coefficient of f*g is certified unless it can receive a
    contribution involving an uncertified coefficient: the uncertified region
    of one factor shifted by any possible support point of the other."""
    fe, ge = f.mask.extended, g.mask.extended
    if not fe or not ge:
        return _build((), ())
    if (not f.terms and fe == _FULL) or (not g.terms and ge == _FULL):
        return _build((), _FULL)
    if len(f.terms) == 1 and fe == _FULL:
        return g.shift(f.terms[0][0]).scale(f.terms[0][1])
    if len(g.terms) == 1 and ge == _FULL:
        return f.shift(g.terms[0][0]).scale(g.terms[0][1])
    acc = {}
    for e1, c1 in f.terms:
        for e2, c2 in g.terms:
            e = e1 + e2
            v = c1 * c2
            s = acc.get(e)
            acc[e] = v if s is None else s + v
    unc_f, unc_g = _iv_diff(_FULL, fe), _iv_diff(_FULL, ge)
    poll = _mul_pollution(unc_f, g) + _mul_pollution(unc_g, f)
    if unc_f and unc_g:
        poll.append((unc_f[0][0] + unc_g[0][0], POS))
    return _build(acc.items(), _iv_diff(_FULL, _iv_norm(poll)))


def _mul_pollution(unc, g):
    """Product regions reachable from uncertified exponents in `unc` paired
    with the stored support of g."""
    return [(lo + e, _add_inf(hi, e)) for lo, hi in unc for e, _ in g.terms]


def _add_inf(a, b):
    if a == POS or b == POS:
        return POS
    return a + b


# functional aliases matching the documented operation names

def hs_add(f, g):
    return f + g


def hs_mal(f, k, p):
    return f.mal(k, p)


def hs_monomial_mul(f, coeff, exp):
    return f.shift(exp).scale(coeff)


def hs_invert(f, ceiling):
    return f.invert(ceiling)


def hs_val(f):
    return f.val()


def hs_cld(f):
    return f.cld()


def hs_eq_on_mask(f, g):
    return f.eq_on_mask(g)


def hs_map_coeffs(f, fn):
    return f.map_coeffs(fn)


def series_from_json(data, coeff=Fraction):
    mask = Mask.from_json(data.get("mask", []))
    terms = [(Fraction(t["exp"]), coeff(t["coeff"])) for t in data.get("terms", [])]
    return hs(terms, mask)
