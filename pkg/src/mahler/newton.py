"""Newton polygon, slopes, characteristic polynomials, admissible exponents
and the induction plan used by the solver."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import UnknownLeadingTerm, ZeroSeries
from .fields import Poly, rational_roots
from .hahn import NEG


@dataclass(frozen=True)
class NewtonData:
    """Full combinatorial analysis of an operator."""

    p: int
    vertices: tuple          # ((alpha_j, p**alpha_j, val a_{alpha_j}), ...)
    slopes: tuple            # ((mu_j, r_j), ...) with mu strictly increasing
    charpolys: tuple         # canonical chi per slope (Poly, nonzero constant term)
    exponents: tuple         # per slope: ((c, m), ...) sorted by c
    residuals: tuple         # per slope: rootless residual factor of chi

    @property
    def full(self):
        """True when every slope has all its exponents rational."""
        return all(res.degree <= 0 for res in self.residuals)

    def slope_index(self, mu):
        for j, (m, _) in enumerate(self.slopes):
            if m == mu:
                return j
        raise KeyError(mu)

    def to_json(self):
        return {
            "vertices": [{"i": a, "x": str(x), "y": str(y)} for a, x, y in self.vertices],
            "slopes": [{"mu": str(mu), "r": r} for mu, r in self.slopes],
            "charpolys": [[str(c) for c in chi.coeffs] for chi in self.charpolys],
            "exponents": [[{"c": str(c), "m": m} for c, m in exps] for exps in self.exponents],
            "residuals": [[str(c) for c in res.coeffs] for res in self.residuals],
        }


@dataclass(frozen=True)
class FrobeniusPlan:
    """Per-slope gauge twists nu_j and per-exponent offsets s_{c,j}."""

    p: int
    val_a0: Fraction
    nus: tuple               # nu_j per slope
    entries: tuple           # per slope: ((c, m, s), ...)

    def lookup(self, j, c):
        for cc, m, s in self.entries[j]:
            if cc == c:
                return m, s
        raise KeyError((j, c))

    def to_json(self):
        return {
            "val_a0": str(self.val_a0),
            "slopes": [{"nu": str(nu),
                        "exponents": [{"c": str(c), "m": m, "s": s} for c, m, s in entry]}
                       for nu, entry in zip(self.nus, self.entries)],
        }


def _coeff_vals(L):
    """Certified valuations of the nonzero coefficients, requiring a_0, a_n != 0.

    Returns (points, floors): points carry certified (index, val); floors carry
    (index, lowest possible val) for interior coefficients that look like 0 but
    are only partially certified.
    """
    pts, floors = [], []
    for i, ai in enumerate(L.coeffs):
        if ai.is_exact_zero():
            if i in (0, L.order):
                raise ZeroSeries("operator needs certified nonzero a_0 and a_n")
            continue
        if ai.is_zero():
            if i in (0, L.order):
                raise UnknownLeadingTerm("a_0 and a_n need certified leading terms")
            floors.append((i, ai.first_possible()))
            continue
        pts.append((i, ai.val()))
    return pts, floors


def newton_polygon(L):
    """Vertices of the lower boundary of the Newton polygon.

    Returns ((alpha_j, p**alpha_j, val a_{alpha_j}), ...) with alpha_0 = 0.
    A partially certified coefficient with no stored terms is tolerated only
    when even its lowest possible valuation stays on or above the hull.
    """
    p = L.p
    certain, floors = _coeff_vals(L)
    pts = [(Fraction(p ** i), v, i) for i, v in certain]
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1, _), (x2, y2, _) = hull[-2], hull[-1]
            if (x2 - x1) * (pt[1] - y1) <= (pt[0] - x1) * (y2 - y1):
                hull.pop()
            else:
                break
        hull.append(pt)
    for i, fp in floors:
        if fp == NEG or _below_hull(hull, Fraction(p ** i), fp):
            raise UnknownLeadingTerm(
                "coefficient %d might dip below the certified polygon" % i)
    return tuple((i, x, y) for x, y, i in hull)


def _below_hull(hull, x, y):
    for (x1, y1, _), (x2, y2, _) in zip(hull, hull[1:]):
        if x1 <= x <= x2:
            return (y - y1) * (x2 - x1) < (x - x1) * (y2 - y1)
    return False


def slopes_of(vertices):
    out = []
    for (a0, x0, y0), (a1, x1, y1) in zip(vertices, vertices[1:]):
        out.append(((y1 - y0) / (x1 - x0), a1 - a0))
    return tuple(out)


def char_poly(L, mu):
    """Canonical characteristic polynomial of L at slope mu.

    The X**v monomial factor is stripped; coefficients keep their raw values
    (no scalar normalization).
    """
    p = L.p
    M = L.gauge_theta(-(p - 1) * Fraction(mu))
    v = min(bi.val() for bi in M.coeffs if not bi.is_zero())
    cs = [Fraction(bi.coeff_at(v)) for bi in M.coeffs]
    shift = next(k for k, c in enumerate(cs) if c)
    return Poly(cs[shift:])


def analyze(L):
    """Newton polygon, slopes, characteristic polynomials and exponents of L."""
    vertices = newton_polygon(L)
    slopes = slopes_of(vertices)
    charpolys, exponents, residuals = [], [], []
    for mu, r in slopes:
        chi = char_poly(L, mu)
        assert chi.degree == r and chi.coeffs[0]
        roots, residual = rational_roots(chi)
        exponents.append(tuple((c, m) for c, m in roots))
        charpolys.append(chi)
        residuals.append(residual)
    return NewtonData(L.p, vertices, slopes, tuple(charpolys), tuple(exponents),
                      tuple(residuals))


def frobenius_plan(L, nd=None):
    """Gauge twists nu_j and offsets s_{c,j} driving the solution construction."""
    nd = nd or analyze(L)
    p = L.p
    mus = [mu for mu, _ in nd.slopes]
    rs = [r for _, r in nd.slopes]
    nus = []
    for j in range(len(mus)):
        acc = mus[0]
        for i in range(1, j + 1):
            acc += p ** sum(rs[:i]) * (mus[i] - mus[i - 1])
        nus.append((p - 1) * acc)
    seen = {}
    entries = []
    for j, exps in enumerate(nd.exponents):
        entry = []
        for c, m in exps:
            s = seen.get(c, 0)
            entry.append((c, m, s))
            seen[c] = s + m
        entries.append(tuple(entry))
    return FrobeniusPlan(p, L.coeffs[0].val(), tuple(nus), tuple(entries))
