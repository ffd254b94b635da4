"""Command-line front end: input language, pipeline driver, reporters.

Input files are key/value lines:

    p = 2
    a[0] = z^(-2) / (1 + z^2)
    a[1] = -(1/(1+z^4) + z^(-2))
    a[2] = 1/(1+z^4)

Expressions use +, -, *, /, unary -, parentheses, rational literals and
powers of z; exponents of z are bare integers or parenthesized rationals.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from fractions import Fraction

from .errors import (MahlerError, NonRationalExponentLiteral, ParseError,
                     PlanMismatch, VerificationError)
from .fields import poly_str
from .frobenius import frobenius_basis
from .hahn import POS, hs_mul, monomial, zero
from .operator import MahlerOperator


# ---------------------------------------------------------------------------
# expression trees


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Zpow:
    exp: Fraction


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _prec(e):
    if isinstance(e, BinOp):
        return _PREC[e.op]
    if isinstance(e, Neg):
        return 3
    return 4


def expr_str(e, parent=0):
    """Canonical form; parse(expr_str(e)) rebuilds e."""
    if isinstance(e, Num):
        s = str(e.value)
    elif isinstance(e, Zpow):
        if e.exp == 1:
            s = "z"
        elif e.exp.denominator == 1 and e.exp >= 0:
            s = "z^%d" % e.exp
        else:
            s = "z^(%s)" % e.exp
    elif isinstance(e, Neg):
        inner = expr_str(e.arg, 3)
        if isinstance(e.arg, Neg):
            inner = "(%s)" % inner
        s = "-" + inner
    else:
        s = "%s %s %s" % (expr_str(e.left, _PREC[e.op]), e.op,
                          expr_str(e.right, _PREC[e.op] + 1))
    if _prec(e) < parent:
        s = "(%s)" % s
    return s


# ---------------------------------------------------------------------------
# tokenizer / parser


def _tokens(text):
    out = []
    lines = text.splitlines()
    for ln, line in enumerate(lines, 1):
        i = 0
        while i < len(line):
            ch = line[i]
            if ch in " \t":
                i += 1
            elif ch == "#":
                break
            elif ch.isdigit():
                j = i
                while j < len(line) and line[j].isdigit():
                    j += 1
                out.append(("INT", line[i:j], ln, i + 1))
                i = j
            elif ch.isalpha() or ch == "_":
                j = i
                while j < len(line) and (line[j].isalnum() or line[j] == "_"):
                    j += 1
                out.append(("NAME", line[i:j], ln, i + 1))
                i = j
            elif ch in "+-*/^()[]=":
                out.append((ch, ch, ln, i + 1))
                i += 1
            else:
                raise ParseError("unexpected character %r" % ch, ln, i + 1)
        out.append(("EOL", "", ln, len(line) + 1))
    out.append(("EOF", "", len(lines) + 1, 1))
    return out


class _Parser:
    def __init__(self, toks):
        self.toks = toks
        self.i = 0

    def cur(self):
        return self.toks[self.i]

    def eat(self, kind):
        k, v, ln, col = self.cur()
        if k != kind:
            raise ParseError("expected %s, found %r" % (kind, v or k), ln, col)
        self.i += 1
        return v, ln, col

    def expr(self):
        e = self.term()
        while self.cur()[0] in ("+", "-"):
            op = self.cur()[0]
            self.i += 1
            e = BinOp(op, e, self.term())
        return e

    def term(self):
        e = self.unary()
        while self.cur()[0] in ("*", "/"):
            op = self.cur()[0]
            self.i += 1
            e = BinOp(op, e, self.unary())
        return e

    def unary(self):
        if self.cur()[0] == "-":
            self.i += 1
            return Neg(self.unary())
        return self.atom()

    def atom(self):
        k, v, ln, col = self.cur()
        if k == "INT":
            self.i += 1
            return Num(Fraction(int(v)))
        if k == "(":
            self.i += 1
            e = self.expr()
            self.eat(")")
            return e
        if k == "NAME" and v == "z":
            self.i += 1
            if self.cur()[0] == "^":
                self.i += 1
                return Zpow(self.exponent())
            return Zpow(Fraction(1))
        raise ParseError("expected a number, 'z', or '('", ln, col)

    def exponent(self):
        k, v, ln, col = self.cur()
        if k == "INT":
            self.i += 1
            return Fraction(int(v))
        if k == "-":
            self.i += 1
            return -Fraction(int(self.eat("INT")[0]))
        if k == "(":
            self.i += 1
            sign = 1
            if self.cur()[0] == "-":
                sign = -1
                self.i += 1
            if self.cur()[0] != "INT":
                k2, v2, l2, c2 = self.cur()
                raise NonRationalExponentLiteral(
                    "exponent of z must be a rational literal", l2, c2)
            num = int(self.eat("INT")[0])
            den = 1
            if self.cur()[0] == "/":
                self.i += 1
                den = int(self.eat("INT")[0])
                if not den:
                    raise ParseError("zero denominator in exponent", ln, col)
            if self.cur()[0] != ")":
                k2, v2, l2, c2 = self.cur()
                raise NonRationalExponentLiteral(
                    "exponent of z must be a rational literal", l2, c2)
            self.i += 1
            return Fraction(sign * num, den)
        raise ParseError(
            "exponent of z must be an integer or a parenthesized rational", ln, col)


@dataclass(frozen=True)
class EquationSpec:
    """Parsed input: radix and one expression per coefficient (None = absent)."""

    p: int
    coeffs: tuple

    @property
    def order(self):
        return len(self.coeffs) - 1

    def pretty(self):
        lines = ["p = %d" % self.p]
        for i, e in enumerate(self.coeffs):
            if e is not None:
                lines.append("a[%d] = %s" % (i, expr_str(e)))
        return "\n".join(lines) + "\n"


def parse_spec(text):
    toks = _tokens(text)
    P = _Parser(toks)
    p = None
    coeffs = {}
    while P.cur()[0] != "EOF":
        if P.cur()[0] == "EOL":
            P.i += 1
            continue
        k, v, ln, col = P.cur()
        if k != "NAME":
            raise ParseError("expected 'p = ...' or 'a[i] = ...'", ln, col)
        if v == "p":
            P.i += 1
            P.eat("=")
            p = int(P.eat("INT")[0])
            P.eat("EOL")
        elif v == "a":
            P.i += 1
            P.eat("[")
            idx = int(P.eat("INT")[0])
            P.eat("]")
            P.eat("=")
            if idx in coeffs:
                raise ParseError("a[%d] given twice" % idx, ln, col)
            coeffs[idx] = P.expr()
            P.eat("EOL")
        else:
            raise ParseError("unknown key %r" % v, ln, col)
    if p is None:
        raise ParseError("missing 'p = ...' line")
    if p < 2:
        raise ParseError("p must be an integer >= 2")
    if not coeffs:
        raise ParseError("no coefficients given")
    n = max(coeffs)
    if n < 1:
        raise ParseError("the equation must have order at least 1")
    for end in (0, n):
        e = coeffs.get(end)
        if e is None or e == Num(Fraction(0)):
            raise ParseError("a[0] and a[%d] must be present and nonzero" % n)
    return EquationSpec(p, tuple(coeffs.get(i) for i in range(n + 1)))


# ---------------------------------------------------------------------------
# elaboration


def _eval_expr(e, ceiling):
    if isinstance(e, Num):
        return monomial(0, e.value) if e.value else zero()
    if isinstance(e, Zpow):
        return monomial(e.exp, Fraction(1))
    if isinstance(e, Neg):
        return _eval_expr(e.arg, ceiling).scale(Fraction(-1))
    lhs = _eval_expr(e.left, ceiling)
    rhs = _eval_expr(e.right, ceiling)
    if e.op == "+":
        return lhs + rhs
    if e.op == "-":
        return lhs - rhs
    if e.op == "*":
        return hs_mul(lhs, rhs)
    return hs_mul(lhs, rhs.invert(ceiling))


def elaborate(spec, ceiling):
    """Evaluate the coefficient expressions to series at the given ceiling."""
    ceiling = Fraction(ceiling)
    coeffs = [zero() if e is None else _eval_expr(e, ceiling) for e in spec.coeffs]
    return MahlerOperator(spec.p, coeffs)


def run_pipeline(spec, precision=Fraction(8), depth=8, verify=False):
    """Parse result -> operator -> full analysis; returns (report, exit code)."""
    L = elaborate(spec, precision)
    out = frobenius_basis(L, Fraction(precision), depth, verify=verify)
    report = {"spec": {"p": spec.p,
                       "coefficients": [None if e is None else expr_str(e)
                                        for e in spec.coeffs]}}
    report.update(out.to_json())
    if out.partial:
        code = 3
    elif verify and not out.verification.get("ok", False):
        code = 1
    else:
        code = 0
    return report, code, out


# ---------------------------------------------------------------------------
# reporters


def _fmt_series(fs, limit=8):
    bits = []
    for e, c in fs.terms[:limit]:
        cs = str(c)
        if not isinstance(c, Fraction) and ("+" in cs[1:] or "-" in cs[1:] or "/" in cs):
            cs = "(%s)" % cs
        bits.append(cs if not e else "%s*z^(%s)" % (cs, e))
    if len(fs.terms) > limit:
        bits.append("...")
    gap = fs.mask.first_gap() if not fs.mask.empty else None
    if gap is not None and gap != POS:
        bits.append("O(z^(%s))" % gap)
    return " + ".join(bits) if bits else ("0" if not fs.mask.empty else "(nothing certified)")


def render_pretty(out):
    nd = out.newton
    lines = []
    lines.append("p = %d, order %d" % (out.p, sum(r for _, r in nd.slopes)))
    lines.append("Newton vertices: " + ", ".join(
        "(p^%d, %s)" % (i, y) for i, x, y in nd.vertices))
    for j, (mu, r) in enumerate(nd.slopes):
        chi = nd.charpolys[j]
        exps = ", ".join("%s (mult %d)" % (c, m) for c, m in nd.exponents[j]) or "none"
        line = "slope mu_%d = %s (mult %d): chi = %s; rational exponents: %s" % (
            j + 1, mu, r, poly_str(chi, "X"), exps)
        if nd.residuals[j].degree > 0:
            line += "; non-rational part: %s" % poly_str(nd.residuals[j], "X")
        lines.append(line)
    lines.append("plan: nu = [%s]" % ", ".join(str(nu) for nu in out.plan.nus))
    if out.partial:
        lines.append("PARTIAL BASIS: some exponents are not rational; "
                     "no solutions constructed.")
        return "\n".join(lines) + "\n"
    for j, layer in enumerate(out.factorization.layers):
        lines.append("factor layer %d (nu = %s): c = %s" % (
            j + 1, layer[0].nu, ", ".join(str(f.c) for f in layer)))
    for block in out.blocks:
        for m, sol in enumerate(block.solutions):
            parts = "  +  ".join(
                "[%s] * l[%s,%d]" % (_fmt_series(fs), c, u) for c, u, fs in sol.parts)
            lines.append("y[c=%s, j=%d, m=%d] = %s" % (
                block.c, block.j + 1, m, parts or "0"))
    ver = out.verification
    if "solutions" in ver and ver["solutions"]:
        bad = [s for s in ver["solutions"] if not s["residual_zero"]]
        lines.append("residual check: %s" % ("ok" if not bad else "FAILED (%d)" % len(bad)))
    if "independence" in ver:
        lines.append("independence check: %s" % ("ok" if ver["independence"]["ok"] else "FAILED"))
    lines.append("verification: %s" % ("ok" if ver.get("ok") else "not verified"))
    return "\n".join(lines) + "\n"


def _diagnostic(exc, as_json):
    info = {"type": type(exc).__name__, "message": str(exc.args[0] if exc.args else exc)}
    if isinstance(exc, ParseError):
        info["line"], info["col"] = exc.line, exc.col
    if as_json:
        print(json.dumps({"error": info}, indent=2))
    else:
        print("error [%s]: %s" % (info["type"], exc), file=sys.stderr)


# ---------------------------------------------------------------------------
# commands


def cmd_analyze(args):
    if args.file == "-":
        text = sys.stdin.read()
    else:
        with open(args.file, "r", encoding="utf-8") as fh:
            text = fh.read()
    spec = parse_spec(text)
    precision = Fraction(args.precision)
    report, code, out = run_pipeline(spec, precision, args.depth, args.verify)
    if args.as_json:
        print(json.dumps(report, indent=2))
    else:
        sys.stdout.write(render_pretty(out))
    return code


def cmd_selftest(args):
    from .testing import rand_factored_operator

    rng = random.Random(args.seed)
    results = []
    bad = 0
    for k in range(args.count):
        status = "ok"
        try:
            L, _ = rand_factored_operator(rng, ceiling=Fraction(3))
            out = frobenius_basis(L, Fraction(3), 2, verify=True)
            if out.partial or not out.verification.get("ok", False):
                status = "FAILED"
        except MahlerError as exc:
            status = "FAILED (%s: %s)" % (type(exc).__name__, exc)
        if status != "ok":
            bad += 1
        results.append(status)
        if not args.as_json:
            print("instance %3d: %s" % (k, status))
    if args.as_json:
        print(json.dumps({"seed": args.seed, "count": args.count,
                          "failures": bad, "results": results}, indent=2))
    else:
        print("%d/%d passed" % (args.count - bad, args.count))
    return 0 if not bad else 1


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and argv[0] not in ("analyze", "selftest", "-h", "--help"):
        argv.insert(0, "analyze")
    ap = argparse.ArgumentParser(
        prog="mahler",
        description="Newton polygon, factorization and solution basis "
                    "of linear Mahler equations over Hahn series.")
    sub = ap.add_subparsers(dest="cmd", required=True)
    pa = sub.add_parser("analyze", help="analyze an equation file ('-' = stdin)")
    pa.add_argument("file", nargs="?", default="-")
    pa.add_argument("--precision", default="8",
                    help="exponent ceiling, a rational (default 8)")
    pa.add_argument("--depth", type=int, default=8,
                    help="geometric-sum depth for the order-1 solver (default 8)")
    pa.add_argument("--verify", action="store_true",
                    help="run the certified residual and independence checks")
    pa.add_argument("--json", dest="as_json", action="store_true")
    ps = sub.add_parser("selftest", help="random end-to-end self-test")
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--count", type=int, default=20)
    ps.add_argument("--json", dest="as_json", action="store_true")
    args = ap.parse_args(argv)
    try:
        if args.cmd == "analyze":
            return cmd_analyze(args)
        return cmd_selftest(args)
    except (VerificationError, PlanMismatch) as exc:
        _diagnostic(exc, args.as_json)
        return 1
    except (MahlerError, ValueError, ZeroDivisionError, OSError) as exc:
        _diagnostic(exc, args.as_json)
        return 2


if __name__ == "__main__":
    sys.exit(main())
