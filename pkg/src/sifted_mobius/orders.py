"""Growth-order calculus on functions given by their logarithms.

A function f is represented by log f as a finite sum of monomials

    coef * (log x)^a * (log log x)^b * (log log log x)^c

with rational coefficients and exponents. Monomials are ordered by growth
lexicographically in (a, b, c); exponent (0, 0, 0) and anything below it is
bounded and never affects a comparison. All decisions are exact.

    f <_forall g  :  f = o(g^t) for every t > 0
    f <_exists g  :  f = o(g^t) for some t in (0, 1)
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

Exp = tuple[Fraction, Fraction, Fraction]
ZERO: Exp = (Fraction(0), Fraction(0), Fraction(0))
Num = Union[int, Fraction, str]


class OutOfClass(ValueError):
    """The requested function is not representable by a log-form."""


def _exp(a: Num = 0, b: Num = 0, c: Num = 0) -> Exp:
    return (Fraction(a), Fraction(b), Fraction(c))


@dataclass(frozen=True)
class GrowthClass:
    """log f as {exponent: coefficient}; stored sorted with zero terms dropped."""

    terms: tuple[tuple[Exp, Fraction], ...]

    @staticmethod
    def of(mapping: Mapping[Exp, Num]) -> "GrowthClass":
        merged: dict[Exp, Fraction] = {}
        for e, c in mapping.items():
            e = tuple(Fraction(v) for v in e)
            merged[e] = merged.get(e, Fraction(0)) + Fraction(c)
        return GrowthClass(tuple(sorted((e, c) for e, c in merged.items() if c != 0)))

    @staticmethod
    def from_params(rho: Num = 0, c: Num = 0, alpha: Num = 0, beta: Num = 0, delta: Num = 0) -> "GrowthClass":
        """log f = rho log x + c (log x)^alpha (log log x)^beta + delta log log x."""
        c, alpha, beta = Fraction(c), Fraction(alpha), Fraction(beta)
        if c < 0:
            raise ValueError("c must be >= 0")
        if c == 0 and (alpha or beta):
            raise ValueError("c = 0 requires alpha = beta = 0")
        if c and not (alpha < 1 or (alpha == 1 and beta < 0)):
            raise ValueError("intermediate term needs alpha < 1, or alpha = 1 with beta < 0")
        return GrowthClass.of({_exp(1): rho, _exp(alpha, beta): c, _exp(0, 1): delta})

    def coef(self, e: Exp) -> Fraction:
        return dict(self.terms).get(tuple(Fraction(v) for v in e), Fraction(0))

    @property
    def rho(self) -> Fraction:
        return self.coef(_exp(1))

    @property
    def delta(self) -> Fraction:
        return self.coef(_exp(0, 1))

    def unbounded_terms(self) -> list[tuple[Exp, Fraction]]:
        return [(e, c) for e, c in self.terms if e > ZERO]

    def leading(self) -> tuple[Exp, Fraction] | None:
        u = self.unbounded_terms()
        return u[-1] if u else None

    def tends_to_infinity(self) -> bool:
        lead = self.leading()
        return lead is not None and lead[1] > 0

    def __mul__(self, other: "GrowthClass") -> "GrowthClass":
        d = dict(self.terms)
        for e, c in other.terms:
            d[e] = d.get(e, Fraction(0)) + c
        return GrowthClass.of(d)

    def __truediv__(self, other: "GrowthClass") -> "GrowthClass":
        return self * other ** -1

    def __pow__(self, p: Num) -> "GrowthClass":
        p = Fraction(p)
        return GrowthClass.of({e: c * p for e, c in self.terms})

    def __add__(self, other: "GrowthClass") -> "GrowthClass":
        # f + g is of the order of the pointwise larger one
        diff = _small_t_leading(self, other, Fraction(1))
        return other if diff is not None and diff < 0 else self

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        names = ("logx", "llx", "lllx")
        parts = []
        for e, c in reversed(self.terms):
            factors = [f"{n}^{v}" if v != 1 else n for n, v in zip(names, e) if v != 0]
            parts.append("*".join([str(c)] + factors))
        return " + ".join(parts)


def _small_t_leading(f: GrowthClass, g: GrowthClass, t: Fraction | None) -> Fraction | None:
    """Sign-carrying leading coefficient of log f - t log g over unbounded monomials.

    With t=None the limit t -> 0+ is taken: a coefficient c_f - t c_g has
    the sign of c_f, or of -c_g when c_f = 0. Returns None when the
    difference is bounded.
    """
    fd, gd = dict(f.terms), dict(g.terms)
    for e in sorted(set(fd) | set(gd), reverse=True):
        if e <= ZERO:
            break
        cf, cg = fd.get(e, Fraction(0)), gd.get(e, Fraction(0))
        if t is None:
            val = cf if cf != 0 else -cg
        else:
            val = cf - t * cg
        if val != 0:
            return val
    return None


def _check_unbounded(g: GrowthClass, name: str = "g") -> None:
    if not g.tends_to_infinity():
        raise ValueError(f"{name} must tend to infinity")


def _o_of_power(f: GrowthClass, g: GrowthClass, t: Fraction | None) -> bool:
    lead = _small_t_leading(f, g, t)
    return lead is not None and lead < 0


def lt_forall(f: GrowthClass, g: GrowthClass) -> bool:
    """f = o(g^t) for every t > 0 (it suffices to look at t -> 0+)."""
    _check_unbounded(g)
    return _o_of_power(f, g, None)


def lt_exists(f: GrowthClass, g: GrowthClass) -> bool:
    """f = o(g^t) for some 0 < t < 1.

    The leading coefficient of log f - t log g is piecewise constant in sign
    between the points t = c_f/c_g, so breakpoints and midpoints suffice.
    """
    _check_unbounded(g)
    fd, gd = dict(f.terms), dict(g.terms)
    cuts = {Fraction(0), Fraction(1)}
    for e, cg in gd.items():
        if e > ZERO and cg != 0:
            t = fd.get(e, Fraction(0)) / cg
            if 0 < t < 1:
                cuts.add(t)
    pts = sorted(cuts)
    probes = set(pts[1:-1]) | {(a + b) / 2 for a, b in zip(pts, pts[1:])}
    return any(_o_of_power(f, g, t) for t in sorted(probes))


def is_subradical(f: GrowthClass) -> bool:
    """f = o(x^t) for every t > 0."""
    return lt_forall(f, X)


def lower_set_equal(f: GrowthClass, g: GrowthClass) -> bool:
    """Same <_exists strict lower set: f/g <_forall f and g/f <_forall g."""
    _check_unbounded(f, "f")
    _check_unbounded(g)
    return lt_forall(f / g, f) and lt_forall(g / f, g)


def log_of(f: GrowthClass) -> GrowthClass:
    """The class of log f, for f tending to infinity.

    log(c (log x)^a (llx)^b (lllx)^d (1 + o(1))) = a llx + b lllx + O(1) when d = 0.
    """
    lead = f.leading()
    if lead is None or lead[1] <= 0:
        raise OutOfClass("log f is only representable for f tending to infinity")
    (a, b, d), _ = lead
    if d != 0:
        raise OutOfClass("log of a lllx power needs a fourth iterated logarithm")
    return GrowthClass.of({_exp(0, 1): a, _exp(0, 0, 1): b})


X = GrowthClass.of({_exp(1): 1})


# ---------------------------------------------------------------------------
# fixtures


def sifting_bound(p: Num = 1, eps: Num = 1) -> GrowthClass:
    """exp(p log x/(log log x)^(1+eps)); the +1 inside log log only shifts by o(1)."""
    return GrowthClass.of({_exp(1, -1 - Fraction(eps)): p})


def fixtures() -> dict[str, GrowthClass]:
    return {
        "x": X,
        "x/logx": GrowthClass.of({_exp(1): 1, _exp(0, 1): -1}),
        "x^2": GrowthClass.of({_exp(1): 2}),
        "sqrt(x)": GrowthClass.of({_exp(1): Fraction(1, 2)}),
        "x*logx": GrowthClass.of({_exp(1): 1, _exp(0, 1): 1}),
        "logx": GrowthClass.of({_exp(0, 1): 1}),
        "llx": GrowthClass.of({_exp(0, 0, 1): 1}),
        "exp(sqrt(logx))": GrowthClass.from_params(c=1, alpha=Fraction(1, 2)),
        "exp(2sqrt(logx))": GrowthClass.from_params(c=2, alpha=Fraction(1, 2)),
        "exp(logx^(3/4))": GrowthClass.from_params(c=1, alpha=Fraction(3, 4)),
        "exp(logx/llx^(3/2))": sifting_bound(1, Fraction(1, 2)),
        "exp(logx/llx)": GrowthClass.from_params(c=1, alpha=1, beta=-1),
    }


def ascending_chain(eps: Num = Fraction(1, 2), p: Num = 1, length: int = 5) -> list[GrowthClass]:
    """Y(x) followed by exp(log x/(log log x)^(1/n)) for n = 1, 2, ..."""
    out = [sifting_bound(p, eps)]
    out += [GrowthClass.of({_exp(1, Fraction(-1, n)): 1}) for n in range(1, length)]
    return out


# ---------------------------------------------------------------------------
# expression parser


class ParseError(ValueError):
    def __init__(self, message: str, pos: int, expected: str):
        super().__init__(f"{message} at position {pos} (expected {expected})")
        self.pos = pos
        self.expected = expected


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:\.\d+)?)|(?P<name>lllx|llx|logx|exp|x)|(?P<op>[-+*/^()]))")


def _tokenize(src: str) -> list[tuple[str, str, int]]:
    out, pos = [], 0
    while pos < len(src):
        if src[pos:].strip() == "":
            break
        m = _TOKEN.match(src, pos)
        if not m:
            pos += len(src[pos:]) - len(src[pos:].lstrip())
            raise ParseError(f"unexpected character {src[pos]!r}", pos, "number, x, logx, llx, lllx, exp, operator")
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(("end", "", len(src)))
    return out


class _Parser:
    """Recursive descent over two levels.

    Outer (functions):  prod := pow (('*'|'/') pow)* ; pow := atom ('^' exponent)?
                        atom := x | logx | llx | number | exp '(' sum ')' | '(' prod ')'
    Inner (log-forms):  sum := ['-'] mono (('+'|'-') mono)* ; mono is a product of
                        numbers and logx/llx/lllx powers.
    """

    def __init__(self, src: str):
        self.toks = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, value: str | None = None, expected: str = ""):
        kind, val, pos = self.peek()
        if value is not None and val != value:
            raise ParseError(f"unexpected {val or 'end of input'!r}", pos, expected or repr(value))
        self.i += 1
        return kind, val, pos

    def parse(self) -> GrowthClass:
        f = self.prod()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", pos, "end of input, '*' or '/'")
        return f

    def exponent(self) -> Fraction:
        kind, val, pos = self.peek()
        if val == "(":
            self.take("(")
            e = self.signed_number()
            if self.peek()[1] == "/":
                self.take("/")
                e /= self.signed_number()
            self.take(")", "')'")
            return e
        return self.signed_number()

    def signed_number(self) -> Fraction:
        sign = 1
        if self.peek()[1] == "-":
            self.take("-")
            sign = -1
        kind, val, pos = self.take()
        if kind != "num":
            raise ParseError(f"unexpected {val or 'end of input'!r}", pos, "a number")
        return sign * Fraction(val)

    def prod(self) -> GrowthClass:
        f = self.power()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            g = self.power()
            f = f * g if op == "*" else f / g
        return f

    def power(self) -> GrowthClass:
        f = self.atom()
        if self.peek()[1] == "^":
            self.take("^")
            f = f ** self.exponent()
        return f

    def atom(self) -> GrowthClass:
        kind, val, pos = self.take()
        if val == "x":
            return X
        if val == "logx":
            return GrowthClass.of({_exp(0, 1): 1})
        if val == "llx":
            return GrowthClass.of({_exp(0, 0, 1): 1})
        if val == "lllx":
            raise OutOfClass(f"lllx as a factor needs a fourth iterated logarithm (position {pos})")
        if kind == "num":
            if Fraction(val) <= 0:
                raise ParseError("constant factors must be positive", pos, "a positive number")
            return GrowthClass.of({})
        if val == "exp":
            self.take("(", "'('")
            inner = self.sum()
            self.take(")", "')'")
            return inner
        if val == "(":
            f = self.prod()
            self.take(")", "')'")
            return f
        raise ParseError(f"unexpected {val or 'end of input'!r}", pos, "x, logx, llx, a number, exp( or (")

    def sum(self) -> GrowthClass:
        sign = Fraction(1)
        if self.peek()[1] == "-":
            self.take("-")
            sign = Fraction(-1)
        total = self.mono() ** sign
        while self.peek()[1] in ("+", "-"):
            s = 1 if self.take()[1] == "+" else -1
            total = total * self.mono() ** s
        return total

    def mono(self) -> GrowthClass:
        coef, e = self.mono_factor()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            c2, e2 = self.mono_factor()
            if op == "*":
                coef *= c2
                e = tuple(a + b for a, b in zip(e, e2))
            else:
                coef /= c2
                e = tuple(a - b for a, b in zip(e, e2))
        return GrowthClass.of({e: coef})

    def mono_factor(self) -> tuple[Fraction, Exp]:
        kind, val, pos = self.take()
        if kind == "num":
            c, e = Fraction(val), ZERO
        elif val in ("logx", "llx", "lllx"):
            idx = ("logx", "llx", "lllx").index(val)
            c, e = Fraction(1), tuple(Fraction(int(i == idx)) for i in range(3))
        elif val == "x":
            raise OutOfClass(f"x inside exp(...) is outside the log-form family (position {pos})")
        else:
            raise ParseError(f"unexpected {val or 'end of input'!r}", pos, "a number, logx, llx or lllx")
        if self.peek()[1] == "^":
            self.take("^")
            p = self.exponent()
            if e == ZERO:
                if p.denominator != 1:
                    raise ParseError("constants take integer powers only", pos, "an integer exponent")
                c = c**p
            else:
                e = tuple(a * p for a in e)
        return c, e


def parse(src: str) -> GrowthClass:
    """Parse e.g. "exp(logx^0.5)", "x/logx", "exp(2*logx/llx^(3/2))"."""
    return _Parser(src).parse()


def compare_report(f_src: str, g_src: str) -> dict[str, bool]:
    f, g = parse(f_src), parse(g_src)
    return {"lt_forall": lt_forall(f, g), "lt_exists": lt_exists(f, g)}


def pairs(items: Iterable[GrowthClass]):
    items = list(items)
    return [(a, b) for a in items for b in items]
