"""Exact coefficient arithmetic for the polynomial builders.

Four scalar domains appear in the library:

* ``LaurentQT`` -- sparse Laurent polynomials sum c * q^a * t^b over Q,
  stored as {(a, b): coefficient}.
* ``RatQT``     -- the fraction field Q(q, t), kept in a canonical reduced
  form so equality is structural.
* ``LaurentU``  -- dense univariate Laurent polynomials in u whose
  coefficients live in Q(zeta_m) (plain rationals for m <= 2).
* ``CycloU``    -- the fraction field Q(zeta_m)(u), the coefficient field
  after a specialization t = u^b, q = omega * u^-a with omega = zeta_m^e.

Everything is immutable and exact; no floating point is used anywhere.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache


class AlgebraError(ValueError):
    """Base class for arithmetic failures (poles, singular edges)."""


class PoleError(AlgebraError):
    """A denominator vanished under a specialization or limit."""


class SingularEdgeError(AlgebraError):
    """A Yang-Baxter edge coefficient is undefined under a specialization."""


def _scal(x):
    """Normalize a rational scalar, preferring plain int when integral."""
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return x.numerator
        return x
    return x


def _scal_str(x) -> str:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return str(x)


# ---------------------------------------------------------------------------
# Bivariate Laurent polynomials in (q, t)
# ---------------------------------------------------------------------------


class LaurentQT:
    """Sparse Laurent polynomial in q and t with rational coefficients.

    Terms map exponent pairs (a, b) to nonzero scalars; the zero polynomial
    is the empty map.  Exponents may be negative.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None, _trusted=False):
        if terms is None:
            terms = {}
        if not _trusted:
            terms = {e: _scal(c) for e, c in terms.items() if c != 0}
        self.terms = terms

    # -- constructors -------------------------------------------------

    @staticmethod
    def monomial(coeff, a=0, b=0) -> "LaurentQT":
        coeff = _scal(coeff)
        if coeff == 0:
            return LQT_ZERO
        return LaurentQT({(a, b): coeff}, _trusted=True)

    @staticmethod
    def from_int(n: int) -> "LaurentQT":
        return LaurentQT.monomial(n)

    # -- structure ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.terms == {(0, 0): 1}

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def min_exponents(self):
        terms = self.terms
        return (min(a for a, _ in terms), min(b for _, b in terms))

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int):
            if other == 0:
                return not self.terms
            return self.terms == {(0, 0): other}
        if not isinstance(other, LaurentQT):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentQT.from_int(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            elif e in out:
                del out[e]
        return LaurentQT(out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return LaurentQT({e: -c for e, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentQT.from_int(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return LQT_ZERO
            other = _scal(other)
            return LaurentQT(
                {e: _scal(c * other) for e, c in self.terms.items()}, _trusted=True
            )
        if not isinstance(other, LaurentQT):
            return NotImplemented
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out = {}
        for (a1, b1), c1 in a.items():
            for (a2, b2), c2 in b.items():
                e = (a1 + a2, b1 + b2)
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                elif e in out:
                    del out[e]
        return LaurentQT({e: _scal(c) for e, c in out.items()}, _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a LaurentQT; use RatQT")
        out = LQT_ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def shift(self, da: int, db: int) -> "LaurentQT":
        """Multiply by the monomial q^da * t^db."""
        if da == 0 and db == 0:
            return self
        return LaurentQT(
            {(a + da, b + db): c for (a, b), c in self.terms.items()}, _trusted=True
        )

    # -- content ------------------------------------------------------

    def int_content(self):
        """gcd of numerators / lcm of denominators over all coefficients."""
        num = 0
        den = 1
        for c in self.terms.values():
            if isinstance(c, Fraction):
                num = math.gcd(num, c.numerator)
                den = den * c.denominator // math.gcd(den, c.denominator)
            else:
                num = math.gcd(num, c)
        return Fraction(num, den)

    def divexact_scalar(self, s) -> "LaurentQT":
        inv = Fraction(1, 1) / Fraction(s)
        return LaurentQT({e: _scal(c * inv) for e, c in self.terms.items()}, _trusted=True)

    def divexact_binomial(self, exp, scale) -> "LaurentQT | None":
        """Exact quotient by (1 - scale * q^A t^B), or None if not divisible.

        Solves g = f + scale * M * g chain by chain along the (A, B)
        direction; a chain whose running value fails to die past the last
        supported exponent witnesses non-divisibility.
        """
        A, B = exp
        if A == 0 and B == 0:
            raise ValueError("binomial direction must be nonzero")
        if not self.terms:
            return self
        f = self.terms
        step = A * A + B * B
        lines: dict = {}
        for e in f:
            phi = A * e[0] + B * e[1]
            lines.setdefault((e[0] * B - e[1] * A, phi % step), []).append(e)
        g: dict = {}
        for pts in lines.values():
            pts.sort(key=lambda e: A * e[0] + B * e[1])
            e = pts[0]
            top = pts[-1]
            topphi = A * top[0] + B * top[1]
            val = 0
            while True:
                val = f.get(e, 0) + scale * val
                here = A * e[0] + B * e[1]
                if here >= topphi:
                    if val:
                        return None
                    break
                if val:
                    g[e] = _scal(val)
                e = (e[0] + A, e[1] + B)
        return LaurentQT(g, _trusted=True)

    # -- specialization ------------------------------------------------

    def subs_values(self, qval, tval, one):
        """Ring morphism sending q -> qval, t -> tval (values with pow)."""
        acc = None
        for (a, b), c in self.terms.items():
            term = (qval ** a) * (tval ** b) * c
            acc = term if acc is None else acc + term
        if acc is None:
            return one * 0
        return acc

    # -- printing / parsing --------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (a, b) in sorted(self.terms, reverse=True):
            c = self.terms[(a, b)]
            mono = []
            if a:
                mono.append("q" if a == 1 else f"q^{a}")
            if b:
                mono.append("t" if b == 1 else f"t^{b}")
            if not mono:
                body = _scal_str(abs(c) if isinstance(c, int) else abs(c))
            else:
                mag = abs(c)
                body = "*".join(mono) if mag == 1 else _scal_str(mag) + "*" + "*".join(mono)
            neg = (c < 0)
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    __repr__ = __str__

    @staticmethod
    def parse(text: str) -> "LaurentQT":
        return _parse_laurent(text, ("q", "t"))


_MONO_RE = re.compile(r"^\s*(?:(\d+(?:/\d+)?)\s*\*?\s*)?((?:[a-z]\s*(?:\^\s*-?\d+)?\s*\*?\s*)*)$")
_VAR_RE = re.compile(r"([a-z])\s*(?:\^\s*(-?\d+))?")


def _parse_laurent(text: str, names) -> LaurentQT:
    """Parse a signed sum of c*q^a*t^b style monomials (names configurable)."""
    text = text.strip()
    if not text:
        raise ValueError("empty Laurent polynomial string")
    pieces = re.split(r"(?<!\^)(?=[+-])", text.replace(" ", ""))
    terms = {}
    for piece in pieces:
        if not piece:
            continue
        sign = 1
        while piece and piece[0] in "+-":
            if piece[0] == "-":
                sign = -sign
            piece = piece[1:]
        m = _MONO_RE.match(piece)
        if not m:
            raise ValueError(f"bad monomial {piece!r}")
        coeff = Fraction(m.group(1)) if m.group(1) else Fraction(1)
        exps = {n: 0 for n in names}
        for var, ex in _VAR_RE.findall(m.group(2) or ""):
            if var not in exps:
                raise ValueError(f"unknown variable {var!r} in {piece!r}")
            exps[var] += int(ex) if ex else 1
        key = tuple(exps[n] for n in names)
        terms[key] = terms.get(key, 0) + sign * coeff
    return LaurentQT(terms)


LQT_ZERO = LaurentQT({}, _trusted=True)
LQT_ONE = LaurentQT({(0, 0): 1}, _trusted=True)
LQT_Q = LaurentQT({(1, 0): 1}, _trusted=True)
LQT_T = LaurentQT({(0, 1): 1}, _trusted=True)


# ---------------------------------------------------------------------------
# Bivariate gcd (recursive in t over Q[q]) for RatQT normalization
# ---------------------------------------------------------------------------


def _upoly_trim(c: list) -> list:
    while c and c[-1] == 0:
        c.pop()
    return c


def _upoly_content(c: list) -> int:
    g = 0
    for x in c:
        g = math.gcd(g, x)
        if g == 1:
            break
    return g


def _upoly_primitive(c: list) -> list:
    g = _upoly_content(c)
    if g in (0, 1):
        return c
    return [x // g for x in c]


def _upoly_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _upoly_trim(out)


def _upoly_gcd_z(a: list, b: list) -> list:
    """gcd of integer univariate polynomials (primitive PRS)."""
    a = _upoly_primitive(_upoly_trim(list(a)))
    b = _upoly_primitive(_upoly_trim(list(b)))
    if not a:
        return b
    if not b:
        return a
    while b:
        # pseudo-remainder of a by b
        r = list(a)
        d = len(b) - 1
        lb = b[-1]
        while len(r) - 1 >= d and r:
            k = len(r) - 1 - d
            lr = r[-1]
            r = [x * lb for x in r]
            for i, y in enumerate(b):
                r[k + i] -= lr * y
            r = _upoly_trim(r)
        a, b = b, _upoly_primitive(r)
    if a and a[-1] < 0:
        a = [-x for x in a]
    return a


def _qt_to_rec(p: LaurentQT):
    """Integer-cleared dict {(a,b): int} as list-of-t of lists-of-q."""
    den = 1
    for c in p.terms.values():
        if isinstance(c, Fraction):
            den = den * c.denominator // math.gcd(den, c.denominator)
    maxb = max(b for _, b in p.terms)
    maxa = max(a for a, _ in p.terms)
    rows = [[0] * (maxa + 1) for _ in range(maxb + 1)]
    for (a, b), c in p.terms.items():
        rows[b][a] = int(c * den)
    return [_upoly_trim(r) for r in rows]


def _rec_content(rows) -> list:
    g: list = []
    for r in rows:
        if r:
            g = _upoly_gcd_z(g, r)
            if g == [1]:
                break
    return g


def _rec_trim(rows):
    while rows and not rows[-1]:
        rows.pop()
    return rows


def _rec_scale_row(rows, c: list):
    return [_upoly_mul(r, c) if r else [] for r in rows]


def _rec_primitive(rows):
    g = _rec_content(rows)
    if not g or g == [1]:
        return rows, g
    out = []
    for r in rows:
        if not r:
            out.append([])
        else:
            q, rem = _upoly_divmod_exact(r, g)
            out.append(q)
    return out, g


def _upoly_divmod_exact(a: list, b: list):
    """Division in Q[q] returning (quotient, remainder) with exact ints where possible."""
    a = [Fraction(x) for x in a]
    bb = [Fraction(x) for x in b]
    q = [Fraction(0)] * max(len(a) - len(bb) + 1, 0)
    while len(a) >= len(bb) and any(a):
        while a and a[-1] == 0:
            a.pop()
        if len(a) < len(bb):
            break
        k = len(a) - len(bb)
        f = a[-1] / bb[-1]
        q[k] = f
        for i, y in enumerate(bb):
            a[k + i] -= f * y
        a.pop()
    qq = [_scal(x) for x in q]
    rr = [_scal(x) for x in a]
    return _upoly_trim(qq), _upoly_trim(rr)


def _rec_pseudo_rem(a, b):
    """Pseudo-remainder in (Q[q])[t]."""
    a = [list(r) for r in a]
    d = len(b) - 1
    lb = b[-1]
    while len(a) - 1 >= d and a:
        k = len(a) - 1 - d
        la = a[-1]
        a = _rec_scale_row(a, lb)
        for i, row in enumerate(b):
            if row:
                prod = _upoly_mul(la, row)
                tgt = a[k + i]
                out = [0] * max(len(tgt), len(prod))
                for j, x in enumerate(tgt):
                    out[j] += x
                for j, x in enumerate(prod):
                    out[j] -= x
                a[k + i] = _upoly_trim(out)
        a = _rec_trim(a)
    return a


def gcd_qt(p: LaurentQT, g: LaurentQT) -> LaurentQT:
    """gcd of two (non-Laurent) q,t-polynomials, primitive with positive lead."""
    if p.is_zero():
        return g
    if g.is_zero():
        return p
    a, ca = _rec_primitive(_qt_to_rec(p))
    b, cb = _rec_primitive(_qt_to_rec(g))
    cont = _upoly_gcd_z(ca, cb)
    while b and any(b):
        r = _rec_pseudo_rem(a, b)
        r, _ = _rec_primitive(_rec_trim(r))
        a, b = b, r
    a, _ = _rec_primitive(a)
    prim = cont if cont else [1]
    terms = {}
    for bexp, row in enumerate(a):
        for aexp, c in enumerate(row):
            if c:
                for ia, cc in enumerate(prim):
                    if cc:
                        key = (aexp + ia, bexp)
                        terms[key] = terms.get(key, 0) + c * cc
    out = LaurentQT(terms)
    # normalize sign on the lexicographically-leading term
    if out.terms:
        lead = max(out.terms)
        if out.terms[lead] < 0:
            out = -out
    return out


# ---------------------------------------------------------------------------
# RatQT: the field Q(q, t)
# ---------------------------------------------------------------------------


class RatQT:
    """Element of Q(q, t) as a reduced fraction of LaurentQT values.

    The denominator of a canonical value is a polynomial with exponents
    >= 0, minimal exponent (0, 0) in each variable it uses, integer
    content 1 and positive leading coefficient; num/den share no factor.
    Values with denominator 1 skip gcd work entirely.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentQT, den: LaurentQT = LQT_ONE, reduce=True):
        if den.is_zero():
            raise ZeroDivisionError("division by zero")
        if num.is_zero():
            self.num = LQT_ZERO
            self.den = LQT_ONE
            return
        if den.is_one():
            self.num = num
            self.den = LQT_ONE
            return
        if not reduce:
            self.num = num
            self.den = den
            return
        self.num, self.den = _reduce_qt(num, den)

    # -- helpers --------------------------------------------------------

    @staticmethod
    def from_int(n: int) -> "RatQT":
        return RatQT(LaurentQT.from_int(n))

    @staticmethod
    def monomial(coeff, a=0, b=0) -> "RatQT":
        return RatQT(LaurentQT.monomial(coeff, a, b))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def is_monomial(self) -> bool:
        return self.num.is_monomial() and self.den.is_monomial()

    def __bool__(self):
        return not self.num.is_zero()

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, int):
            other = RatQT.from_int(other)
        if self.den is other.den or self.den == other.den:
            return RatQT(self.num + other.num, self.den)
        return RatQT(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatQT(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        if isinstance(other, int):
            other = RatQT.from_int(other)
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        if isinstance(other, int):
            return RatQT(self.num * other, self.den)
        if self.den.is_one() and other.den.is_one():
            return RatQT(self.num * other.num, LQT_ONE, reduce=False)
        return RatQT(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, int):
            other = RatQT.from_int(other)
        if other.num.is_zero():
            raise ZeroDivisionError("division by zero")
        return RatQT(self.num * other.den, self.den * other.num)

    def inverse(self) -> "RatQT":
        if self.num.is_zero():
            raise ZeroDivisionError("division by zero")
        return RatQT(self.den, self.num)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = RATQT_ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = RatQT.from_int(other)
        if not isinstance(other, RatQT):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        n, d = _reduce_qt(self.num, self.den) if not self.den.is_one() else (self.num, self.den)
        return hash((frozenset(n.terms.items()), frozenset(d.terms.items())))

    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    __repr__ = __str__


def _reduce_qt(num: LaurentQT, den: LaurentQT):
    """Canonical form of num/den; see RatQT docstring."""
    # extract monomial content so both sides are ordinary polynomials
    na, nb = num.min_exponents()
    da, db = den.min_exponents()
    num = num.shift(-na, -nb)
    den = den.shift(-da, -db)
    g = gcd_qt(num, den)
    if not g.is_one() and not (g.is_monomial() and g.terms.get((0, 0)) == 1):
        nq = _qt_divexact(num, g)
        dq = _qt_divexact(den, g)
        if nq is not None and dq is not None:
            num, den = nq, dq
    # scalar normalization: den integer content 1, positive leading coeff
    c = den.int_content()
    lead = max(den.terms)
    if den.terms[lead] < 0:
        c = -c
    if c != 1:
        den = den.divexact_scalar(c)
        num = num.divexact_scalar(c)
    num = num.shift(na - da, nb - db)
    return num, den


def _qt_divexact(p: LaurentQT, g: LaurentQT) -> LaurentQT | None:
    """Exact polynomial quotient p/g, or None."""
    if g.is_one():
        return p
    if g.is_monomial():
        (a, b), c = next(iter(g.terms.items()))
        return p.shift(-a, -b).divexact_scalar(c)
    # long division in t with coefficients in Q[q] handled recursively
    rem = {e: Fraction(c) for e, c in p.terms.items()}
    out = {}
    glead = max(g.terms, key=lambda e: (e[1], e[0]))
    gl = g.terms[glead]
    while rem:
        rlead = max(rem, key=lambda e: (e[1], e[0]))
        ea, eb = rlead[0] - glead[0], rlead[1] - glead[1]
        if ea < 0 or eb < 0:
            return None
        f = rem[rlead] / gl
        out[(ea, eb)] = out.get((ea, eb), 0) + f
        for (ga, gb), gc in g.terms.items():
            key = (ga + ea, gb + eb)
            v = rem.get(key, Fraction(0)) - f * gc
            if v:
                rem[key] = v
            elif key in rem:
                del rem[key]
    return LaurentQT(out)


RATQT_ZERO = RatQT(LQT_ZERO)
RATQT_ONE = RatQT(LQT_ONE)


def normalize(f: RatQT) -> RatQT:
    """Return the canonical representative of f (idempotent)."""
    if f.den.is_one():
        return f
    num, den = _reduce_qt(f.num, f.den)
    return RatQT(num, den, reduce=False)


# ---------------------------------------------------------------------------
# Cyclotomic scalar domain Q(zeta_m)
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple:
    """Coefficients of the m-th cyclotomic polynomial (constant first)."""
    if m < 1:
        raise ValueError("cyclotomic index must be positive")
    poly = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            q, r = _upoly_divmod_exact(poly, list(cyclotomic_poly(d)))
            assert not r
            poly = q
    return tuple(int(c) for c in poly)


@lru_cache(maxsize=None)
def _cyc_domain(m: int) -> "CycDomain":
    return CycDomain(m)


class CycDomain:
    """Arithmetic in Q(zeta_m) = Q[z]/Phi_m(z), for m >= 3."""

    def __init__(self, m: int):
        self.m = m
        self.phi = cyclotomic_poly(m)
        self.deg = len(self.phi) - 1
        # reduction table: z^k mod Phi_m for k = deg .. 2*deg-2
        table = []
        power = [Fraction(0)] * self.deg
        # z^deg = -(phi[0] + ... + phi[deg-1] z^{deg-1}) / phi[deg]; phi is monic
        power = [Fraction(-c) for c in self.phi[:-1]]
        table.append(tuple(power))
        for _ in range(self.deg - 2):
            nxt = [Fraction(0)] * self.deg
            carry = power[-1]
            for i in range(self.deg - 1, 0, -1):
                nxt[i] = power[i - 1]
            for i in range(self.deg):
                nxt[i] += carry * table[0][i]
            power = nxt
            table.append(tuple(power))
        self.ztable = table

    def reduce(self, vec):
        """Reduce a coefficient list of length <= 2*deg-1 modulo Phi_m."""
        deg = self.deg
        out = [Fraction(x) for x in vec[:deg]] + [Fraction(0)] * max(0, deg - len(vec))
        for k in range(deg, len(vec)):
            c = vec[k]
            if c:
                row = self.ztable[k - deg]
                for i in range(deg):
                    out[i] += c * row[i]
        return tuple(out)

    def zeta_pow(self, k: int) -> "CycNum":
        k %= self.m
        vec = [Fraction(0)] * max(self.deg, k + 1)
        vec[k] = Fraction(1)
        return CycNum(self, self.reduce(vec))


class CycNum:
    """Element of Q(zeta_m) for m >= 3 (m <= 2 uses plain rationals)."""

    __slots__ = ("dom", "vec")

    def __init__(self, dom: CycDomain, vec):
        self.dom = dom
        self.vec = tuple(Fraction(x) for x in vec)

    @staticmethod
    def from_rational(dom: CycDomain, x) -> "CycNum":
        vec = [Fraction(x)] + [Fraction(0)] * (dom.deg - 1)
        return CycNum(dom, vec)

    def is_zero(self):
        return all(x == 0 for x in self.vec)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.vec[0] == other and all(x == 0 for x in self.vec[1:])
        if not isinstance(other, CycNum):
            return NotImplemented
        return self.vec == other.vec

    def __hash__(self):
        return hash(self.vec)

    def _coerce(self, other):
        if isinstance(other, (int, Fraction)):
            return CycNum.from_rational(self.dom, other)
        return other

    def __add__(self, other):
        other = self._coerce(other)
        return CycNum(self.dom, [a + b for a, b in zip(self.vec, other.vec)])

    __radd__ = __add__

    def __neg__(self):
        return CycNum(self.dom, [-a for a in self.vec])

    def __sub__(self, other):
        other = self._coerce(other)
        return CycNum(self.dom, [a - b for a, b in zip(self.vec, other.vec)])

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycNum(self.dom, [a * other for a in self.vec])
        conv = [Fraction(0)] * (2 * self.dom.deg - 1)
        for i, a in enumerate(self.vec):
            if a:
                for j, b in enumerate(other.vec):
                    if b:
                        conv[i + j] += a * b
        return CycNum(self.dom, self.dom.reduce(conv))

    __rmul__ = __mul__

    def inverse(self) -> "CycNum":
        """Inverse via the extended Euclid algorithm in Q[z] mod Phi_m."""
        if self.is_zero():
            raise ZeroDivisionError("division by zero")
        r0 = [Fraction(c) for c in self.dom.phi]
        r1 = list(self.vec)
        while r1 and r1[-1] == 0:
            r1.pop()
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1 or (len(r1) == 1 and False):
            q, r = _frac_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _frac_sub(s0, _frac_mul(q, s1))
            if len(r1) <= 1:
                break
        if not r1:
            raise ZeroDivisionError("division by zero")
        c = r1[0]
        inv = [x / c for x in s1]
        return CycNum(self.dom, self.dom.reduce(inv))

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse()

    def __lt__(self, other):  # only used for canonical sign choices
        return self.vec < self._coerce(other).vec

    def __str__(self):
        parts = []
        for i, c in enumerate(self.vec):
            if c == 0:
                continue
            mono = "1" if i == 0 else ("z" if i == 1 else f"z^{i}")
            parts.append(f"{c}*{mono}" if i else f"{c}")
        return " + ".join(parts) if parts else "0"

    __repr__ = __str__


def _frac_divmod(a, b):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while a and len(a) >= len(b):
        if a[-1] == 0:
            a.pop()
            continue
        k = len(a) - len(b)
        f = a[-1] / b[-1]
        q[k] = f
        for i, y in enumerate(b):
            a[k + i] -= f * y
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return q, a


def _frac_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _frac_sub(a, b):
    out = [Fraction(0)] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] -= x
    while out and out[-1] == 0:
        out.pop()
    return out


# ---------------------------------------------------------------------------
# Specializations t = u^b, q = zeta_m^e * u^-a
# ---------------------------------------------------------------------------


_SPEC_RE = re.compile(
    r"^\s*t\s*=\s*u\s*\^\s*(-?\d+)\s*;\s*q\s*=\s*"
    r"(?:zeta\(\s*(\d+)\s*,\s*(-?\d+)\s*\)\s*\*\s*)?u\s*\^\s*(-?\d+)\s*$"
)


@dataclass(frozen=True)
class SpecQT:
    """The substitution t = u^b, q = zeta_m^e * u^-a.

    For an (s, l)-admissible specialization b = (s-1)/g and a = (l+1)/g
    with g = gcd(l+1, s-1), and zeta_m^(e*b) is a primitive g-th root of
    unity.  The type itself also hosts non-admissible substitutions such
    as q = -t (a = -b with m = 2), which several corpus cases use.
    """

    b: int
    a: int
    m: int = 1
    e: int = 0

    def __post_init__(self):
        if self.b < 0:
            raise ValueError("t-exponent b must be nonnegative")
        if self.m < 1:
            raise ValueError("root order m must be positive")
        object.__setattr__(self, "e", self.e % self.m)

    @staticmethod
    def admissible(s: int, l: int) -> "SpecQT":
        """The canonical (s, l)-admissible specialization with minimal m."""
        if s < 2 or l < 1:
            raise ValueError("need s >= 2 and l >= 1")
        g = math.gcd(l + 1, s - 1)
        b = (s - 1) // g
        a = (l + 1) // g
        d = 1
        while math.gcd(g, b // d) > 1:
            d *= math.gcd(g, b // d)
        m = g * d
        return SpecQT(b=b, a=a, m=m, e=1 if m > 1 else 0)

    def is_admissible_for(self, s: int, l: int) -> bool:
        g = math.gcd(l + 1, s - 1)
        if self.b != (s - 1) // g or self.a != (l + 1) // g:
            return False
        # omega^b must have exact order g
        k = (self.e * self.b) % self.m
        order = self.m // math.gcd(self.m, k) if k else 1
        return order == g

    @property
    def omega_is_one(self) -> bool:
        return self.e % self.m == 0

    def __str__(self):
        if self.m == 1 and self.e == 0:
            qpart = f"u^-{self.a}" if self.a >= 0 else f"u^{-self.a}"
        else:
            upart = f"u^-{self.a}" if self.a >= 0 else f"u^{-self.a}"
            qpart = f"zeta({self.m},{self.e})*{upart}"
        return f"t=u^{self.b}; q={qpart}"

    @staticmethod
    def parse(text: str) -> "SpecQT":
        m = _SPEC_RE.match(text)
        if not m:
            raise ValueError(f"malformed specialization string {text!r}")
        b = int(m.group(1))
        order = int(m.group(2)) if m.group(2) else 1
        e = int(m.group(3)) if m.group(3) else 0
        uexp = m.group(4)
        # grammar is `u^-A`; a signed A (`u^--1` or plain `u^3`) is accepted
        a = -int(uexp)
        return SpecQT(b=b, a=a, m=order, e=e)


# ---------------------------------------------------------------------------
# LaurentU: dense Laurent polynomials in u over Q(zeta_m)
# ---------------------------------------------------------------------------


class LaurentU:
    """u^shift * (c_0 + c_1 u + ... ), ends nonzero; () is the zero poly."""

    __slots__ = ("shift", "coeffs")

    def __init__(self, shift: int, coeffs: tuple):
        self.shift = shift
        self.coeffs = coeffs

    @staticmethod
    def make(shift: int, coeffs) -> "LaurentU":
        coeffs = list(coeffs)
        lead = 0
        while coeffs and _is_zero_scalar(coeffs[-1]):
            coeffs.pop()
        while coeffs and _is_zero_scalar(coeffs[0]):
            coeffs.pop(0)
            lead += 1
        if not coeffs:
            return LU_ZERO
        return LaurentU(shift + lead, tuple(coeffs))

    @staticmethod
    def monomial(coeff, k: int = 0) -> "LaurentU":
        if _is_zero_scalar(coeff):
            return LU_ZERO
        return LaurentU(k, (_scal(coeff),))

    @staticmethod
    def from_int(n: int) -> "LaurentU":
        return LaurentU.monomial(n, 0)

    def is_zero(self):
        return not self.coeffs

    def is_one(self):
        return self.shift == 0 and self.coeffs == (1,)

    def is_monomial(self):
        return len(self.coeffs) == 1

    def __bool__(self):
        return bool(self.coeffs)

    def degree(self):
        return self.shift + len(self.coeffs) - 1

    def __eq__(self, other):
        if isinstance(other, int):
            if other == 0:
                return not self.coeffs
            return self.shift == 0 and self.coeffs == (other,)
        if not isinstance(other, LaurentU):
            return NotImplemented
        return self.shift == other.shift and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.shift, self.coeffs))

    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentU.from_int(other)
        if not self.coeffs:
            return other
        if not other.coeffs:
            return self
        lo = min(self.shift, other.shift)
        hi = max(self.shift + len(self.coeffs), other.shift + len(other.coeffs))
        out = [0] * (hi - lo)
        for i, c in enumerate(self.coeffs):
            out[self.shift - lo + i] = c
        for i, c in enumerate(other.coeffs):
            out[other.shift - lo + i] += c
        return LaurentU.make(lo, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentU(self.shift, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentU.from_int(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return LU_ZERO
            return LaurentU(self.shift, tuple(_scal(c * other) for c in self.coeffs))
        if isinstance(other, CycNum):
            if other.is_zero():
                return LU_ZERO
            return LaurentU(self.shift, tuple(c * other for c in self.coeffs))
        if not isinstance(other, LaurentU):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return LU_ZERO
        a, b = self.coeffs, other.coeffs
        if len(a) == 1:
            return LaurentU(self.shift + other.shift, tuple(a[0] * c for c in b))
        if len(b) == 1:
            return LaurentU(self.shift + other.shift, tuple(b[0] * c for c in a))
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if not _is_zero_scalar(x):
                for j, y in enumerate(b):
                    out[i + j] = out[i + j] + x * y
        return LaurentU.make(self.shift + other.shift, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a LaurentU; use CycloU")
        out = LU_ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def shifted(self, k: int) -> "LaurentU":
        """Multiply by u^k (O(1))."""
        if not self.coeffs:
            return self
        return LaurentU(self.shift + k, self.coeffs)

    def int_content(self):
        num = 0
        den = 1
        for c in self.coeffs:
            if isinstance(c, Fraction):
                num = math.gcd(num, c.numerator)
                den = den * c.denominator // math.gcd(den, c.denominator)
            elif isinstance(c, int):
                num = math.gcd(num, c)
            else:
                return None  # cyclotomic coefficients: skip integer content
        return Fraction(num, den)

    def divexact_scalar(self, s) -> "LaurentU":
        if isinstance(s, CycNum):
            inv = s.inverse()
        else:
            inv = Fraction(1) / Fraction(s)
        return LaurentU(self.shift, tuple(_scal(c * inv) for c in self.coeffs))

    def divexact_binomial(self, c: int, scale) -> "LaurentU | None":
        """Exact quotient by (1 - scale * u^c) with c > 0, or None."""
        if not self.coeffs:
            return self
        n = len(self.coeffs)
        if n <= c:
            return None
        out = list(self.coeffs[: n - c])
        for i in range(c, n - c):
            out[i] = out[i] + scale * out[i - c]
        # the top c chain values must die: 0 = f_i + scale * g_{i-c}
        for i in range(n - c, n):
            prev = out[i - c] if i >= c else 0
            if self.coeffs[i] + scale * prev != 0:
                return None
        return LaurentU.make(self.shift, out)

    def value_at_one(self):
        acc = None
        for c in self.coeffs:
            acc = c if acc is None else acc + c
        return acc if acc is not None else 0

    def div_u_minus_one(self) -> "LaurentU | None":
        """Exact quotient by (u - 1), ignoring the u^shift unit; None if f(1) != 0."""
        if not self.coeffs:
            return self
        # synthetic division of the polynomial part by (u - 1)
        rem = 0
        out = []
        for c in reversed(self.coeffs):
            rem = rem + c
            out.append(rem)
        top = out.pop()
        if not _is_zero_scalar(top):
            return None
        out.reverse()
        return LaurentU.make(self.shift, out)

    def order_at_one(self) -> int:
        """Multiplicity of the root u = 1."""
        k = 0
        cur = self
        while cur.coeffs:
            nxt = cur.div_u_minus_one()
            if nxt is None:
                return k
            k += 1
            cur = nxt
        return k

    def subs_value(self, val, zero=0):
        """Evaluate at u -> val; val must support ** with the stored shift."""
        acc = zero
        for c in reversed(self.coeffs):
            acc = acc * val + c
        if self.shift:
            acc = acc * val ** self.shift
        return acc

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if _is_zero_scalar(c):
                continue
            k = self.shift + i
            mono = "" if k == 0 else ("u" if k == 1 else f"u^{k}")
            if isinstance(c, CycNum):
                body = f"({c})" + ("*" + mono if mono else "")
                parts.append((" + " if parts else "") + body)
                continue
            neg = c < 0
            mag = abs(c)
            if not mono:
                body = _scal_str(mag)
            elif mag == 1:
                body = mono
            else:
                body = _scal_str(mag) + "*" + mono
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts) if parts else "0"

    __repr__ = __str__

    @staticmethod
    def parse(text: str) -> "LaurentU":
        lq = _parse_laurent(text, ("u",))
        terms = {k[0]: c for k, c in lq.terms.items()}
        if not terms:
            return LU_ZERO
        lo = min(terms)
        hi = max(terms)
        return LaurentU.make(lo, [terms.get(k, 0) for k in range(lo, hi + 1)])


def _is_zero_scalar(c) -> bool:
    if isinstance(c, CycNum):
        return c.is_zero()
    return c == 0


LU_ZERO = LaurentU(0, ())
LU_ONE = LaurentU(0, (1,))


# ---------------------------------------------------------------------------
# CycloU: the field Q(zeta_m)(u)
# ---------------------------------------------------------------------------


class CycloU:
    """Element of Q(zeta_m)(u) as a reduced fraction of LaurentU values."""

    __slots__ = ("num", "den", "m")

    def __init__(self, num: LaurentU, den: LaurentU = LU_ONE, m: int = 1, reduce=True):
        if den.is_zero():
            raise ZeroDivisionError("division by zero")
        self.m = m
        if num.is_zero():
            self.num = LU_ZERO
            self.den = LU_ONE
            return
        if den.is_one():
            self.num = num
            self.den = LU_ONE
            return
        if not reduce:
            self.num = num
            self.den = den
            return
        self.num, self.den = _reduce_u(num, den)

    @staticmethod
    def from_int(n: int, m: int = 1) -> "CycloU":
        return CycloU(LaurentU.from_int(n), m=m)

    def is_zero(self):
        return self.num.is_zero()

    def is_one(self):
        return self.num.is_one() and self.den.is_one()

    def is_monomial(self):
        return self.num.is_monomial() and self.den.is_monomial()

    def __bool__(self):
        return not self.num.is_zero()

    def __add__(self, other):
        if isinstance(other, int):
            other = CycloU.from_int(other, self.m)
        if self.den is other.den or self.den == other.den:
            return CycloU(self.num + other.num, self.den, self.m)
        return CycloU(self.num * other.den + other.num * self.den,
                      self.den * other.den, self.m)

    __radd__ = __add__

    def __neg__(self):
        return CycloU(-self.num, self.den, self.m, reduce=False)

    def __sub__(self, other):
        if isinstance(other, int):
            other = CycloU.from_int(other, self.m)
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        if isinstance(other, int):
            return CycloU(self.num * other, self.den, self.m)
        if self.den.is_one() and other.den.is_one():
            return CycloU(self.num * other.num, LU_ONE, self.m, reduce=False)
        return CycloU(self.num * other.num, self.den * other.den, self.m)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, int):
            other = CycloU.from_int(other, self.m)
        if other.num.is_zero():
            raise ZeroDivisionError("division by zero")
        return CycloU(self.num * other.den, self.den * other.num, self.m)

    def inverse(self) -> "CycloU":
        if self.num.is_zero():
            raise ZeroDivisionError("division by zero")
        return CycloU(self.den, self.num, self.m)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = CycloU.from_int(1, self.m)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = CycloU.from_int(other, self.m)
        if not isinstance(other, CycloU):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        n, d = _reduce_u(self.num, self.den) if not self.den.is_one() else (self.num, self.den)
        return hash((n.shift, n.coeffs, d.shift, d.coeffs))

    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    __repr__ = __str__


def _lu_gcd(a: LaurentU, b: LaurentU) -> LaurentU:
    """Monic gcd of the polynomial parts (shift/units discarded)."""
    a = LaurentU(0, a.coeffs)
    b = LaurentU(0, b.coeffs)
    while b.coeffs:
        a, b = b, _lu_rem(a, b)
    return a

def _lu_rem(a: LaurentU, b: LaurentU) -> LaurentU:
    bl = b.coeffs[-1]
    binv = bl.inverse() if isinstance(bl, CycNum) else Fraction(1) / Fraction(bl)
    rem = list(a.coeffs)
    nb = len(b.coeffs)
    while len(rem) >= nb and rem:
        f = rem[-1] * binv
        k = len(rem) - nb
        for i, y in enumerate(b.coeffs):
            rem[k + i] = rem[k + i] - f * y
        rem.pop()
        while rem and _is_zero_scalar(rem[-1]):
            rem.pop()
    return LaurentU.make(0, rem)


def _reduce_u(num: LaurentU, den: LaurentU):
    shift = num.shift - den.shift
    num = LaurentU(0, num.coeffs)
    den = LaurentU(0, den.coeffs)
    if len(den.coeffs) > 1 and len(num.coeffs) > 1:
        g = _lu_gcd(num, den)
        if len(g.coeffs) > 1:
            num = _lu_quo(num, g)
            den = _lu_quo(den, g)
    # scalar normalization on the denominator
    lead = den.coeffs[-1]
    ic = den.int_content()
    if isinstance(lead, CycNum) or ic is None:
        c = lead
    else:
        c = -ic if lead < 0 else ic
    if c != 1:
        num = num.divexact_scalar(c)
        den = den.divexact_scalar(c)
    return num.shifted(shift), den


def _lu_quo(a: LaurentU, b: LaurentU) -> LaurentU:
    bl = b.coeffs[-1]
    binv = bl.inverse() if isinstance(bl, CycNum) else Fraction(1) / Fraction(bl)
    rem = list(a.coeffs)
    nb = len(b.coeffs)
    out = [0] * (len(rem) - nb + 1)
    while len(rem) >= nb and rem:
        f = rem[-1] * binv
        k = len(rem) - nb
        out[k] = _scal(f) if not isinstance(f, CycNum) else f
        for i, y in enumerate(b.coeffs):
            rem[k + i] = rem[k + i] - f * y
        rem.pop()
        while rem and _is_zero_scalar(rem[-1]):
            rem.pop()
    return LaurentU.make(a.shift, out)


# ---------------------------------------------------------------------------
# specialize and the u -> 1 limit
# ---------------------------------------------------------------------------


def spec_laurent(p: LaurentQT, spec: SpecQT) -> LaurentU:
    """Apply t -> u^b, q -> zeta_m^e u^-a to a LaurentQT (ring morphism)."""
    if not p.terms:
        return LU_ZERO
    dom = _cyc_domain(spec.m) if spec.m > 2 else None
    acc = {}
    for (a, b), c in p.terms.items():
        k = -spec.a * a + spec.b * b
        if spec.m == 2 and (spec.e * a) % 2:
            c = -c
        elif dom is not None:
            c = dom.zeta_pow(spec.e * a) * c
        cur = acc.get(k)
        acc[k] = c if cur is None else cur + c
    acc = {k: c for k, c in acc.items() if not _is_zero_scalar(c)}
    if not acc:
        return LU_ZERO
    lo, hi = min(acc), max(acc)
    return LaurentU.make(lo, [acc.get(k, 0) for k in range(lo, hi + 1)])


def specialize(f: RatQT, spec: SpecQT) -> CycloU:
    """Specialize a rational function; raises PoleError on a vanishing denominator."""
    f = normalize(f)
    den = spec_laurent(f.den, spec)
    if den.is_zero():
        raise PoleError("specialization pole")
    return CycloU(spec_laurent(f.num, spec), den, spec.m)


def limit_at_one(f: CycloU):
    """lim_{u->1} f, exactly; raises PoleError with "pole at u=1" on a pole.

    Returns a Fraction for m <= 2, a CycNum for m >= 3.
    """
    num, den = f.num, f.den
    if num.is_zero():
        return Fraction(0) if f.m <= 2 else CycNum.from_rational(_cyc_domain(f.m), 0)
    while True:
        nv = num.value_at_one()
        dv = den.value_at_one()
        if not _is_zero_scalar(dv):
            if f.m <= 2 and not isinstance(nv, CycNum) and not isinstance(dv, CycNum):
                return Fraction(nv) / Fraction(dv)
            dom = _cyc_domain(f.m)
            nvc = nv if isinstance(nv, CycNum) else CycNum.from_rational(dom, nv)
            dvc = dv if isinstance(dv, CycNum) else CycNum.from_rational(dom, dv)
            return nvc / dvc
        if not _is_zero_scalar(nv):
            raise PoleError("pole at u=1")
        num2 = num.div_u_minus_one()
        den2 = den.div_u_minus_one()
        if num2 is None or den2 is None:
            raise PoleError("pole at u=1")
        num, den = num2, den2
