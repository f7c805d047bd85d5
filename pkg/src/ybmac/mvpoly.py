"""Sparse multivariate Laurent polynomials, generic over the coefficient field.

An MPoly stores a field descriptor, an ordered variable tuple, and a map
from exponent tuples to nonzero coefficients.  Three fields are provided:

* ``QT``          -- generic Q(q, t) with RatQT coefficients
* ``cyclo(spec)`` -- Q(zeta_m)(u) after a SpecQT substitution
* ``QQ_FIELD``    -- plain rationals (Jack limits)

Printed and JSON output iterate terms in sorted exponent order so results
are reproducible byte for byte.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Optional

from .coeffs import (
    CycloU,
    LaurentQT,
    LaurentU,
    RatQT,
    SpecQT,
    LQT_ONE,
    LU_ONE,
    _cyc_domain,
    spec_laurent,
)

MAX_ARITY = 12


class QTField:
    """Descriptor for the generic bivariate field Q(q, t)."""

    key = ("qt",)
    scalar_names = ("q", "t")

    def __init__(self):
        self.zero = RatQT.from_int(0)
        self.one = RatQT.from_int(1)

    def from_int(self, n: int) -> RatQT:
        return RatQT.from_int(n)

    def from_fraction(self, x: Fraction) -> RatQT:
        return RatQT(LaurentQT.monomial(x))

    def qt_monomial(self, c, a: int = 0, b: int = 0) -> RatQT:
        return RatQT.monomial(c, a, b)

    def var_scalar(self, name: str):
        if name == "q":
            return self.qt_monomial(1, 1, 0)
        if name == "t":
            return self.qt_monomial(1, 0, 1)
        return None

    def mul_t(self, x: RatQT, k: int) -> RatQT:
        return RatQT(x.num.shift(0, k), x.den, reduce=False)

    def mul_q(self, x: RatQT, k: int) -> RatQT:
        return RatQT(x.num.shift(k, 0), x.den, reduce=False)

    def coeff_json(self, c: RatQT):
        return {"num": str(c.num), "den": str(c.den)}

    def coeff_from_json(self, d) -> RatQT:
        return RatQT(LaurentQT.parse(d["num"]), LaurentQT.parse(d["den"]))

    def coeff_str(self, c: RatQT) -> str:
        return str(c)

    def __repr__(self):
        return "QT"


class CycloField:
    """Descriptor for Q(zeta_m)(u) under a fixed SpecQT substitution."""

    scalar_names = ("q", "t", "u")

    def __init__(self, spec: SpecQT):
        self.spec = spec
        self.key = ("cyclo", spec.b, spec.a, spec.m, spec.e)
        self.m = spec.m
        self.zero = CycloU.from_int(0, spec.m)
        self.one = CycloU.from_int(1, spec.m)
        self._dom = _cyc_domain(spec.m) if spec.m > 2 else None

    def from_int(self, n: int) -> CycloU:
        return CycloU.from_int(n, self.m)

    def from_fraction(self, x: Fraction) -> CycloU:
        return CycloU(LaurentU.monomial(x), m=self.m)

    def u_monomial(self, c, k: int = 0) -> CycloU:
        return CycloU(LaurentU.monomial(c, k), m=self.m)

    def qt_monomial(self, c, a: int = 0, b: int = 0) -> CycloU:
        num = spec_laurent(LaurentQT.monomial(c, a, b), self.spec)
        return CycloU(num, m=self.m)

    def var_scalar(self, name: str):
        if name == "q":
            return self.qt_monomial(1, 1, 0)
        if name == "t":
            return self.qt_monomial(1, 0, 1)
        if name == "u":
            return self.u_monomial(1, 1)
        return None

    def mul_t(self, x: CycloU, k: int) -> CycloU:
        return CycloU(x.num.shifted(self.spec.b * k), x.den, self.m, reduce=False)

    def mul_q(self, x: CycloU, k: int) -> CycloU:
        num = x.num.shifted(-self.spec.a * k)
        ek = (self.spec.e * k) % self.m if self.m > 1 else 0
        if ek:
            if self.m == 2:
                num = -num
            else:
                num = num * self._dom.zeta_pow(ek)
        return CycloU(num, x.den, self.m, reduce=False)

    def coeff_json(self, c: CycloU):
        return {"num": str(c.num), "den": str(c.den)}

    def coeff_from_json(self, d) -> CycloU:
        return CycloU(LaurentU.parse(d["num"]), LaurentU.parse(d["den"]), self.m)

    def coeff_str(self, c: CycloU) -> str:
        return str(c)

    def __repr__(self):
        return f"Cyclo({self.spec})"


class QQField:
    """Descriptor for plain rational coefficients (Jack polynomials)."""

    key = ("rational",)
    scalar_names = ()

    zero = Fraction(0)
    one = Fraction(1)

    def from_int(self, n: int) -> Fraction:
        return Fraction(n)

    def from_fraction(self, x: Fraction) -> Fraction:
        return Fraction(x)

    def qt_monomial(self, c, a: int = 0, b: int = 0):
        raise TypeError("rational field has no q, t scalars")

    def var_scalar(self, name: str):
        return None

    def mul_t(self, x, k):
        raise TypeError("rational field has no q, t scalars")

    mul_q = mul_t

    def coeff_json(self, c: Fraction):
        return {"num": str(c.numerator), "den": str(c.denominator)}

    def coeff_from_json(self, d) -> Fraction:
        return Fraction(int(d["num"]), int(d["den"]))

    def coeff_str(self, c: Fraction) -> str:
        return str(c)

    def __repr__(self):
        return "QQ"


QT = QTField()
QQ_FIELD = QQField()


@lru_cache(maxsize=None)
def cyclo(spec: SpecQT) -> CycloField:
    return CycloField(spec)


def field_for(spec: Optional[SpecQT]):
    return QT if spec is None else cyclo(spec)


class Letter(NamedTuple):
    """One alphabet entry: a nonzero scale times an optional variable."""

    scale: object
    var: Optional[str]


def default_vars(n: int) -> tuple[str, ...]:
    return tuple(f"x{i}" for i in range(1, n + 1))


class MPoly:
    """Sparse multivariate Laurent polynomial over a coefficient field."""

    __slots__ = ("field", "vars", "terms")

    def __init__(self, field, vars, terms, _trusted=False):
        self.field = field
        self.vars = tuple(vars)
        if len(self.vars) != len(set(self.vars)):
            raise ValueError("variable names must be distinct")
        if _trusted:
            self.terms = terms
        else:
            self.terms = {tuple(e): c for e, c in terms.items() if c}

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero(field, vars) -> "MPoly":
        return MPoly(field, vars, {}, _trusted=True)

    @staticmethod
    def constant(field, vars, c) -> "MPoly":
        vars = tuple(vars)
        if not c:
            return MPoly.zero(field, vars)
        return MPoly(field, vars, {(0,) * len(vars): c}, _trusted=True)

    @staticmethod
    def one(field, vars) -> "MPoly":
        return MPoly.constant(field, vars, field.one)

    @staticmethod
    def variable(field, vars, name) -> "MPoly":
        vars = tuple(vars)
        e = [0] * len(vars)
        e[vars.index(name)] = 1
        return MPoly(field, vars, {tuple(e): field.one}, _trusted=True)

    # -- structure --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def nnz(self) -> int:
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, MPoly):
            return NotImplemented
        if self.vars != other.vars:
            return False
        if set(self.terms) != set(other.terms):
            return False
        return all(self.terms[e] == other.terms[e] for e in self.terms)

    def __hash__(self):  # pragma: no cover - not used as dict keys
        return hash((self.vars, frozenset(self.terms)))

    def leading_exponent(self):
        """Exponent maximal by (total degree, exponent tuple)."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return max(self.terms, key=lambda e: (sum(e), e))

    def coefficient(self, exps):
        return self.terms.get(tuple(exps))

    def total_degree(self) -> int:
        if not self.terms:
            raise ValueError("undefined degree")
        return max(sum(e) for e in self.terms)

    # -- arithmetic --------------------------------------------------------

    def _check_compat(self, other):
        if self.vars != other.vars:
            raise ValueError(
                f"mismatched variable sets {self.vars} vs {other.vars}"
            )

    def __add__(self, other):
        self._check_compat(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            cur = out.get(e)
            if cur is None:
                out[e] = c
            else:
                s = cur + c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return MPoly(self.field, self.vars, out, _trusted=True)

    def __neg__(self):
        return MPoly(
            self.field, self.vars, {e: -c for e, c in self.terms.items()}, _trusted=True
        )

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            return self.scalar_mul(other)
        self._check_compat(other)
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                p = c1 * c2
                cur = out.get(e)
                if cur is None:
                    if p:
                        out[e] = p
                else:
                    s = cur + p
                    if s:
                        out[e] = s
                    else:
                        del out[e]
        return MPoly(self.field, self.vars, out, _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative polynomial power")
        out = MPoly.one(self.field, self.vars)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def scalar_mul(self, c) -> "MPoly":
        if not c:
            return MPoly.zero(self.field, self.vars)
        return MPoly(
            self.field, self.vars, {e: k * c for e, k in self.terms.items()}, _trusted=True
        )

    def scalar_div(self, c) -> "MPoly":
        if not c:
            raise ZeroDivisionError("division by zero")
        inv = self.field.one / c
        return self.scalar_mul(inv)

    def map_coefficients(self, fn, field=None) -> "MPoly":
        out = {}
        for e, c in self.terms.items():
            v = fn(c)
            if v:
                out[e] = v
        return MPoly(field or self.field, self.vars, out, _trusted=True)

    # -- queries -------------------------------------------------------------

    def is_homogeneous(self) -> Optional[int]:
        """Total degree if homogeneous, None otherwise; error on zero."""
        if not self.terms:
            raise ValueError("undefined degree")
        it = iter(self.terms)
        d = sum(next(it))
        for e in it:
            if sum(e) != d:
                return None
        return d

    def top_component(self) -> "MPoly":
        """The homogeneous component of maximal total degree."""
        d = self.total_degree()
        return MPoly(
            self.field,
            self.vars,
            {e: c for e, c in self.terms.items() if sum(e) == d},
            _trusted=True,
        )

    def swap_vars(self, i: int, j: int) -> "MPoly":
        """Image under exchanging the variables in slots i and j (0-based)."""
        out = {}
        for e, c in self.terms.items():
            if e[i] != e[j]:
                le = list(e)
                le[i], le[j] = le[j], le[i]
                e = tuple(le)
            out[e] = c
        return MPoly(self.field, self.vars, out, _trusted=True)

    def is_symmetric(self) -> bool:
        n = len(self.vars)
        return all(self.swap_vars(i, i + 1) == self for i in range(n - 1))

    # -- substitution -----------------------------------------------------------

    def substitute(self, letters) -> "MPoly":
        """Replace slot i by letters[i] = scale * var (or a constant letter).

        The result lives on the ordered set of variables appearing among
        the letters.  Negative exponents require invertible scales.
        """
        letters = list(letters)
        if len(letters) != len(self.vars):
            raise ValueError(
                f"alphabet has {len(letters)} letters for {len(self.vars)} slots"
            )
        new_vars: list[str] = []
        for lt in letters:
            if not lt.scale:
                raise ValueError("letter scales must be nonzero")
            if lt.var is not None and lt.var not in new_vars:
                new_vars.append(lt.var)
        new_vars = tuple(new_vars)
        slot = {v: k for k, v in enumerate(new_vars)}
        field = self.field
        one = field.one
        # cache powers of each letter scale
        pow_cache: list[dict[int, object]] = [dict() for _ in letters]

        def scale_pow(i, k):
            cache = pow_cache[i]
            v = cache.get(k)
            if v is None:
                base = letters[i].scale
                v = base ** k if k >= 0 else (one / base) ** (-k)
                cache[k] = v
            return v

        out: dict[tuple, object] = {}
        width = len(new_vars)
        for e, c in self.terms.items():
            newe = [0] * width
            coeff = c
            for i, k in enumerate(e):
                if k == 0:
                    continue
                lt = letters[i]
                if lt.var is not None:
                    newe[slot[lt.var]] += k
                if lt.scale != 1:
                    coeff = coeff * scale_pow(i, k)
            key = tuple(newe)
            cur = out.get(key)
            if cur is None:
                if coeff:
                    out[key] = coeff
            else:
                s = cur + coeff
                if s:
                    out[key] = s
                else:
                    del out[key]
        return MPoly(field, new_vars, out, _trusted=True)

    def evaluate(self, values) -> object:
        """Full evaluation at field values, one per slot."""
        values = list(values)
        if len(values) != len(self.vars):
            raise ValueError("need one value per variable")
        field = self.field
        total = field.zero
        one = field.one
        for e, c in self.terms.items():
            term = c
            for v, k in zip(values, e):
                if k:
                    term = term * (v ** k if k >= 0 else (one / v) ** (-k))
            total = total + term
        return total

    def rename_vars(self, names) -> "MPoly":
        names = tuple(names)
        if len(names) != len(self.vars):
            raise ValueError("rename needs the same arity")
        return MPoly(self.field, names, self.terms, _trusted=True)

    def extend_vars(self, names) -> "MPoly":
        """Reindex onto a superset of variables (order given by names)."""
        names = tuple(names)
        pos = []
        for v in self.vars:
            if v not in names:
                raise ValueError(f"variable {v} missing from {names}")
            pos.append(names.index(v))
        width = len(names)
        out = {}
        for e, c in self.terms.items():
            newe = [0] * width
            for p, k in zip(pos, e):
                newe[p] = k
            out[tuple(newe)] = c
        return MPoly(self.field, names, out, _trusted=True)

    # -- output ----------------------------------------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True):
            mono = "*".join(
                (v if k == 1 else f"{v}^{k}")
                for v, k in zip(self.vars, e)
                if k
            )
            cs = self.field.coeff_str(c)
            if mono:
                if cs == "1":
                    body = mono
                elif cs == "-1":
                    body = f"-{mono}"
                elif any(op in cs[1:] for op in "+-/ "):
                    body = f"({cs})*{mono}"
                else:
                    body = f"{cs}*{mono}"
            else:
                body = cs if not any(op in cs[1:] for op in "+-/ ") else f"({cs})"
            parts.append(body)
        out = parts[0]
        for p in parts[1:]:
            if p.startswith("-") and not p.startswith("(-"):
                out += " - " + p[1:]
            else:
                out += " + " + p
        return out

    __repr__ = __str__

    def latex(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True):
            mono = "".join(
                (_latex_var(v) if k == 1 else _latex_var(v) + f"^{{{k}}}")
                for v, k in zip(self.vars, e)
                if k
            )
            cs = _latex_scalar(self.field.coeff_str(c))
            if mono:
                body = mono if cs == "1" else (f"-{mono}" if cs == "-1" else f"\\left({cs}\\right){mono}" if any(ch in cs[1:] for ch in "+-/") else f"{cs}{mono}")
            else:
                body = cs
            parts.append(body)
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self):
        doc = {
            "vars": list(self.vars),
            "terms": [
                {"exp": list(e), **self.field.coeff_json(c)}
                for e, c in self.sorted_terms()
            ],
        }
        if isinstance(self.field, CycloField):
            doc["spec"] = str(self.field.spec)
        elif isinstance(self.field, QQField):
            doc["field"] = "rational"
        return doc

    @staticmethod
    def from_json(doc) -> "MPoly":
        if "spec" in doc:
            field = cyclo(SpecQT.parse(doc["spec"]))
        elif doc.get("field") == "rational":
            field = QQ_FIELD
        else:
            field = QT
        terms = {}
        for td in doc["terms"]:
            c = field.coeff_from_json(td)
            if c:
                terms[tuple(td["exp"])] = c
        return MPoly(field, tuple(doc["vars"]), terms, _trusted=True)


def _latex_var(v: str) -> str:
    head = v.rstrip("0123456789")
    tail = v[len(head):]
    return f"{head}_{{{tail}}}" if tail else head


def _latex_scalar(s: str) -> str:
    return (
        s.replace("*", " ")
        .replace("q^", "q^")
        .replace("t^", "t^")
    )


def align(f: MPoly, g: MPoly) -> tuple[MPoly, MPoly]:
    """Reindex both polynomials onto the sorted union of their variables."""
    names = tuple(sorted(set(f.vars) | set(g.vars)))
    return f.extend_vars(names), g.extend_vars(names)
