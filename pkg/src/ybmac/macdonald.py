"""Builders for the four Macdonald families via the Yang-Baxter graph.

Starting from 1 at the zero vector, an ascent edge w -> w.s_i applies
T_i + (1-t)/(1 - <w>[i+1]/<w>[i]) and an affine edge applies tau x_N
(nonsymmetric E) or tau (x_N - 1) (shifted nonsymmetric M).  Symmetric
P and MS are the symmetrizations of E and M at a partition.  Builds run
with denominator-free coefficients: each edge multiplies through by the
edge denominator, and a small pool of binomial candidates strips common
factors as they accumulate.  The monic normalization (coefficient 1 at
x^v) is applied on demand; the scalar is recorded in the BuildReport.

Under a specialized field an edge denominator may vanish; such a build
raises SingularEdgeError and the caller may fall back to specializing
the generic build coefficientwise.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field as dc_field
from typing import Optional

from . import combin, hecke
from .coeffs import PoleError, SingularEdgeError, specialize
from .combin import YBStep, standardization, yb_path
from .mvpoly import MPoly, QT, CycloField, QTField, Letter, default_vars, MAX_ARITY

KINDS = ("E", "M", "P", "MS")

_CACHE: dict = {}
_CACHE_LOCK = threading.Lock()


@dataclass
class BuildReport:
    """Result of one polynomial build.

    ``raw`` is an integral (denominator-free) scalar multiple of the
    monic polynomial; ``normalization`` is the coefficient of x^index in
    raw, so polynomial = raw / normalization.
    """

    kind: str
    index: tuple
    raw: MPoly
    path: list
    normalization: object
    route: str = "direct"
    _monic: Optional[MPoly] = dc_field(default=None, repr=False)

    @property
    def polynomial(self) -> MPoly:
        if self._monic is None:
            self._monic = self.raw.scalar_div(self.normalization)
        return self._monic


class ContentPool:
    """Strips common coefficient factors during a build.

    Common monomial and integer content come out on every call; binomial
    candidates 1 - scale * mono (edge denominators together with their
    divisor binomials, since 1 - M^g factors) are test-divided whenever
    coefficients have grown.  A common factor outside the pool merely
    survives; it costs size, never exactness.
    """

    TRIGGER = 18  # try pooled factors once coefficients reach this many terms

    def __init__(self, fieldobj):
        self.field = fieldobj
        self.cyclo = isinstance(fieldobj, CycloField)
        self.cands: list = []
        if self.cyclo:
            self._note_cyclo(1, 1)
            if fieldobj.m == 2:
                self._note_cyclo(1, -1)

    # -- candidate management -------------------------------------------

    def _push(self, cand):
        if cand not in self.cands:
            self.cands.insert(0, cand)
            del self.cands[24:]

    def _note_cyclo(self, c: int, scale):
        if c > 0:
            self._push((c, scale))

    def note_edge_cyclo(self, uexp: int, ek_nonzero: bool):
        """Record 1 - omega^ek u^uexp; for m <= 2 omega^ek is a sign."""
        c = abs(uexp)
        if c == 0:
            return
        for d in range(1, c + 1):
            if c % d:
                continue
            if ek_nonzero:
                # factor is 1 + u^c; 1 + u^d divides it iff c/d is odd
                if (c // d) % 2 == 1:
                    self._note_cyclo(d, -1)
            else:
                # factor is 1 - u^c; 1 - u^d always divides, 1 + u^d iff c/d even
                self._note_cyclo(d, 1)
                if (c // d) % 2 == 0:
                    self._note_cyclo(d, -1)

    def note_edge_qt(self, dq: int, dt: int):
        import math

        g = math.gcd(dq, abs(dt))
        pa, pb = dq // g, dt // g
        for d in range(1, g + 1):
            if g % d == 0:
                self._push(((pa * d, pb * d), 1))
                if (g // d) % 2 == 0:
                    self._push(((pa * d, pb * d), -1))

    # -- reduction --------------------------------------------------------

    def reduce(self, f: MPoly, force: bool = False) -> MPoly:
        if not f.terms:
            return f
        if self.cyclo:
            return self._reduce_cyclo(f, force)
        return self._reduce_qt(f, force)

    def _reduce_cyclo(self, f: MPoly, force: bool) -> MPoly:
        import math
        from fractions import Fraction

        from .coeffs import CycloU

        m = self.field.m
        nums = {e: c.num for e, c in f.terms.items()}
        shift = min(p.shift for p in nums.values())
        changed = shift != 0
        if shift:
            nums = {e: p.shifted(-shift) for e, p in nums.items()}
        gnum, glcm = 0, 1
        ok = True
        for p in nums.values():
            ic = p.int_content()
            if ic is None:
                ok = False
                break
            gnum = math.gcd(gnum, ic.numerator)
            glcm = glcm * ic.denominator // math.gcd(glcm, ic.denominator)
            if gnum == 1 and glcm == 1:
                break
        if ok:
            g = Fraction(gnum, glcm)
            if g not in (0, 1):
                nums = {e: p.divexact_scalar(g) for e, p in nums.items()}
                changed = True
        if force or max(len(p.coeffs) for p in nums.values()) >= self.TRIGGER:
            k = 0
            while k < len(self.cands):
                cexp, scale = self.cands[k]
                quo = {}
                for e, p in nums.items():
                    d = p.divexact_binomial(cexp, scale)
                    if d is None:
                        quo = None
                        break
                    quo[e] = d
                if quo is None:
                    k += 1
                else:
                    nums = quo
                    changed = True
                    if k:
                        self.cands.insert(0, self.cands.pop(k))
                    k = 0
        if not changed:
            return f
        return MPoly(
            f.field, f.vars, {e: CycloU(p, m=m) for e, p in nums.items()}, _trusted=True
        )

    def _reduce_qt(self, f: MPoly, force: bool) -> MPoly:
        import math
        from fractions import Fraction

        from .coeffs import RatQT

        nums = {e: c.num for e, c in f.terms.items()}
        mins = [p.min_exponents() for p in nums.values()]
        sa = min(a for a, _ in mins)
        sb = min(b for _, b in mins)
        changed = sa != 0 or sb != 0
        if changed:
            nums = {e: p.shift(-sa, -sb) for e, p in nums.items()}
        gnum, glcm = 0, 1
        for p in nums.values():
            ic = p.int_content()
            gnum = math.gcd(gnum, ic.numerator)
            glcm = glcm * ic.denominator // math.gcd(glcm, ic.denominator)
            if gnum == 1 and glcm == 1:
                break
        g = Fraction(gnum, glcm)
        if g not in (0, 1):
            nums = {e: p.divexact_scalar(g) for e, p in nums.items()}
            changed = True
        if force or max(len(p.terms) for p in nums.values()) >= self.TRIGGER:
            k = 0
            while k < len(self.cands):
                exp, scale = self.cands[k]
                quo = {}
                for e, p in nums.items():
                    d = p.divexact_binomial(exp, scale)
                    if d is None:
                        quo = None
                        break
                    quo[e] = d
                if quo is None:
                    k += 1
                else:
                    nums = quo
                    changed = True
                    if k:
                        self.cands.insert(0, self.cands.pop(k))
                    k = 0
        if not changed:
            return f
        return MPoly(
            f.field, f.vars, {e: RatQT(p) for e, p in nums.items()}, _trusted=True
        )


def _edge_coefficients(fieldobj, w, i):
    """(cn, cd) with the ascent-edge factor cn/cd = (1-t)/(1 - <w>[i+1]/<w>[i])."""
    std = standardization(w)
    j = i - 1
    dq = w[j + 1] - w[j]
    dt = std[j + 1] - std[j]
    ratio = fieldobj.qt_monomial(1, dq, dt)
    cd = fieldobj.one - ratio
    if not cd:
        raise SingularEdgeError(
            f"YB edge singular: 1 - q^{dq} t^{dt} vanishes at edge {w} -> s_{i}"
        )
    cn = fieldobj.one - fieldobj.qt_monomial(1, 0, 1)
    return cn, cd, (dq, dt)


def _nonsym_raw(v: tuple, kind: str, fieldobj) -> tuple[MPoly, list]:
    n = len(v)
    if n > MAX_ARITY:
        raise ValueError(f"arity too large: {n} > {MAX_ARITY}")
    path = yb_path(v)
    f = MPoly.one(fieldobj, default_vars(n))
    w = (0,) * n
    pool = ContentPool(fieldobj)
    shifted = kind == "M"
    for st in path:
        if st.kind == "phi":
            f = hecke.apply_affine(f)
            f = hecke.mul_last_var(f, shifted=shifted)
            w = w[1:] + (w[0] + 1,)
        else:
            i = st.i
            cn, cd, exp = _edge_coefficients(fieldobj, w, i)
            f = hecke.apply_hecke_scaled(f, i, cd, cn)
            if isinstance(fieldobj, CycloField):
                uexp = -fieldobj.spec.a * exp[0] + fieldobj.spec.b * exp[1]
                ek = (fieldobj.spec.e * exp[0]) % fieldobj.spec.m
                if fieldobj.spec.m <= 2:
                    # 1 - s u^-c carries the binomial 1 - s u^c times a unit
                    pool.note_edge_cyclo(uexp, bool(ek))
            else:
                pool.note_edge_qt(*exp)
            w = w[: i - 1] + (w[i], w[i - 1]) + w[i + 1:]
        f = pool.reduce(f)
    return f, path


def _symmetrize_raw(f: MPoly, fieldobj) -> MPoly:
    pool = ContentPool(fieldobj)
    return hecke.symmetrize(f, reduce_hook=pool.reduce)


def _nonsym_raw_dispatch(v, kind, fieldobj):
    """Prefer the vectorized row engine; fall back to the pure path."""
    from . import _accel

    if _accel.available() and _accel.supports(fieldobj):
        try:
            return _accel.fast_nonsym_raw(v, kind, fieldobj)
        except _accel.OverflowGuard:
            pass
    return _nonsym_raw(v, kind, fieldobj)


def _symmetrize_dispatch(f: MPoly, fieldobj) -> MPoly:
    from . import _accel

    if _accel.available() and _accel.supports(fieldobj):
        try:
            return _accel.fast_symmetrize_raw(f, fieldobj)
        except _accel.OverflowGuard:
            pass
    return _symmetrize_raw(f, fieldobj)


def build(kind: str, index, fieldobj=QT) -> BuildReport:
    """Build one of E, M, P, MS at the given index over the given field."""
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    v = combin.as_composition(index)
    if kind in ("P", "MS"):
        v = combin.as_partition(v)
    key = (fieldobj.key, kind, v)
    with _CACHE_LOCK:
        hit = _CACHE.get(key)
    if hit is not None:
        return hit
    route = "direct"
    try:
        if kind in ("E", "M"):
            raw, path = _nonsym_raw_dispatch(v, kind, fieldobj)
        else:
            raw0, path = _nonsym_raw_dispatch(v, "E" if kind == "P" else "M", fieldobj)
            raw = _symmetrize_dispatch(raw0, fieldobj)
    except SingularEdgeError:
        # the paper-side objects still exist at singular specializations;
        # they are obtained by specializing the generic build
        if not isinstance(fieldobj, CycloField):
            raise
        generic = build(kind, v, QT)
        raw = _specialize_raw(generic.raw, fieldobj)
        if raw.coefficient(v) is None:
            raise PoleError(
                "specialization pole: leading coefficient vanishes under "
                f"{fieldobj.spec}"
            )
        path = generic.path
        route = "specialized-generic"
    lead = raw.coefficient(v)
    if not lead:
        raise AssertionError(f"{kind}_{list(v)} build lost its leading term x^{list(v)}")
    rep = BuildReport(kind=kind, index=v, raw=raw, path=path,
                      normalization=lead, route=route)
    with _CACHE_LOCK:
        _CACHE[key] = rep
    return rep


def nonsymmetric(v, kind: str, fieldobj=QT) -> BuildReport:
    if kind not in ("E", "M"):
        raise ValueError("nonsymmetric kinds are E and M")
    return build(kind, v, fieldobj)


def symmetric(lam, kind: str, fieldobj=QT) -> BuildReport:
    if kind not in ("P", "MS"):
        raise ValueError("symmetric kinds are P and MS")
    return build(kind, lam, fieldobj)


def _specialize_poly(f: MPoly, fieldobj: CycloField) -> MPoly:
    """Specialize reduced (possibly fractional) coefficients; may raise PoleError."""
    spec = fieldobj.spec

    def conv(c):
        return specialize(c, spec)

    return f.map_coefficients(conv, field=fieldobj)


def _specialize_raw(f: MPoly, fieldobj: CycloField) -> MPoly:
    """Specialize an integral build; coefficients are polynomials, no poles."""
    from . import _accel
    from .coeffs import CycloU, spec_laurent

    if _accel.available() and _accel.supports(fieldobj):
        try:
            return _accel.fast_specialize_raw(f, fieldobj)
        except _accel.OverflowGuard:
            pass
    spec = fieldobj.spec
    out = {}
    for e, c in f.terms.items():
        num = spec_laurent(c.num, spec)
        if not num.is_zero():
            out[e] = CycloU(num, m=spec.m)
    return MPoly(fieldobj, f.vars, out, _trusted=True)


def clear_cache():
    with _CACHE_LOCK:
        _CACHE.clear()


# ---------------------------------------------------------------------------
# Checks
# ---------------------------------------------------------------------------


@dataclass
class SpectralReport:
    index: tuple
    kind: str
    entries: list  # (i, (qexp, texp), ok)

    @property
    def ok(self) -> bool:
        return all(okay for _, _, okay in self.entries)


def spectral_check(v, kind: str, fieldobj=QT) -> SpectralReport:
    """Verify eigenvalues 1/<v>[i] of xi_i (E) or Xi_i (M) at index v."""
    if kind not in ("E", "M"):
        raise ValueError("spectral check applies to E and M")
    v = combin.as_composition(v)
    rep = build(kind, v, fieldobj)
    raw = rep.raw
    rv = combin.reciprocal(v)
    entries = []
    for i in range(1, len(v) + 1):
        g = hecke.apply_cherednik(raw, i) if kind == "E" else hecke.apply_knop(raw, i)
        mono = fieldobj.qt_monomial(1, rv[i - 1].qexp, rv[i - 1].texp)
        ok = g.scalar_mul(mono) == raw
        entries.append((i, (rv[i - 1].qexp, rv[i - 1].texp), ok))
    return SpectralReport(index=v, kind=kind, entries=entries)


@dataclass
class VanishingReport:
    index: tuple
    kind: str
    checked: int
    violations: list  # offending u vectors
    nonzero_at_self: bool

    @property
    def ok(self) -> bool:
        return not self.violations and self.nonzero_at_self


def vanishing_check(target, kind: str, budget: int = 200, fieldobj=QT) -> VanishingReport:
    """M_v(<u>) = 0 for u != v, |u| <= |v| (and the MS analogue on partitions)."""
    if kind not in ("M", "MS"):
        raise ValueError("vanishing characterization applies to M and MS")
    v = combin.as_composition(target)
    n = len(v)
    w = sum(v)
    if kind == "M":
        points = list(combin.compositions_upto(n, w))
    else:
        v = combin.as_partition(v)
        points = list(combin.partitions_upto(n, w))
    if len(points) > budget:
        raise ValueError(f"enumeration budget exceeded: {len(points)} > {budget}")
    rep = build(kind, v, fieldobj)
    raw = rep.raw
    violations = []
    nonzero_at_self = False
    for u in points:
        vals = [
            fieldobj.qt_monomial(1, m.qexp, m.texp) for m in combin.reciprocal(u)
        ]
        value = raw.evaluate(vals)
        if u == v:
            nonzero_at_self = bool(value)
        elif value:
            violations.append(u)
    return VanishingReport(index=v, kind=kind, checked=len(points),
                           violations=violations, nonzero_at_self=nonzero_at_self)


def evaluation_point(fieldobj, u) -> list:
    """The reciprocal point <u> as field values."""
    return [fieldobj.qt_monomial(1, m.qexp, m.texp) for m in combin.reciprocal(u)]
