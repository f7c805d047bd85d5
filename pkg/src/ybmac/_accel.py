"""Vectorized build engine for large Yang-Baxter constructions.

A polynomial in play is flattened to three parallel arrays of rows

    xkey  -- the x-monomial, 4 bits per variable exponent
    ckey  -- the coefficient monomial: packed (q,t) exponents for the
             generic field, the u exponent for a specialized field
    val   -- the integer coefficient of that row

so every Hecke/affine/edge step is a row map plus one sort-reduce, and
stripping a binomial content factor 1 - s*M is a segmented scan along
M-direction chains.  All arithmetic is exact int64; a guard raises
OverflowGuard before any value could exceed the safe range, and the
caller falls back to the pure-Python path.

The engine is selected automatically for the generic field and for
specializations with omega = +-1; setting YBMAC_PURE=1 disables it.
"""

from __future__ import annotations

import os

try:  # pragma: no cover - exercised implicitly everywhere
    import numpy as np
except Exception:  # pragma: no cover
    np = None

from .coeffs import CycloU, LaurentQT, LaurentU, RatQT, SingularEdgeError
from .combin import standardization, yb_path
from .mvpoly import MPoly, CycloField, QTField, default_vars

_XBITS = 4
_XMASK = 15
_CS = 1 << 20  # stride separating q and t exponents in a packed ckey
_CHALF = _CS >> 1
_VMAX = 1 << 55  # leaves headroom for chain sums inside one reduction


class OverflowGuard(RuntimeError):
    """Values might leave the exact int64 range; use the pure path."""


def _unpack_qt(ck):
    """Decode packed q,t exponents; t-exponents live in (-_CHALF, _CHALF)."""
    t = (ck % _CS + _CHALF) % _CS - _CHALF
    q = (ck - t) // _CS
    return q, t


def available() -> bool:
    return np is not None and os.environ.get("YBMAC_PURE", "") != "1"


def supports(fieldobj) -> bool:
    if isinstance(fieldobj, QTField):
        return True
    return isinstance(fieldobj, CycloField) and fieldobj.m <= 2


# ---------------------------------------------------------------------------
# rows <-> MPoly
# ---------------------------------------------------------------------------


def _pack_qt(a: int, b: int) -> int:
    return a * _CS + b


def _to_rows(f: MPoly, fieldobj):
    n = len(f.vars)
    xs, cs, vs = [], [], []
    generic = isinstance(fieldobj, QTField)
    for e, c in f.terms.items():
        xk = 0
        for i, k in enumerate(e):
            if not 0 <= k <= _XMASK:
                raise OverflowGuard(f"exponent {k} outside packed range")
            xk |= k << (_XBITS * i)
        if generic:
            num = c.num
            if not c.den.is_one():
                raise OverflowGuard("fast engine needs denominator-free input")
            for (a, b), coeff in num.terms.items():
                if not isinstance(coeff, int):
                    raise OverflowGuard("fast engine needs integer coefficients")
                xs.append(xk)
                cs.append(_pack_qt(a, b))
                vs.append(coeff)
        else:
            num = c.num
            if not c.den.is_one():
                raise OverflowGuard("fast engine needs denominator-free input")
            for j, coeff in enumerate(num.coeffs):
                if coeff == 0:
                    continue
                if not isinstance(coeff, int):
                    raise OverflowGuard("fast engine needs integer coefficients")
                xs.append(xk)
                cs.append(num.shift + j)
                vs.append(coeff)
    return (
        np.asarray(xs, dtype=np.int64),
        np.asarray(cs, dtype=np.int64),
        np.asarray(vs, dtype=np.int64),
    )


def _from_rows(xk, ck, v, n, fieldobj) -> MPoly:
    generic = isinstance(fieldobj, QTField)
    order = np.lexsort((ck, xk))
    xk, ck, v = xk[order], ck[order], v[order]
    terms = {}
    xs = xk.tolist()
    cs = ck.tolist()
    vs = v.tolist()
    i = 0
    total = len(xs)
    while i < total:
        cur = xs[i]
        j = i
        coeff = {}
        while j < total and xs[j] == cur:
            coeff[cs[j]] = vs[j]
            j += 1
        e = tuple((cur >> (_XBITS * p)) & _XMASK for p in range(n))
        if generic:
            lqterms = {}
            for k, c in coeff.items():
                b = (k % _CS + _CHALF) % _CS - _CHALF
                lqterms[((k - b) // _CS, b)] = c
            terms[e] = RatQT(LaurentQT(lqterms, _trusted=True))
        else:
            lo = min(coeff)
            hi = max(coeff)
            dense = [coeff.get(k, 0) for k in range(lo, hi + 1)]
            terms[e] = CycloU(LaurentU.make(lo, dense), m=fieldobj.m)
        i = j
    return MPoly(fieldobj, default_vars(n), terms, _trusted=True)


# ---------------------------------------------------------------------------
# core kernels
# ---------------------------------------------------------------------------


def _reduce(xk, ck, v):
    if len(xk) == 0:
        return xk, ck, v
    order = np.lexsort((ck, xk))
    xk = xk[order]
    ck = ck[order]
    v = v[order]
    newgrp = np.empty(len(xk), dtype=bool)
    newgrp[0] = True
    np.not_equal(xk[1:], xk[:-1], out=newgrp[1:])
    np.logical_or(newgrp[1:], ck[1:] != ck[:-1], out=newgrp[1:])
    starts = np.flatnonzero(newgrp)
    sums = np.add.reduceat(v, starts)
    keep = sums != 0
    if keep.all():
        return xk[starts], ck[starts], sums
    return xk[starts][keep], ck[starts][keep], sums[keep]


def _guard(v):
    if len(v) and int(np.abs(v).max()) > _VMAX:
        raise OverflowGuard("coefficient magnitude near int64 limit")


def _tstep_rows(xk, ck, v, i, tbump):
    """Rows of f . T_i from rows of f (unreduced)."""
    sh_a = _XBITS * (i - 1)
    sh_b = _XBITS * i
    a = (xk >> sh_a) & _XMASK
    b = (xk >> sh_b) & _XMASK
    outs_x, outs_c, outs_v = [], [], []

    eq = a == b
    if eq.any():
        outs_x.append(xk[eq])
        outs_c.append(ck[eq] + tbump)
        outs_v.append(v[eq])

    lt = a < b
    if lt.any():
        xl, cl, vl = xk[lt], ck[lt], v[lt]
        al, bl = a[lt], b[lt]
        swap = xl + ((bl - al) << sh_a) - ((bl - al) << sh_b)
        outs_x.append(swap)
        outs_c.append(cl)
        outs_v.append(vl)

    gt = a > b
    if gt.any():
        xg, cg, vg = xk[gt], ck[gt], v[gt]
        ag, bg = a[gt], b[gt]
        swap = xg - ((ag - bg) << sh_a) + ((ag - bg) << sh_b)
        outs_x.append(xg)
        outs_c.append(cg + tbump)
        outs_v.append(vg)
        outs_x.append(xg)
        outs_c.append(cg)
        outs_v.append(-vg)
        outs_x.append(swap)
        outs_c.append(cg + tbump)
        outs_v.append(vg)

    ne = ~eq
    if ne.any():
        xm, cm, vm = xk[ne], ck[ne], v[ne]
        am, bm = a[ne], b[ne]
        lo = np.minimum(am, bm)
        hi = np.maximum(am, bm)
        cnt = (hi - lo - 1).astype(np.int64)
        pos = cnt > 0
        if pos.any():
            xm, cm, vm, lo, hi, cnt = (
                xm[pos], cm[pos], vm[pos], lo[pos], hi[pos], cnt[pos],
            )
            am, bm = am[pos], bm[pos]
            gt_m = am > bm
            total = int(cnt.sum())
            idx = np.repeat(np.arange(len(cnt)), cnt)
            csum = np.concatenate([[0], np.cumsum(cnt)[:-1]])
            within = np.arange(total) - csum[idx]
            j = lo[idx] + 1 + within
            s = (am + bm)[idx]
            base = xm[idx] - (am[idx] << sh_a) - (bm[idx] << sh_b)
            xmid = base + (j << sh_a) + ((s - j) << sh_b)
            cmid = cm[idx]
            vmid = vm[idx]
            sign = np.where(gt_m[idx], 1, -1).astype(np.int64)
            # middle contribution is (t-1) c for a>b and (1-t) c for a<b
            outs_x.append(xmid)
            outs_c.append(cmid + tbump)
            outs_v.append(vmid * sign)
            outs_x.append(xmid)
            outs_c.append(cmid)
            outs_v.append(-vmid * sign)

    return (
        np.concatenate(outs_x) if outs_x else xk[:0],
        np.concatenate(outs_c) if outs_c else ck[:0],
        np.concatenate(outs_v) if outs_v else v[:0],
    )


def _divide_binomial_rows(xk, ck, v, delta, s):
    """Quotient rows of f by (1 - s * M), M = ckey shift by delta; None if inexact.

    Works chain by chain along the delta direction with a segmented scan:
    with h = s^pos * val, the chain quotient at position p is
    s^p * prefix-sum(h up to p), and exactness is prefix == 0 at each
    chain top.
    """
    if len(xk) == 0:
        return xk, ck, v
    if delta <= 0:
        raise ValueError("binomial direction key must be positive")
    pos = ck // delta
    # chain class: residue of ck modulo delta, combined with xkey
    res = ck - pos * delta
    order = np.lexsort((pos, res, xk))
    xk1, ck1, v1, pos1, res1 = xk[order], ck[order], v[order], pos[order], res[order]
    newgrp = np.empty(len(xk1), dtype=bool)
    newgrp[0] = True
    np.not_equal(xk1[1:], xk1[:-1], out=newgrp[1:])
    np.logical_or(newgrp[1:], res1[1:] != res1[:-1], out=newgrp[1:])
    gid = np.cumsum(newgrp) - 1
    if s == -1:
        h = np.where(pos1 & 1, -v1, v1)
    else:
        h = v1
    csum = np.cumsum(h)
    starts = np.flatnonzero(newgrp)
    ends = np.concatenate([starts[1:], [len(xk1)]]) - 1
    base = np.concatenate([[0], csum[ends[:-1]]])
    prefix = csum - base[gid]
    if np.any(prefix[ends] != 0):
        return None
    # output positions: per group, from pos[start] to pos[end]-1
    cnt = pos1[ends] - pos1[starts]
    total = int(cnt.sum())
    if total == 0:
        return xk[:0], ck[:0], v[:0]
    gout = np.repeat(np.arange(len(starts)), cnt)
    csum2 = np.concatenate([[0], np.cumsum(cnt)[:-1]])
    within = np.arange(total) - csum2[gout]
    p_out = pos1[starts][gout] + within
    # map each output position to the latest support row of its group
    BIG = np.int64(1) << 32
    support_key = gid.astype(np.int64) * BIG + pos1
    out_key = gout.astype(np.int64) * BIG + p_out
    idx = np.searchsorted(support_key, out_key, side="right") - 1
    gval = prefix[idx]
    if s == -1:
        gval = np.where(p_out & 1, -gval, gval)
    ck_out = ck1[idx] + (p_out - pos1[idx]) * delta
    xk_out = xk1[idx]
    keep = gval != 0
    return xk_out[keep], ck_out[keep], gval[keep]


def _int_content_rows(v):
    g = int(np.gcd.reduce(np.abs(v))) if len(v) else 0
    return g


class _RowPoly:
    """Mutable row-form polynomial bound to a field and arity."""

    __slots__ = ("xk", "ck", "v", "n", "field", "generic", "spec")

    def __init__(self, xk, ck, v, n, fieldobj):
        self.xk, self.ck, self.v = xk, ck, v
        self.n = n
        self.field = fieldobj
        self.generic = isinstance(fieldobj, QTField)
        self.spec = None if self.generic else fieldobj.spec

    @staticmethod
    def from_mpoly(f: MPoly, fieldobj) -> "_RowPoly":
        xk, ck, v = _to_rows(f, fieldobj)
        return _RowPoly(xk, ck, v, len(f.vars), fieldobj)

    def to_mpoly(self) -> MPoly:
        return _from_rows(self.xk, self.ck, self.v, self.n, self.field)

    # bumps ------------------------------------------------------------

    def tbump(self) -> int:
        return 1 if self.generic else self.spec.b

    def qbump(self) -> int:
        return _CS if self.generic else -self.spec.a

    def qsign_flips(self, k: int) -> bool:
        """Does multiplying by q^k flip the sign (omega = -1 case)?"""
        if self.generic:
            return False
        sp = self.spec
        return sp.m == 2 and (sp.e * k) % 2 == 1

    # steps ------------------------------------------------------------

    def hecke_scaled(self, i: int, dq: int, dt: int):
        """Apply cd * (f . T_i) + cn * f with cd = 1 - q^dq t^dt, cn = 1 - t."""
        tb = self.tbump()
        tx, tc, tv = _tstep_rows(self.xk, self.ck, self.v, i, tb)
        # cd * (T rows): rows + shifted negated rows
        shift = dq * self.qbump() + dt * tb
        neg = -tv if not self.qsign_flips(dq) else tv
        xs = [tx, tx, self.xk, self.xk]
        cs = [tc, tc + shift, self.ck, self.ck + tb]
        vs = [tv, neg, self.v, -self.v]
        self.xk = np.concatenate(xs)
        self.ck = np.concatenate(cs)
        self.v = np.concatenate(vs)
        self._reduce()

    def hecke_plain(self, i: int):
        self.xk, self.ck, self.v = _tstep_rows(self.xk, self.ck, self.v, i, self.tbump())
        self._reduce()

    def add_rows(self, other: "_RowPoly"):
        self.xk = np.concatenate([self.xk, other.xk])
        self.ck = np.concatenate([self.ck, other.ck])
        self.v = np.concatenate([self.v, other.v])
        self._reduce()

    def affine(self, shifted: bool):
        n = self.n
        e1 = self.xk & _XMASK
        xk = (self.xk >> _XBITS) + (e1 << (_XBITS * (n - 1)))
        ck = self.ck - e1 * self.qbump()
        v = self.v
        if not self.generic and self.spec.m == 2 and self.spec.e:
            v = np.where(e1 & 1, -v, v)
        top = np.int64(1) << (_XBITS * (n - 1))
        if shifted:  # multiply by (x_N - 1)
            self.xk = np.concatenate([xk + top, xk])
            self.ck = np.concatenate([ck, ck])
            self.v = np.concatenate([v, -v])
            self._reduce()
        else:
            self.xk = xk + top
            self.ck = ck
            self.v = v

    def _reduce(self):
        self.xk, self.ck, self.v = _reduce(self.xk, self.ck, self.v)
        _guard(self.v)

    # content ----------------------------------------------------------

    def strip_basics(self):
        if len(self.v) == 0:
            return
        g = _int_content_rows(self.v)
        if g > 1:
            self.v = self.v // g
        if self.generic:
            qexp, texp = _unpack_qt(self.ck)
            sq = int(qexp.min())
            st = int(texp.min())
            if sq or st:
                self.ck = self.ck - (sq * _CS + st)
        else:
            su = int(self.ck.min())
            if su:
                self.ck = self.ck - su

    def _first_group_divisible(self, delta: int, s: int) -> bool:
        """Cheap reject: chain-check the first x-monomial's coefficient only.

        Rows are sorted by (xkey, ckey) right after a reduction, so the
        first group is a prefix slice.
        """
        if len(self.xk) == 0:
            return True
        end = int(np.searchsorted(self.xk, self.xk[0], side="right"))
        ck = self.ck[:end]
        v = self.v[:end]
        pos = (ck // delta).tolist()
        res = (ck - (ck // delta) * delta).tolist()
        chains: dict = {}
        for p, r, val in zip(pos, res, v.tolist()):
            sgn = -1 if (s == -1 and p & 1) else 1
            chains[r] = chains.get(r, 0) + sgn * val
        return all(total == 0 for total in chains.values())

    def try_divide(self, delta: int, s: int) -> bool:
        if not self._first_group_divisible(delta, s):
            return False
        out = _divide_binomial_rows(self.xk, self.ck, self.v, delta, s)
        if out is None:
            return False
        self.xk, self.ck, self.v = out
        return True

    def rows(self) -> int:
        return len(self.v)


class _FastPool:
    """Binomial content candidates for the row engine."""

    def __init__(self, rowpoly: _RowPoly):
        self.rp = rowpoly
        self.cands: list = []
        if rowpoly.generic:
            self._push((1, 1))  # 1 - t
        else:
            self._push((rowpoly.tbump(), 1))
            if rowpoly.field.m == 2:
                self._push((rowpoly.tbump(), -1))

    def _push(self, cand):
        if cand[0] and cand not in self.cands:
            self.cands.insert(0, cand)
            del self.cands[24:]

    def note_edge(self, dq: int, dt: int):
        import math

        rp = self.rp
        if rp.generic:
            g = math.gcd(dq, abs(dt))
            pa, pb = dq // g, dt // g
            for d in range(1, g + 1):
                if g % d == 0:
                    self._push((pa * d * _CS + pb * d, 1))
                    if (g // d) % 2 == 0:
                        self._push((pa * d * _CS + pb * d, -1))
        else:
            sp = rp.spec
            uexp = -sp.a * dq + sp.b * dt
            neg = sp.m == 2 and (sp.e * dq) % 2 == 1
            c = abs(uexp)
            if c == 0:
                return
            for d in range(1, c + 1):
                if c % d:
                    continue
                if neg:
                    if (c // d) % 2 == 1:
                        self._push((d, -1))
                else:
                    self._push((d, 1))
                    if (c // d) % 2 == 0:
                        self._push((d, -1))

    def reduce(self):
        rp = self.rp
        rp.strip_basics()
        k = 0
        while k < len(self.cands):
            delta, s = self.cands[k]
            if rp.try_divide(delta, s):
                if k:
                    self.cands.insert(0, self.cands.pop(k))
                k = 0
            else:
                k += 1
        rp.strip_basics()


# ---------------------------------------------------------------------------
# build drivers (同 shape as the pure versions in macdonald.py)
# ---------------------------------------------------------------------------


def fast_nonsym_raw(v: tuple, kind: str, fieldobj):
    """Row-engine version of the nonsymmetric YB build; returns (MPoly, path)."""
    n = len(v)
    path = yb_path(v)
    f = _RowPoly.from_mpoly(MPoly.one(fieldobj, default_vars(n)), fieldobj)
    pool = _FastPool(f)
    w = (0,) * n
    shifted = kind == "M"
    for st in path:
        if st.kind == "phi":
            f.affine(shifted)
            w = w[1:] + (w[0] + 1,)
        else:
            i = st.i
            std = standardization(w)
            dq = w[i] - w[i - 1]
            dt = std[i] - std[i - 1]
            if _edge_singular(fieldobj, dq, dt):
                raise SingularEdgeError(
                    f"YB edge singular: 1 - q^{dq} t^{dt} vanishes at edge {w} -> s_{i}"
                )
            f.hecke_scaled(i, dq, dt)
            pool.note_edge(dq, dt)
            w = w[: i - 1] + (w[i], w[i - 1]) + w[i + 1:]
        pool.reduce()
    return f.to_mpoly(), path


def _edge_singular(fieldobj, dq, dt) -> bool:
    if isinstance(fieldobj, QTField):
        return False
    sp = fieldobj.spec
    if -sp.a * dq + sp.b * dt != 0:
        return False
    return (sp.e * dq) % sp.m == 0 if sp.m > 1 else True


def fast_symmetrize_raw(f: MPoly, fieldobj) -> MPoly:
    """Row-engine coset-factorized symmetrizer over the full arity."""
    rp = _RowPoly.from_mpoly(f, fieldobj)
    pool = _FastPool(rp)
    n = rp.n
    for k in range(2, n + 1):
        acc = _RowPoly(rp.xk, rp.ck, rp.v, n, fieldobj)
        h = _RowPoly(rp.xk, rp.ck, rp.v, n, fieldobj)
        for j in range(k - 1, 0, -1):
            h = _RowPoly(h.xk, h.ck, h.v, n, fieldobj)
            h.hecke_plain(j)
            acc = _concat(acc, h)
            if acc.rows() > 4_000_000:
                acc._reduce()
        acc._reduce()
        rp = acc
        pool.rp = rp
        pool.reduce()
    return rp.to_mpoly()


def _concat(a: _RowPoly, b: _RowPoly) -> _RowPoly:
    return _RowPoly(
        np.concatenate([a.xk, b.xk]),
        np.concatenate([a.ck, b.ck]),
        np.concatenate([a.v, b.v]),
        a.n,
        a.field,
    )


def fast_specialize_raw(f: MPoly, cycfield) -> MPoly:
    """Specialize an integral generic build into a cyclotomic field (m <= 2)."""
    qtfield = f.field
    if not isinstance(qtfield, QTField) or cycfield.m > 2:
        raise OverflowGuard("fast specialization handles generic -> m <= 2 only")
    xk, ck, v = _to_rows(f, qtfield)
    if len(xk) == 0:
        return MPoly.zero(cycfield, f.vars)
    sp = cycfield.spec
    qexp, texp = _unpack_qt(ck)
    uexp = -sp.a * qexp + sp.b * texp
    if sp.m == 2 and sp.e:
        v = np.where((qexp * sp.e) & 1, -v, v)
    xk, uexp, v = _reduce(xk, uexp, v)
    return _from_rows(xk, uexp, v, len(f.vars), cycfield)
