"""Partitions, compositions, reciprocal vectors and Yang-Baxter paths.

Compositions are tuples of nonnegative integers; zeros count toward the
length.  The standardization std_v labels positions 0..N-1 from the
smallest entries up, right to left among equal entries, and the
reciprocal vector is <v>[i] = t^{std_v[i]} q^{v[i]}.
"""

from __future__ import annotations

import re
from typing import Iterator, NamedTuple

Composition = tuple[int, ...]
Partition = tuple[int, ...]


class QMonomial(NamedTuple):
    """A monomial q^qexp * t^texp, one entry of a reciprocal vector."""

    qexp: int
    texp: int


class YBStep(NamedTuple):
    """One Yang-Baxter graph step: ("s", i) or ("phi", None)."""

    kind: str
    i: int | None = None


PHI = YBStep("phi")


def as_composition(entries) -> Composition:
    v = tuple(int(x) for x in entries)
    if len(v) < 1:
        raise ValueError("composition must have length >= 1")
    if any(x < 0 for x in v):
        raise ValueError("composition entries must be nonnegative")
    return v


def as_partition(entries) -> Partition:
    v = as_composition(entries)
    if any(v[i] < v[i + 1] for i in range(len(v) - 1)):
        raise ValueError(f"{list(v)} is not weakly decreasing")
    return v


def parse_vector(text: str) -> Composition:
    """Parse `[2,0,1]` or the exponent shorthand `[4,2^2,0^2]`."""
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ValueError(f"vector must be bracketed: {text!r}")
    body = text[1:-1].strip()
    if not body:
        raise ValueError("empty vector")
    out: list[int] = []
    for piece in body.split(","):
        m = re.match(r"^\s*(\d+)\s*(?:\^\s*(\d+)\s*)?$", piece)
        if not m:
            raise ValueError(f"bad vector entry {piece!r}")
        val, mult = int(m.group(1)), int(m.group(2) or 1)
        out.extend([val] * mult)
    return tuple(out)


def standardization(v: Composition) -> tuple[int, ...]:
    """std_v[i] = #{j: v[j] < v[i]} + #{j > i: v[j] = v[i]}."""
    n = len(v)
    return tuple(
        sum(1 for x in v if x < v[i]) + sum(1 for j in range(i + 1, n) if v[j] == v[i])
        for i in range(n)
    )


def reciprocal(v: Composition) -> tuple[QMonomial, ...]:
    """The reciprocal vector <v> as exponent pairs (q-exponent, t-exponent)."""
    std = standardization(v)
    return tuple(QMonomial(v[i], std[i]) for i in range(len(v)))


def reciprocal_sum_exponents(v: Composition) -> list[QMonomial]:
    return list(reciprocal(v))


def reciprocal_sum(v: Composition, field):
    """[[v]] = sum_i t^{std_v[i]} q^{v[i]} as an element of the given field."""
    total = field.zero
    for mono in reciprocal(v):
        total = total + field.qt_monomial(1, mono.qexp, mono.texp)
    return total


def _dominance_leq_partial(u, v) -> bool:
    s = 0
    for a, b in zip(u, v):
        s += a - b
        if s > 0:
            return False
    return True


def dominance_less(u: Composition, v: Composition) -> bool:
    """Strict extended dominance: degree first, then sorted shapes, then vectors."""
    if len(u) != len(v):
        raise ValueError("dominance compares vectors of equal length")
    if u == v:
        return False
    su, sv = sum(u), sum(v)
    if su != sv:
        return su < sv
    up = tuple(sorted(u, reverse=True))
    vp = tuple(sorted(v, reverse=True))
    if up == vp:
        return _dominance_leq_partial(u, v)
    return _dominance_leq_partial(up, vp)


class QSParams(NamedTuple):
    """Parameters of a quasistaircase partition."""

    l: int
    k: int
    s: int
    r: int
    beta: int

    def validate(self) -> "QSParams":
        if self.l < 1:
            raise ValueError("l must be positive")
        if not 0 <= self.k <= self.l:
            raise ValueError("need 0 <= k <= l")
        if self.s < 2:
            raise ValueError("need s >= 2")
        if self.r < 0 or self.beta < 0:
            raise ValueError("r and beta must be nonnegative")
        if (self.r * (self.l + 1)) % (self.s - 1) != 0:
            raise ValueError("(s-1) must divide r*(l+1); zero block size not integral")
        return self


def quasistaircase(p: QSParams) -> tuple[Partition, int]:
    """[((beta+1)s+r)^k, (beta*s+r)^l, ..., (s+r)^l, 0^n0] and its length N.

    The zero block has n0 = r(l+1)/(s-1) + l entries, so that
    N = k + beta*l + n0 agrees with the variable count of the highest
    weight criterion for quasistaircases.
    """
    p = p.validate()
    n0 = p.r * (p.l + 1) // (p.s - 1) + p.l
    parts = [(p.beta + 1) * p.s + p.r] * p.k
    for m in range(p.beta, 0, -1):
        parts.extend([m * p.s + p.r] * p.l)
    parts.extend([0] * n0)
    return tuple(parts), len(parts)


def staircase(l: int, k: int, s: int, beta: int) -> tuple[Partition, int]:
    """St(l,k;s;beta) = QS(l,k;s,0;beta)."""
    return quasistaircase(QSParams(l, k, s, 0, beta))


def is_admissible(lam: Partition, l: int, s: int) -> bool:
    """True iff lam_i - lam_{i+l} >= s for all i."""
    n = len(lam)
    return all(lam[i] - lam[i + l] >= s for i in range(n - l))


def _phi_image(w):
    return w[1:] + (w[0] + 1,)


def _phi_preimage(w):
    return (w[-1] - 1,) + w[:-1]


def yb_path(v: Composition) -> list[YBStep]:
    """A valid Yang-Baxter path from [0^N] to v.

    Constructed in reverse: an affine step is peeled off whenever the last
    entry is nonzero, otherwise the transposition at the smallest descent.
    Replaying the steps from the zero vector reaches v, and every
    transposition step w -> w.s_i has w[i] < w[i+1].
    """
    v = as_composition(v)
    steps: list[YBStep] = []
    w = v
    while any(w):
        if w[-1] >= 1:
            steps.append(PHI)
            w = _phi_preimage(w)
        else:
            for i in range(len(w) - 1):
                if w[i] > w[i + 1]:
                    steps.append(YBStep("s", i + 1))
                    w = w[:i] + (w[i + 1], w[i]) + w[i + 2:]
                    break
            else:  # pragma: no cover - unreachable: w[-1]=0 and no descent => w=0
                raise AssertionError("stuck in reverse YB construction")
    steps.reverse()
    return steps


def yb_path_alt(v: Composition) -> list[YBStep]:
    """A second valid path: descents are peeled before affine steps."""
    v = as_composition(v)
    steps: list[YBStep] = []
    w = v
    while any(w):
        for i in range(len(w) - 1):
            if w[i] > w[i + 1]:
                steps.append(YBStep("s", i + 1))
                w = w[:i] + (w[i + 1], w[i]) + w[i + 2:]
                break
        else:
            steps.append(PHI)
            w = _phi_preimage(w)
    steps.reverse()
    return steps


def replay_path(n: int, steps) -> Composition:
    """Apply steps starting from [0^n], checking ascent preconditions."""
    w = (0,) * n
    for st in steps:
        if st.kind == "phi":
            w = _phi_image(w)
        else:
            i = st.i
            if not 1 <= i <= n - 1:
                raise ValueError(f"transposition index {i} out of range")
            if not w[i - 1] < w[i]:
                raise ValueError(f"step {st} violates ascent at {w}")
            w = w[: i - 1] + (w[i], w[i - 1]) + w[i + 1:]
    return w


# -- enumeration helpers ----------------------------------------------------


def compositions_of_weight(n: int, weight: int) -> Iterator[Composition]:
    """All compositions of given weight with n parts (zeros allowed)."""
    if n == 1:
        yield (weight,)
        return
    for first in range(weight + 1):
        for rest in compositions_of_weight(n - 1, weight - first):
            yield (first,) + rest


def compositions_upto(n: int, max_weight: int) -> Iterator[Composition]:
    for w in range(max_weight + 1):
        yield from compositions_of_weight(n, w)


def partitions_of_weight(n: int, weight: int, maxpart=None) -> Iterator[Partition]:
    """Partitions of given weight into at most n parts, padded to length n."""
    if maxpart is None:
        maxpart = weight

    def gen(remaining, slots, cap):
        if remaining == 0:
            yield ()
            return
        if slots == 0:
            return
        for first in range(min(remaining, cap), 0, -1):
            for rest in gen(remaining - first, slots - 1, first):
                yield (first,) + rest

    for shape in gen(weight, n, maxpart):
        yield shape + (0,) * (n - len(shape))


def partitions_upto(n: int, max_weight: int) -> Iterator[Partition]:
    for w in range(max_weight + 1):
        yield from partitions_of_weight(n, w)


def subpartitions(lam: Partition) -> Iterator[Partition]:
    """All partitions mu with mu_i <= lam_i, same padded length."""
    n = len(lam)

    def gen(i, prev):
        if i == n:
            yield ()
            return
        for x in range(min(prev, lam[i]), -1, -1):
            for rest in gen(i + 1, x):
                yield (x,) + rest

    yield from gen(0, lam[0] if n else 0)
