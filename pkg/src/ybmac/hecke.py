"""Right-acting affine Hecke algebra operators on MPoly values.

All operators act on the right; a product string like T_2 T_1 tau means
"apply T_2, then T_1, then tau" to the running polynomial.  The generator

    f . T_i = t f + (f s_i - f) (t x_{i+1} - x_i) / (x_{i+1} - x_i)

satisfies (T_i - t)(T_i + 1) = 0 together with the braid relations; the
divided difference is an exact quotient because f s_i - f changes sign
under s_i.  Expanding it term by term gives the closed update used below:
a term c x_i^a x_{i+1}^b with a < b contributes c at (b, a) and
(1 - t) c at (j, a+b-j) for a < j < b; with a > b it contributes
(t - 1) c at (a, b), t c at (b, a) and (t - 1) c at the middle exponents.
"""

from __future__ import annotations

from .mvpoly import MPoly

MAX_SYMMETRIZE = 12


def _bump(out, e, val):
    cur = out.get(e)
    if cur is None:
        if val:
            out[e] = val
    else:
        s = cur + val
        if s:
            out[e] = s
        else:
            del out[e]


def apply_hecke(f: MPoly, i: int, inverse: bool = False) -> MPoly:
    """f . T_i (or f . T_i^{-1} with T_i^{-1} = (T_i - t + 1)/t)."""
    n = len(f.vars)
    if not 1 <= i <= n - 1:
        raise ValueError(f"Hecke index {i} out of range for {n} variables")
    if inverse:
        g = apply_hecke(f, i)
        field = f.field
        mixed = {e: field.mul_t(c, 1) for e, c in f.terms.items()}
        out = dict(g.terms)
        for e, c in f.terms.items():
            _bump(out, e, c)
        for e, c in mixed.items():
            _bump(out, e, -c)
        return MPoly(field, f.vars, {e: field.mul_t(c, -1) for e, c in out.items()}, _trusted=True)
    return _hecke_combination(f, i, None, None)


def apply_hecke_scaled(f: MPoly, i: int, cd, cn) -> MPoly:
    """cd * (f . T_i) + cn * f in one pass (a Yang-Baxter edge step)."""
    return _hecke_combination(f, i, cd, cn)


def _hecke_combination(f: MPoly, i: int, cd, cn) -> MPoly:
    field = f.field
    mul_t = field.mul_t
    ai = i - 1
    bi = i
    plain = cd is None
    out: dict = {}
    for e, c in f.terms.items():
        a = e[ai]
        b = e[bi]
        if not plain:
            ccd = c * cd
            tc = mul_t(ccd, 1)
            base = c * cn
        else:
            ccd = c
            tc = mul_t(c, 1)
            base = None
        if a == b:
            _bump(out, e, tc if plain else tc + base)
            continue
        if a < b:
            swapped = e[:ai] + (b, a) + e[i + 1:]
            _bump(out, swapped, ccd)
            if not plain:
                _bump(out, e, base)
            mid = ccd - tc
            s = a + b
            for j in range(a + 1, b):
                _bump(out, e[:ai] + (j, s - j) + e[i + 1:], mid)
        else:
            swapped = e[:ai] + (b, a) + e[i + 1:]
            mid = tc - ccd
            _bump(out, e, mid if plain else mid + base)
            _bump(out, swapped, tc)
            s = a + b
            for j in range(b + 1, a):
                _bump(out, e[:ai] + (j, s - j) + e[i + 1:], mid)
    return MPoly(field, f.vars, out, _trusted=True)


def apply_affine(f: MPoly) -> MPoly:
    """f . tau, where (f tau)(x_1, ..., x_N) = f(x_N / q, x_1, ..., x_{N-1})."""
    field = f.field
    mul_q = field.mul_q
    out = {}
    for e, c in f.terms.items():
        k = e[0]
        out[e[1:] + (k,)] = mul_q(c, -k) if k else c
    return MPoly(field, f.vars, out, _trusted=True)


def mul_last_var(f: MPoly, shifted: bool = False) -> MPoly:
    """Multiply by x_N (shifted=False) or by x_N - 1 (shifted=True)."""
    out = {}
    for e, c in f.terms.items():
        out[e[:-1] + (e[-1] + 1,)] = c
    if shifted:
        for e, c in f.terms.items():
            _bump(out, e, -c)
    return MPoly(f.field, f.vars, out, _trusted=True)


def mul_inv_var(f: MPoly, i: int) -> MPoly:
    """Multiply by 1 / x_i (1-based slot)."""
    j = i - 1
    out = {}
    for e, c in f.terms.items():
        out[e[:j] + (e[j] - 1,) + e[j + 1:]] = c
    return MPoly(f.field, f.vars, out, _trusted=True)


def _scale_t_power(f: MPoly, k: int) -> MPoly:
    if k == 0:
        return f
    field = f.field
    return MPoly(field, f.vars, {e: field.mul_t(c, k) for e, c in f.terms.items()}, _trusted=True)


def apply_cherednik(f: MPoly, i: int) -> MPoly:
    """f . xi_i = t^{1-i} f T_{i-1} ... T_1 tau T_{N-1}^{-1} ... T_i^{-1}."""
    n = len(f.vars)
    if not 1 <= i <= n:
        raise ValueError(f"Cherednik index {i} out of range for {n} variables")
    g = f
    for j in range(i - 1, 0, -1):
        g = apply_hecke(g, j)
    g = apply_affine(g)
    for j in range(n - 1, i - 1, -1):
        g = apply_hecke(g, j, inverse=True)
    return _scale_t_power(g, 1 - i)


def apply_knop(f: MPoly, i: int) -> MPoly:
    """f . Xi_i, the shifted (Knop) variant of xi_i.

    Xi_i = t^{1-i} T_{i-1} ... T_1 tau (1 - 1/x_N) T_{N-1}^{-1} ... T_i^{-1}
           + 1/x_i.
    """
    n = len(f.vars)
    if not 1 <= i <= n:
        raise ValueError(f"Knop index {i} out of range for {n} variables")
    g = f
    for j in range(i - 1, 0, -1):
        g = apply_hecke(g, j)
    g = apply_affine(g)
    g = g - mul_inv_var(g, n)
    for j in range(n - 1, i - 1, -1):
        g = apply_hecke(g, j, inverse=True)
    g = _scale_t_power(g, 1 - i)
    return g + mul_inv_var(f, i)


def apply_dunkl(f: MPoly, i: int) -> MPoly:
    """f . (Xi_i - xi_i)."""
    return apply_knop(f, i) - apply_cherednik(f, i)


def symmetrize(f: MPoly, reduce_hook=None) -> MPoly:
    """f . S with S = sum over permutations of T_sigma (reduced words).

    Uses the coset factorization S^(N) = S^(N-1) (1 + T_{N-1} + T_{N-1}T_{N-2}
    + ... + T_{N-1}...T_1), which needs only N(N-1)/2 Hecke steps instead of
    one per permutation.  reduce_hook, when given, is applied to the running
    polynomial after each coset block to keep coefficients small.
    """
    n = len(f.vars)
    if n > MAX_SYMMETRIZE:
        raise ValueError(f"arity too large for symmetrizer: {n} > {MAX_SYMMETRIZE}")
    g = f
    for k in range(2, n + 1):
        acc = g
        h = g
        for j in range(k - 1, 0, -1):
            h = apply_hecke(h, j)
            acc = acc + h
        g = acc if reduce_hook is None else reduce_hook(acc)
    return g
