"""The total power operation on the orientation class and its coefficients.

The product  P(xi, x) = prod over i in 0..p-1 of ([i]xi +_F x),  truncated
modulo (xi, x)^(k+1) after factoring out the i = 0 factor x, expands as

    P = a_0 x + a_1 x^2 + a_2 x^3 + ...

Each a_i is a series in xi alone, correct modulo xi^(k-i+1), homogeneous of
weight i + 1 - p, and a_0 is the Euler class: a_0 = (p-1)! xi^(p-1) + ...

Factors are built from the splitting  exp(t1 + t2) = sum_r L(x2)^r U_r(t1)
with  U_r(t) = sum_j binom(j, r) e_j t^(j-r),  which reduces the bivariate
product to rows of univariate series: row s of  [i]xi +_F x  is

    sum_r  [x^s] log(x)^r  *  U_r(i log xi).

The row pipeline stays in the l-basis where the series are sparsest; one
substitution at the end lands in the v-basis, where every coefficient must
be an integer.
"""

from __future__ import annotations

from math import comb, factorial

from .fgl import FglContext
from .poly import GradedPoly
from .series import Series


class EulerClassError(AssertionError):
    """The x-linear coefficient fails its forced congruence; internal bug signal."""


class PowerOpData:
    """Product series and extracted coefficient list for one context."""

    __slots__ = ("ctx", "product", "a", "x_order")

    def __init__(self, ctx: FglContext, product: Series, a: list, x_order: int):
        self.ctx = ctx
        self.product = product
        self.a = a
        self.x_order = x_order


def _log_x_powers(ctx: FglContext, x_cap: int) -> list:
    """lp[r][s] = [x^s] log(x)^r as l-basis polynomials, for r, s <= x_cap."""
    log_terms = {j: c for (j, _z), c in ctx.log.coeffs.items()}
    lp = [{0: GradedPoly.const(1, "l")}]
    for _r in range(x_cap):
        prev = lp[-1]
        nxt: dict = {}
        for s1, c1 in prev.items():
            for j, c2 in log_terms.items():
                s = s1 + j
                if s > x_cap:
                    continue
                q = c1 * c2
                nxt[s] = nxt[s] + q if s in nxt else q
        lp.append(nxt)
    return lp


def _exp_slices(ctx: FglContext, x_cap: int) -> list:
    """U_r(t) = sum_j binom(j, r) e_j t^(j-r) as univariate series, r <= x_cap."""
    k = ctx.k
    e = {j: c for (j, _z), c in ctx.exp.coeffs.items()}
    out = []
    for r in range(x_cap + 1):
        coeffs = {}
        for j, c in e.items():
            if j >= r:
                b = comb(j, r)
                if b:
                    coeffs[(j - r, 0)] = c.scale(b)
        out.append(Series(ctx.p, "l", coeffs, k + 1 - r))
    return out


def _factor_rows(ctx: FglContext, i: int, slices: list, lxp: list, x_cap: int) -> list:
    """Rows (in x) of the factor [i]xi +_F x, as l-basis series in xi."""
    inner = ctx.log.scale(i)  # log([i]xi) = i log(xi)
    cache: dict = {}
    ws = [u.compose(inner, _pow_cache=cache) for u in slices]
    rows = []
    for s in range(x_cap + 1):
        acc = None
        for r, lam in enumerate(lxp):
            c = lam.get(s)
            if c:
                term = ws[r].scale_poly(c)
                acc = term if acc is None else acc + term
        row = acc if acc is not None else Series.zero(ctx.p, "l", ctx.k + 1 - s)
        rows.append(row.truncate(ctx.k + 1 - s))
    return rows


def _row_product(ctx: FglContext, ra: list, rb: list, x_cap: int) -> list:
    out = []
    for s in range(x_cap + 1):
        acc = None
        for t in range(s + 1):
            if t < len(ra) and s - t < len(rb):
                term = ra[t] * rb[s - t]
                acc = term if acc is None else acc + term
        acc = acc if acc is not None else Series.zero(ctx.p, "l", ctx.k + 1 - s)
        out.append(acc.truncate(ctx.k + 1 - s))
    return out


def power_operation(ctx: FglContext, x_cap: int | None = None) -> PowerOpData:
    """Build the truncated power-operation product and extract every a_i."""
    p, k = ctx.p, ctx.k
    cap = k if x_cap is None else min(x_cap, k)

    lxp = _log_x_powers(ctx, cap)
    slices = _exp_slices(ctx, cap)
    rows = _factor_rows(ctx, 1, slices, lxp, cap)
    for i in range(2, p):
        rows = _row_product(ctx, rows, _factor_rows(ctx, i, slices, lxp, cap), cap)

    coeffs = {}
    a = []
    fact = factorial(p - 1)
    for s, row in enumerate(rows):
        row_v = ctx.to_v(row, integral=True)
        a.append(Series(ctx.p, "v", row_v.coeffs, k + 1 - s, weight=s + 1 - p))
        for (j, _z), c in row_v.coeffs.items():
            coeffs[(j, s + 1)] = c

    product = Series(p, "v", coeffs, k + 2, weight=-p)
    _check_euler_class(a[0], p, fact)
    return PowerOpData(ctx, product, a, cap)


def _check_euler_class(a0: Series, p: int, fact: int):
    # a_0 = (p-1)! xi^(p-1) mod xi^p
    lim = min(p, a0.validity)
    for j in range(lim):
        c = a0.coefficient(j)
        want = GradedPoly.const(fact, "v") if j == p - 1 else GradedPoly.zero("v")
        if c != want:
            raise EulerClassError(f"a_0 has coefficient {c!r} at xi^{j}")


def power_op_series(ctx: FglContext, x_cap: int | None = None) -> Series:
    """The truncated product with the i = 0 factor included (so divisible by x)."""
    return power_operation(ctx, x_cap).product


def reduce_a_mod_p_series(data: PowerOpData):
    """Canonical representatives of every a_i modulo the reduced p-series."""
    from .reduction import canonical_rep

    pser = data.ctx.reduced_p_series("v")
    return [canonical_rep(ai, pser) for ai in data.a]
