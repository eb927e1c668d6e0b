"""Division with remainder by the reduced p-series and canonical forms.

For integral univariate g and the reduced p-series  pser = p + xi(...)  in
the v-basis, there are unique d and s with

    g = d * pser + s

where every integer coefficient of every polynomial of s lies in
{0, ..., p-1}.  The iteration runs degree by degree: at xi^m, floor-divide
the current coefficient polynomial by p, keep the remainder digit, and
subtract q * xi^m * pser, which only disturbs strictly higher degrees.  The
remainder's validity is min(V_g, m0 + V_pser) where m0 is the first degree
that needed a subtraction.

A canonical representative is nonzero iff it is nonzero modulo p, so its
lowest nonzero coefficient certifies nonvanishing in the quotient; a zero
representative is inconclusive beyond the validity order.
"""

from __future__ import annotations

from .series import Series


class NonIntegralError(ValueError):
    """Division input must have integer coefficients in the v-basis."""


class ReducedSeries:
    """A canonical representative modulo the reduced p-series."""

    __slots__ = ("series", "normal")

    def __init__(self, series: Series, normal: bool = True):
        self.series = series
        self.normal = normal

    @property
    def validity(self) -> int:
        return self.series.validity

    def is_zero(self) -> bool:
        return not self.series.coeffs

    def __eq__(self, other):
        if isinstance(other, ReducedSeries):
            return self.series == other.series
        return NotImplemented

    def __repr__(self):
        return f"ReducedSeries({self.series!r})"


def _check_division_inputs(g: Series, pser: Series):
    if g.prime != pser.prime:
        raise ValueError("prime mismatch")
    if g.basis != "v" or pser.basis != "v":
        raise ValueError("division runs in the v-basis")
    if g.laurent or not g.is_univariate() or not pser.is_univariate():
        raise ValueError("division requires univariate power series")
    if not g.is_integral():
        raise NonIntegralError("dividend has non-integer coefficients")
    if pser.constant_term() != g.prime:
        raise ValueError("divisor is not a reduced p-series (constant term != p)")
    if not pser.is_integral():
        raise NonIntegralError("divisor has non-integer coefficients")


def divide(g: Series, pser: Series, on_step=None):
    """Return (d, s) with g = d*pser + s and s in canonical form.

    on_step, if given, is called as on_step(m, q, snapshot) after each degree
    m whose quotient digit q was nonzero; snapshot is the running series with
    all digits below m already reduced.
    """
    _check_division_inputs(g, pser)
    p = g.prime
    higher = [(j, c) for (j, _z), c in sorted(pser.coeffs.items()) if j > 0]
    work = {j: c for (j, _z), c in g.coeffs.items()}
    d: dict = {}
    validity = g.validity
    m = 0
    while m < validity:
        c = work.get(m)
        if c:
            q, r = c.divmod_int(p)
            if q:
                d[(m, 0)] = q
                validity = min(validity, m + pser.validity)
                if r:
                    work[m] = r
                else:
                    del work[m]
                for j, pj in higher:
                    t = m + j
                    if t >= validity:
                        break
                    upd = work.get(t)
                    prod = q * pj
                    upd = -prod if upd is None else upd - prod
                    if upd:
                        work[t] = upd
                    else:
                        work.pop(t, None)
                if on_step is not None:
                    snap = Series(p, "v", {(j, 0): c2 for j, c2 in work.items()},
                                  validity, g.weight)
                    on_step(m, q, snap)
        m += 1
    s = Series(p, "v", {(j, 0): c for j, c in work.items()}, validity, g.weight)
    dser = Series(p, "v", d, validity, g.weight)
    return dser, ReducedSeries(s)


def canonical_rep(g: Series, pser: Series, on_step=None) -> ReducedSeries:
    return divide(g, pser, on_step)[1]


def nonvanishing_certificate(s: ReducedSeries):
    """Lowest nonzero coefficient (exponent, polynomial), or None if zero.

    None is inconclusive: the class may still be nonzero beyond the validity.
    """
    if not s.normal:
        raise ValueError("certificate requires a canonical representative")
    if s.is_zero():
        return None
    j = min(e[0] for e in s.series.coeffs)
    return j, s.series.coeffs[(j, 0)]


def divisible_by_full_p_series(g: Series, pser: Series) -> bool:
    """Whether g lies in ([p]xi) = (xi * pser) within validity.

    Two stages: the xi-valuation must be >= 1, and the xi-quotient must
    reduce to zero modulo pser.
    """
    if g.coeffs and g.val() < 1:
        return False
    if g.validity < 1:
        return True
    return canonical_rep(g.shift_xi(-1), pser).is_zero()
