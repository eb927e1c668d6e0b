"""The p-typical formal group law over the Brown-Peterson coefficient ring.

FglContext(p, k) builds, exactly and truncated modulo degree k+1:

  log(xi)  = xi + sum over m with p^m <= k of l_m xi^(p^m)
  exp      = compositional inverse of log
  the generator table expressing each l_m as a rational polynomial in the
  integral generators, via the recursion  p*l_n = sum l_i v_(n-i)^(p^i)

from which it derives formal sums, n-series [n]xi = exp(n log xi), and the
reduced p-series <p>xi = [p]xi / xi, whose integral-generator form must have
integer coefficients (a denominator surviving the substitution signals a
broken generator table and raises IntegralityError).
"""

from __future__ import annotations

from fractions import Fraction

from .poly import GradedPoly
from .series import Series


class NotPrimeError(ValueError):
    pass


class HorizonError(ValueError):
    """A generator beyond the truncation-implied horizon was requested."""


class IntegralityError(ArithmeticError):
    """A series that must have integer coefficients in the v-basis does not."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def hazewinkel_ell(p: int, max_m: int) -> list:
    """l_0..l_max_m as v-basis polynomials over Q: p*l_n = sum l_i v_(n-i)^(p^i)."""
    ell = [GradedPoly.const(1, "v")]
    inv_p = Fraction(1, p)
    for n in range(1, max_m + 1):
        acc = GradedPoly.zero("v")
        q = 1
        for i in range(n):
            acc = acc + ell[i] * GradedPoly.gen(n - i, "v", exp=q)
            q *= p
        ell.append(acc.scale(inv_p))
    return ell


class FglContext:
    """Immutable bundle of prime, truncation order, and cached FGL data."""

    def __init__(self, p: int, k: int):
        if not is_prime(p):
            raise NotPrimeError(f"{p} is not prime")
        if k < 1:
            raise ValueError("truncation order must be >= 1")
        self.p = p
        self.k = k

        # generator horizon: include generator m iff its weight p^m - 1 <= k
        m = 0
        while p ** (m + 1) - 1 <= k:
            m += 1
        self.horizon = m
        self.ell = hazewinkel_ell(p, m)
        self._ell_table = {i: self.ell[i] for i in range(1, m + 1)}
        self._check_ell_recursion()

        self.log = self._build_log()
        self.exp = self._build_exp()
        ident = self.exp.compose(self.log)
        if not ident.agrees_with(Series.variable(p, "l", self.k + 1)):
            raise AssertionError("exp is not inverse to log within validity")

        self._n_series: dict = {1: Series.variable(p, "l", k + 1)}
        self._pser: dict = {}
        self._subcache: dict = {}

    # -- construction ------------------------------------------------------

    def _check_ell_recursion(self):
        p, ell = self.p, self.ell
        for n in range(1, len(ell)):
            acc = GradedPoly.zero("v")
            q = 1
            for i in range(n):
                acc = acc + ell[i] * GradedPoly.gen(n - i, "v", exp=q)
                q *= p
            if ell[n].scale(p) - acc:
                raise AssertionError(f"generator table violates the recursion at n={n}")

    def _build_log(self) -> Series:
        p, k = self.p, self.k
        coeffs = {(1, 0): GradedPoly.const(1, "l")}
        m = 1
        while p ** m <= k:
            coeffs[(p ** m, 0)] = GradedPoly.gen(m, "l")
            m += 1
        return Series(p, "l", coeffs, k + 1, weight=-1)

    def _build_exp(self) -> Series:
        # degree-by-degree reversion of log = xi + sum l_m xi^(p^m):
        # e_j = -[xi^j] sum_m l_m exp^(p^m) and, writing exp = xi*u, the powers
        # u^q are advanced coefficient-wise by the derivative recurrence
        #   n (u^q)_n = sum_i ((q+1) i - n) u_i (u^q)_(n-i)
        # so [xi^j] exp^q = (u^q)_(j-q) only involves e_i with i < j.
        p, k = self.p, self.k
        one = GradedPoly.const(1, "l")
        coeffs = {(1, 0): one}
        higher = [(p ** m, GradedPoly.gen(m, "l"))
                  for m in range(1, self.horizon + 1) if p ** m <= k]
        if not higher:
            return Series(p, "l", coeffs, k + 1, weight=-1)
        u = {0: one}  # u_i = e_(i+1)
        upow = {q: {0: one} for q, _lm in higher}
        for j in range(2, k + 1):
            acc = GradedPoly.zero("l")
            for q, lm in higher:
                if q > j:
                    continue
                w = upow[q]
                n = j - q
                if n not in w:
                    s = GradedPoly.zero("l")
                    for i, ui in u.items():
                        if 0 < i <= n:
                            c = (q + 1) * i - n
                            if c and (n - i) in w and w[n - i]:
                                s = s + (ui * w[n - i]).scale(c)
                    w[n] = s.scale(Fraction(1, n))
                if w[n]:
                    acc = acc + lm * w[n]
            if acc:
                ej = -acc
                coeffs[(j, 0)] = ej
                u[j - 1] = ej
        return Series(p, "l", coeffs, k + 1, weight=-1)

    # -- operations --------------------------------------------------------

    def formal_sum(self, s: Series, t: Series) -> Series:
        """exp(log(s) + log(t)) for series with zero constant term."""
        for a in (s, t):
            if a.validity > 0 and a.coeffs.get((0, 0)):
                raise ValueError("formal sum requires zero constant terms")
        return self.exp.compose(self.log.compose(s) + self.log.compose(t))

    def n_series(self, n: int) -> Series:
        """[n]xi = exp(n log xi), cached."""
        if n < 0:
            raise ValueError("negative n-series is not supported")
        got = self._n_series.get(n)
        if got is None:
            if n == 0:
                got = Series.zero(self.p, "l", self.k + 1, weight=-1)
            else:
                got = self.exp.compose(self.log.scale(n))
            self._n_series[n] = got
        return got

    def p_series(self, basis: str = "l") -> Series:
        ser = self.n_series(self.p)
        return ser if basis == "l" else self.to_v(ser, integral=True)

    def reduced_p_series(self, basis: str = "l") -> Series:
        """<p>xi = [p]xi / xi; constant term p, weight 0, validity k."""
        got = self._pser.get(basis)
        if got is None:
            if basis == "l":
                got = self.n_series(self.p).shift_xi(-1)
            else:
                got = self.to_v(self.reduced_p_series("l"), integral=True)
                if got.constant_term() != self.p:
                    raise AssertionError("reduced p-series constant term is not p")
            self._pser[basis] = got
        return got

    def to_v(self, s: Series, integral: bool = False) -> Series:
        """Substitute every l_m by its v-basis expansion; weight is preserved."""
        if s.basis != "l":
            raise ValueError("substitution source must be in the l-basis")
        need = max((c.max_gen_index() for c in s.coeffs.values()), default=0)
        if need > self.horizon:
            raise HorizonError(
                f"series mentions l_{need} beyond the horizon {self.horizon} for k={self.k}"
            )
        out = s.map_polys(
            lambda c: c.substitute(self._ell_table, "v", self._subcache), basis="v"
        )
        if integral and not out.is_integral():
            bad = next(e for e in sorted(out.coeffs) if not out.coeffs[e].is_integral())
            raise IntegralityError(
                f"non-integer v-basis coefficient at exponent {bad}; generator table is broken"
            )
        return out

    def cp_image(self, i: int) -> GradedPoly:
        """Image of the i-th projective-space class: p^m l_m if i = p^m - 1, else 0."""
        if i < 0:
            raise ValueError("negative dimension")
        if i == 0:
            return GradedPoly.const(1, "v")
        m = 0
        q = 1
        while q - 1 < i:
            q *= self.p
            m += 1
        if q - 1 != i:
            return GradedPoly.zero("v")
        if m > self.horizon:
            raise HorizonError(f"l_{m} is beyond the horizon {self.horizon} for k={self.k}")
        out = self.ell[m].scale(self.p ** m)
        if not out.is_integral():
            raise IntegralityError(f"p^{m} l_{m} is not integral; generator table is broken")
        return out


def build_context(p: int, k: int) -> FglContext:
    return FglContext(p, k)
