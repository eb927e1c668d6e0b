"""Truncated power series over GradedPoly coefficients, with validity tracking.

A Series stores a map (j_xi, j_x) -> GradedPoly for the coefficient of
xi^j_xi * x^j_x, together with

  validity V : the series is asserted correct modulo (xi, x)^V; every stored
               exponent pair satisfies j_xi + j_x < V,
  weight  w  : optional; when declared, the coefficient at (j_xi, j_x) is
               homogeneous of weight w + j_xi + j_x (xi and x both carry
               weight -1),
  prime, basis : the ambient prime and generator basis.

Validity propagates through arithmetic:

  add/sub:  min(V_A, V_B)
  mul:      min(V_A + val(B), V_B + val(A))      val = lowest total degree
  compose:  min(V_B + (val(A) - 1) val(B), V_A val(B))

where the valuation of a series with no stored terms is its validity (a zero
series is only known to vanish below its validity).  Negative xi exponents
are permitted on Laurent series, used by the localized cross-check route;
those never flow into the integral pipeline.
"""

from __future__ import annotations

from fractions import Fraction

from .poly import BasisMismatchError, GradedPoly, UNIT_MONO, mono_mul, _norm_coef


class OutsideValidityError(ValueError):
    """Requested a coefficient at or beyond the series' validity order."""


class NonUnitError(ValueError):
    """Reciprocal of a series whose lowest coefficient is not invertible."""


class Series:
    __slots__ = ("prime", "basis", "coeffs", "validity", "weight", "laurent")

    def __init__(self, prime: int, basis: str, coeffs: dict, validity: int,
                 weight: int | None = None, laurent: bool = False):
        self.prime = prime
        self.basis = basis
        self.validity = validity
        self.weight = weight
        self.laurent = laurent
        self.coeffs = {
            e: c for e, c in coeffs.items()
            if c and e[0] + e[1] < validity
        }
        if not laurent and any(e[0] < 0 or e[1] < 0 for e in self.coeffs):
            raise ValueError("negative exponent in non-Laurent series")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, prime: int, basis: str, validity: int, weight: int | None = None) -> "Series":
        return cls(prime, basis, {}, validity, weight)

    @classmethod
    def variable(cls, prime: int, basis: str, validity: int, var: str = "xi") -> "Series":
        e = (1, 0) if var == "xi" else (0, 1)
        return cls(prime, basis, {e: GradedPoly.const(1, basis)}, validity, weight=-1)

    @classmethod
    def from_const(cls, c, prime: int, basis: str, validity: int) -> "Series":
        return cls(prime, basis, {(0, 0): GradedPoly.const(c, basis)}, validity, weight=0)

    # -- structure ---------------------------------------------------------

    def val(self) -> int:
        """(xi, x)-adic valuation of the stored part; validity if none stored."""
        if not self.coeffs:
            return self.validity
        return min(e[0] + e[1] for e in self.coeffs)

    def is_univariate(self) -> bool:
        return all(e[1] == 0 for e in self.coeffs)

    def coefficient(self, j_xi: int, j_x: int = 0) -> GradedPoly:
        if j_xi + j_x >= self.validity:
            raise OutsideValidityError(
                f"coefficient at ({j_xi},{j_x}) requested but series is only valid mod degree {self.validity}"
            )
        return self.coeffs.get((j_xi, j_x), GradedPoly.zero(self.basis))

    def constant_term(self):
        return self.coefficient(0, 0).constant_term()

    def x_row(self, m: int) -> "Series":
        """Coefficient of x^m as a univariate series in xi; validity drops by m."""
        coeffs = {(j, 0): c for (j, jx), c in self.coeffs.items() if jx == m}
        w = None if self.weight is None else self.weight + m
        return Series(self.prime, self.basis, coeffs, self.validity - m, w, self.laurent)

    def truncate(self, order: int) -> "Series":
        return Series(self.prime, self.basis,
                      {e: c for e, c in self.coeffs.items() if e[0] + e[1] < order},
                      min(self.validity, order), self.weight, self.laurent)

    def shift_xi(self, d: int) -> "Series":
        """Multiply by xi^d (d may be negative; going below xi^0 makes it Laurent)."""
        coeffs = {}
        laurent = self.laurent
        for (j, jx), c in self.coeffs.items():
            if j + d < 0:
                laurent = True
            coeffs[(j + d, jx)] = c
        w = None if self.weight is None else self.weight - d
        return Series(self.prime, self.basis, coeffs, self.validity + d, w, laurent)

    def shift_x(self, d: int) -> "Series":
        coeffs = {(j, jx + d): c for (j, jx), c in self.coeffs.items()}
        w = None if self.weight is None else self.weight - d
        return Series(self.prime, self.basis, coeffs, self.validity + d, w, self.laurent)

    def map_polys(self, fn, basis: str | None = None, keep_weight: bool = True) -> "Series":
        out = {}
        for e, c in self.coeffs.items():
            q = fn(c)
            if q:
                out[e] = q
        w = self.weight if keep_weight else None
        return Series(self.prime, basis or self.basis, out, self.validity, w, self.laurent)

    def kill_generators(self, indices) -> "Series":
        return self.map_polys(lambda c: c.kill_generators(indices))

    def is_integral(self) -> bool:
        return all(c.is_integral() for c in self.coeffs.values())

    def assert_weight(self):
        """Homogeneity scan: every stored coefficient matches the declared weight."""
        if self.weight is None:
            return
        for (j, jx), c in self.coeffs.items():
            if not c.is_homogeneous(self.prime, self.weight + j + jx):
                raise AssertionError(
                    f"coefficient at ({j},{jx}) is not homogeneous of weight {self.weight + j + jx}"
                )

    # -- comparisons -------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return (self.prime == other.prime and self.basis == other.basis
                and self.validity == other.validity and self.coeffs == other.coeffs)

    def agrees_with(self, other: "Series", through: int | None = None) -> bool:
        """Equality of all coefficients below min validity (or below `through`)."""
        lim = min(self.validity, other.validity)
        if through is not None:
            lim = min(lim, through)
        for e in set(self.coeffs) | set(other.coeffs):
            if e[0] + e[1] >= lim:
                continue
            if self.coeffs.get(e, _ZERO.get(self.basis)) != other.coeffs.get(e, _ZERO.get(self.basis)):
                return False
        return True

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "Series"):
        if self.prime != other.prime:
            raise ValueError(f"prime mismatch {self.prime} vs {other.prime}")
        if self.basis != other.basis:
            raise BasisMismatchError(f"cannot mix bases {self.basis!r} and {other.basis!r}")

    def _merge_weight(self, other: "Series"):
        # a stored-empty series is homogeneous of every weight
        if not self.coeffs:
            return other.weight
        if not other.coeffs:
            return self.weight
        if self.weight == other.weight:
            return self.weight
        return None

    def __add__(self, other: "Series") -> "Series":
        self._check(other)
        v = min(self.validity, other.validity)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            s = out.get(e)
            out[e] = c if s is None else s + c
        return Series(self.prime, self.basis, out, v, self._merge_weight(other),
                      self.laurent or other.laurent)

    def __sub__(self, other: "Series") -> "Series":
        self._check(other)
        v = min(self.validity, other.validity)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            s = out.get(e)
            out[e] = -c if s is None else s - c
        return Series(self.prime, self.basis, out, v, self._merge_weight(other),
                      self.laurent or other.laurent)

    def __neg__(self) -> "Series":
        return self.map_polys(lambda c: -c)

    def __mul__(self, other: "Series") -> "Series":
        self._check(other)
        v = min(self.validity + other.val(), other.validity + self.val())
        out: dict = {}
        items2 = list(other.coeffs.items())
        for (j1, m1), p1 in self.coeffs.items():
            d1 = j1 + m1
            t1 = p1.terms
            for (j2, m2), p2 in items2:
                if d1 + j2 + m2 >= v:
                    continue
                key = (j1 + j2, m1 + m2)
                tgt = out.get(key)
                if tgt is None:
                    tgt = out[key] = {}
                for mo1, c1 in t1.items():
                    for mo2, c2 in p2.terms.items():
                        mo = mono_mul(mo1, mo2)
                        s = tgt.get(mo, 0) + c1 * c2
                        if s:
                            tgt[mo] = s
                        else:
                            del tgt[mo]
        coeffs = {}
        for e, terms in out.items():
            if terms:
                pl = GradedPoly.zero(self.basis)
                pl.terms = {m: _norm_coef(c) for m, c in terms.items()}
                coeffs[e] = pl
        w = None
        if self.weight is not None and other.weight is not None:
            w = self.weight + other.weight
        return Series(self.prime, self.basis, coeffs, v, w,
                      self.laurent or other.laurent)

    def scale(self, c) -> "Series":
        if not c:
            return Series(self.prime, self.basis, {}, self.validity, self.weight, self.laurent)
        return self.map_polys(lambda q: q.scale(c))

    def scale_poly(self, poly: GradedPoly) -> "Series":
        """Multiply every coefficient by a fixed polynomial."""
        if self.basis != poly.basis:
            raise BasisMismatchError(f"cannot mix bases {self.basis!r} and {poly.basis!r}")
        if not poly:
            return Series(self.prime, self.basis, {}, self.validity, None, self.laurent)
        out = {}
        for e, c in self.coeffs.items():
            q = c * poly
            if q:
                out[e] = q
        w = None
        if self.weight is not None:
            try:
                pw = poly.weight(self.prime)
            except ValueError:
                pw = None
            if pw is not None:
                w = self.weight + pw
        return Series(self.prime, self.basis, out, self.validity, w, self.laurent)

    def __pow__(self, n: int) -> "Series":
        if n < 0:
            raise ValueError("negative series power; use reciprocal")
        if n == 0:
            return Series.from_const(1, self.prime, self.basis, self.validity)
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            if n > 1:
                base = base * base
            n >>= 1
        return result

    # -- composition and reciprocal ---------------------------------------

    def compose(self, inner: "Series", _pow_cache: dict | None = None) -> "Series":
        """self(inner) for univariate self; inner must have zero constant term."""
        if not self.is_univariate():
            raise ValueError("outer series of a composition must be univariate")
        if self.laurent:
            raise ValueError("cannot compose a Laurent outer series")
        if inner.validity > 0 and inner.coeffs.get((0, 0)):
            raise ValueError("inner series must have zero constant term")
        self._check(inner)

        terms = sorted(
            ((j, c) for (j, _z), c in self.coeffs.items() if j > 0),
            reverse=True,
        )
        const = self.coeffs.get((0, 0))
        dB = inner.val()
        vA = min((j for j, _c in terms), default=self.validity)
        v = min(inner.validity + (vA - 1) * dB, self.validity * dB)

        if not terms:
            out = Series(self.prime, self.basis, {}, v, None)
        else:
            pow_cache = _pow_cache if _pow_cache is not None else {}

            def inner_pow(e: int) -> "Series":
                pw = pow_cache.get(e)
                if pw is None:
                    pw = inner ** e
                    pow_cache[e] = pw
                return pw

            # Horner over the nonzero outer exponents, highest first
            acc = None
            prev_exp = None
            for j, c in terms:
                cpoly = Series(self.prime, self.basis, {(0, 0): c}, v - j * dB, None)
                if acc is None:
                    acc = cpoly
                else:
                    acc = (acc * inner_pow(prev_exp - j)).truncate(v - j * dB) + cpoly
                prev_exp = j
            out = (acc * inner_pow(prev_exp)).truncate(v)

        if const:
            out = out + Series(self.prime, self.basis, {(0, 0): const}, v, None)
        w = self.weight if (self.weight is not None and inner.weight == -1) else None
        return Series(self.prime, self.basis, dict(out.coeffs), out.validity, w, inner.laurent)

    def reciprocal(self) -> "Series":
        """Multiplicative inverse; the lowest coefficient must be a nonzero constant."""
        if not self.is_univariate():
            raise ValueError("reciprocal implemented for univariate series only")
        d = self.val()
        if not self.coeffs:
            raise NonUnitError("series is zero within its validity")
        lead = self.coeffs.get((d, 0))
        if lead is None or set(lead.terms) != {UNIT_MONO}:
            raise NonUnitError("lowest-order coefficient is not a nonzero constant")
        u0 = lead.constant_term()
        unit = self.shift_xi(-d)  # constant term u0, valid mod xi^(V-d)
        vu = unit.validity
        inv0 = Fraction(1) / Fraction(u0)
        out = {(0, 0): GradedPoly.const(_norm_coef(inv0), self.basis)}
        src = unit.coeffs
        for j in range(1, vu):
            acc = GradedPoly.zero(self.basis)
            for i in range(1, j + 1):
                ui = src.get((i, 0))
                rj = out.get((j - i, 0))
                if ui is not None and rj is not None:
                    acc = acc + ui * rj
            if acc:
                out[(j, 0)] = acc.scale(_norm_coef(-inv0))
        w = None if self.weight is None else -self.weight
        res = Series(self.prime, self.basis, out, vu, None, self.laurent).shift_xi(-d)
        res.weight = w
        return res

    def __repr__(self) -> str:
        from .render import series_text

        return f"Series({series_text(self)!r}, p={self.prime}, basis={self.basis!r})"


_ZERO = {"v": GradedPoly.zero("v"), "l": GradedPoly.zero("l")}
