"""Obstruction series via the multi-index sum, with independent cross-checks.

The main route evaluates, for the multi-indices abar = (alpha_1, alpha_2, ...)
with |abar| <= n, |abar|' <= n and n - |abar|' of the form p^m - 1,

    raw(n) = sum  mu(-(n+1); abar) * cp(n - |abar|') * a_0^(n - |abar|)
                  * prod a_i^(alpha_i)

where mu(n; abar) is the coefficient of b^abar in (1 + b_1 + b_2 + ...)^n and
cp(i) is the image of the i-th projective-space class (p^m l_m at i = p^m - 1,
zero otherwise).  The reduced form modulo the reduced p-series is the
obstruction class; its lowest nonzero coefficient is the nonvanishing
certificate.

Cross-check routes (exact agreement within joint validity):
  * a localized rearrangement through the inverse of sum a_i z^i, computed
    over Laurent series in xi, and
  * the closed form at n = 2(p-1):
      (2p-1) a_0^(2p-4) (-v_1 a_0 a_(p-1) - a_0 a_(2p-2) + p a_(p-1)^2).

For odd p with n not divisible by p-1 the reduced class vanishes identically,
and the sum is skipped unless a full computation is forced.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from concurrent.futures.process import BrokenProcessPool

from .fgl import FglContext
from .poly import GradedPoly
from .powerop import PowerOpData
from .reduction import ReducedSeries, canonical_rep, nonvanishing_certificate
from .series import Series


class InsufficientTruncationError(ValueError):
    """The requested result has too little validity to mean anything."""


def multi_size(abar) -> int:
    return sum(abar)


def multi_weighted_size(abar) -> int:
    return sum(i * a for i, a in enumerate(abar, start=1))


def mu(n: int, abar) -> int:
    """Coefficient of b^abar in (1 + b_1 + b_2 + ...)^n, any integer n."""
    s = sum(abar)
    multinom = math.factorial(s)
    for a in abar:
        multinom //= math.factorial(a)
    if n >= 0:
        if s > n:
            return 0
        return math.comb(n, s) * multinom
    return (-1) ** s * multinom * math.comb(-n - 1 + s, s)


def _partitions(t: int):
    """Multiplicity tuples (alpha_1, ..., alpha_t) with sum i*alpha_i = t."""
    if t == 0:
        yield ()
        return

    def rec(remaining: int, largest: int):
        if remaining == 0:
            yield []
            return
        for part in range(min(remaining, largest), 0, -1):
            for rest in rec(remaining - part, part):
                yield [part] + rest

    for parts in rec(t, t):
        alpha = [0] * t
        for part in parts:
            alpha[part - 1] += 1
        while alpha and alpha[-1] == 0:
            alpha.pop()
        yield tuple(alpha)


def enumerate_indices(n: int, p: int):
    """Stream (abar, m) with n - |abar|' = p^m - 1, |abar| <= n; (k, abar)-lex order."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    targets = []
    q = 1
    m = 0
    while q - 1 <= n:
        targets.append((n - (q - 1), m))
        q *= p
        m += 1
    for t, mm in sorted(targets):
        batch = [ab for ab in _partitions(t) if sum(ab) <= n]
        for ab in sorted(batch):
            yield ab, mm


class ObstructionResult:
    __slots__ = ("n", "raw", "reduced", "certificate", "is_obstruction_index",
                 "used_shortcut")

    def __init__(self, n, raw, reduced, certificate, is_obstruction_index,
                 used_shortcut):
        self.n = n
        self.raw = raw
        self.reduced = reduced
        self.certificate = certificate
        self.is_obstruction_index = is_obstruction_index
        self.used_shortcut = used_shortcut


def _is_q_power_minus_one(n: int, p: int) -> bool:
    q = 1
    while q - 1 < n:
        q *= p
    return q - 1 == n


class _TermPlan:
    __slots__ = ("abar", "scalar", "cp", "alpha0")

    def __init__(self, abar, scalar, cp, alpha0):
        self.abar = abar
        self.scalar = scalar
        self.cp = cp
        self.alpha0 = alpha0


def _plan_terms(ctx: FglContext, n: int) -> list:
    plans = []
    for abar, _m in enumerate_indices(n, ctx.p):
        scalar = mu(-(n + 1), abar)
        if not scalar:
            continue
        cp = ctx.cp_image(n - multi_weighted_size(abar))
        if not cp:
            continue
        plans.append(_TermPlan(abar, scalar, cp, n - multi_size(abar)))
    return plans


def _term_validity(plan: _TermPlan, stats: list) -> int:
    """Validity of one summand from the (validity, valuation) of each factor."""
    total_val = 0
    worst = None
    slots = [(0, plan.alpha0)] + [(i, a) for i, a in enumerate(plan.abar, start=1) if a]
    for i, count in slots:
        if not count:
            continue
        v, d = stats[i]
        total_val += count * d
        head = v - d
        worst = head if worst is None else min(worst, head)
    if worst is None:  # empty product: the exact constant 1
        return stats[0][0]
    return worst + total_val


class _PowerCache:
    def __init__(self, a: list):
        self.a = a
        self.cache: dict = {}

    def get(self, i: int, e: int) -> Series:
        if e == 1:
            return self.a[i]
        got = self.cache.get((i, e))
        if got is None:
            half = self.get(i, e // 2)
            got = half * half if e % 2 == 0 else half * half * self.a[i]
            self.cache[(i, e)] = got
        return got


def _term_series(plan: _TermPlan, powers: _PowerCache) -> Series:
    factors = []
    if plan.alpha0:
        factors.append(powers.get(0, plan.alpha0))
    for i, a in enumerate(plan.abar, start=1):
        if a:
            factors.append(powers.get(i, a))
    if not factors:
        acc = Series.from_const(1, powers.a[0].prime, "v", powers.a[0].validity)
    else:
        acc = factors[0]
        for f in factors[1:]:
            acc = acc * f
    return acc.scale(plan.scalar).scale_poly(plan.cp)


_WORKER: dict = {}


def _worker_init(a_list):
    _WORKER["powers"] = _PowerCache(a_list)


def _worker_chunk(plans):
    powers = _WORKER["powers"]
    acc = None
    for plan in plans:
        t = _term_series(plan, powers)
        acc = t if acc is None else acc + t
    return acc


def mc(ctx: FglContext, data: PowerOpData, n: int, force_full: bool = False,
       threads: int = 1, progress=None) -> ObstructionResult:
    """The n-th obstruction series, raw and reduced modulo the reduced p-series."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    p = ctx.p
    plans = _plan_terms(ctx, n)
    max_i = max((len(pl.abar) for pl in plans), default=0)
    if max_i >= len(data.a):
        raise ValueError(
            f"need a_{max_i} but only a_0..a_{len(data.a) - 1} were computed; "
            f"raise the x order of the power operation"
        )
    stats = [(ai.validity, ai.val()) for ai in data.a]
    predicted = min((_term_validity(pl, stats) for pl in plans), default=ctx.k + 1)
    pser = ctx.reduced_p_series("v")
    is_obstruction = not _is_q_power_minus_one(n, p)

    if p > 2 and n % (p - 1) != 0 and not force_full:
        if predicted < p:
            raise InsufficientTruncationError(
                f"obstruction series would have validity {predicted} < p = {p}"
            )
        # identically zero in the quotient, so any validity claim is sound;
        # report the one the raw sum would have carried
        reduced = ReducedSeries(Series.zero(p, "v", predicted, weight=-n * (p - 2)))
        return ObstructionResult(n, None, reduced, None, is_obstruction, True)

    raw = _accumulate(plans, data.a, threads, progress)
    if raw is None:
        raw = Series.zero(p, "v", predicted, weight=-n * (p - 2))
    if raw.validity != predicted:
        raise AssertionError(
            f"validity bookkeeping mismatch: {raw.validity} != predicted {predicted}"
        )
    raw.weight = -n * (p - 2)
    raw.assert_weight()
    if not raw.is_integral():
        raise AssertionError("raw obstruction series is not integral")

    reduced = canonical_rep(raw, pser)
    if reduced.validity < p:
        raise InsufficientTruncationError(
            f"reduced obstruction has validity {reduced.validity} < p = {p}"
        )
    cert = nonvanishing_certificate(reduced)
    return ObstructionResult(n, raw, reduced, cert, is_obstruction, False)


def _accumulate(plans: list, a_list: list, threads: int, progress):
    if not plans:
        return None
    if threads > 1 and len(plans) > 8:
        try:
            chunks = _chunk(plans, threads * 4)
            acc = None
            done = 0
            with ProcessPoolExecutor(
                max_workers=threads, initializer=_worker_init, initargs=(a_list,)
            ) as pool:
                for i, part in enumerate(pool.map(_worker_chunk, chunks)):
                    if part is not None:
                        acc = part if acc is None else acc + part
                    done += len(chunks[i])
                    if progress is not None:
                        progress(done, len(plans))
            return acc
        except (OSError, BrokenProcessPool):
            pass  # fall back to the sequential path
    powers = _PowerCache(a_list)
    acc = None
    for idx, plan in enumerate(plans):
        t = _term_series(plan, powers)
        acc = t if acc is None else acc + t
        if progress is not None:
            progress(idx + 1, len(plans))
    return acc


def _chunk(items: list, parts: int) -> list:
    size = max(1, (len(items) + parts - 1) // parts)
    return [items[i:i + size] for i in range(0, len(items), size)]


def mc_via_inverse(ctx: FglContext, data: PowerOpData, n: int) -> Series:
    """Localized cross-check: a_0^n * sum_k cp(n-k) * (sum a_i z^i)^-(n+1) [z^k].

    Evaluated over Laurent series where a_0 is invertible; agrees exactly with
    the raw sum within joint validity.  Cross-check route only.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n >= len(data.a):
        raise ValueError(f"need a_{n} but only a_0..a_{len(data.a) - 1} were computed")
    p = ctx.p
    a0 = data.a[0]
    inv0 = a0.reciprocal()
    # U = sum_{i>=1} (a_i / a_0) z^i; z-coefficient lists have slots 0..n
    u = [None] * (n + 1)
    for i in range(1, n + 1):
        u[i] = data.a[i] * inv0
    upow = [None]  # upow[t][kk] = [z^kk] U^t
    cur = None
    for _t in range(1, n + 1):
        if cur is None:
            cur = list(u)
            cur[0] = None
        else:
            nxt = [None] * (n + 1)
            for za, sa in enumerate(cur):
                if sa is None:
                    continue
                for zb in range(1, n - za + 1):
                    sb = u[zb]
                    if sb is None:
                        continue
                    prod = sa * sb
                    nxt[za + zb] = prod if nxt[za + zb] is None else nxt[za + zb] + prod
            cur = nxt
        upow.append(list(cur))
    acc = None
    a0n = a0 ** n if n else None
    for kk in range(0, n + 1):
        cp = ctx.cp_image(n - kk)
        if not cp:
            continue
        if kk == 0:
            # [z^0] (1+U)^-(n+1) = 1
            term = a0n.scale_poly(cp) if a0n is not None else None
            if term is None:
                from_c = Series.from_const(1, p, "v", a0.validity)
                term = from_c.scale_poly(cp)
        else:
            # [z^kk] (1+U)^-(n+1) = sum_t binom(-(n+1), t) U^t [z^kk]
            wk = None
            for t in range(1, n + 1):
                part = upow[t][kk]
                if part is None:
                    continue
                c = (-1) ** t * math.comb(n + t, t)
                term_t = part.scale(c)
                wk = term_t if wk is None else wk + term_t
            if wk is None:
                continue
            term = (a0n * wk).scale_poly(cp) if a0n is not None else wk.scale_poly(cp)
        acc = term if acc is None else acc + term
    if acc is None:
        return Series.zero(p, "v", data.a[0].validity, weight=-n * (p - 2))
    if acc.coeffs and acc.val() < 0:
        raise AssertionError("localized route left negative exponents")
    return acc


def mc_explicit_2p2(ctx: FglContext, data: PowerOpData) -> Series:
    """Closed form of the obstruction at n = 2(p-1); cross-check route."""
    p = ctx.p
    n = 2 * (p - 1)
    if len(data.a) <= n or data.a[n].validity < 1:
        raise InsufficientTruncationError(f"a_{n} is not available at this truncation")
    a0, ap1, a2p2 = data.a[0], data.a[p - 1], data.a[n]
    v1 = GradedPoly.gen(1, "v")
    inner = (a0 * ap1).scale_poly(v1).scale(-1) - a0 * a2p2 + (ap1 * ap1).scale(p)
    if 2 * p - 4 > 0:
        inner = a0 ** (2 * p - 4) * inner
    return inner.scale(2 * p - 1)
