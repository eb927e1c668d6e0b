"""Embedded golden tables and the verify machinery.

Each suite file (golden/p<prime>.json) records the published series in the
JSON wire format: the reduced p-series where available, and the reduced
obstruction series for the listed n.  A table's "validity" is the published
display order; a computed series matches when

  * its validity reaches past the table's last nonzero exponent, and
  * every coefficient strictly below min(computed validity, table validity)
    agrees exactly (absent coefficients are zero).

The golden directory can be overridden with the FGLOPS_GOLDEN_DIR
environment variable.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

from .render import poly_text, series_from_obj
from .series import Series

ENV_GOLDEN_DIR = "FGLOPS_GOLDEN_DIR"

SUITES = ("p2", "p3", "p5", "p7", "p11", "p13")


def golden_dir() -> Path:
    override = os.environ.get(ENV_GOLDEN_DIR)
    if override:
        return Path(override)
    return Path(__file__).parent / "golden"


def load_suite(name: str) -> dict:
    path = golden_dir() / f"{name}.json"
    if not path.exists():
        raise FileNotFoundError(f"no golden suite {name!r} at {path}")
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


class Mismatch:
    __slots__ = ("table", "exponent", "got", "want")

    def __init__(self, table, exponent, got, want):
        self.table = table
        self.exponent = exponent
        self.got = got
        self.want = want

    def describe(self, prime: int) -> str:
        if self.exponent is None:
            return f"{self.table}: {self.want}"
        return (
            f"{self.table}: first mismatch at xi^{self.exponent}: "
            f"computed {poly_text(self.got, prime)}, table has {poly_text(self.want, prime)}"
        )


def compare_series(label: str, computed: Series, table: Series) -> list:
    """First mismatching coefficient against a golden table, if any."""
    last_nonzero = max((e[0] for e in table.coeffs), default=-1)
    if computed.validity <= last_nonzero:
        return [Mismatch(label, None, None,
                         f"computed validity {computed.validity} cannot certify the "
                         f"table's xi^{last_nonzero} coefficient")]
    lim = min(computed.validity, table.validity)
    for j in range(lim):
        got = computed.coefficient(j)
        want = table.coefficient(j)
        if got != want:
            return [Mismatch(label, j, got, want)]
    return []


def verify_suite(name: str, threads: int = 1, progress=None) -> list:
    """Run the computations a suite describes and compare; returns mismatches."""
    from .fgl import FglContext
    from .obstruction import mc
    from .powerop import power_operation

    suite = load_suite(name)
    p = suite["prime"]
    k = suite["truncation"]
    ctx = FglContext(p, k)
    mismatches = []

    tables = suite["tables"]
    mc_ns = [t["n"] for t in tables if t["kind"] == "mc"]
    data = None
    if mc_ns:
        data = power_operation(ctx, x_cap=max(mc_ns))

    for t in tables:
        want = series_from_obj(t["series"])
        if t["kind"] == "reduced-pseries":
            got = ctx.reduced_p_series("v")
            label = f"p={p} reduced-pseries"
        else:
            n = t["n"]
            result = mc(ctx, data, n, threads=threads, progress=progress)
            got = result.reduced.series
            label = f"p={p} MC_{n}"
        mismatches.extend(compare_series(label, got, want))
    return mismatches
