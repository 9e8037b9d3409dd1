"""Exhaustive c-DDT, DDT and BCT computation, uniformities and spectra.

All tables are dense ``q x q`` integer arrays indexed by element encoding,
``counts[a, b]``.  Rows are independent, so the builders accept a ``workers``
argument and fan rows out over a thread pool; the result does not depend on
the worker count.
"""

from __future__ import annotations

import io
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field

import numpy as np

from .funcrep import FnTable, PowerMap

__all__ = [
    "DEFAULT_MAX_Q",
    "SizeCapExceededError",
    "NotAPowerMapError",
    "CountTable",
    "Spectrum",
    "UniformityResult",
    "max_q",
    "check_size",
    "cddt_entry",
    "cddt_row",
    "cddt",
    "ddt",
    "c_differential_uniformity",
    "differential_uniformity",
    "cdiff_spectrum_power",
    "bct_entry",
    "bct_row",
    "bct",
    "boomerang_uniformity",
    "boomerang_spectrum_power",
    "row_histogram",
    "table_to_csv",
    "table_to_json",
]

DEFAULT_MAX_Q = 2048
MAX_Q_ENV = "UNIFORMITY_MAX_Q"


class SizeCapExceededError(ValueError):
    pass


class NotAPowerMapError(ValueError):
    pass


def max_q() -> int:
    """Active size cap: ``$UNIFORMITY_MAX_Q`` if set, else :data:`DEFAULT_MAX_Q`."""
    raw = os.environ.get(MAX_Q_ENV)
    return int(raw) if raw else DEFAULT_MAX_Q


def check_size(q: int, cap: int | None = None) -> None:
    cap = max_q() if cap is None else cap
    if q > cap:
        raise SizeCapExceededError(f"q = {q} exceeds the table size cap {cap}")


@dataclass(frozen=True, eq=False)
class CountTable:
    """``kind`` is ``"cDDT"`` or ``"BCT"``; ``c`` is None for BCT."""

    kind: str
    c: int | None
    counts: np.ndarray

    @property
    def q(self) -> int:
        return self.counts.shape[0]

    def __getitem__(self, ab):
        return int(self.counts[ab])


@dataclass(frozen=True)
class Spectrum:
    """Multiplicity histogram ``{i: number of b with entry i}`` of one table row."""

    kind: str
    counts: dict = dc_field(default_factory=dict)
    c: int | None = None

    def __post_init__(self):
        clean = {int(i): int(v) for i, v in sorted(self.counts.items()) if v}
        object.__setattr__(self, "counts", clean)

    def __getitem__(self, i):
        return self.counts.get(i, 0)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def weighted_total(self) -> int:
        return sum(i * v for i, v in self.counts.items())

    def render(self) -> str:
        sym = "v" if self.kind == "boomerang" else "ω"
        return "{" + ", ".join(f"{sym}_{i}={v}" for i, v in self.counts.items()) + "}"

    def to_json(self) -> dict:
        return {str(i): v for i, v in self.counts.items()}


@dataclass(frozen=True)
class UniformityResult:
    value: int
    witnesses: tuple[tuple[int, int], ...]

    @property
    def classification(self) -> str:
        if self.value == 1:
            return "PcN"
        if self.value == 2:
            return "APcN"
        return f"{self.value}-uniform"


def _run_rows(fn, rows, workers: int):
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, rows))
    return [fn(a) for a in rows]


# -- c-DDT --------------------------------------------------------------------

def _cf(t: FnTable, c: int) -> np.ndarray:
    """``c * f(X)`` as a vector."""
    return t.field.mul_table[c, t.lut]


def cddt_entry(t: FnTable, c: int, a: int, b: int) -> int:
    """``|{X : f(X + a) - c f(X) = b}|`` by scanning X."""
    F = t.field
    count = 0
    for x in range(F.q):
        if F.sub(t[F.add(x, a)], F.mul(c, t[x])) == b:
            count += 1
    return count


def cddt_row(t: FnTable, c: int, a: int) -> np.ndarray:
    F = t.field
    vals = F.sub_table[t.lut[F.add_table[a]], _cf(t, c)]
    return np.bincount(vals, minlength=F.q)


def cddt(t: FnTable, c: int, *, workers: int = 1, cap: int | None = None) -> CountTable:
    F = t.field
    check_size(F.q, cap)
    if workers and workers > 1:
        rows = _run_rows(lambda a: cddt_row(t, c, a), range(F.q), workers)
        counts = np.stack(rows)
    else:
        vals = F.sub_table[t.lut[F.add_table], _cf(t, c)[None, :]]
        offs = np.arange(F.q)[:, None] * F.q
        counts = np.bincount((vals + offs).ravel(), minlength=F.q * F.q).reshape(F.q, F.q)
    return CountTable("cDDT", c, counts)


def ddt(t: FnTable, **kw) -> CountTable:
    return cddt(t, 1, **kw)


def _uniformity(counts: np.ndarray, row_mask: np.ndarray, col_mask: np.ndarray) -> UniformityResult:
    sub = np.where(row_mask[:, None] & col_mask[None, :], counts, -1)
    value = int(sub.max())
    wa, wb = np.nonzero(sub == value)
    return UniformityResult(value, tuple(zip(wa.tolist(), wb.tolist())))


def c_differential_uniformity(t: FnTable, c: int, *, table: CountTable | None = None,
                              **kw) -> UniformityResult:
    """Max c-DDT entry; the a = 0 row only takes part when c != 1."""
    tab = table if table is not None else cddt(t, c, **kw)
    q = tab.q
    rows = np.ones(q, dtype=bool)
    if c == 1:
        rows[0] = False
    return _uniformity(tab.counts, rows, np.ones(q, dtype=bool))


def differential_uniformity(t: FnTable, **kw) -> int:
    return c_differential_uniformity(t, 1, **kw).value


def row_histogram(row: np.ndarray, kind: str, c: int | None = None,
                  skip_zero_b: bool = False) -> Spectrum:
    vals = row[1:] if skip_zero_b else row
    hist = np.bincount(vals)
    return Spectrum(kind, {i: int(v) for i, v in enumerate(hist)}, c)


def _require_power(t: FnTable):
    if not isinstance(t.spec, PowerMap):
        raise NotAPowerMapError("spectrum is only defined for power maps")


def cdiff_spectrum_power(t: FnTable, c: int) -> Spectrum:
    """Histogram of the a = 1 row of the c-DDT over all b."""
    _require_power(t)
    return row_histogram(cddt_row(t, c, 1), "cdiff", c)


# -- BCT ----------------------------------------------------------------------

def bct_entry(t: FnTable, a: int, b: int) -> int:
    """Pairs (X, Y) with f(X) - f(Y) = b and f(X + a) - f(Y + a) = b."""
    F = t.field
    count = 0
    for x in range(F.q):
        fx, fxa = t[x], t[F.add(x, a)]
        for y in range(F.q):
            if F.sub(fx, t[y]) == b and F.sub(fxa, t[F.add(y, a)]) == b:
                count += 1
    return count


class _PairDiffs:
    """Caches ``f(X) - f(Y)`` for all pairs; shared by every BCT row."""

    def __init__(self, t: FnTable):
        F = t.field
        self.field = F
        self.b1 = F.sub_table[t.lut[:, None], t.lut[None, :]]

    def row(self, a: int) -> np.ndarray:
        shift = self.field.add_table[a]
        b1 = self.b1
        b2 = b1[shift[:, None], shift[None, :]]
        return np.bincount(b1[b1 == b2], minlength=self.field.q)


def bct_row(t: FnTable, a: int) -> np.ndarray:
    check_size(t.field.q)
    return _PairDiffs(t).row(a)


def bct(t: FnTable, *, workers: int = 1, cap: int | None = None) -> CountTable:
    """Full BCT, one O(q^2) pass per row a."""
    check_size(t.field.q, cap)
    pd = _PairDiffs(t)
    rows = _run_rows(pd.row, range(t.field.q), workers)
    return CountTable("BCT", None, np.stack(rows))


def boomerang_uniformity(t: FnTable, *, table: CountTable | None = None,
                         full: bool = False, **kw) -> UniformityResult:
    """Max BCT entry over a, b != 0.

    Power maps only need the a = 1 row unless ``full`` is set; witnesses are
    then reported for a = 1 only.
    """
    q = t.field.q
    cols = np.ones(q, dtype=bool)
    cols[0] = False
    if table is None and not full and isinstance(t.spec, PowerMap):
        row = bct_row(t, 1)
        counts = np.zeros((q, q), dtype=np.int64)
        counts[1] = row
        rows = np.zeros(q, dtype=bool)
        rows[1] = True
        return _uniformity(counts, rows, cols)
    tab = table if table is not None else bct(t, **kw)
    rows = np.ones(q, dtype=bool)
    rows[0] = False
    return _uniformity(tab.counts, rows, cols)


def boomerang_spectrum_power(t: FnTable) -> Spectrum:
    """Histogram of the a = 1 BCT row over b != 0."""
    _require_power(t)
    return row_histogram(bct_row(t, 1), "boomerang", skip_zero_b=True)


# -- emitters -----------------------------------------------------------------

def table_to_csv(tab: CountTable) -> str:
    buf = io.StringIO()
    buf.write("a,b,count\n")
    q = tab.q
    for a in range(q):
        row = tab.counts[a]
        buf.write("".join(f"{a},{b},{int(row[b])}\n" for b in range(q)))
    return buf.getvalue()


def table_to_json(tab: CountTable, uni: UniformityResult, spectrum: Spectrum | None) -> str:
    doc = {
        "kind": tab.kind,
        "c": tab.c,
        "q": tab.q,
        "max": uni.value,
        "witnesses": [list(w) for w in uni.witnesses],
        "spectrum": spectrum.to_json() if spectrum is not None else None,
    }
    return json.dumps(doc)
