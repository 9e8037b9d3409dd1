"""Function descriptions over GF(p^n) and their lookup tables.

A function is described symbolically by one of the ``FnSpec`` variants below
and turned into a dense lookup table with :func:`materialize`.  Everything
downstream (difference tables, verification) works on :class:`FnTable`.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Union

import numpy as np

from .field import Field

__all__ = [
    "PowerMap",
    "Poly",
    "Lut",
    "CycleComposed",
    "TraceSwitched",
    "FnSpec",
    "FnTable",
    "FnError",
    "BadLutLengthError",
    "CycleEntryOutOfRangeError",
    "NotAPermutationError",
    "ConditionViolatedError",
    "LutFormatError",
    "materialize",
    "is_permutation",
    "is_odd",
    "fixed_points",
    "compositional_inverse",
    "inverse_map",
    "catalog",
    "CATALOG_NAMES",
    "read_lut",
    "write_lut",
]


class FnError(ValueError):
    pass


class BadLutLengthError(FnError):
    pass


class CycleEntryOutOfRangeError(FnError):
    pass


class NotAPermutationError(FnError):
    pass


class ConditionViolatedError(FnError):
    """The requested family is not defined over this field."""


class LutFormatError(FnError):
    pass


@dataclass(frozen=True)
class PowerMap:
    """``X -> X**d``; 0 maps to 0 for d >= 1 and to 1 for d = 0."""

    d: int


@dataclass(frozen=True)
class Poly:
    """``sum c * X**e`` over ``terms = ((c, e), ...)``."""

    terms: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple((int(c), int(e)) for c, e in self.terms))


@dataclass(frozen=True)
class Lut:
    table: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(int(v) for v in self.table))


@dataclass(frozen=True)
class CycleComposed:
    """``inner(sigma(X))`` where sigma is the cycle read left to right.

    ``cycle=(0, 1, -1)`` sends 0 -> 1, 1 -> -1 and -1 -> 0.
    """

    inner: "FnSpec"
    cycle: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "cycle", tuple(int(c) for c in self.cycle))


@dataclass(frozen=True)
class TraceSwitched:
    """``inner(X) + alpha * Tr(h(X))``."""

    inner: "FnSpec"
    alpha: int
    h: "FnSpec"


FnSpec = Union[PowerMap, Poly, Lut, CycleComposed, TraceSwitched]


@dataclass(frozen=True, eq=False)
class FnTable:
    field: Field
    lut: np.ndarray
    spec: FnSpec | None = None

    def __post_init__(self):
        self.lut.flags.writeable = False

    def __len__(self):
        return len(self.lut)

    def __getitem__(self, x):
        return int(self.lut[x])

    def __eq__(self, other):
        return (
            isinstance(other, FnTable)
            and self.field == other.field
            and np.array_equal(self.lut, other.lut)
        )

    def __hash__(self):
        return hash((self.field, self.lut.tobytes()))

    @property
    def power_exponent(self) -> int | None:
        return self.spec.d if isinstance(self.spec, PowerMap) else None


def _eval(F: Field, spec: FnSpec) -> np.ndarray:
    if isinstance(spec, PowerMap):
        if spec.d < 0:
            raise FnError("negative exponent")
        return F.power_array(spec.d)
    if isinstance(spec, Poly):
        out = np.zeros(F.q, dtype=np.int64)
        for c, e in spec.terms:
            F.check(c)
            term = F.mul_table[c, F.power_array(e)]
            out = F.add_table[out, term]
        return out
    if isinstance(spec, Lut):
        if len(spec.table) != F.q:
            raise BadLutLengthError(f"table has {len(spec.table)} entries, expected {F.q}")
        out = np.asarray(spec.table, dtype=np.int64)
        if out.size and (out.min() < 0 or out.max() >= F.q):
            raise FnError("table entries must lie in [0, q)")
        return out
    if isinstance(spec, CycleComposed):
        cyc = spec.cycle
        if any(not 0 <= c < F.q for c in cyc):
            raise CycleEntryOutOfRangeError(f"cycle {cyc} leaves {F.label}")
        if len(set(cyc)) != len(cyc):
            raise FnError(f"cycle entries must be distinct: {cyc}")
        sigma = np.arange(F.q, dtype=np.int64)
        for i, c in enumerate(cyc):
            sigma[c] = cyc[(i + 1) % len(cyc)]
        return _eval(F, spec.inner)[sigma]
    if isinstance(spec, TraceSwitched):
        F.check(spec.alpha)
        inner = _eval(F, spec.inner)
        tr = F.trace_table[_eval(F, spec.h)]
        return F.add_table[inner, F.mul_table[spec.alpha, tr]]
    raise TypeError(f"unknown function spec {spec!r}")


def materialize(F: Field, spec: FnSpec) -> FnTable:
    return FnTable(F, _eval(F, spec).astype(np.int64, copy=True), spec)


def inverse_map(F: Field) -> PowerMap:
    return PowerMap(F.q - 2)


def is_permutation(t: FnTable) -> bool:
    return bool(np.all(np.bincount(t.lut, minlength=len(t.lut)) == 1))


def is_odd(t: FnTable) -> bool:
    neg = t.field.neg_table
    return bool(np.array_equal(t.lut[neg], neg[t.lut]))


def fixed_points(t: FnTable) -> set[int]:
    return {int(x) for x in np.flatnonzero(t.lut == np.arange(len(t.lut)))}


def compositional_inverse(t: FnTable) -> FnTable:
    if not is_permutation(t):
        raise NotAPermutationError("function is not a permutation")
    g = np.empty_like(t.lut)
    g[t.lut] = np.arange(len(t.lut))
    return FnTable(t.field, g, Lut(tuple(int(v) for v in g)))


CATALOG_NAMES = (
    "identity",
    "inverse",
    "f1",
    "f2",
    "f3",
    "f4",
    "f5",
    "f6",
    "modified_inverse",
    "modified_inverse_rev",
    "binomial",
    "switch_monomial",
)


def _require(cond: bool, msg: str):
    if not cond:
        raise ConditionViolatedError(msg)


def catalog(F: Field, which: str, *, k: int = 1, u: int | None = None,
            d: int | None = None, s: int | None = None) -> FnSpec:
    """Named function families.

    ``f1`` .. ``f6`` are the known odd APN power maps in odd characteristic;
    ``f5`` takes ``k``, ``binomial`` takes ``u`` (for ``X^(q-2) + u X^2``) and
    ``switch_monomial`` takes ``d, s`` (for ``X^(q-2) + Tr(g^s X^d)`` with g
    the canonical primitive element).
    """
    p, n, q = F.p, F.n, F.q
    if which == "identity":
        return PowerMap(1)
    if which in ("inverse", "f3"):
        if which == "f3":
            _require(q % 3 == 2, "f3 needs p^n = 2 mod 3")
        return inverse_map(F)
    if which == "f1":
        _require(p != 3, "f1 needs p != 3")
        return PowerMap(3)
    if which == "f2":
        _require(q % 3 == 2, "f2 needs p^n = 2 mod 3")
        return PowerMap((2 * q - 1) // 3)
    if which == "f4":
        _require(n % 2 == 0 and p ** (n // 2) % 3 == 1, "f4 needs n even and p^(n/2) = 1 mod 3")
        return PowerMap(p ** (n // 2) + 2)
    if which == "f5":
        _require(p == 5 and k >= 1 and gcd(2 * n, k) == 1, "f5 needs p = 5 and gcd(2n, k) = 1")
        return PowerMap((5**k + 1) // 2)
    if which == "f6":
        _require(p == 5 and n % 2 == 1, "f6 needs p = 5 and n odd")
        return PowerMap((5**n - 1) // 4 + (5 ** ((n + 1) // 2) - 1) // 2)
    if which == "modified_inverse":
        return CycleComposed(inverse_map(F), (0, 1, F.neg(1)))
    if which == "modified_inverse_rev":
        return CycleComposed(inverse_map(F), (0, F.neg(1), 1))
    if which == "binomial":
        _require(u is not None and u != 0, "binomial needs u != 0")
        return Poly(((1, q - 2), (F.check(u), 2)))
    if which == "switch_monomial":
        _require(d is not None and s is not None, "switch_monomial needs d and s")
        coeff = F.pow(F.primitive_element, s)
        return TraceSwitched(inverse_map(F), 1, Poly(((coeff, d),)))
    raise KeyError(f"unknown function family {which!r}")


# -- LUT text format: "p n" / modulus c_0..c_n / q values, one per line -------

def write_lut(t: FnTable) -> str:
    F = t.field
    lines = [f"{F.p} {F.n}", " ".join(str(c) for c in F.modulus)]
    lines.extend(str(int(v)) for v in t.lut)
    return "\n".join(lines) + "\n"


def read_lut(text: str) -> FnTable:
    """Parse the LUT text format; raises :class:`LutFormatError` on bad input."""
    from .field import FieldError, make_field

    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if len(lines) < 2:
        raise LutFormatError("LUT file needs a 'p n' line and a modulus line")
    try:
        p, n = (int(v) for v in lines[0].split())
        modulus = [int(v) for v in lines[1].split()]
        values = [int(v) for v in lines[2:]]
    except ValueError as exc:
        raise LutFormatError(f"malformed LUT file: {exc}") from None
    try:
        F = make_field(p, n, modulus)
    except FieldError as exc:
        raise LutFormatError(f"bad field header: {exc}") from None
    return materialize(F, Lut(tuple(values)))
