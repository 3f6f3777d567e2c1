"""Zip shift specifications and the measures they induce.

A zip shift is described by two finite alphabets, a positive one used at
indices ``i >= 0`` and a negative one used at indices ``i < 0``, a surjective
transition map ``phi`` from the positive alphabet onto the negative one, and
a probability vector on the positive alphabet.  Every probability in this
package is an exact :class:`fractions.Fraction`.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from types import MappingProxyType
from typing import Any, Mapping, Sequence

import numpy as np

__all__ = [
    "Side",
    "Symbol",
    "ZipShiftSpec",
    "DerivedMeasures",
    "ZipShiftError",
    "SpecError",
    "NonSurjectivePhi",
    "WeightsNotNormalized",
    "ZeroWeight",
    "DuplicateSymbol",
    "UnknownSymbol",
    "AlphabetMismatch",
    "ParseError",
    "BudgetExceeded",
    "validate_spec",
    "derive_measures",
    "parse_rational",
    "random_spec",
    "two_to_one_baker_spec",
    "uneven_three_symbol_spec",
    "bernoulli_spec",
]


class ZipShiftError(Exception):
    """Base class for every error raised by this package."""


class SpecError(ZipShiftError, ValueError):
    """A raw specification failed validation.

    ``symbol`` names the offending symbol (or key) when there is one, so that
    callers reading from a file can point at the right line.
    """

    def __init__(self, message: str, symbol: str | None = None):
        super().__init__(message)
        self.symbol = symbol


class NonSurjectivePhi(SpecError):
    pass


class WeightsNotNormalized(SpecError):
    pass


class ZeroWeight(SpecError):
    pass


class DuplicateSymbol(SpecError):
    pass


class ParseError(SpecError):
    pass


class UnknownSymbol(ZipShiftError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class AlphabetMismatch(ZipShiftError, ValueError):
    pass


class BudgetExceeded(ZipShiftError):
    """An enumeration would visit more words than the allowed budget."""

    def __init__(self, needed: int, budget: int, what: str = "enumeration"):
        super().__init__(f"{what} needs {needed} words, budget is {budget}")
        self.needed = needed
        self.budget = budget


class Side(enum.Enum):
    POSITIVE = "+"
    NEGATIVE = "-"

    @classmethod
    def of_index(cls, i: int) -> "Side":
        return cls.POSITIVE if i >= 0 else cls.NEGATIVE


@dataclass(frozen=True)
class Symbol:
    name: str
    side: Side

    def __str__(self):
        return self.name

    def __repr__(self):
        return f"{self.name}{self.side.value}"


def parse_rational(value: Any) -> Fraction:
    """Read an exact rational from ``"num/den"``, an int, or a Fraction.

    Floats are refused: a float weight has usually already lost the exact
    value the caller meant.
    """
    if isinstance(value, bool):
        raise ParseError(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"not a rational: {value!r}") from None
    raise ParseError(f"not a rational: {value!r} (use a 'num/den' string)")


@dataclass(frozen=True)
class ZipShiftSpec:
    """A validated zip shift.  Build it with :func:`validate_spec`.

    Symbol order is significant: it fixes word enumeration order and the
    strip/band layout of the baker realization.
    """

    s_plus: tuple[Symbol, ...]
    s_minus: tuple[Symbol, ...]
    phi: Mapping[Symbol, Symbol]
    p_plus: tuple[Fraction, ...]
    label: str = ""

    @property
    def l(self) -> int:  # noqa: E743
        return len(self.s_plus)

    @property
    def m(self) -> int:
        return len(self.s_minus)

    def alphabet(self, side: Side) -> tuple[Symbol, ...]:
        return self.s_plus if side is Side.POSITIVE else self.s_minus

    def alphabet_at(self, i: int) -> tuple[Symbol, ...]:
        return self.s_plus if i >= 0 else self.s_minus

    @cached_property
    def _index(self) -> Mapping[Symbol, int]:
        idx = {s: k for k, s in enumerate(self.s_plus)}
        idx.update({t: k for k, t in enumerate(self.s_minus)})
        return MappingProxyType(idx)

    def index_of(self, sym: Symbol) -> int:
        try:
            return self._index[sym]
        except KeyError:
            raise UnknownSymbol(f"unknown symbol {sym!r}") from None

    def symbol(self, name: str, side: Side) -> Symbol:
        sym = Symbol(name, side)
        self.index_of(sym)
        return sym

    @cached_property
    def phi_index(self) -> np.ndarray:
        """``phi`` as an integer array: positive index -> negative index."""
        arr = np.array([self._index[self.phi[s]] for s in self.s_plus], dtype=np.int64)
        arr.setflags(write=False)
        return arr

    def fiber(self, t: Symbol) -> tuple[Symbol, ...]:
        """The positive symbols mapped onto ``t``, in alphabet order."""
        self.index_of(t)
        if t.side is not Side.NEGATIVE:
            raise AlphabetMismatch(f"{t!r} is not a negative symbol")
        return tuple(s for s in self.s_plus if self.phi[s] == t)

    def weight(self, sym: Symbol) -> Fraction:
        """Cylinder weight of a single symbol: p+ for positive, p- for negative."""
        k = self.index_of(sym)
        if sym.side is Side.POSITIVE:
            return self.p_plus[k]
        return self.measures.p_minus[sym]

    @cached_property
    def measures(self) -> "DerivedMeasures":
        return derive_measures(self)

    @cached_property
    def common_denominator(self) -> int:
        """Least common denominator of all positive (hence negative) weights."""
        return math.lcm(*(p.denominator for p in self.p_plus))

    @cached_property
    def numerators(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Integer weights over :attr:`common_denominator` as (positive, negative)."""
        d = self.common_denominator
        plus = tuple(int(p * d) for p in self.p_plus)
        minus = [0] * self.m
        for k, a in enumerate(plus):
            minus[int(self.phi_index[k])] += a
        return plus, tuple(minus)

    def to_raw(self) -> dict:
        return {
            "label": self.label,
            "s_plus": [s.name for s in self.s_plus],
            "s_minus": [t.name for t in self.s_minus],
            "phi": {s.name: self.phi[s].name for s in self.s_plus},
            "p_plus": [f"{p.numerator}/{p.denominator}" for p in self.p_plus],
        }


@dataclass(frozen=True)
class DerivedMeasures:
    p_minus: Mapping[Symbol, Fraction]
    q: Mapping[Symbol, Mapping[Symbol, Fraction]]


def _names(raw: Mapping, key: str) -> list[str]:
    if key not in raw:
        raise ParseError(f"missing key {key!r}", symbol=key)
    names = raw[key]
    if isinstance(names, str) or not isinstance(names, Sequence):
        raise ParseError(f"{key!r} must be a list of names", symbol=key)
    out = []
    for n in names:
        if not isinstance(n, str) or not n:
            raise ParseError(f"{key!r} entries must be non-empty strings, got {n!r}", symbol=key)
        out.append(n)
    if not out:
        raise ParseError(f"{key!r} must not be empty", symbol=key)
    seen = set()
    for n in out:
        if n in seen:
            raise DuplicateSymbol(f"duplicate symbol {n!r} in {key!r}", symbol=n)
        seen.add(n)
    return out


def validate_spec(raw: Mapping[str, Any]) -> ZipShiftSpec:
    """Check a raw description and build a :class:`ZipShiftSpec`.

    ``raw`` has the keys ``s_plus``, ``s_minus`` (lists of names), ``phi``
    (positive name -> negative name), ``p_plus`` (rationals, in ``s_plus``
    order) and optionally ``label``.

    Raises
    ------
    ParseError
        Malformed structure, including a ``phi`` that is not total.
    DuplicateSymbol, NonSurjectivePhi, WeightsNotNormalized, ZeroWeight
    """
    if not isinstance(raw, Mapping):
        raise ParseError("spec must be a mapping")
    plus_names = _names(raw, "s_plus")
    minus_names = _names(raw, "s_minus")
    s_plus = tuple(Symbol(n, Side.POSITIVE) for n in plus_names)
    s_minus = tuple(Symbol(n, Side.NEGATIVE) for n in minus_names)

    phi_raw = raw.get("phi")
    if not isinstance(phi_raw, Mapping):
        raise ParseError("'phi' must be a mapping from s_plus names to s_minus names", symbol="phi")
    for key in phi_raw:
        if key not in plus_names:
            raise ParseError(f"phi maps {key!r}, which is not in s_plus", symbol=str(key))
    phi = {}
    for s in s_plus:
        if s.name not in phi_raw:
            raise ParseError(f"phi has no image for {s.name!r}", symbol=s.name)
        target = phi_raw[s.name]
        if target not in minus_names:
            raise ParseError(f"phi({s.name}) = {target!r} is not in s_minus", symbol=str(target))
        phi[s] = Symbol(target, Side.NEGATIVE)
    covered = set(phi.values())
    for t in s_minus:
        if t not in covered:
            raise NonSurjectivePhi(f"phi is not surjective: {t.name!r} has no preimage", symbol=t.name)

    if "p_plus" not in raw:
        raise ParseError("missing key 'p_plus'", symbol="p_plus")
    weights_raw = raw["p_plus"]
    if isinstance(weights_raw, str) or not isinstance(weights_raw, Sequence):
        raise ParseError("'p_plus' must be a list of 'num/den' strings", symbol="p_plus")
    if len(weights_raw) != len(s_plus):
        raise ParseError(
            f"p_plus has {len(weights_raw)} weights for {len(s_plus)} symbols", symbol="p_plus"
        )
    p_plus = tuple(parse_rational(w) for w in weights_raw)
    for s, p in zip(s_plus, p_plus):
        if p < 0:
            raise WeightsNotNormalized(f"negative weight {p} for {s.name!r}", symbol=s.name)
        if p == 0:
            raise ZeroWeight(f"weight of {s.name!r} is zero", symbol=s.name)
    total = sum(p_plus, Fraction(0))
    if total != 1:
        raise WeightsNotNormalized(f"p_plus sums to {total}, not 1", symbol="p_plus")

    label = raw.get("label", "")
    if not isinstance(label, str):
        raise ParseError("'label' must be a string", symbol="label")
    return ZipShiftSpec(s_plus, s_minus, MappingProxyType(phi), p_plus, label)


def derive_measures(spec: ZipShiftSpec) -> DerivedMeasures:
    """Push p+ forward through phi and split it into fiber distributions q."""
    p_minus = {t: Fraction(0) for t in spec.s_minus}
    for s, p in zip(spec.s_plus, spec.p_plus):
        p_minus[spec.phi[s]] += p
    q = {}
    for t in spec.s_minus:
        q[t] = MappingProxyType(
            {s: p / p_minus[t] for s, p in zip(spec.s_plus, spec.p_plus) if spec.phi[s] == t}
        )
    return DerivedMeasures(MappingProxyType(p_minus), MappingProxyType(q))


def random_spec(
    rng: np.random.Generator, max_l: int = 6, max_m: int | None = None, max_weight: int = 20
) -> ZipShiftSpec:
    """Draw a valid spec with ``l <= max_l`` and ``m <= min(l, max_m)``."""
    l = int(rng.integers(1, max_l + 1))  # noqa: E741
    m = int(rng.integers(1, min(l, max_m or l) + 1))
    targets = list(range(m)) + [int(t) for t in rng.integers(0, m, size=l - m)]
    targets = [targets[k] for k in rng.permutation(l)]
    ints = [int(w) for w in rng.integers(1, max_weight + 1, size=l)]
    total = sum(ints)
    return validate_spec(
        {
            "label": f"random-l{l}-m{m}",
            "s_plus": [str(k) for k in range(l)],
            "s_minus": [chr(ord("a") + k) for k in range(m)],
            "phi": {str(k): chr(ord("a") + t) for k, t in enumerate(targets)},
            "p_plus": [f"{w}/{total}" for w in ints],
        }
    )


def two_to_one_baker_spec() -> ZipShiftSpec:
    """Four equal strips folded 2-to-1 onto two bands."""
    return validate_spec(
        {
            "label": "2-to-1 baker",
            "s_plus": ["0", "1", "2", "3"],
            "s_minus": ["a", "b"],
            "phi": {"0": "a", "1": "a", "2": "b", "3": "b"},
            "p_plus": ["1/4", "1/4", "1/4", "1/4"],
        }
    )


def uneven_three_symbol_spec() -> ZipShiftSpec:
    """Three unequal strips, two of them folded onto ``a``."""
    return validate_spec(
        {
            "label": "uneven 3-to-2",
            "s_plus": ["0", "1", "2"],
            "s_minus": ["a", "b"],
            "phi": {"0": "a", "1": "a", "2": "b"},
            "p_plus": ["1/2", "1/4", "1/4"],
        }
    )


def bernoulli_spec(weights: Sequence[Any]) -> ZipShiftSpec:
    """An ordinary two-sided Bernoulli shift: phi is the identity on names."""
    names = [str(k) for k in range(len(weights))]
    return validate_spec(
        {
            "label": "bernoulli",
            "s_plus": names,
            "s_minus": names,
            "phi": {n: n for n in names},
            "p_plus": list(weights),
        }
    )
