"""Arithmetic in O_F = prod_n Q[c_n] and its Euler-class localization.

Only eventually constant sequences are representable. An element is stored
slice by slice: the slice at c-exponent k holds the coefficient of c_n^k for
every component n (homological degree -2k). In the localized ring negative
exponents are allowed, but such slices must have finite support.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import MalformedInput


def as_rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise MalformedInput(f"not a rational: {x!r}") from exc
    return Fraction(x)


def rat_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class TailSeq:
    """A sequence n -> Q (n >= 1) equal to `tail` outside finitely many indices."""

    exceptions: tuple[tuple[int, Fraction], ...] = ()
    tail: Fraction = Fraction(0)

    @classmethod
    def make(cls, exceptions: Mapping[int, object] | None = None, tail: object = 0) -> "TailSeq":
        t = as_rat(tail)
        exc = {}
        for n, v in (exceptions or {}).items():
            n = int(n)
            if n < 1:
                raise MalformedInput(f"component index must be >= 1, got {n}")
            v = as_rat(v)
            if v != t:
                exc[n] = v
        return cls(tuple(sorted(exc.items())), t)

    def __getitem__(self, n: int) -> Fraction:
        return dict(self.exceptions).get(n, self.tail)

    def support_keys(self) -> set[int]:
        return {n for n, _ in self.exceptions}

    def is_zero(self) -> bool:
        return not self.exceptions and self.tail == 0

    def _combine(self, other: "TailSeq", op) -> "TailSeq":
        keys = self.support_keys() | other.support_keys()
        return TailSeq.make({n: op(self[n], other[n]) for n in keys}, op(self.tail, other.tail))

    def __add__(self, other: "TailSeq") -> "TailSeq":
        return self._combine(other, lambda a, b: a + b)

    def __mul__(self, other: "TailSeq") -> "TailSeq":
        return self._combine(other, lambda a, b: a * b)

    def __neg__(self) -> "TailSeq":
        return TailSeq.make({n: -v for n, v in self.exceptions}, -self.tail)

    def to_json(self) -> dict:
        return {"tail": rat_str(self.tail), "exc": {str(n): rat_str(v) for n, v in self.exceptions}}


ZERO_SEQ = TailSeq()
ONE_SEQ = TailSeq((), Fraction(1))


def _normalize(slices: Mapping[int, TailSeq]) -> tuple[tuple[int, TailSeq], ...]:
    return tuple(sorted((k, s) for k, s in slices.items() if not s.is_zero()))


def _convolve(a: Iterable[tuple[int, TailSeq]], b: Iterable[tuple[int, TailSeq]]) -> dict[int, TailSeq]:
    out: dict[int, TailSeq] = {}
    b = list(b)
    for j, x in a:
        for k, y in b:
            out[j + k] = out.get(j + k, ZERO_SEQ) + x * y
    return out


@dataclass(frozen=True)
class OFElem:
    """Element of O_F: map from c-exponent k >= 0 to the k-slice."""

    slices: tuple[tuple[int, TailSeq], ...] = ()

    @classmethod
    def make(cls, slices: Mapping[int, TailSeq]) -> "OFElem":
        for k in slices:
            if k < 0:
                raise MalformedInput("O_F has no positive-degree part (negative c-exponent)")
        return cls(_normalize(slices))

    def slice(self, k: int) -> TailSeq:
        return dict(self.slices).get(k, ZERO_SEQ)

    def degrees(self) -> list[int]:
        return [-2 * k for k, _ in self.slices]

    def is_zero(self) -> bool:
        return not self.slices

    def component(self, n: int) -> dict[int, Fraction]:
        """The polynomial in c_n at component n, as {exponent: coefficient}."""
        return {k: s[n] for k, s in self.slices if s[n]}

    def __add__(self, other: "OFElem") -> "OFElem":
        d = dict(self.slices)
        for k, s in other.slices:
            d[k] = d.get(k, ZERO_SEQ) + s
        return OFElem.make(d)

    def __neg__(self) -> "OFElem":
        return OFElem.make({k: -s for k, s in self.slices})

    def __sub__(self, other: "OFElem") -> "OFElem":
        return self + (-other)

    def __mul__(self, other: "OFElem") -> "OFElem":
        return of_mul(self, other)

    def to_json(self) -> dict:
        return {"slices": [{"k": k, **s.to_json()} for k, s in self.slices]}

    @classmethod
    def from_json(cls, data: dict) -> "OFElem":
        return cls.make(_slices_from_json(data))


@dataclass(frozen=True)
class LocElem:
    """Element of E^{-1}O_F keyed by c-exponent (degree -2k).

    Negative exponents (positive degrees) must have finite support.
    """

    slices: tuple[tuple[int, TailSeq], ...] = ()

    @classmethod
    def make(cls, slices: Mapping[int, TailSeq]) -> "LocElem":
        for k, s in slices.items():
            if k < 0 and s.tail != 0:
                raise MalformedInput(
                    f"slice in degree {-2 * k} > 0 must be finitely supported (tail {s.tail})")
        return cls(_normalize(slices))

    def slice(self, k: int) -> TailSeq:
        return dict(self.slices).get(k, ZERO_SEQ)

    def is_zero(self) -> bool:
        return not self.slices

    def component(self, n: int) -> dict[int, Fraction]:
        return {k: s[n] for k, s in self.slices if s[n]}

    def __add__(self, other: "LocElem") -> "LocElem":
        d = dict(self.slices)
        for k, s in other.slices:
            d[k] = d.get(k, ZERO_SEQ) + s
        return LocElem.make(d)

    def __neg__(self) -> "LocElem":
        return LocElem.make({k: -s for k, s in self.slices})

    def __mul__(self, other: "LocElem") -> "LocElem":
        return loc_mul(self, other)

    def to_json(self) -> dict:
        return {"slices": [{"k": k, **s.to_json()} for k, s in self.slices]}

    @classmethod
    def from_json(cls, data: dict) -> "LocElem":
        return cls.make(_slices_from_json(data))


def _slices_from_json(data: dict) -> dict[int, TailSeq]:
    try:
        out: dict[int, TailSeq] = {}
        for i, entry in enumerate(data["slices"]):
            k = int(entry["k"])
            if k in out:
                raise MalformedInput(f"slices[{i}]: duplicate k={k}")
            out[k] = TailSeq.make({int(n): v for n, v in entry.get("exc", {}).items()},
                                  entry.get("tail", 0))
        return out
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"bad ring element: {exc}") from exc


def of_mul(x: OFElem, y: OFElem) -> OFElem:
    return OFElem.make(_convolve(x.slices, y.slices))


def loc_mul(x: LocElem, y: LocElem) -> LocElem:
    return LocElem.make(_convolve(x.slices, y.slices))


def localize_elem(x: OFElem) -> LocElem:
    return LocElem.make(dict(x.slices))


def idempotent(phi: Iterable[int], cofinite: bool = False) -> OFElem:
    """e_phi for a finite set phi, or for the complement of phi when `cofinite`."""
    phi = set(phi)
    if cofinite:
        seq = TailSeq.make({n: 0 for n in phi}, 1)
    else:
        seq = TailSeq.make({n: 1 for n in phi}, 0)
    return OFElem.make({0: seq})


def one() -> OFElem:
    return idempotent((), cofinite=True)


def euler_class() -> OFElem:
    """c, the element with c_n = e_n c for every n."""
    return OFElem.make({1: ONE_SEQ})


def c_n(n: int) -> OFElem:
    return OFElem.make({1: TailSeq.make({n: 1})})


def c_n_inverse(n: int) -> LocElem:
    return LocElem.make({-1: TailSeq.make({n: 1})})
