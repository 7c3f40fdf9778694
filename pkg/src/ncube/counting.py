"""Exact counts for the n-cube: configuration space, group order, orbits, odds.

Everything here is integer or :class:`fractions.Fraction` arithmetic.  Large
products are carried as :class:`Factored` values so they can be printed as
``(24!)^3·2^8·12!·8!·3^7`` as well as in decimal.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .errors import SizeTooSmall
from .geometry import piece_counts as _piece_counts

STICKER = "sticker"
MECHANICAL = "mech"
MODELS = (STICKER, MECHANICAL)


def _check(n: int) -> None:
    if n < 3:
        raise SizeTooSmall(f"n={n}: cubes below 3x3x3 are not supported")


def circles(n: int) -> int:
    _check(n)
    return (n - 3) // 2 if n % 2 else n // 2 - 1


@dataclass
class Factored:
    """A product of factorials and powers of 2 and 3 (exponents may be negative)."""

    factorials: Counter = field(default_factory=Counter)
    two: int = 0
    three: int = 0

    def __mul__(self, other: "Factored") -> "Factored":
        facts = Counter(self.factorials)
        facts.update(other.factorials)
        return Factored.of(facts, self.two + other.two, self.three + other.three)

    def __truediv__(self, other: "Factored") -> "Factored":
        facts = Counter(self.factorials)
        facts.subtract(other.factorials)
        return Factored.of(facts, self.two - other.two, self.three - other.three)

    @classmethod
    def of(cls, facts=None, two=0, three=0) -> "Factored":
        return cls(Counter({f: e for f, e in (facts or {}).items() if e}), two, three)

    @property
    def value(self) -> Fraction:
        v = Fraction(1)
        for f, e in self.factorials.items():
            v *= Fraction(factorial(f)) ** e
        return v * Fraction(2) ** self.two * Fraction(3) ** self.three

    def __int__(self) -> int:
        v = self.value
        if v.denominator != 1:
            raise ValueError(f"{self} is not an integer")
        return v.numerator

    def __str__(self) -> str:
        def fact(f, e):
            return f"{f}!" if e == 1 else f"({f}!)^{e}"

        def power(p, e):
            return f"{p}" if e == 1 else f"{p}^{e}"

        facts = sorted(((f, e) for f, e in self.factorials.items() if e > 0), reverse=True)
        num = [fact(f, e) for f, e in facts[:1]]
        if self.two > 0:
            num.append(power(2, self.two))
        num += [fact(f, e) for f, e in facts[1:]]
        if self.three > 0:
            num.append(power(3, self.three))
        den = [fact(f, -e) for f, e in sorted(self.factorials.items(), reverse=True) if e < 0]
        if self.two < 0:
            den.append(power(2, -self.two))
        if self.three < 0:
            den.append(power(3, -self.three))
        text = "·".join(num) or "1"
        if den:
            text += "/" + ("·".join(den) if len(den) == 1 else "(" + "·".join(den) + ")")
        return text


def piece_counts(n: int) -> dict:
    """``c``, ``e``, ``g``, ``K`` and the center-edge sizes ``z_k``."""
    return _piece_counts(n)


def conf_cardinality_factored(n: int) -> Factored:
    _check(n)
    K = circles(n)
    out = Factored.of({8: 1}, three=8)
    if n % 2:
        out = out * Factored.of({12: 1}, two=12)
    for k in range(1, K + 1):
        zk = 24 * (2 * k - 1) if n % 2 else 48 * (k - 1)
        # wings, center corners, center edges
        out = out * Factored.of({24: 2}, two=24) * Factored.of({zk: 1} if zk > 1 else {})
    return out


def conf_cardinality(n: int) -> int:
    """Size of the labelled configuration space."""
    return int(conf_cardinality_factored(n))


def center_orbit_count(n: int) -> int:
    """Number of 24-facet center orbits (center corners and center edges)."""
    K = circles(n)
    return K * (K + 1) if n % 2 else K * K


def group_order_factored(n: int) -> Factored:
    """Order of the move group, one factor per independent piece orbit.

    Corners give ``8!·3^7``, single edges ``12!·2^11``, each wing circle and
    each 24-facet center orbit ``24!``.  Every orbit's permutation is then
    halved, and ``2^(K+1)`` sign combinations survive: the corner sign plus
    one wing sign per circle determine every other sign.
    """
    K = circles(n)
    out = Factored.of({8: 1}, two=-1, three=7)
    if n % 2:
        out = out * Factored.of({12: 1}, two=10)
    m = K + center_orbit_count(n)
    return out * Factored.of({24: m}, two=-m + K + 1)


def group_order(n: int) -> int:
    return int(group_order_factored(n))


def orbit_count_factored(n: int) -> Factored:
    return conf_cardinality_factored(n) / group_order_factored(n)


def orbit_count(n: int) -> int:
    """Number of orbits of the move group on the configuration space.

    The action is free, so this is ``|S_Conf| / |G|``; the division is exact.
    """
    conf, order = conf_cardinality(n), group_order(n)
    q, r = divmod(conf, order)
    assert r == 0, "group order must divide the configuration count"
    return q


def condition_factors(n: int) -> list[tuple[str, int]]:
    """One orbit-count factor per law condition, as ``(condition, factor)``.

    This counts the constraints imposed by the law alone; it equals
    :func:`orbit_count` whenever every center orbit is a whole circle class.
    """
    K = circles(n)
    if n % 2:
        return [
            ("1 signs of sigma, tau, rho_c", 2 ** (K + 1)),
            ("2 wing signs", 2**K),
            ("3 corner twist", 3),
            ("4 edge flip", 2),
            ("5 wing orientation", 2 ** (24 * K)),
        ]
    return [
        ("1 signs of sigma, rho_c", 2**K),
        ("2 corner twist", 3),
        ("3 wing orientation", 2 ** (24 * K)),
        ("4 center edge signs", 2 ** max(K - 1, 0)),
    ]


def condition_orbit_count(n: int) -> int:
    out = 1
    for _, f in condition_factors(n):
        out *= f
    return out


def solvability_probability(n: int, model: str) -> Fraction:
    """Chance that a uniformly random colour assembly is solvable."""
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}")
    K = circles(n)
    base = 12 if n % 2 else 3
    if model == MECHANICAL:
        return Fraction(1, base)
    return Fraction(1, base * 2 ** (12 * K))


def probability_from_group(n: int) -> Fraction:
    """Sticker-model odds recomputed from the group order.

    Valid colour states number ``|G| / |H|`` where ``H`` is the subgroup of
    moves that only permute same-coloured center labels: in each center
    orbit, permutations inside the six same-coloured 4-sets whose overall
    sign is even.
    Dividing by the number of colour assemblies gives the probability.
    """
    K = circles(n)
    orbits = center_orbit_count(n)
    H = (factorial(4) ** 6 // 2) ** orbits
    space = factorial(8) * 3**8
    if n % 2:
        space *= factorial(12) * 2**12
    space *= (factorial(24) // 2**12 * 2**24) ** K
    space *= (factorial(24) // factorial(4) ** 6) ** orbits
    return Fraction(group_order(n), H) / space
