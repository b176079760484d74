"""Exact distance values with a symbolic infinitesimal component.

Hard instances for budgeted median selection place a large cluster of
points at a distance so small that no sum of cluster distances can ever
compete with a single integer hop.  That separation is realized here as
``eps``, a formal symbol standing for 1/2**n on an n-point space.  A
float cannot hold 1/2**n once n is in the thousands, so distances are
kept as an exact pair: integer hop units plus an integer count of eps.

Ordering is lexicographic on (units, eps_count).  This agrees with the
true rational order as long as every eps count that can take part in a
comparison stays below 2**n; constructors of glued metrics assert that
regime, and :meth:`ExactDistance.to_fraction` is available when a real
rational value is needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

__all__ = ["ExactDistance", "ZERO", "ONE", "EPS", "total"]


@dataclass(frozen=True, order=True, slots=True)
class ExactDistance:
    """An exact nonnegative distance: ``units + eps_count * eps``."""

    units: int
    eps_count: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.units, int) or not isinstance(self.eps_count, int):
            raise TypeError("distance components must be integers")
        if self.units < 0 or self.eps_count < 0:
            raise ValueError("distance components must be nonnegative")

    def __add__(self, other: "ExactDistance") -> "ExactDistance":
        if not isinstance(other, ExactDistance):
            return NotImplemented
        return ExactDistance(self.units + other.units, self.eps_count + other.eps_count)

    def __mul__(self, k: int) -> "ExactDistance":
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            raise ValueError("cannot scale a distance by a negative factor")
        return ExactDistance(self.units * k, self.eps_count * k)

    __rmul__ = __mul__

    @property
    def is_zero(self) -> bool:
        return self.units == 0 and self.eps_count == 0

    def to_fraction(self, eps: Fraction) -> Fraction:
        """Exact rational value of this distance given the value of eps."""
        return Fraction(self.units) + self.eps_count * eps

    def approx_float(self, eps: float = 0.0) -> float:
        """Float approximation; eps underflows to 0.0 harmlessly for huge spaces."""
        return float(self.units) + self.eps_count * eps

    def __str__(self) -> str:
        if self.eps_count == 0:
            return str(self.units)
        if self.units == 0:
            return f"{self.eps_count}*eps"
        return f"{self.units}+{self.eps_count}*eps"


ZERO = ExactDistance(0)
ONE = ExactDistance(1)
EPS = ExactDistance(0, 1)


def total(values) -> ExactDistance:
    """Sum an iterable of ExactDistance values (empty sum is zero)."""
    units = 0
    eps = 0
    for v in values:
        units += v.units
        eps += v.eps_count
    return ExactDistance(units, eps)
