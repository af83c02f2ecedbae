"""Dimension-checked quantities and SI <-> Planck-unit conversion.

Every other module in this package computes with dimensionless reals in
Planck units (c = hbar = G = 1, charge measured in Planck charges), so the
bound formulas reduce to plain ratios such as m_A/m_P and R/l_P.  SI values
appear only here and at the CLI boundary.

CODATA 2018 values, hard-coded (SI):

    c      299792458           m s^-1           exact
    hbar   1.054571817e-34     J s              h / 2 pi, h exact
    G      6.67430e-11         m^3 kg^-1 s^-2
    eps0   8.8541878128e-12    F m^-1

Derived Planck scales:

    m_P = sqrt(hbar c / G)        ~ 2.176434e-8  kg
    l_P = sqrt(hbar G / c^3)      ~ 1.616255e-35 m
    t_P = l_P / c                 ~ 5.391247e-44 s
    q_P = sqrt(4 pi eps0 hbar c)  ~ 1.875546e-18 C

With charge in units of q_P the Coulomb pair coupling q_A q_B/(4 pi eps0)
becomes the plain product of the normalized charges, exactly as G m_A m_B
becomes the product of the normalized masses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import InvalidInputError

__all__ = [
    "Dimension",
    "Quantity",
    "Constants",
    "CODATA",
    "DIMENSIONLESS",
    "LENGTH",
    "MASS",
    "TIME",
    "CHARGE",
    "VELOCITY",
    "MOMENTUM",
    "FORCE",
    "ENERGY",
    "ACTION",
    "make_quantity",
    "to_planck",
    "from_planck",
]


@dataclass(frozen=True)
class Dimension:
    """Integer exponents over the base dimensions length, mass, time, charge."""

    length: int = 0
    mass: int = 0
    time: int = 0
    charge: int = 0

    def __mul__(self, other: "Dimension") -> "Dimension":
        return Dimension(
            self.length + other.length,
            self.mass + other.mass,
            self.time + other.time,
            self.charge + other.charge,
        )

    def __truediv__(self, other: "Dimension") -> "Dimension":
        return Dimension(
            self.length - other.length,
            self.mass - other.mass,
            self.time - other.time,
            self.charge - other.charge,
        )

    def __pow__(self, n: int) -> "Dimension":
        if not isinstance(n, int):
            raise InvalidInputError("dimension exponents must be integers")
        return Dimension(self.length * n, self.mass * n, self.time * n, self.charge * n)


DIMENSIONLESS = Dimension()
LENGTH = Dimension(length=1)
MASS = Dimension(mass=1)
TIME = Dimension(time=1)
CHARGE = Dimension(charge=1)
VELOCITY = LENGTH / TIME
MOMENTUM = MASS * VELOCITY
FORCE = MASS * LENGTH / TIME ** 2
ENERGY = FORCE * LENGTH
ACTION = ENERGY * TIME


@dataclass(frozen=True)
class Quantity:
    """A finite real value tagged with its dimension.

    Values are SI (base units m, kg, s, C and their products).  Addition and
    subtraction require identical dimensions; multiplication and division
    combine exponents exactly.
    """

    value: float
    dim: Dimension = DIMENSIONLESS

    def __post_init__(self) -> None:
        if not isinstance(self.value, (int, float)) or isinstance(self.value, bool):
            raise InvalidInputError(f"quantity value must be a real number, got {self.value!r}")
        object.__setattr__(self, "value", float(self.value))
        if not math.isfinite(self.value):
            raise InvalidInputError(f"quantity value must be finite, got {self.value!r}")

    def __add__(self, other: "Quantity") -> "Quantity":
        self._require_same_dim(other, "add")
        return Quantity(self.value + other.value, self.dim)

    def __sub__(self, other: "Quantity") -> "Quantity":
        self._require_same_dim(other, "subtract")
        return Quantity(self.value - other.value, self.dim)

    def __mul__(self, other):
        if isinstance(other, Quantity):
            return Quantity(self.value * other.value, self.dim * other.dim)
        return Quantity(self.value * float(other), self.dim)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Quantity):
            return Quantity(self.value / other.value, self.dim / other.dim)
        return Quantity(self.value / float(other), self.dim)

    def __pow__(self, n: int) -> "Quantity":
        return Quantity(self.value ** n, self.dim ** n)

    def __neg__(self) -> "Quantity":
        return Quantity(-self.value, self.dim)

    def _require_same_dim(self, other: "Quantity", op: str) -> None:
        if not isinstance(other, Quantity):
            raise InvalidInputError(f"can only {op} another Quantity")
        if self.dim != other.dim:
            raise InvalidInputError(
                f"cannot {op} quantities with dimensions {self.dim} and {other.dim}"
            )


def make_quantity(value: float, dim: Dimension) -> Quantity:
    """Tag a finite real with its dimension; no normalization applied."""
    return Quantity(value, dim)


# CODATA 2018, SI.
_C = 299792458.0
_HBAR = 1.054571817e-34
_G = 6.67430e-11
_EPS0 = 8.8541878128e-12

_M_P = math.sqrt(_HBAR * _C / _G)
_L_P = math.sqrt(_HBAR * _G / _C ** 3)
_T_P = _L_P / _C
_Q_P = math.sqrt(4.0 * math.pi * _EPS0 * _HBAR * _C)


@dataclass(frozen=True)
class Constants:
    """Fundamental constants and the derived Planck scales, as SI quantities."""

    c: Quantity
    hbar: Quantity
    G: Quantity
    eps0: Quantity
    m_p: Quantity
    l_p: Quantity
    t_p: Quantity
    q_p: Quantity


CODATA = Constants(
    c=Quantity(_C, VELOCITY),
    hbar=Quantity(_HBAR, ACTION),
    G=Quantity(_G, LENGTH ** 3 / (MASS * TIME ** 2)),
    eps0=Quantity(_EPS0, CHARGE ** 2 * TIME ** 2 / (MASS * LENGTH ** 3)),
    m_p=Quantity(_M_P, MASS),
    l_p=Quantity(_L_P, LENGTH),
    t_p=Quantity(_T_P, TIME),
    q_p=Quantity(_Q_P, CHARGE),
)


@lru_cache(maxsize=None)
def _planck_factor(dim: Dimension) -> Fraction:
    # Exact rational arithmetic: immune to intermediate float under/overflow
    # for large exponents and keeps round-trips at the 1-ulp level.
    factor = Fraction(1)
    for base, exp in (
        (_L_P, dim.length),
        (_M_P, dim.mass),
        (_T_P, dim.time),
        (_Q_P, dim.charge),
    ):
        if exp:
            factor *= Fraction(base) ** exp
    return factor


def to_planck(q: Quantity) -> float:
    """Express a quantity in the Planck unit of its dimension."""
    if q.dim == DIMENSIONLESS:
        return q.value
    try:
        return float(Fraction(q.value) / _planck_factor(q.dim))
    except OverflowError:
        raise InvalidInputError(
            f"{q.value!r} in dimension {q.dim} is not representable in Planck units"
        ) from None


def from_planck(x: float, dim: Dimension) -> Quantity:
    """Inverse of to_planck: build the SI quantity worth x Planck units."""
    x = float(x)
    if not math.isfinite(x):
        raise InvalidInputError(f"planck value must be finite, got {x!r}")
    if dim == DIMENSIONLESS:
        return Quantity(x, dim)
    try:
        return Quantity(float(Fraction(x) * _planck_factor(dim)), dim)
    except OverflowError:
        raise InvalidInputError(
            f"{x!r} Planck units of dimension {dim} is not representable in SI"
        ) from None
