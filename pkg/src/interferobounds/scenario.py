"""Scenario parameters shared by the bound formulas, the causal timeline,
and the wavepacket oracle.

All fields are Planck-normalized floats: masses in m_P, lengths in l_P,
times in t_P, charges in q_P.  The pair coupling K is m_a*m_b for gravity
and q_a*q_b for coulomb; in these units both play the role G*m_A*m_B plays
in SI.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import InvalidInputError


class CouplingKind(str, Enum):
    GRAVITY = "gravity"
    COULOMB = "coulomb"


def _check_positive(name: str, kind: str, value: float) -> None:
    if not math.isfinite(value):
        raise InvalidInputError(f"non-finite {kind} {name} = {value!r}")
    if value <= 0.0:
        raise InvalidInputError(f"nonpositive {kind} {name} = {value!r}")


@dataclass(frozen=True)
class ScenarioParams:
    """One source/probe configuration.

    m_a is the interfered source mass, m_b the probe mass, d the path
    separation, r the source-probe distance.  q_a and q_b are charges and
    are required for coulomb coupling.  delta_x_min is the smallest trap
    confinement the probe can start from; it defaults to one Planck length
    for gravity and must be supplied explicitly for coulomb.  r_over_d_min
    is the ratio threshold standing in for the far-field requirement
    r >> d.  t_a and t_b are optional interferometer and probe measurement
    durations consumed by the causal timeline.  override_geometry allows
    evaluating far-field formulas even when r/d < r_over_d_min.
    """

    m_a: float
    d: float
    r: float
    m_b: float = 1.0
    coupling: CouplingKind = CouplingKind.GRAVITY
    q_a: float | None = None
    q_b: float | None = None
    delta_x_min: float | None = None
    r_over_d_min: float = 100.0
    t_a: float | None = None
    t_b: float | None = None
    override_geometry: bool = False

    def __post_init__(self) -> None:
        _check_positive("m_a", "mass", self.m_a)
        _check_positive("m_b", "mass", self.m_b)
        _check_positive("d", "length", self.d)
        _check_positive("r", "length", self.r)
        _check_positive("r_over_d_min", "ratio", self.r_over_d_min)
        if self.coupling is CouplingKind.COULOMB and (self.q_a is None or self.q_b is None):
            raise InvalidInputError("coulomb coupling requires q_a and q_b")
        for name, value in (("q_a", self.q_a), ("q_b", self.q_b)):
            if value is not None:
                _check_positive(name, "charge", value)
        if self.delta_x_min is not None:
            _check_positive("delta_x_min", "length", self.delta_x_min)
        for name, value in (("t_a", self.t_a), ("t_b", self.t_b)):
            if value is not None:
                if not math.isfinite(value):
                    raise InvalidInputError(f"non-finite time {name} = {value!r}")
                if value < 0.0:
                    raise InvalidInputError(f"negative time {name} = {value!r}")

    @property
    def geometry_valid(self) -> bool:
        """Far-field validity proxy: r/d at or above the configured threshold."""
        return self.r / self.d >= self.r_over_d_min

    @property
    def pair_coupling(self) -> float:
        """K: m_a*m_b (gravity) or q_a*q_b (coulomb), Planck-normalized."""
        if self.coupling is CouplingKind.COULOMB:
            return self.q_a * self.q_b
        return self.m_a * self.m_b

    @property
    def source_strength(self) -> float:
        """m_a/m_P for gravity, q_a/q_P for coulomb."""
        return self.q_a if self.coupling is CouplingKind.COULOMB else self.m_a

    @property
    def probe_strength(self) -> float:
        """m_b/m_P for gravity, q_b/q_P for coulomb."""
        return self.q_b if self.coupling is CouplingKind.COULOMB else self.m_b

    @property
    def effective_source_mass(self) -> float:
        """K/m_b: the source strength that enters every displacement-model
        bound.  Equals m_a for gravity."""
        return self.pair_coupling / self.m_b

    @property
    def resolved_delta_x_min(self) -> float:
        """Trap confinement floor; l_P by default for gravity, mandatory
        input for coulomb (no charge analog of the gravitational floor)."""
        if self.delta_x_min is not None:
            return self.delta_x_min
        if self.coupling is CouplingKind.COULOMB:
            raise InvalidInputError(
                "coulomb displacement bounds require an explicit delta_x_min"
            )
        return 1.0
