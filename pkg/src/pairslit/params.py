"""Core value types: experiment parameters, spin statistics, configurations.

All fields are SI. Every quantity the rest of the package needs in
dimensionless form (lengths over sigma0, times over the spreading time
2 m sigma0^2 / hbar) is derived here once so the scaling convention lives in a
single place.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .constants import ELECTRON_MASS, HBAR


class SpinStatistics(enum.Enum):
    """Exchange symmetry of the pair state."""

    BOSON = "boson"
    FERMION = "fermion"

    @property
    def sign(self) -> int:
        """+1 for the symmetric state, -1 for the antisymmetric one."""
        return 1 if self is SpinStatistics.BOSON else -1


@dataclass(frozen=True)
class PhysicalParams:
    """Source and geometry parameters of the two-particle slit experiment.

    Parameters
    ----------
    m : float
        Particle mass (kg).
    hbar : float
        Reduced Planck constant (J s); overridable for unit experiments.
    sigma0 : float
        Initial packet width at the slits (m).
    Y : float
        Half the slit separation; packets start centred at +-Y (m).
    kx : float
        Longitudinal wavenumber (1/m); propagation speed is hbar*kx/m.
    ky : float
        Transverse wavenumber (1/m). Carried through the amplitudes; the
        closed-form velocities and densities require ky = 0.
    d : float
        Half-separation of the two sources in the facing double-slit setup (m).
    L : float
        Source-to-screen flight distance (m).
    """

    m: float = ELECTRON_MASS
    hbar: float = HBAR
    sigma0: float = 1.0e-6
    Y: float = 5.0e-6
    kx: float = 2.0e7 * ELECTRON_MASS / HBAR
    ky: float = 0.0
    d: float = 5.0e-6
    L: float = 0.2

    def __post_init__(self):
        for name in ("m", "hbar", "sigma0", "Y", "kx", "d", "L"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be > 0")

    @classmethod
    def baseline(cls, x_speed: float = 2.0e7) -> "PhysicalParams":
        """Electron baseline with the propagation speed hbar*kx/m given in m/s."""
        return cls(kx=x_speed * ELECTRON_MASS / HBAR)

    @property
    def tau(self) -> float:
        """Natural spreading time 2 m sigma0^2 / hbar (s)."""
        return 2.0 * self.m * self.sigma0**2 / self.hbar

    @property
    def beta(self) -> float:
        """Slit half-separation in packet widths, Y / sigma0."""
        return self.Y / self.sigma0

    @property
    def x_speed(self) -> float:
        """Longitudinal speed hbar kx / m (m/s)."""
        return self.hbar * self.kx / self.m

    @property
    def flight_time(self) -> float:
        """Time to cross the distance L at the longitudinal speed (s)."""
        return self.L * self.m / (self.hbar * self.kx)


@dataclass(frozen=True)
class PairConfiguration:
    """A configuration-space point (x1, y1, x2, y2) at time t, all SI."""

    x1: float
    y1: float
    x2: float
    y2: float
    t: float = 0.0

    def __post_init__(self):
        if self.t < 0.0:
            raise ValueError("t must be >= 0")

    def swapped(self) -> "PairConfiguration":
        """The same point with the two particle labels exchanged."""
        return PairConfiguration(self.x2, self.y2, self.x1, self.y1, self.t)


@dataclass(frozen=True)
class PairVelocity:
    """Configuration-space velocity (vx1, vy1, vx2, vy2) in m/s."""

    vx1: float
    vy1: float
    vx2: float
    vy2: float
