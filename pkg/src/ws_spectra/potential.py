"""Woods-Saxon potential, unit systems and the exponential centrifugal surrogate.

Every energy in the package is in the energy unit of the active
:class:`UnitSystem` (MeV for ``NUCLEAR``) and every length in its length unit
(fm for ``NUCLEAR``).  Particle masses are always given in atomic mass units
and converted through the unit system, so the same call works for the
dimensionless benchmark (``hbar^2/2m = 1``) and for nuclear parameters.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
import numpy as np


@dataclass(frozen=True)
class UnitSystem:
    """Physical constants of a unit convention.

    Attributes
    ----------
    name : str
    hbar_c : float
        hbar*c in energy*length.
    amu_to_energy : float
        Rest energy of one mass unit.
    hbar2_over_2m0 : float
        hbar^2/(2 m) for a particle of one mass unit, in energy*length^2.
    """

    name: str
    hbar_c: float
    amu_to_energy: float
    hbar2_over_2m0: float

    def __post_init__(self):
        for field in ("hbar_c", "amu_to_energy", "hbar2_over_2m0"):
            if not getattr(self, field) > 0:
                raise ValueError(f"{field} must be strictly positive")

    def kinetic(self, mass: float) -> float:
        """hbar^2/(2 m0) for a particle of ``mass`` mass units."""
        return self.hbar2_over_2m0 / mass

    def rest_energy(self, mass: float) -> float:
        return mass * self.amu_to_energy

    @property
    def delta(self) -> float:
        # 1/(hbar c): turns (E - V)^2 into the inverse-length^2 of the radial equation
        return 1.0 / self.hbar_c


_HBAR_C = 197.3269804
_AMU = 931.49410242

NUCLEAR = UnitSystem("nuclear", _HBAR_C, _AMU, _HBAR_C**2 / (2.0 * _AMU))
# hbar = c = 1 and a unit mass of rest energy 1/2, so hbar^2/2m = 1 for mass 1
DIMENSIONLESS = UnitSystem("dimensionless", 1.0, 0.5, 1.0)

UNIT_SYSTEMS = {u.name: u for u in (NUCLEAR, DIMENSIONLESS)}


@dataclass(frozen=True)
class WoodsSaxonParams:
    """Depth ``V0`` (> 0), radius ``r0`` and surface thickness ``a``."""

    V0: float
    r0: float
    a: float

    def __post_init__(self):
        if not (self.V0 > 0 and self.r0 > 0 and self.a > 0):
            raise ValueError(
                f"Woods-Saxon parameters must be positive, got V0={self.V0}, "
                f"r0={self.r0}, a={self.a}"
            )

    @property
    def beta(self) -> float:
        return 1.0 / self.a

    def scaled(self, factor_V0: float = 1.0) -> "WoodsSaxonParams":
        return WoodsSaxonParams(self.V0 * factor_V0, self.r0, self.a)


@dataclass(frozen=True)
class PekerisCoefficients:
    """Scale ``D`` and shape coefficients of the exponential centrifugal term.

    The replacement reads ``D * (D0 + D1 f + D2 f^2)`` with
    ``f = 1/(1 + exp(beta (r - r0)))``.
    """

    D: float
    D0: float
    D1: float
    D2: float

    def value(self, f):
        return self.D * (self.D0 + self.D1 * f + self.D2 * f * f)


def fermi(r, p: WoodsSaxonParams):
    """Shape factor ``1/(1 + exp((r - r0)/a))``, overflow-safe for large ``r``."""
    x = (np.asarray(r, dtype=float) - p.r0) / p.a
    # exp overflow beyond ~709 just means f == 0
    with np.errstate(over="ignore"):
        f = 1.0 / (1.0 + np.exp(x))
    return f if f.ndim else float(f)


def woods_saxon(r, p: WoodsSaxonParams):
    """Return ``-V0/(1 + exp((r - r0)/a))``; accepts scalars or arrays."""
    return -p.V0 * fermi(r, p)


def centrifugal_scale(l: int, p: WoodsSaxonParams, mass: float, units: UnitSystem) -> float:
    """The constant ``hbar^2 l(l+1) / (2 m0 r0^2)``."""
    return units.kinetic(mass) * l * (l + 1) / p.r0**2


def pekeris_coefficients(
    l: int, p: WoodsSaxonParams, mass: float = 1.0, units: UnitSystem = DIMENSIONLESS
) -> PekerisCoefficients:
    """Coefficients matching ``D0 + D1 f + D2 f^2`` to ``(1 + x/r0)^-2`` through x^2."""
    if l < 0:
        raise ValueError(f"l must be non-negative, got {l}")
    D0, D1, D2 = shape_coefficients(p.r0 / p.a)
    return PekerisCoefficients(centrifugal_scale(l, p, mass, units), D0, D1, D2)


def shape_coefficients(t: float) -> tuple[float, float, float]:
    """``(D0, D1, D2)`` as functions of ``t = beta * r0`` only."""
    if not t > 0:
        raise ValueError("beta*r0 must be positive")
    u = 1.0 / t
    return 12.0 * u * u - 4.0 * u + 1.0, 8.0 * u - 48.0 * u * u, 48.0 * u * u


def centrifugal_exact(r, l: int, p: WoodsSaxonParams, mass: float, units: UnitSystem):
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise ValueError("the exact centrifugal barrier is singular at r <= 0")
    out = units.kinetic(mass) * l * (l + 1) / r**2
    return out if out.ndim else float(out)


def centrifugal_approx(r, l: int, p: WoodsSaxonParams, mass: float, units: UnitSystem):
    return pekeris_coefficients(l, p, mass, units).value(fermi(r, p))


def effective_potential_exact(
    r, l: int, p: WoodsSaxonParams, mass: float = 1.0, units: UnitSystem = DIMENSIONLESS
):
    """Woods-Saxon well plus the true centrifugal barrier (requires ``r > 0``)."""
    return woods_saxon(r, p) + centrifugal_exact(r, l, p, mass, units)


def effective_potential_approx(
    r, l: int, p: WoodsSaxonParams, mass: float = 1.0, units: UnitSystem = DIMENSIONLESS
):
    """Woods-Saxon well plus the exponential surrogate barrier; finite at ``r = 0``."""
    f = fermi(r, p)
    return -p.V0 * f + pekeris_coefficients(l, p, mass, units).value(f)


def centrifugal_deviation(
    l: int, p: WoodsSaxonParams, max_rel_x: float = 0.25, samples: int = 2001,
    mass: float = 1.0, units: UnitSystem = DIMENSIONLESS,
) -> float:
    """Largest relative deviation of the surrogate barrier on ``|r - r0| <= max_rel_x * r0``."""
    if l == 0:
        return 0.0
    r = p.r0 * (1.0 + np.linspace(-max_rel_x, max_rel_x, samples))
    r = r[r > 0]
    exact = centrifugal_exact(r, l, p, mass, units)
    approx = centrifugal_approx(r, l, p, mass, units)
    return float(np.max(np.abs(approx - exact) / exact))


def taylor_residuals(t: float, step: float = 1e-6) -> tuple[float, float, float]:
    """Relative mismatch of the x^0, x^1, x^2 Taylor coefficients at ``x = 0``.

    Both barrier shapes are written in the scaled variable ``s = x / r0`` with
    ``D = 1``.  The float coefficients from :func:`shape_coefficients` are
    lifted to 40-digit arithmetic, differentiated with 4th-order central
    differences (roundoff would otherwise swamp the second difference at large
    ``t``) and compared against the series of ``(1 + s)^-2``: ``(1, -2, 3)``.
    """
    with mpmath.workdps(40):
        tm = mpmath.mpf(t)
        D0, D1, D2 = (mpmath.mpf(c) for c in shape_coefficients(t))

        def g(s):
            f = 1 / (1 + mpmath.exp(tm * s))
            return D0 + D1 * f + D2 * f * f

        k = mpmath.mpf(step) / max(tm, 1)
        first = (-g(2 * k) + 8 * g(k) - 8 * g(-k) + g(-2 * k)) / (12 * k)
        second = (-g(2 * k) + 16 * g(k) - 30 * g(0) + 16 * g(-k) - g(-2 * k)) / (12 * k * k)
        c0, c1, c2 = g(0), first, second / 2
        return (
            float(abs(c0 - 1)),
            float(abs(c1 + 2) / 2),
            float(abs(c2 - 3) / 3),
        )
