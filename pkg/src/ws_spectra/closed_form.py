"""Closed-form bound-state spectra of the Woods-Saxon well.

The Klein-Gordon expressions are evaluated with complex intermediates: the
square roots inside may have negative arguments and the formulas give no
hint of which branch to prefer, so the principal root is used everywhere
and a result is accepted as physical only when its imaginary part is
negligible.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from enum import Enum

from .errors import ComplexEnergy, InvalidState, NoBoundState, WSSpectraError
from .potential import (
    DIMENSIONLESS,
    UnitSystem,
    WoodsSaxonParams,
    pekeris_coefficients,
)

IMAG_TOL = 1e-10

_L_LETTERS = "spdfghiklmnoqrtuv"


@dataclass(frozen=True, order=True)
class QuantumState:
    """Spectroscopic state ``N l`` (``1s``, ``2p``, ...).

    The formula index ``n`` is the radial node count ``N - l - 1``.
    """

    N: int
    l: int

    def __post_init__(self):
        if self.l < 0 or self.N < self.l + 1:
            raise InvalidState(f"need N >= l + 1 >= 1, got N={self.N}, l={self.l}")

    @property
    def n_r(self) -> int:
        return self.N - self.l - 1

    @property
    def n(self) -> int:
        return self.n_r

    @property
    def label(self) -> str:
        letter = _L_LETTERS[self.l] if self.l < len(_L_LETTERS) else f"[l={self.l}]"
        return f"{self.N}{letter}"

    @classmethod
    def from_nodes(cls, n_r: int, l: int) -> "QuantumState":
        if n_r < 0:
            raise InvalidState(f"node count must be >= 0, got {n_r}")
        return cls(n_r + l + 1, l)

    @classmethod
    def from_label(cls, label: str) -> "QuantumState":
        m = re.fullmatch(r"\s*(\d+)([a-z])\s*", label.lower())
        if not m or m.group(2) not in _L_LETTERS:
            raise InvalidState(f"cannot parse state label {label!r}")
        return cls(int(m.group(1)), _L_LETTERS.index(m.group(2)))


def states_up_to(n_max: int) -> list[QuantumState]:
    """All states with ``N <= n_max``, sorted by ``(N, l)``."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    return [QuantumState(N, l) for N in range(1, n_max + 1) for l in range(N)]


class Branch(str, Enum):
    PARTICLE = "particle"
    ANTIPARTICLE = "antiparticle"

    @property
    def sign(self) -> int:
        return 1 if self is Branch.PARTICLE else -1


class Method(str, Enum):
    KG_CLOSED = "kg-closed"
    SE_CLOSED = "se-closed"
    ORACLE_EXACT = "oracle-exact"
    ORACLE_APPROX = "oracle-approx"
    ORACLE_KG = "oracle-kg"


@dataclass(frozen=True)
class KGCoefficients:
    """Coefficients of the transformed Klein-Gordon equation at a given energy.

    ``a1_sq`` depends only on the potential; ``a2_sq`` and ``a3_sq`` also on the
    energy.  ``a3`` and ``A`` are principal square roots and may be complex.
    """

    a1_sq: float
    a2_sq: float
    a3_sq: float
    n1: complex

    @property
    def a3(self) -> complex:
        return cmath.sqrt(self.a3_sq)

    @property
    def A(self) -> complex:
        return cmath.sqrt(self.a3_sq + 2 * self.a2_sq + 4 * self.a1_sq)

    @property
    def is_real(self) -> bool:
        return (
            self.a3_sq >= 0
            and self.a3_sq + 2 * self.a2_sq + 4 * self.a1_sq >= 0
            and abs(self.n1.imag) == 0.0
        )


@dataclass(frozen=True)
class EnergyLevel:
    state: QuantumState
    energy: float
    method: Method
    branch: Branch | None = None
    is_real: bool = True
    validity: bool = True
    note: str = ""
    imag: float = 0.0


def _kg_scales(l, p, mass, units):
    # K = 2 m0 D / hbar^2 = l(l+1)/r0^2, in inverse length^2
    pc = pekeris_coefficients(l, p, mass, units)
    K = pc.D / units.kinetic(mass)
    return K, pc, units.delta, p.beta


def kg_coefficients(
    l: int, n: int, energy: float, p: WoodsSaxonParams, mass: float, units: UnitSystem
) -> KGCoefficients:
    K, pc, delta, beta = _kg_scales(l, p, mass, units)
    mc2 = units.rest_energy(mass)
    a1_sq = -(delta**2 * p.V0**2 - K * pc.D2) / beta**2
    a2_sq = -2.0 * (2.0 * delta**2 * energy * p.V0 - K * pc.D1) / beta**2
    a3_sq = -4.0 * (delta**2 * (energy**2 - mc2**2) - K * pc.D0) / beta**2
    return KGCoefficients(a1_sq, a2_sq, a3_sq, _n1(n, a1_sq))


def _n1(n: int, a1_sq: float) -> complex:
    return -(2 * n + 1) + cmath.sqrt(1 + 4 * a1_sq)


def _kg_parts(l, n, p, mass, units):
    """Rational term, the +/- term with unit sign, and the radicand."""
    K, pc, delta, beta = _kg_scales(l, p, mass, units)
    mc2 = units.rest_energy(mass)
    a1_sq = -(delta**2 * p.V0**2 - K * pc.D2) / beta**2
    n1 = _n1(n, a1_sq)
    Q = beta**2 * n1 * n1 + 4 * delta**2 * p.V0**2
    s12 = pc.D1 + pc.D2
    # -(Q - 4K s12) V0 / (2Q) without cancelling two large quotients
    first = -p.V0 / 2 + 2 * K * s12 * p.V0 / Q
    radicand = (
        (2 * mc2**2 * delta**2 + K * (2 * pc.D0 + s12)) / (2 * Q)
        - (K * s12 / Q) ** 2
        - 1.0 / 16.0
    )
    pm = beta * n1 / delta * cmath.sqrt(radicand)
    return first, pm, radicand, n1


def _accept(value: complex) -> bool:
    return abs(value.imag) < IMAG_TOL * max(1.0, abs(value.real))


def _check_n(n):
    if n < 0:
        raise InvalidState(f"formula index n must be >= 0, got {n}")


def kg_energy_complex(
    state: QuantumState, branch: Branch, p: WoodsSaxonParams, mass: float,
    units: UnitSystem, *, n: int | None = None,
) -> complex:
    n = state.n if n is None else n
    _check_n(n)
    first, pm, _, _ = _kg_parts(state.l, n, p, mass, units)
    return complex(first + Branch(branch).sign * pm)


def kg_energy(
    state: QuantumState, branch: Branch, p: WoodsSaxonParams, mass: float,
    units: UnitSystem, *, n: int | None = None,
) -> EnergyLevel:
    """Klein-Gordon level for any ``l`` (rest energy included).

    Raises
    ------
    ComplexEnergy
        When the energy has a non-negligible imaginary part; ``exc.value``
        carries the complex number.
    """
    value = kg_energy_complex(state, branch, p, mass, units, n=n)
    if not _accept(value):
        raise ComplexEnergy(
            f"{state.label}: Klein-Gordon energy is complex ({value:.6g})", value
        )
    return EnergyLevel(
        state, value.real, Method.KG_CLOSED, Branch(branch), True,
        kg_reality_condition(state, p, mass, units, n=n), imag=value.imag,
    )


def kg_energy_rational_term(
    state: QuantumState, p: WoodsSaxonParams, mass: float, units: UnitSystem,
    *, n: int | None = None,
) -> complex:
    """The branch-independent first term; both branches sum to twice this."""
    n = state.n if n is None else n
    return complex(_kg_parts(state.l, n, p, mass, units)[0])


def kg_energy_swave(
    n: int, branch: Branch, p: WoodsSaxonParams, mass: float, units: UnitSystem
) -> EnergyLevel:
    """s-wave Klein-Gordon level: ``-V0/2 +/- (beta n1'/delta) sqrt(...)``."""
    _check_n(n)
    delta, beta = units.delta, p.beta
    mc2 = units.rest_energy(mass)
    n1 = _n1(n, -(delta * p.V0 / beta) ** 2)
    Q = beta**2 * n1 * n1 + 4 * delta**2 * p.V0**2
    radicand = mc2**2 * delta**2 / Q - 1.0 / 16.0
    value = complex(-p.V0 / 2 + Branch(branch).sign * beta * n1 / delta * cmath.sqrt(radicand))
    state = QuantumState.from_nodes(n, 0)
    if not _accept(value):
        raise ComplexEnergy(f"{state.label}: s-wave Klein-Gordon energy is complex", value)
    return EnergyLevel(state, value.real, Method.KG_CLOSED, Branch(branch), True,
                       True, imag=value.imag)


def kg_reality_condition(
    state: QuantumState, p: WoodsSaxonParams, mass: float, units: UnitSystem,
    *, n: int | None = None,
) -> bool:
    """True when the square-root argument of the Klein-Gordon spectrum is positive.

    A complex ``n1`` (``1 + 4 a1^2 < 0``) makes the inequality meaningless and
    counts as false.
    """
    n = state.n if n is None else n
    _, _, radicand, n1 = _kg_parts(state.l, n, p, mass, units)
    if n1.imag != 0.0:
        return False
    return radicand.real > 0


def kg_reality_boundary(
    l: int, p: WoodsSaxonParams, mass: float, units: UnitSystem, n_scan: int = 200
) -> int | None:
    """Largest formula index ``n < n_scan`` with a real level, or None."""
    last = None
    for n in range(n_scan):
        if kg_reality_condition(QuantumState.from_nodes(n, l), p, mass, units):
            last = n
    return last


def schrodinger_energy(
    state: QuantumState, p: WoodsSaxonParams, mass: float = 1.0,
    units: UnitSystem = DIMENSIONLESS, *, n: int | None = None,
) -> EnergyLevel:
    """Non-relativistic level for any ``l`` from the exponential barrier surrogate."""
    n = state.n if n is None else n
    _check_n(n)
    k = units.kinetic(mass)
    L = state.l * (state.l + 1)
    pc = pekeris_coefficients(state.l, p, mass, units)
    a2, r02 = p.a**2, p.r0**2
    S = math.sqrt(1 + 4 * L * a2 * pc.D2 / r02)
    m = 2 * n + 1 + S
    bracket = m / 4 - (L * a2 * (pc.D1 + pc.D2) / r02 - p.V0 * a2 / k) / m
    energy = k * L / r02 * pc.D0 - k / a2 * bracket**2
    return EnergyLevel(state, energy, Method.SE_CLOSED)


def schrodinger_energy_swave(
    n: int, p: WoodsSaxonParams, mass: float = 1.0, units: UnitSystem = DIMENSIONLESS
) -> EnergyLevel:
    _check_n(n)
    k = units.kinetic(mass)
    g = p.V0 * p.a**2 / (2 * k)  # m0 V0 a^2 / hbar^2
    energy = -k / p.a**2 * (((n + 1) / 2) ** 2 + (g / (n + 1)) ** 2 + g)
    return EnergyLevel(QuantumState.from_nodes(n, 0), energy, Method.SE_CLOSED)


def _flagged(state, method, branch, note, imag=0.0):
    return EnergyLevel(state, math.nan, method, branch, False, False, note, imag)


def evaluate(
    state: QuantumState, method: Method, p: WoodsSaxonParams, mass: float,
    units: UnitSystem, branch: Branch = Branch.PARTICLE, **solver_options,
) -> EnergyLevel:
    """One level by any method; failures come back flagged instead of raised."""
    method = Method(method)
    if method is Method.SE_CLOSED:
        return schrodinger_energy(state, p, mass, units)
    if method is Method.KG_CLOSED:
        try:
            return kg_energy(state, branch, p, mass, units)
        except ComplexEnergy as exc:
            return _flagged(state, method, Branch(branch), "complex", exc.value.imag)
    from . import oracle

    variant = {
        Method.ORACLE_EXACT: "exact",
        Method.ORACLE_APPROX: "pekeris",
        Method.ORACLE_KG: "kg",
    }[method]
    problem = oracle.radial_problem(state, p, mass, units, variant)
    try:
        res = oracle.solve_state(problem, **solver_options)
    except NoBoundState:
        return _flagged(state, method, None, "unbound")
    except WSSpectraError as exc:
        return _flagged(state, method, None, f"solver: {exc}")
    return EnergyLevel(state, res.energy, method, Branch.PARTICLE if variant == "kg" else None)


def spectrum_table(
    p: WoodsSaxonParams, mass: float, units: UnitSystem, n_max: int,
    method: Method, branch: Branch = Branch.PARTICLE, **solver_options,
) -> list[EnergyLevel]:
    """Every state with ``N <= n_max`` by one method, sorted by ``(N, l)``."""
    return [
        evaluate(s, method, p, mass, units, branch, **solver_options)
        for s in states_up_to(n_max)
    ]
