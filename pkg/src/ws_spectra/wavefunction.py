"""Closed-form eigenfunctions, their normalization and behaviour near ``r = r0``.

Two coordinate maps are in play:

* Klein-Gordon: ``z = 2 / (1 + exp(beta (r - r0)))`` on ``(0, 2)``, with
  ``phi(z) = b (2 - z)^(A/2) z^(a3/2) P_n^(a3, A)(1 - z)``;
* Schrodinger: ``z = 1 / (1 + exp(beta (r - r0)))`` on ``(0, 1)``, with
  ``phi(z) = a_n (1 - z)^A z^eps P_n^(2 eps, 2 A)(1 - 2z)``.

``z -> 0`` is ``r -> infinity`` in both, so positive powers of ``z`` give the
bound-state decay.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np
from scipy import integrate
from scipy.special import binom

from .closed_form import KGCoefficients, QuantumState, kg_coefficients
from .errors import DivergentIntegral, InvalidExponents, NonNormalizable
from .potential import UnitSystem, WoodsSaxonParams, pekeris_coefficients
from .special import JacobiParams, hyp2f1_half, jacobi_eval

QUAD_EPSABS = 1e-12
QUAD_EPSREL = 1e-10


class Kind(str, Enum):
    KG = "KG"
    SE = "SE"


@dataclass(frozen=True)
class RadialFunction:
    grid: np.ndarray
    values: np.ndarray
    norm_residual: float = math.nan

    def __post_init__(self):
        if np.any(np.diff(self.grid) <= 0):
            raise ValueError("grid must be strictly increasing")

    @property
    def nodes(self) -> int:
        return count_sign_changes(self.values)

    @property
    def peak(self) -> float:
        return float(self.grid[np.argmax(np.abs(self.values))])


def count_sign_changes(values, rel_floor: float = 1e-9) -> int:
    """Interior sign changes, ignoring samples below ``rel_floor * max|values|``."""
    v = np.asarray(values, dtype=float)
    v = v[np.abs(v) > rel_floor * np.max(np.abs(v))]
    return int(np.count_nonzero(np.signbit(v[1:]) != np.signbit(v[:-1])))


@dataclass(frozen=True)
class WavefunctionSpec:
    """A closed-form eigenfunction in its ``z`` variable.

    ``z_power`` multiplies ``z``, ``far_power`` multiplies ``(2 - z)`` for
    Klein-Gordon or ``(1 - z)`` for Schrodinger.
    """

    kind: Kind
    state: QuantumState
    z_power: float
    far_power: float
    jacobi: JacobiParams
    params: WoodsSaxonParams
    norm: float = 1.0

    @property
    def z_max(self) -> float:
        return 2.0 if self.kind is Kind.KG else 1.0

    def z_of_r(self, r):
        x = (np.asarray(r, dtype=float) - self.params.r0) / self.params.a
        with np.errstate(over="ignore"):
            return (self.z_max) / (1.0 + np.exp(x))

    def jacobi_argument(self, z):
        return 1.0 - z if self.kind is Kind.KG else 1.0 - 2.0 * z

    def phi(self, z):
        z = np.asarray(z, dtype=float)
        far = (self.z_max - z) if self.kind is Kind.KG else (1.0 - z)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = (
                self.norm
                * far**self.far_power
                * z**self.z_power
                * jacobi_eval(self.jacobi, self.jacobi_argument(z))
            )
        return out if np.ndim(out) else float(out)

    def __call__(self, r):
        return self.phi(self.z_of_r(r))

    def with_norm(self, norm: float) -> "WavefunctionSpec":
        return replace(self, norm=norm)


def _real_exponent(value: complex, name: str) -> float:
    if abs(complex(value).imag) > 1e-12 * max(1.0, abs(value)):
        raise InvalidExponents(f"{name} = {value} is complex")
    return complex(value).real


def kg_wavefunction(
    state: QuantumState, coefficients: KGCoefficients, params: WoodsSaxonParams,
    norm: float = 1.0, *, n: int | None = None,
) -> WavefunctionSpec:
    """``b (2 - z)^(A/2) z^(a3/2) P_n^(a3, A)(1 - z)``.

    Raises
    ------
    InvalidExponents
        If ``a3`` or ``A`` is complex or not above -1.
    """
    n = state.n if n is None else n
    a3 = _real_exponent(coefficients.a3, "a3")
    A = _real_exponent(coefficients.A, "A")
    if a3 <= -1 or A <= -1:
        raise InvalidExponents(f"need a3 > -1 and A > -1, got a3={a3}, A={A}")
    return WavefunctionSpec(Kind.KG, state, a3 / 2, A / 2, JacobiParams(n, a3, A), params, norm)


def kg_wavefunction_at(
    state: QuantumState, energy: float, params: WoodsSaxonParams, mass: float,
    units: UnitSystem, *, n: int | None = None,
) -> WavefunctionSpec:
    n = state.n if n is None else n
    coeffs = kg_coefficients(state.l, n, energy, params, mass, units)
    return kg_wavefunction(state, coeffs, params, n=n)


@dataclass(frozen=True)
class SEParameters:
    eps_sq: float
    gamma_sq: float
    kappa_sq: float

    @property
    def eps(self) -> complex:
        return cmath.sqrt(self.eps_sq)

    @property
    def A(self) -> complex:
        return cmath.sqrt(self.eps_sq + self.gamma_sq + self.kappa_sq)


def se_parameters(
    state: QuantumState, energy: float, params: WoodsSaxonParams, mass: float,
    units: UnitSystem,
) -> SEParameters:
    """``eps^2, gamma^2, kappa^2`` of the transformed Schrodinger equation."""
    pc = pekeris_coefficients(state.l, params, mass, units)
    scale = params.a**2 / units.kinetic(mass)  # 2 m0 / (beta^2 hbar^2)
    return SEParameters(
        scale * (pc.D * pc.D0 - energy),
        scale * (pc.D * pc.D1 - params.V0),
        scale * pc.D * pc.D2,
    )


def se_wavefunction(
    state: QuantumState, eps, A, params: WoodsSaxonParams, norm: float = 1.0,
    *, n: int | None = None,
) -> WavefunctionSpec:
    """``a_n (1 - z)^A z^eps P_n^(2 eps, 2 A)(1 - 2z)`` with positive exponents.

    Raises
    ------
    NonNormalizable
        When ``eps`` is not a positive real (no decay as ``r -> infinity``)
        or ``A`` is complex.
    """
    n = state.n if n is None else n
    try:
        eps = _real_exponent(eps, "eps")
        A = _real_exponent(A, "A")
    except InvalidExponents as exc:
        raise NonNormalizable(str(exc)) from None
    if eps <= 0:
        raise NonNormalizable(f"eps = {eps} gives no decay at large r")
    if 2 * A <= -1:
        raise NonNormalizable(f"A = {A} outside the Jacobi range")
    return WavefunctionSpec(Kind.SE, state, eps, A, JacobiParams(n, 2 * eps, 2 * A), params, norm)


def se_wavefunction_at(
    state: QuantumState, energy: float, params: WoodsSaxonParams, mass: float,
    units: UnitSystem, *, n: int | None = None,
) -> WavefunctionSpec:
    sp = se_parameters(state, energy, params, mass, units)
    return se_wavefunction(state, sp.eps, sp.A, params, n=n)


def _integrand(spec: WavefunctionSpec):
    beta = spec.params.beta
    if spec.kind is Kind.KG:
        # printed measure: (2/beta) |phi|^2 z / (2 - z) on (0, 1)
        return lambda z: (2.0 / beta) * spec.phi(z) ** 2 * z / (2.0 - z)
    # dr = dz / (beta z (1 - z))
    return lambda z: spec.phi(z) ** 2 / (beta * z * (1.0 - z))


def _z_range(spec: WavefunctionSpec) -> tuple[float, float]:
    if spec.kind is Kind.KG:
        return 0.0, 1.0
    return 0.0, float(spec.z_of_r(0.0))


def norm_integral(spec: WavefunctionSpec) -> float:
    """The normalization integral of ``spec`` at its current amplitude."""
    # near z = 0 the integrand behaves like z^(2 z_power + 1) (KG) or z^(2 eps - 1) (SE)
    lead = 2 * spec.z_power + (1 if spec.kind is Kind.KG else -1)
    if lead <= -1:
        raise DivergentIntegral(f"integrand ~ z^{lead:.3g} at z = 0")
    lo, hi = _z_range(spec)
    f = _integrand(spec)
    split = min(1e-3, hi / 2)
    total = 0.0
    for a, b in ((lo, split), (split, hi)):
        val, _ = integrate.quad(f, a, b, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL, limit=400)
        total += val
    if not math.isfinite(total):
        raise DivergentIntegral("normalization integral is not finite")
    return total


def normalize(spec: WavefunctionSpec, units: UnitSystem | None = None) -> float:
    """Amplitude factor making the normalization integral of ``spec`` equal to 1.

    Klein-Gordon functions use the printed measure ``(2/beta) z/(2 - z) dz``
    on ``z`` in (0, 1); Schrodinger functions use ``int_0^inf |phi(r)|^2 dr``.
    The returned factor multiplies the amplitude already stored in ``spec``.
    ``units`` is accepted for interface symmetry; neither measure depends on it.
    """
    return 1.0 / math.sqrt(norm_integral(spec))


def normalized(spec: WavefunctionSpec) -> WavefunctionSpec:
    return spec.with_norm(spec.norm * normalize(spec))


def kg_norm_closed_form(spec: WavefunctionSpec) -> float:
    """``|b'|^2`` from the printed closed form with free indices ``m = s = 0``.

    ``g(n, 0)`` keeps its internal sum over ``m``; the complex prefactor
    ``(-1)^(1/2) (-2)^(1/2)`` is evaluated on the principal branch (= -sqrt 2).
    Only meaningful as a report next to the quadrature value.
    """
    if spec.kind is not Kind.KG:
        raise ValueError("closed-form normalization exists only for Klein-Gordon")
    n, a3, A = spec.jacobi.n, spec.jacobi.alpha, spec.jacobi.beta_j
    pref = (cmath.sqrt(-1) * cmath.sqrt(-2)).real
    g = (
        pref * math.gamma(a3 + n + 1) / (math.factorial(n) * math.gamma(A + a3 + n + 1))
        * sum(
            math.comb(n, m) * math.gamma(A + a3 + n + m + 1) / math.gamma(a3 + A + 1)
            for m in range(n + 1)
        )
    )
    beta = spec.params.beta
    return (
        2.0 ** (1 + A) / (beta * math.sqrt(math.pi))
        * math.gamma(a3 + 3) * math.gamma(0.5 + A)
        / (math.gamma(a3 + 2) * math.gamma(1 + A) * g * g)
    )


def kg_ground_norm_via_identity(spec: WavefunctionSpec) -> float | None:
    """``|b'|^2`` for ``n = 0`` through the 2F1 route, when its identity applies.

    The integral is ``2^(A-1)/b * 2F1(1-A, b; 1+b; 1/2)`` with ``b = a3 + 2``;
    returns None unless ``b == A``, the condition of the gamma identity.
    """
    if spec.kind is not Kind.KG or spec.jacobi.n != 0:
        return None
    a3, A = spec.jacobi.alpha, spec.jacobi.beta_j
    b = a3 + 2
    if abs(b - A) > 1e-12 * max(1.0, abs(b)):
        return None
    # int_0^1 t^(b-1) (2-t)^(A-1) dt = 2^(A-1) / b * 2F1(1-A, b; 1+b; 1/2)
    integral = 2.0 ** (A - 1) / b * hyp2f1_half(A, b)
    return 1.0 / ((2.0 / spec.params.beta) * integral)


def sample(spec: WavefunctionSpec, grid) -> RadialFunction:
    """Evaluate on an r grid; the residual is measured against the analytic integral."""
    grid = np.asarray(grid, dtype=float)
    residual = abs(norm_integral(spec) - 1.0)
    return RadialFunction(grid, np.asarray(spec(grid), dtype=float), residual)


@dataclass(frozen=True)
class OriginExpansion:
    """First-order behaviour of ``phi`` around ``z = 1/2`` (``r = r0``).

    ``P_n(y) ~ constant + linear * y`` with ``y = 1 - 2z``, and
    ``phi ~ prefactor * (constant + full_linear * y)``.
    """

    prefactor: float
    constant: float
    linear: float
    full_linear: float

    def jacobi_first_order(self, z):
        return self.constant + self.linear * (1.0 - 2.0 * np.asarray(z))

    def phi_first_order(self, z):
        return self.prefactor * (self.constant + self.full_linear * (1.0 - 2.0 * np.asarray(z)))


def origin_expansion(state: QuantumState, eps: float, A: float, *, n: int | None = None,
                     norm: float = 1.0) -> OriginExpansion:
    """Constant and linear coefficients of the Schrodinger eigenfunction at ``z = 1/2``.

    Uses the binomial-sum form of ``P_n^(2 eps, 2 A)(y)``:
    ``2^-n sum_k C(n+2eps, k) C(n+2A, n-k) (1+y)^k (y-1)^(n-k)``.
    """
    n = state.n if n is None else n
    al, be = 2 * eps, 2 * A
    c0 = c1 = 0.0
    for k in range(n + 1):
        f = binom(n + al, k) * binom(n + be, n - k) / 2.0**n
        sign = (-1.0) ** (n - k)
        c0 += sign * f
        c1 += sign * (2 * k - n) * f
    prefactor = norm * 0.5 ** (A + eps)
    return OriginExpansion(prefactor, c0, c1, c1 + (A - eps) * c0)
