"""Numerov shooting eigensolver for the radial equation ``u'' = W(r, E) u``.

Eigenvalues are isolated with a Sturm node count (number of zeros of the
outward solution across the whole grid equals the number of levels below
``E``), then polished by root-finding on the Numerov-consistent log-derivative
mismatch at the outermost classical turning point.  The same machinery serves
the Schrodinger equation with the exact or the exponential centrifugal term
and the Klein-Gordon equation, whose ``W`` depends on the trial energy.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np
from scipy import integrate, optimize

from .closed_form import QuantumState, states_up_to
from .errors import BracketAmbiguous, NoBoundState, WSSpectraError
from .potential import (
    UnitSystem,
    WoodsSaxonParams,
    pekeris_coefficients,
    woods_saxon,
)
from .wavefunction import RadialFunction, count_sign_changes

log = logging.getLogger(__name__)

VARIANTS = ("exact", "pekeris", "kg", "kg-pekeris")

_RESCALE = 1e150


@dataclass(frozen=True)
class RadialGrid:
    r_min: float
    r_max: float
    count: int

    def __post_init__(self):
        if not 0 < self.r_min < self.r_max:
            raise ValueError("need 0 < r_min < r_max")
        if self.count < 1000:
            raise ValueError("a radial grid needs at least 1000 points")

    @property
    def h(self) -> float:
        return (self.r_max - self.r_min) / (self.count - 1)

    @property
    def r(self) -> np.ndarray:
        return np.linspace(self.r_min, self.r_max, self.count)

    def halved(self) -> "RadialGrid":
        return RadialGrid(self.r_min, self.r_max, 2 * self.count - 1)


def default_grid(p: WoodsSaxonParams, count: int = 20001) -> RadialGrid:
    return RadialGrid(1e-6, p.r0 + 20 * p.a, count)


@dataclass(frozen=True)
class ShootingProblem:
    """``u'' = W(r, E) u`` on a radial grid.

    Attributes
    ----------
    W : callable
        ``W(r_array, E) -> array``.
    n_r : int
        Target number of interior nodes.
    start_power : float
        ``u ~ r^start_power`` at the origin.
    e_floor, threshold : float
        Energies with no level below / the continuum edge.
    kappa : callable or None
        Decay constant of the tail at energy E; None means a hard wall at
        ``r_max``.
    """

    W: Callable[[np.ndarray, float], np.ndarray]
    n_r: int
    start_power: float
    e_floor: float
    threshold: float
    grid: RadialGrid
    kappa: Callable[[float], float] | None = None
    state: QuantumState | None = None
    variant: str = ""

    def with_grid(self, grid: RadialGrid) -> "ShootingProblem":
        return replace(self, grid=grid)


@dataclass(frozen=True)
class Shot:
    """One stitched integration at a trial energy."""

    energy: float
    u: np.ndarray
    node_count: int
    mismatch: float
    match_index: int
    casoratian: float = math.nan


@dataclass(frozen=True)
class EigenResult:
    energy: float
    node_count: int
    grid_convergence_delta: float
    wavefunction: RadialFunction
    mismatch: float
    state: QuantumState | None = None
    variant: str = ""


@dataclass
class _Sweep:
    """Cached per-energy arrays for one grid."""

    r: np.ndarray
    h: float
    f: list = field(default_factory=list)
    W: np.ndarray | None = None


def _prepare(problem: ShootingProblem, E: float, grid: RadialGrid) -> _Sweep:
    r = grid.r
    h = grid.h
    W = np.asarray(problem.W(r, E), dtype=float)
    f = 1.0 - h * h * W / 12.0
    return _Sweep(r, h, f.tolist(), W)


def _start(problem, r):
    return r[0] ** problem.start_power, r[1] ** problem.start_power


def _sturm_count(problem: ShootingProblem, E: float, grid: RadialGrid) -> int:
    """Zeros of the outward solution on the whole grid = levels below E."""
    sw = _prepare(problem, E, grid)
    f = sw.f
    u0, u1 = _start(problem, sw.r)
    g = [12.0 - 10.0 * x for x in f]
    nodes = 0
    big = _RESCALE
    for i in range(1, len(f) - 1):
        u2 = (g[i] * u1 - f[i - 1] * u0) / f[i + 1]
        if u1 * u2 < 0.0:
            nodes += 1
        if u2 > big or u2 < -big:
            u1 /= big
            u2 /= big
        u0, u1 = u1, u2
    return nodes


def _match_index(W: np.ndarray) -> int:
    allowed = np.nonzero(W < 0)[0]
    n = len(W)
    m = int(allowed[-1]) if len(allowed) else n // 2
    return min(max(m, 2), n - 3)


def _outward(f, u0, u1, stop):
    g = [12.0 - 10.0 * x for x in f[: stop + 1]]
    u = [0.0] * (stop + 2)
    u[0], u[1] = u0, u1
    big = _RESCALE
    for i in range(1, stop + 1):
        v = (g[i] * u1 - f[i - 1] * u0) / f[i + 1]
        u[i + 1] = v
        if v > big or v < -big:
            u[: i + 2] = [x / big for x in u[: i + 2]]
            v = u[i + 1]
        u0, u1 = u1, v
    return u


def _inward(f, uN, uN1, stop):
    n = len(f)
    g = [12.0 - 10.0 * x for x in f]
    u = [0.0] * n
    u[n - 1], u[n - 2] = uN, uN1
    u2, u1 = uN, uN1
    big = _RESCALE
    for i in range(n - 2, stop - 1, -1):
        v = (g[i] * u1 - f[i + 1] * u2) / f[i - 1]
        u[i - 1] = v
        if v > big or v < -big:
            u[i - 1 :] = [x / big for x in u[i - 1 :]]
            u1, v = u[i], u[i - 1]
        u2, u1 = u1, v
    return u


def numerov_integrate(
    problem: ShootingProblem, E: float, grid: RadialGrid | None = None,
    match_index: int | None = None,
) -> Shot:
    """Outward and inward Numerov sweeps stitched at the matching point.

    ``mismatch`` is ``(u'_in - u'_out)/u`` at the matching point in the
    Numerov-consistent form.  ``casoratian`` is the discrete Wronskian of the
    two sweeps, each scaled to unit norm; unlike the log-derivative it has no
    poles in ``E``, so it is what the root finder uses.
    """
    grid = grid or problem.grid
    sw = _prepare(problem, E, grid)
    f, h, r = sw.f, sw.h, sw.r
    n = len(f)
    m = _match_index(sw.W) if match_index is None else match_index
    u_out = _outward(f, *_start(problem, r), m + 1)
    if problem.kappa is None:
        uN, uN1 = 0.0, 1e-10
    else:
        uN, uN1 = math.exp(-problem.kappa(E) * h), 1.0
    u_in = _inward(f, uN, uN1, m)
    a = np.asarray(u_out[: m + 2])
    b = np.asarray(u_in)
    na = math.sqrt(float(np.dot(a[: m + 1], a[: m + 1])))
    nb = math.sqrt(float(np.dot(b[m:], b[m:])))
    cas = f[m] * f[m + 1] * (a[m] * b[m + 1] - a[m + 1] * b[m]) / (na * nb)
    if b[m] == 0.0 or a[m] == 0.0:
        mismatch, scale = math.inf, 1.0
    else:
        scale = a[m] / b[m]
        mismatch = (
            f[m + 1] * b[m + 1] * scale + f[m - 1] * a[m - 1] - (12.0 - 10.0 * f[m]) * a[m]
        ) / (a[m] * h)
    u = np.empty(n)
    u[: m + 1] = a[: m + 1]
    u[m + 1 :] = b[m + 1 :] * scale
    return Shot(E, u, count_sign_changes(u), mismatch, m, cas)


def _normalized_function(shot: Shot, grid: RadialGrid) -> RadialFunction:
    r = grid.r
    u = shot.u
    norm = integrate.simpson(u * u, x=r)
    u = u / math.sqrt(norm)
    first = np.argmax(np.abs(u) > 1e-8 * np.max(np.abs(u)))
    if u[first] < 0:
        u = -u
    residual = abs(integrate.simpson(u * u, x=r) - 1.0)
    return RadialFunction(r, u, residual)


def _isolate(problem, grid, lo, hi, rel_width):
    target = problem.n_r
    c_hi = _sturm_count(problem, hi, grid)
    if c_hi <= target:
        raise NoBoundState(
            f"only {c_hi} level(s) below {hi:.6g}; no level with {target} node(s)"
        )
    c_lo = _sturm_count(problem, lo, grid)
    if c_lo > target:
        raise BracketAmbiguous(f"{c_lo} level(s) already below the lower bracket {lo:.6g}")
    for _ in range(200):
        if c_lo == target and c_hi == target + 1 and hi - lo <= rel_width * max(1.0, abs(hi)):
            return lo, hi
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        c = _sturm_count(problem, mid, grid)
        if c <= target:
            lo, c_lo = mid, c
        else:
            hi, c_hi = mid, c
    if c_lo == target and c_hi == target + 1:
        return lo, hi
    raise BracketAmbiguous(f"could not isolate the level with {target} node(s)")


def _refine(problem, grid, lo, hi):
    """Root of the Casoratian inside a bracket holding exactly one level."""
    m = _match_index(np.asarray(problem.W(grid.r, 0.5 * (lo + hi))))

    def g(E):
        return numerov_integrate(problem, E, grid, m).casoratian

    g_lo, g_hi = g(lo), g(hi)
    if g_lo * g_hi > 0:
        # should not happen for an isolated level; fall back to pure bisection
        log.debug("Casoratian does not change sign on [%.12g, %.12g]", lo, hi)
        lo, hi = _isolate(problem, grid, lo, hi, 1e-15)
        return numerov_integrate(problem, 0.5 * (lo + hi), grid, m)
    E = optimize.brentq(g, lo, hi, xtol=1e-13 * max(1.0, abs(lo)), maxiter=200)
    return numerov_integrate(problem, E, grid, m)


def _solve_on(problem, grid, lo, hi):
    lo, hi = _isolate(problem, grid, lo, hi, math.inf)
    return _refine(problem, grid, lo, hi)


def solve_eigenvalue(
    problem: ShootingProblem,
    bracket: tuple[float, float] | None = None,
    *,
    check_convergence: bool = True,
) -> EigenResult:
    """Level with ``problem.n_r`` nodes.

    Raises
    ------
    NoBoundState
        Fewer than ``n_r + 1`` levels lie below the threshold.
    BracketAmbiguous
        The bracket does not isolate the requested level.
    """
    lo, hi = bracket if bracket is not None else (problem.e_floor, problem.threshold)
    grid = problem.grid
    shot = _solve_on(problem, grid, lo, hi)
    delta = math.nan
    if check_convergence:
        fine = grid.halved()
        w = 1e-5 * max(1.0, abs(shot.energy))
        try:
            fine_shot = _solve_on(problem, fine, shot.energy - w, shot.energy + w)
        except WSSpectraError:
            fine_shot = _solve_on(problem, fine, lo, hi)
        delta = abs(fine_shot.energy - shot.energy)
    wf = _normalized_function(shot, grid)
    if wf.nodes != problem.n_r:
        raise BracketAmbiguous(
            f"converged function has {wf.nodes} nodes, expected {problem.n_r}"
        )
    return EigenResult(
        shot.energy, wf.nodes, delta, wf, shot.mismatch, problem.state, problem.variant
    )


def radial_problem(
    state: QuantumState,
    p: WoodsSaxonParams,
    mass: float,
    units: UnitSystem,
    variant: str = "exact",
    grid: RadialGrid | None = None,
) -> ShootingProblem:
    """Build the shooting problem for one state of the Woods-Saxon well.

    ``variant`` is ``exact`` / ``pekeris`` (Schrodinger with the true or the
    exponential centrifugal term) or ``kg`` / ``kg-pekeris`` (Klein-Gordon,
    particle levels between ``m c^2 - V0`` and ``m c^2``).
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    grid = grid or default_grid(p)
    l = state.l
    k = units.kinetic(mass)
    pc = pekeris_coefficients(l, p, mass, units)
    L = l * (l + 1)
    pekeris = variant.endswith("pekeris")

    def barrier(r):
        if pekeris:
            return pc.value(1.0 / (1.0 + np.exp(np.minimum((r - p.r0) / p.a, 700.0))))
        return k * L / (r * r)

    if variant.startswith("kg"):
        mc2 = units.rest_energy(mass)
        hc2 = units.hbar_c**2
        # the surrogate barrier tends to K*D0 instead of zero, lifting the threshold
        tail = pc.D * pc.D0 / k if pekeris else 0.0

        def W(r, E):
            return barrier(r) / k + (mc2 * mc2 - (E - woods_saxon(r, p)) ** 2) / hc2

        return ShootingProblem(
            W, state.n_r, 1.0 if pekeris else l + 1.0,
            mc2 - p.V0 * (1 + 1e-6), math.sqrt(mc2 * mc2 + hc2 * tail), grid,
            lambda E: math.sqrt(max(tail + (mc2 * mc2 - E * E) / hc2, 0.0)),
            state, variant,
        )

    asymptote = pc.D * pc.D0 if pekeris else 0.0

    def W(r, E):
        return (woods_saxon(r, p) + barrier(r) - E) / k

    floor = float(np.min(woods_saxon(grid.r, p) + barrier(grid.r)))
    return ShootingProblem(
        W, state.n_r, 1.0 if pekeris else l + 1.0,
        floor - 1e-6 * p.V0, asymptote, grid,
        lambda E: math.sqrt(max(asymptote - E, 0.0) / k),
        state, variant,
    )


def solve_state(problem: ShootingProblem, *, check_convergence: bool = True,
                min_tail: float = 25.0) -> EigenResult:
    """Solve, then widen the box if the tail has not decayed by ``exp(-min_tail)``."""
    res = solve_eigenvalue(problem, check_convergence=check_convergence)
    if problem.kappa is None:
        return res
    kappa = problem.kappa(res.energy)
    grid = problem.grid
    r_turn = res.wavefunction.grid[numerov_integrate(problem, res.energy).match_index]
    if kappa * (grid.r_max - r_turn) >= min_tail or kappa == 0.0:
        return res
    r_max = r_turn + min_tail / kappa
    count = int(math.ceil((r_max - grid.r_min) / grid.h)) + 1
    log.info("extending box to r_max=%.4g for a weakly bound level", r_max)
    wider = RadialGrid(grid.r_min, r_max, count)
    return solve_eigenvalue(problem.with_grid(wider), check_convergence=check_convergence)


@dataclass(frozen=True)
class SpectrumEntry:
    state: QuantumState
    result: EigenResult | None
    error: str = ""

    @property
    def energy(self) -> float:
        return self.result.energy if self.result is not None else math.nan


def _solve_entry(st, p, mass, units, variant, grid, check_convergence) -> SpectrumEntry:
    problem = radial_problem(st, p, mass, units, variant, grid)
    try:
        res = solve_state(problem, check_convergence=check_convergence)
    except NoBoundState as exc:
        return SpectrumEntry(st, None, f"unbound: {exc}")
    except WSSpectraError as exc:
        return SpectrumEntry(st, None, f"solver: {exc}")
    return SpectrumEntry(st, res)


def solve_spectrum(
    p: WoodsSaxonParams, mass: float, units: UnitSystem, n_max: int,
    variant: str = "exact", *, grid: RadialGrid | None = None,
    states: list[QuantumState] | None = None, check_convergence: bool = True,
    workers: int = 1,
) -> list[SpectrumEntry]:
    """Every state ``1s ... (n_max, l = n_max - 1)``; failures are flagged, not raised.

    With ``workers > 1`` states are solved in separate processes; the output
    order and values do not depend on the worker count.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    todo = states if states is not None else states_up_to(n_max)
    args = [(st, p, mass, units, variant, grid, check_convergence) for st in todo]
    if workers <= 1 or len(args) < 2:
        return [_solve_entry(*a) for a in args]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_solve_entry, *zip(*args)))


@dataclass(frozen=True)
class OverlayReport:
    state: QuantumState
    variant_a: str
    variant_b: str
    energy_a: float
    energy_b: float
    l2_difference: float
    peak_a: float
    peak_b: float
    nodes_a: tuple[float, ...]
    nodes_b: tuple[float, ...]

    @property
    def peak_shift(self) -> float:
        """``peak_a - peak_b``; positive when ``b`` sits to the left of ``a``."""
        return self.peak_a - self.peak_b


def node_positions(f: RadialFunction) -> tuple[float, ...]:
    v = f.values
    keep = np.abs(v) > 1e-9 * np.max(np.abs(v))
    r, v = f.grid[keep], v[keep]
    idx = np.nonzero(np.signbit(v[1:]) != np.signbit(v[:-1]))[0]
    # linear interpolation of each crossing
    return tuple(float(r[i] - v[i] * (r[i + 1] - r[i]) / (v[i + 1] - v[i])) for i in idx)


def compare_results(a: EigenResult, b: EigenResult) -> OverlayReport:
    fa, fb = a.wavefunction, b.wavefunction
    if len(fa.grid) != len(fb.grid) or not np.allclose(fa.grid, fb.grid, rtol=0, atol=1e-12):
        vb = np.interp(fa.grid, fb.grid, fb.values, right=0.0)
    else:
        vb = fb.values
    diff = math.sqrt(integrate.simpson((fa.values - vb) ** 2, x=fa.grid))
    return OverlayReport(
        a.state, a.variant, b.variant, a.energy, b.energy, diff,
        fa.peak, fb.peak, node_positions(fa), node_positions(fb),
    )


def compare_eigenfunctions(
    state: QuantumState, variant_a: str, variant_b: str, p: WoodsSaxonParams,
    mass: float, units: UnitSystem, grid: RadialGrid | None = None,
) -> OverlayReport:
    """Overlay two oracle solutions of the same state on a common grid."""
    grid = grid or default_grid(p)
    ra = solve_eigenvalue(radial_problem(state, p, mass, units, variant_a, grid),
                          check_convergence=False)
    rb = solve_eigenvalue(radial_problem(state, p, mass, units, variant_b, grid),
                          check_convergence=False)
    return compare_results(ra, rb)


def harmonic_oscillator_problem(state: QuantumState, grid: RadialGrid) -> ShootingProblem:
    """``-u'' + (r^2 + l(l+1)/r^2) u = E u``; exact levels ``4 n_r + 2 l + 3``."""
    L = state.l * (state.l + 1)

    def W(r, E):
        return r * r + L / (r * r) - E

    return ShootingProblem(
        W, state.n_r, state.l + 1.0, 0.0, 4.0 * state.n_r + 2 * state.l + 40.0, grid,
        lambda E: grid.r_max,  # tail exp(-r^2/2) decays at rate r
        state, "control-ho",
    )


def harmonic_oscillator_level(state: QuantumState) -> float:
    return 4.0 * state.n_r + 2.0 * state.l + 3.0


def square_well_problem(n_r: int, grid: RadialGrid) -> ShootingProblem:
    """``-u'' = E u`` between hard walls at ``r = 0`` and ``r = r_max``."""

    def W(r, E):
        return np.full_like(r, -E)

    width = grid.r_max
    top = ((n_r + 2) * math.pi / width) ** 2
    return ShootingProblem(W, n_r, 1.0, 0.0, top, grid, None, QuantumState(n_r + 1, 0),
                           "control-well")


def square_well_level(n_r: int, width: float) -> float:
    return ((n_r + 1) * math.pi / width) ** 2


@dataclass(frozen=True)
class ConvergenceFit:
    steps: tuple[float, ...]
    errors: tuple[float, ...]
    slope: float


def convergence_slope(build: Callable[[RadialGrid], ShootingProblem], exact: float,
                      r_min: float, r_max: float, counts=(1001, 2001, 4001)) -> ConvergenceFit:
    """Least-squares slope of ``log|E_h - E|`` against ``log h``."""
    steps, errors = [], []
    for c in counts:
        grid = RadialGrid(r_min, r_max, c)
        res = solve_eigenvalue(build(grid), check_convergence=False)
        steps.append(grid.h)
        errors.append(abs(res.energy - exact))
    slope = float(np.polyfit(np.log(steps), np.log(errors), 1)[0])
    return ConvergenceFit(tuple(steps), tuple(errors), slope)
