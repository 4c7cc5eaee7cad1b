"""Conformance runner: asserted checks plus report-only discrepancy entries."""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import reference
from .closed_form import (
    Branch,
    QuantumState,
    kg_energy_complex,
    kg_energy_rational_term,
    kg_energy_swave,
    kg_reality_boundary,
    schrodinger_energy,
    schrodinger_energy_swave,
    states_up_to,
)
from .config import PRESETS, RunConfig
from .errors import ComplexEnergy
from .oracle import compare_eigenfunctions, solve_spectrum
from .potential import centrifugal_deviation, taylor_residuals

PASS, FAIL, REPORT = "pass", "FAIL", "report"
HEADER = ("criterion", "computed", "reference", "delta", "status")

TAYLOR_T = (1.0, 2.0, 5.0, 7.0 / 0.6, 20.0, 50.0, 100.0)


@dataclass(frozen=True)
class ReportItem:
    criterion: str
    computed: float
    reference: float
    delta: float
    status: str

    @property
    def row(self) -> tuple:
        return (self.criterion, self.computed, self.reference, self.delta, self.status)


def _check(name, computed, ref, tol, *, relative=False) -> ReportItem:
    delta = computed - ref
    size = abs(delta) / max(1.0, abs(ref)) if relative else abs(delta)
    ok = math.isfinite(size) and size <= tol
    return ReportItem(name, computed, ref, delta, PASS if ok else FAIL)


def _bound(name, computed, limit) -> ReportItem:
    """``computed < limit``; the delta column holds the remaining margin."""
    ok = math.isfinite(computed) and computed < limit
    return ReportItem(name, computed, limit, computed - limit, PASS if ok else FAIL)


def _note(name, computed, ref) -> ReportItem:
    return ReportItem(name, computed, ref, computed - ref, REPORT)


def level_items(cfg: RunConfig, workers: int = 1) -> list[ReportItem]:
    p, units = cfg.params, cfg.unit_system
    spectra = {
        v: solve_spectrum(p, cfg.mass, units, 6, v, grid=cfg.grid, workers=workers)
        for v in ("exact", "pekeris")
    }
    items = []
    drift = 0.0
    for variant, entries in spectra.items():
        other = "pekeris" if variant == "exact" else "exact"
        for e in entries:
            lab = e.state.label
            ref = reference.reference_level(e.state, variant)
            items.append(_check(f"levels.{variant}.{lab}", e.energy, ref, reference.TOLERANCE))
            items.append(_note(f"levels.{variant}_vs_{other}_column.{lab}", e.energy,
                               reference.reference_level(e.state, other)))
            if e.result is not None:
                drift = max(drift, e.result.grid_convergence_delta)
    for ex, pk in zip(spectra["exact"], spectra["pekeris"]):
        if ex.state.l == 0:
            items.append(_check(f"levels.swave_agreement.{ex.state.label}",
                                pk.energy, ex.energy, 1e-9))
    items.append(_bound("oracle.grid_halving_drift", drift, 1e-6))
    return items


def closed_form_items(cfg: RunConfig) -> list[ReportItem]:
    """Closed-form levels next to the surrogate column, under both index conventions."""
    p, units = cfg.params, cfg.unit_system
    items = []
    for s in states_up_to(6):
        ref = reference.reference_level(s, "pekeris")
        items.append(_note(f"closed.se.n=n_r.{s.label}",
                           schrodinger_energy(s, p, cfg.mass, units).energy, ref))
        items.append(_note(f"closed.se.n=N-1.{s.label}",
                           schrodinger_energy(s, p, cfg.mass, units, n=s.N - 1).energy, ref))
    items.append(_note("closed.se_swave.n0",
                       schrodinger_energy_swave(0, p, cfg.mass, units).energy,
                       reference.LEVELS["1s"][0]))
    return items


def surrogate_items(cfg: RunConfig) -> list[ReportItem]:
    items = []
    for t in TAYLOR_T:
        items.append(_bound(f"surrogate.taylor_residual.t={t:.6g}", max(taylor_residuals(t)), 1e-8))
    for l in (1, 2):
        items.append(_bound(f"surrogate.barrier_deviation.l={l}",
                            centrifugal_deviation(l, cfg.params, 0.25), 0.05))
    return items


def reduction_items(n_max: int = 20) -> list[ReportItem]:
    items = []
    for name, cfg in (("table1", PRESETS["table1"]), ("fig3", PRESETS["fig3"])):
        p, units, m = cfg.params, cfg.unit_system, cfg.mass
        worst = 0.0
        for n in range(n_max + 1):
            s = QuantumState.from_nodes(n, 0)
            a = schrodinger_energy(s, p, m, units).energy
            b = schrodinger_energy_swave(n, p, m, units).energy
            worst = max(worst, abs(a - b) / max(1.0, abs(b)))
        items.append(_bound(f"reduction.se_swave.{name}", worst, 1e-12))
        for branch in Branch:
            worst = 0.0
            for n in range(n_max + 1):
                s = QuantumState.from_nodes(n, 0)
                try:
                    b = kg_energy_swave(n, branch, p, m, units).energy
                except ComplexEnergy:
                    continue
                a = kg_energy_complex(s, branch, p, m, units).real
                worst = max(worst, abs(a - b) / max(1.0, abs(b)))
            items.append(_bound(f"reduction.kg_swave.{branch.value}.{name}", worst, 1e-12))
    return items


def kg_items() -> list[ReportItem]:
    cfg = PRESETS["fig3"]
    p, units, m = cfg.params, cfg.unit_system, cfg.mass
    worst = 0.0
    for l in range(0, 5):
        for n in range(0, 15):
            s = QuantumState.from_nodes(n, l)
            total = sum(kg_energy_complex(s, b, p, m, units) for b in Branch)
            twice = 2 * kg_energy_rational_term(s, p, m, units)
            worst = max(worst, abs(total - twice) / max(1.0, abs(twice)))
    items = [_bound("kg.branch_sum", worst, 1e-10)]
    for l in (1, 2, 3, 4):
        last = kg_reality_boundary(l, p, m, units)
        items.append(_note(f"kg.reality_boundary.l={l}", math.nan if last is None else last,
                           math.nan))
    return items


def overlay_items(cfg: RunConfig) -> list[ReportItem]:
    p, units = cfg.params, cfg.unit_system
    low = compare_eigenfunctions(QuantumState.from_nodes(1, 1), "exact", "pekeris",
                                 p, cfg.mass, units, cfg.grid)
    high = compare_eigenfunctions(QuantumState.from_nodes(6, 5), "exact", "pekeris",
                                  p, cfg.mass, units, cfg.grid)

    def grows(name, hi, lo):
        ok = hi > lo
        return ReportItem(name, hi, lo, hi - lo, PASS if ok else FAIL)

    return [
        grows("overlay.l2_grows", high.l2_difference, low.l2_difference),
        grows("overlay.peak_shift_grows", abs(high.peak_shift), abs(low.peak_shift)),
    ]


def run_conformance(cfg: RunConfig, workers: int = 1) -> list[ReportItem]:
    return (
        level_items(cfg, workers)
        + closed_form_items(cfg)
        + surrogate_items(cfg)
        + reduction_items()
        + kg_items()
        + overlay_items(cfg)
    )


def failures(items: list[ReportItem]) -> list[ReportItem]:
    return [i for i in items if i.status == FAIL]
