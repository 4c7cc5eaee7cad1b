"""``ws-spectra`` command-line front end.

Exit codes: 0 success, 1 conformance failure, 2 usage or config error,
3 solver failure.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path

import numpy as np
from scipy import integrate

from . import csvio, report
from .closed_form import (
    Branch,
    QuantumState,
    kg_energy,
    kg_reality_condition,
    schrodinger_energy,
)
from .config import RunConfig, build_config
from .errors import ComplexEnergy, ConfigError, InvalidState, NoBoundState, WSSpectraError
from .oracle import compare_results, radial_problem, solve_eigenvalue, solve_spectrum
from .potential import effective_potential_approx, effective_potential_exact
from .wavefunction import kg_wavefunction_at, se_wavefunction_at

log = logging.getLogger("ws_spectra")

EXIT_OK, EXIT_CONFORMANCE, EXIT_USAGE, EXIT_SOLVER = 0, 1, 2, 3

SPECTRUM_HEADER = ("label", "N", "l", "n_r", "E_closed_form", "E_oracle_exact",
                   "E_oracle_pekeris", "flags")


def _variants(cfg: RunConfig) -> dict[str, str]:
    if cfg.equation == "KG":
        return {"exact": "kg", "pekeris": "kg-pekeris"}
    return {"exact": "exact", "pekeris": "pekeris"}


def _closed_energy(cfg: RunConfig, state: QuantumState) -> tuple[float, list[str]]:
    p, units = cfg.params, cfg.unit_system
    if cfg.equation == "SE":
        e = schrodinger_energy(state, p, cfg.mass, units).energy
        return e, (["closed:below-well"] if e < -p.V0 else [])
    try:
        lvl = kg_energy(state, Branch(cfg.branch), p, cfg.mass, units)
    except ComplexEnergy:
        return math.nan, ["closed:complex"]
    flags = [] if kg_reality_condition(state, p, cfg.mass, units) else ["closed:reality-false"]
    return lvl.energy, flags


def spectrum_rows(cfg: RunConfig, workers: int = 1, check_convergence: bool = True):
    """Rows of the spectrum table plus the list of hard solver failures."""
    states = cfg.states()
    oracle_cols = {}
    for col, variant in _variants(cfg).items():
        if col not in cfg.methods:
            continue
        if cfg.equation == "KG" and cfg.branch != Branch.PARTICLE.value:
            continue
        oracle_cols[col] = solve_spectrum(
            cfg.params, cfg.mass, cfg.unit_system, cfg.nmax, variant, grid=cfg.grid,
            states=states, check_convergence=check_convergence, workers=workers,
        )
    rows, failures = [], []
    for i, st in enumerate(states):
        flags = []
        closed = math.nan
        if "closed" in cfg.methods:
            closed, flags = _closed_energy(cfg, st)
        energies = {}
        for col in ("exact", "pekeris"):
            entry = oracle_cols.get(col, [None] * len(states))[i]
            if entry is None:
                energies[col] = math.nan
                if col in cfg.methods:
                    flags.append(f"{col}:particle-only")
                continue
            energies[col] = entry.energy
            if entry.error.startswith("unbound"):
                flags.append(f"{col}:unbound")
            elif entry.error:
                flags.append(f"{col}:solver-error")
                failures.append(f"{st.label} ({col}): {entry.error}")
        rows.append((st.label, st.N, st.l, st.n_r, closed, energies["exact"],
                     energies["pekeris"], ";".join(flags)))
    return rows, failures


def _print_table(header, rows, stream=None):
    stream = stream or sys.stdout
    cells = [list(header)] + [[csvio.fmt(v) for v in r] for r in rows]
    widths = [max(len(c[i]) for c in cells) for i in range(len(header))]
    for c in cells:
        print("  ".join(v.rjust(w) for v, w in zip(c, widths)).rstrip(), file=stream)


def cmd_spectrum(cfg: RunConfig, out: Path, args) -> int:
    rows, failures = spectrum_rows(cfg, args.jobs, not args.no_convergence_check)
    path = csvio.write_csv(out / f"spectrum_{cfg.name}.csv", SPECTRUM_HEADER, rows)
    if not args.quiet:
        _print_table(SPECTRUM_HEADER, rows)
    log.info("wrote %s", path)
    if failures:
        for f in failures:
            print(f"solver failure: {f}", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"bad l list {text!r}") from None


def cmd_potential(cfg: RunConfig, out: Path, args) -> int:
    p, units = cfg.params, cfg.unit_system
    ls = _int_list(args.l)
    if args.samples < 2 or not args.beta_x_max > args.beta_x_min:
        raise ConfigError("need beta_x_max > beta_x_min and at least 2 samples")
    bx = np.linspace(args.beta_x_min, args.beta_x_max, args.samples)
    r = p.r0 + p.a * bx
    if r[0] <= 0 or r[-1] > cfg.grid.r_max:
        raise ConfigError(
            f"r range [{r[0]:.6g}, {r[-1]:.6g}] must lie in (0, {cfg.grid.r_max:.6g}]"
        )
    rows = []
    for l in ls:
        if l < 0:
            raise ConfigError("l must be non-negative")
        ex = effective_potential_exact(r, l, p, cfg.mass, units)
        ap = effective_potential_approx(r, l, p, cfg.mass, units)
        rows.extend((l, float(b), float(rr), float(e), float(a))
                    for b, rr, e, a in zip(bx, r, ex, ap))
    header = ("l", "beta_x", "r", "V_eff_exact", "V_eff_approx")
    path = csvio.write_csv(out / f"potential_{cfg.name}.csv", header, rows)
    log.info("wrote %s", path)
    return EXIT_OK


def _parse_state(args) -> QuantumState:
    try:
        if args.state:
            return QuantumState.from_label(args.state)
        if args.n is not None and args.l_state is not None:
            return QuantumState.from_nodes(args.n, args.l_state)
    except (InvalidState, ValueError) as exc:
        raise ConfigError(str(exc)) from None
    raise ConfigError("give --state LABEL or both --n (radial nodes) and --l")


def _closed_form_samples(cfg: RunConfig, state: QuantumState, r: np.ndarray):
    energy, _ = _closed_energy(cfg, state)
    if not math.isfinite(energy):
        return None, energy, "closed-form energy is complex"
    try:
        if cfg.equation == "SE":
            spec = se_wavefunction_at(state, energy, cfg.params, cfg.mass, cfg.unit_system)
        else:
            spec = kg_wavefunction_at(state, energy, cfg.params, cfg.mass, cfg.unit_system)
        u = np.asarray(spec(r), dtype=float)
        norm = math.sqrt(integrate.simpson(u * u, x=r))
    except WSSpectraError as exc:
        return None, energy, str(exc)
    if not (math.isfinite(norm) and norm > 0):
        return None, energy, "closed form not normalizable on the grid"
    u = u / norm
    first = np.argmax(np.abs(u) > 1e-8 * np.max(np.abs(u)))
    return (-u if u[first] < 0 else u), energy, ""


def cmd_wavefunction(cfg: RunConfig, out: Path, args) -> int:
    state = _parse_state(args)
    grid = cfg.grid
    results = {}
    for col, variant in _variants(cfg).items():
        problem = radial_problem(state, cfg.params, cfg.mass, cfg.unit_system, variant, grid)
        try:
            results[col] = solve_eigenvalue(problem, check_convergence=False)
        except NoBoundState as exc:
            print(f"{state.label} is unbound ({variant}): {exc}", file=sys.stderr)
            return EXIT_SOLVER
        except WSSpectraError as exc:
            print(f"solver failure for {state.label} ({variant}): {exc}", file=sys.stderr)
            return EXIT_SOLVER
    r = grid.r
    closed, e_closed, why = _closed_form_samples(cfg, state, r)
    ue = results["exact"].wavefunction.values
    up = results["pekeris"].wavefunction.values
    uc = closed if closed is not None else np.full_like(r, math.nan)
    rows = zip(r.tolist(), ue.tolist(), up.tolist(), uc.tolist())
    stem = f"wavefunction_{cfg.name}_{state.label}"
    csvio.write_csv(out / f"{stem}.csv", ("r", "u_exact", "u_pekeris", "u_closed_form"), rows)

    ov = compare_results(results["exact"], results["pekeris"])
    side = [
        ("state", state.label),
        ("energy_exact", ov.energy_a),
        ("energy_pekeris", ov.energy_b),
        ("energy_closed_form", e_closed),
        ("l2_difference", ov.l2_difference),
        ("peak_exact", ov.peak_a),
        ("peak_pekeris", ov.peak_b),
        ("peak_shift", ov.peak_shift),
        ("nodes_exact", " ".join(csvio.fmt(x) for x in ov.nodes_a)),
        ("nodes_pekeris", " ".join(csvio.fmt(x) for x in ov.nodes_b)),
    ]
    if why:
        side.append(("closed_form_note", why))
    text = "".join(f"{k} = {csvio.fmt(v)}\n" for k, v in side)
    (out / f"{stem}.report.txt").write_text(text, encoding="utf-8")
    return EXIT_OK


def cmd_conformance(cfg: RunConfig, out: Path, args) -> int:
    items = report.run_conformance(cfg, workers=args.jobs)
    path = csvio.write_csv(out / f"conformance_{cfg.name}.csv", report.HEADER,
                           (i.row for i in items))
    bad = report.failures(items)
    if not args.quiet:
        for i in bad:
            print(f"FAIL {i.criterion}: computed {csvio.fmt(i.computed)}, "
                  f"reference {csvio.fmt(i.reference)}", file=sys.stderr)
        n_assert = sum(i.status != report.REPORT for i in items)
        print(f"{n_assert - len(bad)}/{n_assert} asserted checks pass; report: {path}")
    return EXIT_CONFORMANCE if bad else EXIT_OK


COMMANDS = {
    "spectrum": cmd_spectrum,
    "potential": cmd_potential,
    "wavefunction": cmd_wavefunction,
    "conformance": cmd_conformance,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ws-spectra",
        description="Woods-Saxon bound-state spectra: closed forms versus a shooting oracle.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value configuration file")
    common.add_argument("--preset", help="built-in parameter set (table1, fig3, fig4, fig5, fig6)")
    common.add_argument("--nmax", type=int, help="largest principal number N")
    common.add_argument("--out", help="output directory")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for spectra")
    common.add_argument("--quiet", action="store_true")
    common.add_argument("--log-level", default="WARNING")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", parents=[common], help="energy table and CSV")
    sp.add_argument("--no-convergence-check", action="store_true",
                    help="skip the grid-halving re-solve")

    pp = sub.add_parser("potential", parents=[common], help="effective potentials CSV")
    pp.add_argument("--l", default="1,2,5", help="comma-separated l values")
    pp.add_argument("--beta-x-min", type=float, default=-4.0)
    pp.add_argument("--beta-x-max", type=float, default=6.0)
    pp.add_argument("--samples", type=int, default=201)

    wp = sub.add_parser("wavefunction", parents=[common], help="eigenfunction overlay CSV")
    wp.add_argument("--state", help="spectroscopic label such as 2p")
    wp.add_argument("--n", type=int, help="radial node count")
    wp.add_argument("--l", dest="l_state", type=int, help="orbital quantum number")

    sub.add_parser("conformance", parents=[common], help="run the conformance report")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(), format="%(levelname)s %(message)s")
    try:
        cfg = build_config(args.preset, args.config, nmax=args.nmax, out_dir=args.out)
        out = Path(cfg.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        return COMMANDS[args.command](cfg, out, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
