import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional

import numpy as np
from dotenv import load_dotenv

from .config import RunConfig, apply_overrides, load_config
from .darboux import broken_closed_form_partner, build_partner, closed_form_partner, partner_spectrum
from .errors import RegimeError, ScarfError
from .export import Table, render, write_table
from .logger import setup_logging
from .numerics import match_spectra, nearest_gap, numeric_bound_levels, richardson_levels
from .scarf2 import RegimeClass, ScarfModel, classify, derive_params
from .utils import sample_axis
from .verification import run_verification

log = logging.getLogger(__name__)

DEFAULT_CONFIG = "config/config.json"

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2


def _emit(table: Table, cfg: RunConfig) -> None:
    if cfg.output.path:
        path = write_table(table, cfg.output.path, cfg.output.format)
        log.info("Wrote %d rows to %s", len(table.rows), path)
    else:
        sys.stdout.write(render(table, cfg.output.format))


def _energy_meta(entry) -> dict:
    return {"n": entry.n, "branch": entry.branch.value, "energy": [entry.energy.real, entry.energy.imag]}


def _numeric_levels(potential, cfg: RunConfig) -> List[complex]:
    grid = cfg.grid.grid()
    if cfg.richardson:
        return richardson_levels(potential, grid, cfg.verification.edge_tol)
    return numeric_bound_levels(potential, grid, cfg.verification.edge_tol)


def cmd_classify(cfg: RunConfig) -> int:
    params = cfg.model.params()
    regime = classify(params)
    table = Table(["regime", "t", "s", "p_re", "p_im", "q_plus_re", "q_plus_im", "q_minus_re", "q_minus_im", "n_max"])
    try:
        sp = derive_params(params)
    except RegimeError as exc:
        table.add_row([regime.value] + [None] * 9)
        table.meta["note"] = str(exc)
    else:
        table.add_row(
            [
                regime.value,
                sp.t,
                sp.s,
                sp.p.real,
                sp.p.imag,
                sp.q_plus.real,
                sp.q_plus.imag,
                sp.q_minus.real,
                sp.q_minus.imag,
                sp.n_max,
            ]
        )
    log.info("v1=%s v2=%s classified as %s", params.v1, params.v2, regime.value)
    _emit(table, cfg)
    return EXIT_OK


def cmd_spectrum(cfg: RunConfig) -> int:
    model = ScarfModel(cfg.model.params())
    entries = model.spectrum()
    columns = ["n", "branch", "energy_re", "energy_im"]
    numeric: List[complex] = []
    matches = {}
    if cfg.numeric:
        columns += ["numeric_re", "numeric_im", "gap"]
        numeric = _numeric_levels(model.potential, cfg)
        report = match_spectra([e.energy for e in entries], numeric, cfg.verification.match_tol)
        matches = {m.analytic: m for m in report.matches}
    table = Table(columns)
    for e in entries:
        row = [e.n, e.branch.value, e.energy.real, e.energy.imag]
        if cfg.numeric:
            hit = matches.get(e.energy)
            row += [hit.numeric.real, hit.numeric.imag, hit.gap] if hit else [None, None, nearest_gap(e.energy, numeric)]
        table.add_row(row)
    table.meta = {"regime": model.regime.value, "n_max": model.n_max, "v1": model.params.v1, "v2": model.params.v2}
    table.meta["second_series"] = [_energy_meta(e) for e in model.second_series()]
    if cfg.numeric:
        table.meta["grid"] = cfg.grid.grid().to_dict()
        table.meta["richardson"] = cfg.richardson
        table.meta["numeric_levels"] = numeric
    log.info("%s spectrum: %d levels", model.regime.value, len(entries))
    _emit(table, cfg)
    return EXIT_OK


def cmd_darboux(cfg: RunConfig) -> int:
    model = ScarfModel(cfg.model.params())
    m = cfg.model.m
    partner = build_partner(model, m, cfg.model.branch)
    x = sample_axis(cfg.table.x_min, cfg.table.x_max, cfg.table.samples)
    u = partner.u(x)

    comparator: Optional[np.ndarray] = None
    if model.regime == RegimeClass.UNBROKEN_PT and m <= 2:
        comparator = closed_form_partner(model, m, x)
    elif model.regime == RegimeClass.BROKEN_PT and m == 0:
        comparator = broken_closed_form_partner(model, x, partner.branch)

    columns = ["x", "u_re", "u_im"]
    if comparator is not None:
        columns += ["closed_re", "closed_im", "deviation"]
    table = Table(columns)
    for i, xi in enumerate(x):
        row = [xi, u[i].real, u[i].imag]
        if comparator is not None:
            row += [comparator[i].real, comparator[i].imag, abs(u[i] - comparator[i])]
        table.add_row(row)

    kept, deleted = partner_spectrum(model, m, partner.branch)
    table.meta = {
        "m": m,
        "branch": partner.branch.value,
        "beta_m": partner.beta_m,
        "deleted": _energy_meta(deleted),
        "spectrum": [_energy_meta(e) for e in kept],
    }
    if comparator is not None:
        table.meta["max_deviation"] = float(np.max(np.abs(u - comparator)))
    if cfg.numeric:
        numeric = _numeric_levels(partner.u, cfg)
        report = match_spectra([e.energy for e in kept], numeric, cfg.verification.match_tol)
        table.meta["numeric_levels"] = numeric
        table.meta["max_gap"] = report.max_gap
        table.meta["deleted_gap"] = nearest_gap(deleted.energy, numeric)
    log.info(
        "Partner m=%d (%s): beta_m=%s, deleted E_%d=%s, spectrum %s",
        m,
        partner.branch.value,
        partner.beta_m,
        deleted.n,
        deleted.energy,
        [e.energy for e in kept],
    )
    _emit(table, cfg)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    report = run_verification(cfg)
    _emit(report.to_table(), cfg)
    for check in report.failures:
        log.error("Check %s failed: %.3e %s %.3e", check.name, check.value, check.relation, check.tolerance)
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


def cmd_figures(cfg: RunConfig) -> int:
    model = ScarfModel(cfg.model.params())
    x = sample_axis(cfg.table.x_min, cfg.table.x_max, cfg.table.samples)
    curves = {"V": model.potential(x)}
    for m in range(min(3, model.n_max)):
        curves[f"U{m}"] = build_partner(model, m, cfg.model.branch).u(x)
    out_dir = Path(cfg.output.path or cfg.output.figures_dir)
    fmt = cfg.output.format
    for name, part in (("fig1", np.real), ("fig2", np.imag)):
        table = Table(["x"] + list(curves))
        for i, xi in enumerate(x):
            table.add_row([xi] + [float(part(values[i])) for values in curves.values()])
        table.meta = {"part": part.__name__, "v1": model.params.v1, "v2": model.params.v2}
        path = write_table(table, out_dir / f"{name}.{fmt}", fmt)
        log.info("Wrote %s", path)
        print(path)
    return EXIT_OK


COMMANDS: Dict[str, Callable[[RunConfig], int]] = {
    "classify": cmd_classify,
    "spectrum": cmd_spectrum,
    "darboux": cmd_darboux,
    "verify": cmd_verify,
    "figures": cmd_figures,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help=f"Path to config file (default: {DEFAULT_CONFIG} when present)")
    common.add_argument("--v1", type=float, help="Depth coupling V1 (> 0)")
    common.add_argument("--v2", help="Coupling V2: real, or purely imaginary as 'bi'")
    common.add_argument("--m", type=int, help="Seed quantum number for the Darboux partner")
    common.add_argument("--branch", choices=["plus", "minus"], help="q branch in the broken regime")
    common.add_argument("--grid-l", type=float, help="Finite-difference half-width L")
    common.add_argument("--grid-n", type=int, help="Finite-difference node count (odd)")
    common.add_argument("--x-min", type=float, help="Table range start")
    common.add_argument("--x-max", type=float, help="Table range end")
    common.add_argument("--samples", type=int, help="Table sample count")
    common.add_argument("--numeric", action="store_true", help="Add finite-difference eigenvalues")
    common.add_argument("--richardson", action="store_true", help="Richardson-extrapolate the numeric levels (implies --numeric)")
    common.add_argument("--format", choices=["csv", "json"], help="Output format")
    common.add_argument("--out", help="Output file (figures: output directory)")

    parser = argparse.ArgumentParser(description="Darboux partners of the PT-symmetric Scarf II potential")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("classify", parents=[common], help="PT regime and spectral parameters")
    sub.add_parser("spectrum", parents=[common], help="Analytic bound-state energies")
    sub.add_parser("darboux", parents=[common], help="Partner potential table and spectrum")
    sub.add_parser("verify", parents=[common], help="Run the invariant suite")
    sub.add_parser("figures", parents=[common], help="Write real/imaginary potential curves")
    return parser


def _config_path(explicit: Optional[str]) -> Optional[str]:
    if explicit:
        return explicit
    return DEFAULT_CONFIG if Path(DEFAULT_CONFIG).exists() else None


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    load_dotenv()
    try:
        cfg = apply_overrides(load_config(_config_path(args.config)), args)
    except ScarfError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    setup_logging(cfg.logging.log_dir, cfg.logging.level, name=cfg.logging.name, logger_name=__package__)
    try:
        return COMMANDS[args.command](cfg)
    except ScarfError as exc:
        log.error("%s failed: %s", args.command, exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
