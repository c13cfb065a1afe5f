"""Command-line entry point.

Exit codes: 0 success, 2 invalid input or failed validation, 3 solver or
training failure, 4 file I/O error.
"""

from __future__ import annotations

import argparse
import csv
import logging
import math
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__, ann, dataset, distress, ingest, plots, studies
from .deflection import EQUIVALENT_PLATE, LAYERED, SENSOR_OFFSETS, FwdLoad, winkler_plate_basin
from .errors import (
    ExtrapolationWarning,
    ModelFormatError,
    RigidPaveError,
    SolverError,
    TrainingError,
)
from .hydrostatics import MoistureState
from .kvalue import modified_k
from .provenance import header_lines, strip_comments
from .resilient_modulus import MrCoefficients
from .slab_structure import transformed_section
from .units import INCH, LBF, PCI

log = logging.getLogger("rigidpave")

EXIT_OK, EXIT_INVALID, EXIT_SOLVER, EXIT_IO = 0, 2, 3, 4


class Refusal(RigidPaveError):
    """Output exists and --force was not given."""


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return "pass" if x else "fail"
    if isinstance(x, (int, np.integer)):
        return str(x)
    return f"{float(x):.10g}"


def _write_csv(path, kind, config, units, columns, rows):
    with open(path, "w", newline="") as fh:
        for line in header_lines(kind, config, units):
            fh.write(line + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_fmt(v) for v in r])


def _check_out(path: Path, force: bool):
    if path.exists() and not force:
        raise Refusal(f"{path} exists; pass --force to overwrite")
    path.parent.mkdir(parents=True, exist_ok=True)


def _fixture_data(args):
    if args.fixtures:
        base = Path(args.fixtures)
        return ingest.read_sections(base / "sections.csv"), ingest.read_scenarios(base / "scenarios.csv")
    return ingest.read_sections(), ingest.read_scenarios()


# ---------------------------------------------------------------------------


def cmd_gen_dataset(args) -> int:
    out = Path(args.out)
    _check_out(out, args.force)
    levels = ann.GRID_LEVELS if args.reduced is None else dataset.reduced_levels(ann.GRID_LEVELS, args.reduced)
    n_rows = math.prod(len(l) for l in levels)
    log.info("generating %d rows with the %s forward model", n_rows, args.model)
    data = dataset.generate_dataset(levels, model=args.model, workers=args.workers)
    config = {
        "command": "gen-dataset",
        "grid": "full" if args.reduced is None else f"reduced-{args.reduced}",
        "forward_model": args.model,
        "solver_tol": 1e-4,
        "load_n": FwdLoad().magnitude,
        "load_radius_m": FwdLoad().radius,
    }
    dataset.write_dataset(out, data, config)
    log.info("wrote %d rows (%d failed) to %s", len(data), len(data.failures), out)
    return EXIT_OK


def cmd_train(args) -> int:
    data = dataset.read_dataset(args.data)
    coarse = [n for n, col in zip(ann.INPUT_NAMES, data.x.T) if len(np.unique(col)) < 5]
    if coarse:
        # validation rows share the grid levels, so R2 says nothing about points between them
        log.warning("fewer than 5 levels in %s; predictions between grid levels are untested", ", ".join(coarse))
    mask = ann.split(len(data), args.seed)
    if args.trainer == "lm":
        model, hist = ann.train_lm(
            data.x, data.y, mask, hidden=args.hidden, seed=args.seed, max_epochs=args.max_epochs
        )
    else:
        model, hist = ann.train_gd(data.x, data.y, mask, hidden=args.hidden, seed=args.seed, epochs=args.max_epochs)
    rmse_t, r2_t = ann.evaluate(model, data.x[mask], data.y[mask])
    rmse_v, r2_v = ann.evaluate(model, data.x[~mask], data.y[~mask])
    model.meta.update(
        {
            "topology": f"{model.n_inputs}-{model.hidden}-1",
            "dataset": Path(args.data).name,
            "rows": len(data),
            "train_rmse": rmse_t,
            "train_r2": r2_t,
            "val_rmse": rmse_v,
            "val_r2": r2_v,
        }
    )
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    ann.save_model(model, out)
    config = {"command": "train", "seed": args.seed, "hidden": args.hidden, "trainer": args.trainer,
              "max_epochs": args.max_epochs}
    log_path = Path(args.log) if args.log else out.with_suffix(".log.csv")
    _write_csv(log_path, "training-log", config, "rmse lbf/in^3", ("epoch", "lambda", "train_rmse", "val_rmse"),
               hist.rows())
    if args.plot:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ExtrapolationWarning)
            pred = ann.forward(model, data.x[~mask])
        plots.scatter_chart(args.plot, f"Validation R2 = {r2_v:.3f}", "target k (pci)", "predicted k (pci)",
                            data.y[~mask], pred)
    print(f"{model.meta['topology']} {hist.stop_reason} after {len(hist.epoch)} epochs: "
          f"train RMSE {rmse_t:.3f} R2 {r2_t:.4f}, validation RMSE {rmse_v:.3f} R2 {r2_v:.4f}")
    return EXIT_OK


def _section_ks(args):
    sections, scenarios = _fixture_data(args)
    return [(s, studies.scenario_ks(s, scenarios, model=args.forward)) for s in sections]


def cmd_validate(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    model = ann.load_model(args.model) if args.model else None
    rows, all_ok = [], True
    for sec, runs in _section_ks(args):
        v = studies.validate_section(sec, runs, model=args.forward)
        k_pci, source = v.k.k_pci, "area-chain"
        if model is not None:
            s = sec.to_section()
            run = studies.pick_run(runs, ingest.EQUILIBRIUM, sec.delta)
            x = [s.h_s, s.h_b, s.e_slab, run.e_base, s.e_subgrade, sec.delta]
            k_pci, source = ann.forward(model, x), "ann"
            if k_pci <= 0:
                raise SolverError(f"{sec.section_id}: surrogate predicted non-positive k {k_pci!r}")
            s2 = s.with_(e_base=run.e_base)
            wink = winkler_plate_basin(v.h_eq, s2.e_slab, s2.nu_slab, k_pci * PCI).deflections
            v = studies.ValidationResult(v.section_id, v.k, v.h_eq, v.full, wink)
        dev = v.deviation_pct
        ok = v.passes(args.near_limit, args.far_limit)
        all_ok &= ok
        rows.append([sec.section_id, source, k_pci, v.h_eq, *v.full, *v.winkler, *dev, ok])
        offsets_in = [o / INCH for o in SENSOR_OFFSETS]
        plots.line_chart(
            out_dir / f"basin_{sec.section_id}.svg",
            f"{sec.section_id}: full structure vs equivalent slab on k",
            "offset (in)",
            "deflection (mils)",
            offsets_in,
            {
                "full structure": [-d / INCH * 1e3 for d in v.full],
                "equivalent slab": [-d / INCH * 1e3 for d in v.winkler],
            },
        )
    cols = (
        ["section", "k_source", "k_pci", "h_eq_m"]
        + [f"full_d{i}_m" for i in range(4)]
        + [f"winkler_d{i}_m" for i in range(4)]
        + [f"dev{i}_pct" for i in range(4)]
        + ["pass"]
    )
    config = {"command": "validate", "forward_model": args.forward, "near_limit_pct": args.near_limit,
              "far_limit_pct": args.far_limit, "k_source": "ann" if model else "area-chain"}
    _write_csv(out_dir / "validation.csv", "validation", config, "deflections m, k lbf/in^3, deviation %",
               cols, rows)
    for r in rows:
        print(f"{r[0]}: deviation {', '.join(f'{d:+.1f}%' for d in r[12:16])} {'pass' if r[-1] else 'FAIL'}")
    return EXIT_OK if all_ok else EXIT_INVALID


def cmd_sensitivity(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    results = _section_ks(args)
    config = {"command": "sensitivity", "mode": args.mode, "forward_model": args.forward}
    ids = [s.section_id for s, _ in results]
    if args.mode in ("bond", "both"):
        bs = [studies.bond_sensitivity(s, r) for s, r in results]
        _write_csv(
            out_dir / "bond_sensitivity.csv", "bond-sensitivity", config, "k lbf/in^3, change %",
            ("section", "delta", "k_no_bond", "k_partial", "k_full", "no_bond_change_pct",
             "partial_change_pct", "full_change_pct"),
            [(b.section_id, b.delta, b.k_none, b.k_partial, b.k_full, 0.0, b.partial_change, b.full_change)
             for b in bs],
        )
        plots.bar_chart(out_dir / "bond_sensitivity.svg", "k-value change with bond (baseline: no bond)",
                        "change (%)", ids,
                        {"partial bond": [b.partial_change for b in bs], "full bond": [b.full_change for b in bs]})
    if args.mode in ("moisture", "both"):
        ms = [studies.moisture_sensitivity(s, r) for s, r in results]
        _write_csv(
            out_dir / "moisture_sensitivity.csv", "moisture-sensitivity", config, "k lbf/in^3, change %",
            ("section", "k_saturated", "k_equilibrium", "k_80pct_equilibrium", "equilibrium_change_pct",
             "dry_change_pct"),
            [(m.section_id, m.k_saturated, m.k_equilibrium, m.k_dry, m.equilibrium_change, m.dry_change)
             for m in ms],
        )
        plots.bar_chart(out_dir / "moisture_sensitivity.svg", "k-value change with base drying (baseline: saturated)",
                        "change (%)", ids,
                        {"equilibrium": [m.equilibrium_change for m in ms],
                         "80% equilibrium": [m.dry_change for m in ms]})
    return EXIT_OK


def _faulting_months(args, months_raw):
    """Fill blank DE cells from Westergaard corner deflections of a fixture section."""
    if all(de is not None for _, _, de in months_raw):
        return [distress.FaultingMonth(fm, de, lab) for lab, fm, de in months_raw]
    if not args.section:
        raise ValueError("faulting table has blank DE cells; pass --section to compute them")
    sections, scenarios = _fixture_data(args)
    match = [s for s in sections if s.section_id == args.section]
    if not match:
        raise ValueError(f"unknown section {args.section!r}")
    sec_fx = match[0]
    runs = studies.scenario_ks(sec_fx, scenarios)
    run = studies.pick_run(runs, ingest.EQUILIBRIUM, sec_fx.delta)
    sec = sec_fx.to_section().with_(e_base=run.e_base)
    load = FwdLoad(magnitude=args.axle_load_lbf * LBF / 2.0, radius=args.tire_radius)
    c = distress.winkler_corner_deflections(transformed_section(sec).h_eq, sec.e_slab, sec.nu_slab,
                                            run.k.k_si, load, lte=args.lte)
    de = run.k.k_pci / 2.0 * ((c.loaded / INCH) ** 2 - (c.unloaded / INCH) ** 2)
    log.info("%s: corner deflections %.4g / %.4g in, DE %.4g", args.section, c.loaded / INCH, c.unloaded / INCH, de)
    return [distress.FaultingMonth(fm, de if d is None else d, lab) for lab, fm, d in months_raw]


def _read_months(path):
    out = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(strip_comments(fh))
        if tuple(reader.fieldnames or ()) != distress.FAULTING_COLUMNS:
            raise ValueError(f"{path}: columns {reader.fieldnames} do not match {list(distress.FAULTING_COLUMNS)}")
        for row in reader:
            de = row["de"].strip()
            out.append((row["label"], float(row["faultmax_in"]), float(de) if de else None))
    return out


def cmd_distress(args) -> int:
    rows = []
    fd_b = distress.miner_damage(distress.read_fatigue_cases(args.cases), args.c1, args.c2) if args.cases else 0.0
    fd_t = distress.miner_damage(distress.read_fatigue_cases(args.top_down_cases), args.c1, args.c2) \
        if args.top_down_cases else 0.0
    crk_b, crk_t = distress.crack_fraction(fd_b), distress.crack_fraction(fd_t)
    tcrack = distress.total_crack(crk_b, crk_t)
    rows.append(("cracking", "", fd_b, fd_t, crk_b, crk_t, tcrack, "", ""))
    if args.faulting:
        months = _faulting_months(args, _read_months(args.faulting))
        series = distress.accumulate_faulting(months, args.c34)
        rows += [("faulting", m.label, "", "", "", "", "", m.de, f) for m, f in zip(months, series)]
    config = {"command": "distress", "c1": args.c1, "c2": args.c2, "c34": args.c34, "lte": args.lte,
              "section": args.section or ""}
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    _write_csv(out, "distress", config, "TCRACK %, fault in, DE lbf/in",
               ("kind", "label", "fd_bottom", "fd_top", "crk_bottom", "crk_top", "tcrack_pct", "de", "fault_in"),
               rows)
    print(f"FD bottom-up {fd_b:.4g}, top-down {fd_t:.4g}; TCRACK {tcrack:.2f}%")
    return EXIT_OK


BATCH_INPUTS = ann.INPUT_NAMES
BATCH_MOISTURE = ("theta", "saturation", "suction_kpa", "f", "k1", "k2", "k3")


def _predict_one(x, model, exact, forward_model, moisture=None):
    """Return (k_pci, BA, l_e, d*) with NaN chain terms for the surrogate."""
    if exact or model is None:
        m, coef = (None, None) if moisture is None else moisture
        r = modified_k(dataset.section_from_inputs(x), m, FwdLoad(), coefficients=coef, model=forward_model)
        return r.k_pci, r.basin_area, r.l_e, r.d_star
    return ann.forward(model, x), math.nan, math.nan, math.nan


def cmd_predict_k(args) -> int:
    model = None if args.exact else ann.load_model(args.model) if args.model else None
    if model is None and not args.exact:
        raise ValueError("pass --model MODEL.json or --exact")
    config = {"command": "predict-k", "mode": "exact" if model is None else "ann", "forward_model": args.forward}
    units = "inputs SI (m, Pa), ba_in in, l_e_in in, k_pci lbf/in^3, k_si Pa/m"
    cols = list(BATCH_INPUTS) + ["ba_in", "l_e_in", "d_star", "k_pci", "k_si", "extrapolated"]
    rows = []
    if args.batch:
        with open(args.batch, newline="") as fh:
            reader = csv.DictReader(strip_comments(fh))
            missing = set(BATCH_INPUTS) - set(reader.fieldnames or ())
            if missing:
                raise ValueError(f"{args.batch}: missing columns {sorted(missing)}")
            items = []
            for row in reader:
                x = [float(row[c]) for c in BATCH_INPUTS]
                moist = None
                if all((row.get(c) or "").strip() for c in BATCH_MOISTURE):
                    v = {c: float(row[c]) for c in BATCH_MOISTURE}
                    moist = (MoistureState(v["theta"], v["saturation"], v["suction_kpa"], v["f"]),
                             MrCoefficients(v["k1"], v["k2"], v["k3"]))
                items.append((x, moist))
    else:
        items = [([args.h_s, args.h_b, args.e_slab, args.e_base, args.e_subgrade, args.delta], None)]
    any_extrap = False
    for x, moist in items:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", ExtrapolationWarning)
            k, ba, le, ds = _predict_one(x, model, args.exact, args.forward, moist)
        extrap = any(issubclass(w.category, ExtrapolationWarning) for w in caught)
        any_extrap |= extrap
        rows.append([*x, ba, le, ds, k, k * PCI, "yes" if extrap else "no"])
    if args.out:
        _write_csv(args.out, "predict-k", config, units, cols, rows)
    for r in rows:
        print(f"k = {r[9]:.2f} pci ({r[10]:.5g} Pa/m){'  WARNING: input outside the training range' if r[-1] == 'yes' else ''}")
    if any_extrap:
        log.warning("one or more inputs lie outside the training range by more than 10%")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rigidpave", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def forward_opt(sp):
        sp.add_argument("--forward", choices=(LAYERED, EQUIVALENT_PLATE), default=LAYERED,
                        help="full-structure forward model")

    def fixtures_opt(sp):
        sp.add_argument("--fixtures", help=f"fixture directory (default: ${ingest.FIXTURE_ENV} or the shipped set)")

    g = sub.add_parser("gen-dataset", help="evaluate the forward chain on the factorial grid")
    g.add_argument("--grid", choices=("full",), default="full")
    g.add_argument("--reduced", type=int, metavar="N", help="use N evenly spaced levels per factor")
    g.add_argument("--out", required=True)
    g.add_argument("--force", action="store_true")
    g.add_argument("--workers", type=int, default=1)
    g.add_argument("--model", choices=(LAYERED, EQUIVALENT_PLATE), default=LAYERED)
    g.set_defaults(func=cmd_gen_dataset)

    t = sub.add_parser("train", help="train the k-value surrogate")
    t.add_argument("--data", required=True)
    t.add_argument("--seed", type=int, required=True)
    t.add_argument("--out", required=True)
    t.add_argument("--log")
    t.add_argument("--plot", help="write a predicted-vs-target SVG for the validation split")
    t.add_argument("--hidden", type=int, default=20)
    t.add_argument("--trainer", choices=("lm", "gd"), default="lm")
    t.add_argument("--max-epochs", type=int, default=1000)
    t.set_defaults(func=cmd_train)

    v = sub.add_parser("validate", help="full structure vs equivalent slab on the backcalculated k")
    v.add_argument("--out-dir", required=True)
    v.add_argument("--model", help="use the surrogate's k instead of the AREA chain")
    v.add_argument("--near-limit", type=float, default=10.0, help="max |deviation| %% at sensors 0-2")
    v.add_argument("--far-limit", type=float, default=25.0, help="max |deviation| %% at the farthest sensor")
    forward_opt(v)
    fixtures_opt(v)
    v.set_defaults(func=cmd_validate)

    s = sub.add_parser("sensitivity", help="k-value change with bond and base moisture")
    s.add_argument("--mode", choices=("bond", "moisture", "both"), default="both")
    s.add_argument("--out-dir", required=True)
    forward_opt(s)
    fixtures_opt(s)
    s.set_defaults(func=cmd_sensitivity)

    d = sub.add_parser("distress", help="transverse cracking and joint faulting")
    d.add_argument("--cases", help="bottom-up fatigue load cases CSV")
    d.add_argument("--top-down-cases", help="top-down fatigue load cases CSV")
    d.add_argument("--faulting", help="monthly FAULTMAX/DE CSV (blank DE computed with --section)")
    d.add_argument("--section", help="fixture section used to compute corner deflections")
    d.add_argument("--lte", type=float, default=0.5, help="joint load transfer efficiency")
    d.add_argument("--axle-load-lbf", type=float, default=22000.0)
    d.add_argument("--tire-radius", type=float, default=0.15, help="m")
    d.add_argument("--c1", type=float, default=distress.C1_DEFAULT)
    d.add_argument("--c2", type=float, default=distress.C2_DEFAULT)
    d.add_argument("--c34", type=float, default=distress.C34_DEFAULT)
    d.add_argument("--out", required=True)
    fixtures_opt(d)
    d.set_defaults(func=cmd_distress)

    k = sub.add_parser("predict-k", help="k-value for one section or a batch CSV")
    k.add_argument("--model", help="surrogate model JSON")
    k.add_argument("--exact", action="store_true", help="run the full forward chain instead of the surrogate")
    k.add_argument("--batch", help="CSV with columns " + ",".join(BATCH_INPUTS) + " [+ moisture columns]")
    k.add_argument("--out")
    for name, help_ in (("h-s", "slab thickness m"), ("h-b", "base thickness m"), ("e-slab", "Pa"),
                        ("e-base", "Pa"), ("e-subgrade", "Pa"), ("delta", "bond ratio")):
        k.add_argument(f"--{name}", type=float, help=help_)
    forward_opt(k)
    k.set_defaults(func=cmd_predict_k)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    if args.command == "predict-k" and not args.batch:
        need = [n for n in ("h_s", "h_b", "e_slab", "e_base", "e_subgrade", "delta") if getattr(args, n) is None]
        if need:
            print(f"error: missing --{', --'.join(n.replace('_', '-') for n in need)} (or use --batch)", file=sys.stderr)
            return EXIT_INVALID
    try:
        return args.func(args)
    except (SolverError, TrainingError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (Refusal, ModelFormatError, ValueError, RigidPaveError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
