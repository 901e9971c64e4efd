"""Command-line front end.

Single-point commands (minimize, phase, spectrum, ed) print `key = value`
lines by default or a JSON object with --format json.  The sweep command
streams CSV (default) or JSON Lines.  Domain failures exit nonzero with a
machine-readable {"error": ..., "message": ...} record on stderr.
"""

import argparse
import json
import sys
from dataclasses import replace

from .ed import FiniteModel, build_hamiltonian, converge_cutoff, ground_state, observables, write_coordinate_matrix
from .errors import GdickeError
from .fluctuations import build_quadratic, covariance_observables, mode_entropies, williamson
from .meanfield import minimize as mf_minimize
from .model import ModelParams, classify_phase
from .sweep import (
    Axis,
    SweepSpec,
    fit_exponent,
    format_value,
    locate_critical,
    run_sweep,
    write_csv,
    write_jsonl,
)


def _add_param_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--Omega", type=float, default=1.0, help="spin frequency (default 1)")
    parser.add_argument("--omega", type=float, default=1.0, help="boson frequency (default 1)")
    parser.add_argument("--chi", type=float, default=0.0, help="spin-spin coupling (default 0)")
    parser.add_argument("--lambda", dest="lam", type=float, default=0.0,
                        help="spin-boson coupling (default 0)")


def _add_io_flags(parser: argparse.ArgumentParser, formats=("text", "json")) -> None:
    parser.add_argument("--out", default=None, help="output path (default stdout)")
    parser.add_argument("--format", choices=formats, default=formats[0])


def _params(args) -> ModelParams:
    return ModelParams(Omega=args.Omega, omega=args.omega, chi=args.chi, lam=args.lam)


def _emit(record: dict, args) -> None:
    fh = open(args.out, "w") if args.out else sys.stdout
    try:
        if args.format == "json":
            fh.write(json.dumps(record) + "\n")
        else:
            for key, value in record.items():
                fh.write(f"{key} = {value if isinstance(value, str) else format_value(value)}\n")
    finally:
        if args.out:
            fh.close()


def _parse_axis(text: str) -> Axis:
    parts = text.split(":")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("axis must be name:start:stop:count, e.g. chi:-2:2:401")
    return Axis(parts[0], float(parts[1]), float(parts[2]), int(parts[3]))


def _load_config(path: str) -> dict:
    """Flat `key = value` config file; '#' starts a comment."""
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw.rstrip()!r}")
            key, value = line.split("=", 1)
            out[key.strip()] = value.strip()
    return out


def _cmd_minimize(args) -> None:
    sol = mf_minimize(_params(args))
    record = {
        "theta1": sol.config.theta1,
        "theta2": sol.config.theta2,
        "alpha": sol.config.alpha,
        "energy": sol.energy,
        "gradient_norm": sol.gradient_norm,
        "phase": sol.branch.variant.value,
    }
    if sol.degenerate_partner is not None:
        record["partner_theta1"] = sol.degenerate_partner.theta1
        record["partner_theta2"] = sol.degenerate_partner.theta2
        record["partner_alpha"] = sol.degenerate_partner.alpha
    _emit(record, args)


def _cmd_phase(args) -> None:
    label = classify_phase(_params(args))
    _emit(
        {
            "phase": label.variant.value,
            "dist_i_ii": label.boundary_distances.i_ii,
            "dist_i_iii": label.boundary_distances.i_iii,
            "dist_ii_iii": label.boundary_distances.ii_iii,
        },
        args,
    )


def _cmd_spectrum(args) -> None:
    params = _params(args)
    sol = mf_minimize(params)
    spec = williamson(build_quadratic(params, sol))
    fl = covariance_observables(spec)
    entropies = mode_entropies(spec)
    record = {"energy": sol.energy, "phase": sol.branch.variant.value}
    for i in range(3):
        record[f"delta{i + 1}"] = float(spec.deltas[i])
    for i in range(3):
        record[f"dx2_{i + 1}"] = float(fl.dx2[i])
    for i in range(3):
        record[f"dp2_{i + 1}"] = float(fl.dp2[i])
    for i in range(3):
        record[f"entropy{i + 1}"] = float(entropies[i])
    record["ground_energy_correction"] = spec.ground_energy_correction
    _emit(record, args)


def _cmd_sweep(args) -> None:
    if args.config:
        cfg = _load_config(args.config)
        base = ModelParams(
            Omega=float(cfg.get("Omega", 1.0)),
            omega=float(cfg.get("omega", 1.0)),
            chi=float(cfg.get("chi", 0.0)),
            lam=float(cfg.get("lambda", 0.0)),
        )
        axis1 = _parse_axis(cfg["axis1"])
        axis2 = _parse_axis(cfg["axis2"]) if "axis2" in cfg else None
        quantities = tuple(q.strip() for q in cfg["quantities"].split(",") if q.strip())
        fmt = cfg.get("format", args.format)
        out = cfg.get("out", args.out)
        workers = int(cfg.get("workers", args.workers))
    else:
        if args.axis1 is None:
            raise ValueError("either --config or --axis1 is required")
        base = _params(args)
        axis1 = args.axis1
        axis2 = args.axis2
        quantities = tuple(q.strip() for q in args.quantities.split(",") if q.strip())
        fmt, out, workers = args.format, args.out, args.workers

    spec = SweepSpec(params_base=base, axis1=axis1, axis2=axis2, quantities=quantities)
    rows = run_sweep(spec, workers=workers)
    fh = open(out, "w") if out else sys.stdout
    try:
        if fmt == "jsonl":
            write_jsonl(rows, spec.columns(), fh)
        else:
            write_csv(rows, spec.columns(), fh)
    finally:
        if out:
            fh.close()


def _cmd_locate(args) -> None:
    value = locate_critical(_params(args), args.axis, tuple(args.bracket))
    _emit({"axis": args.axis, "critical_value": value}, args)


def _cmd_fit_exponent(args) -> None:
    series = []
    with open(args.input) as fh:
        for raw in fh:
            line = raw.strip()
            if not line:
                continue
            cells = line.split(",")
            try:
                series.append((float(cells[0]), float(cells[1])))
            except ValueError:
                continue  # header or comment row
    fit = fit_exponent(series, window=(args.window[0], args.window[1]))
    _emit({"slope": fit.slope, "intercept": fit.intercept, "stderr": fit.stderr}, args)


def _cmd_ed(args) -> None:
    model = FiniteModel(params=_params(args), J=args.J, n_cut=args.n_cut)
    if args.converge_tol is not None:
        n_cut = converge_cutoff(model, args.converge_tol)
        model = replace(model, n_cut=n_cut)
    if args.dump_matrix:
        write_coordinate_matrix(build_hamiltonian(model), args.dump_matrix)
    gs = ground_state(model)
    obs = observables(model, gs.state)
    n_spins = 2 * model.J
    _emit(
        {
            "J": model.J,
            "n_cut": model.n_cut,
            "e0": gs.e0,
            "e0_per_spin": gs.e0 / n_spins,
            "gap": gs.gap,
            "jx1": obs.jx1,
            "jx2": obs.jx2,
            "jz1": obs.jz1,
            "jz2": obs.jz2,
            "nb": obs.nb,
            "b_re": obs.b_re,
            "parity": obs.parity,
        },
        args,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gdicke", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("minimize", help="variational ground state at one parameter point")
    _add_param_flags(p)
    _add_io_flags(p)
    p.set_defaults(func=_cmd_minimize)

    p = sub.add_parser("phase", help="analytic phase assignment and boundary distances")
    _add_param_flags(p)
    _add_io_flags(p)
    p.set_defaults(func=_cmd_phase)

    p = sub.add_parser("spectrum", help="excitation energies, fluctuations and entropies")
    _add_param_flags(p)
    _add_io_flags(p)
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("sweep", help="grid sweep to CSV or JSON Lines")
    _add_param_flags(p)
    _add_io_flags(p, formats=("csv", "jsonl"))
    p.add_argument("--axis1", type=_parse_axis, default=None, metavar="NAME:START:STOP:COUNT")
    p.add_argument("--axis2", type=_parse_axis, default=None, metavar="NAME:START:STOP:COUNT")
    p.add_argument("--quantities", default="energy,phase", help="comma-separated quantity names")
    p.add_argument("--workers", type=int, default=1, help="process-pool size (default 1)")
    p.add_argument("--config", default=None, help="flat key=value sweep config file")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("locate", help="bisect a phase boundary along one coupling")
    _add_param_flags(p)
    _add_io_flags(p)
    p.add_argument("--axis", choices=("chi", "lambda", "Omega"), required=True)
    p.add_argument("--bracket", type=float, nargs=2, required=True, metavar=("LO", "HI"))
    p.set_defaults(func=_cmd_locate)

    p = sub.add_parser("fit-exponent", help="log-log slope of a (distance, value) series")
    _add_io_flags(p)
    p.add_argument("--input", required=True, help="CSV with distance,value in the first two columns")
    p.add_argument("--window", type=float, nargs=2, default=(1e-4, 1e-2), metavar=("DMIN", "DMAX"))
    p.set_defaults(func=_cmd_fit_exponent)

    p = sub.add_parser("ed", help="exact diagonalization at finite size")
    _add_param_flags(p)
    _add_io_flags(p)
    p.add_argument("--J", type=float, required=True, help="spin length per ensemble (half-integer)")
    p.add_argument("--n-cut", type=int, default=40, help="boson Fock cutoff (default 40)")
    p.add_argument("--converge-tol", type=float, default=None,
                   help="pick the cutoff automatically to this ground-energy tolerance")
    p.add_argument("--dump-matrix", default=None, metavar="PATH",
                   help="write the Hamiltonian as 'row col value' lines")
    p.set_defaults(func=_cmd_ed)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (GdickeError, ValueError, OSError) as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
