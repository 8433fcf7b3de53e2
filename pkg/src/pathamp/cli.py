"""pathamp command line: scenario execution and CSV emission.

Four subcommands share one JSON config (see config module):

    amplitude  closed-form lattice amplitude for the configured network
    twinslit   interference pattern over a coupling schedule
    converge   stencil-vs-continuum refinement table
    metric     inferred separations per configured link

Output is CSV with a header row, 17-significant-digit reals (round-trip
exact for doubles) and LF line endings; identical configs produce
byte-identical files.  Diagnostics go to stderr.  Exit codes: 0 success,
2 validation failure, 3 singular action matrix, 4 resonance left nothing
to compute.
"""

import argparse
import sys

import numpy as np

from .config import (load_config, parse_network, parse_output,
                     parse_quadrature, parse_schrodinger, parse_twinslit)
from .errors import (ConfigError, EquidistanceViolated, PathampError,
                     ResonantCoupling, SingularAction, ZeroMomentum)
from .green import SpectralSource, pairwise_phase
from .lattice import OscillatorNetwork, build_action_matrix, transition_amplitude
from .oracle import compare_with_closed_form, continuum_convergence_report
from .twinslit import coupling_coefficient, infer_distance, pattern_scan, phase_schedule

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SINGULAR = 3
EXIT_RESONANT = 4


def _fmt(value):
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def _write_table(path, header, rows):
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _out_path(args, opts):
    return args.out if args.out is not None else opts.path


def _cmd_amplitude(args):
    cfg = load_config(args.config)
    net, source = parse_network(cfg)
    opts = parse_output(cfg)
    action = build_action_matrix(net)
    amp = transition_amplitude(action, source)
    _, det_phase = action.log_det()
    if np.any(source.values != 0.0):
        jaj = complex(np.dot(source.values, action.solve(source.values)))
    else:
        jaj = 0.0 + 0.0j
    header = ["log_magnitude", "phase", "det_phase", "jaj_re", "jaj_im"]
    row = [amp.log_magnitude, amp.phase, det_phase, jaj.real, jaj.imag]
    if args.oracle:
        spec, _, _, _ = parse_quadrature(cfg)
        closed, quadr, rel = compare_with_closed_form(action, source, spec)
        header += ["oracle_log_magnitude", "oracle_phase",
                   "closed_log_magnitude", "closed_phase",
                   "oracle_rel_diff", "oracle_ok"]
        row += [quadr.log_magnitude, quadr.phase,
                closed.log_magnitude, closed.phase,
                rel, rel <= opts.oracle_rtol]
    _write_table(_out_path(args, opts), header, [row])
    return EXIT_OK


def _cmd_converge(args):
    cfg = load_config(args.config)
    net, _ = parse_network(cfg)
    _, dt_list, total_time, mode = parse_quadrature(cfg, required=True)
    opts = parse_output(cfg)
    if dt_list is None or len(dt_list) < 3:
        raise ConfigError("quadrature.dt_list: need at least three spacings")
    rows = continuum_convergence_report(net, dt_list, mode=mode,
                                        total_time=total_time)
    header = ["dt", "steps", "max_residual", "observed_order", "order_ok"]
    table = []
    for r in rows:
        ok = True if np.isnan(r.observed_order) else 1.6 <= r.observed_order <= 2.4
        table.append([r.dt, r.steps, r.max_residual, r.observed_order, ok])
    _write_table(_out_path(args, opts), header, table)
    return EXIT_OK


_SCAN_COLUMNS = ["k23", "k43", "d23", "d43", "x23", "x43",
                 "phase23_discrete", "phase43_discrete",
                 "phase23_schrodinger", "phase43_schrodinger",
                 "intensity_discrete", "intensity_schrodinger", "resonant"]


def _cmd_twinslit(args):
    cfg = load_config(args.config)
    sc, schedule_cfg = parse_twinslit(cfg)
    side = parse_schrodinger(cfg)
    opts = parse_output(cfg)
    if schedule_cfg is None:
        raise ConfigError("twinslit.schedule: required for the twinslit command")
    if "pairs" in schedule_cfg:
        pairs = [(float(a), float(b)) for a, b in schedule_cfg["pairs"]]
    else:
        pairs = phase_schedule(
            sc,
            schedule_cfg["points"],
            phase_start=float(schedule_cfg.get("phase_start", 0.0)),
            phase_stop=float(schedule_cfg.get("phase_stop", 2.0 * np.pi)),
            k43=schedule_cfg.get("k43"),
        )
    rows = pattern_scan(sc, pairs, side)
    skipped = sum(r.resonant for r in rows)
    if skipped == len(rows):
        print("error: every schedule point is resonant", file=sys.stderr)
        return EXIT_RESONANT
    if skipped:
        print(f"warning: skipped {skipped} resonant schedule point(s)",
              file=sys.stderr)
    table = [[getattr(r, c) for c in _SCAN_COLUMNS] for r in rows]
    _write_table(_out_path(args, opts), _SCAN_COLUMNS, table)
    return EXIT_OK


def _cmd_metric(args):
    cfg = load_config(args.config)
    sc, _ = parse_twinslit(cfg)
    side = parse_schrodinger(cfg)
    opts = parse_output(cfg)
    links = [("1-2", sc.gamma1, sc.k12, sc.j2),
             ("1-4", sc.gamma1, sc.k14, sc.j4),
             ("2-3", sc.gamma2, sc.k23, sc.j3),
             ("4-3", sc.gamma4, sc.k43, sc.j3)]
    if opts.include_zero_sentinel:
        links.append(("zero", sc.gamma1, 0.0, sc.j2))
    header = ["link", "k_im", "d_im", "x_im", "scale", "link_phase", "resonant"]
    if args.round_trip:
        header += ["phase_discrete", "phase_schrodinger"]
    table = []
    nan = float("nan")
    for name, gamma, k_im, j_k in links:
        try:
            d = coupling_coefficient(k_im, sc, sc.omega0,
                                     resonance_rtol=opts.resonance_rtol)
            res = infer_distance(gamma, k_im, j_k, sc, sc.omega0, side,
                                 hbar=sc.hbar)
            pair_net = OscillatorNetwork.pair(sc.mass, sc.spring, k_im,
                                              dt=1.0, steps=2)
            line = SpectralSource(gamma=gamma, omega0=sc.omega0, j_value=j_k)
            link_phase = pairwise_phase(line, pair_net, hbar=sc.hbar,
                                        include_self_terms=args.include_self_terms,
                                        resonance_rtol=opts.resonance_rtol)
        except ResonantCoupling:
            print(f"warning: link {name} is resonant", file=sys.stderr)
            row = [name, k_im, nan, nan, nan, nan, True]
            if args.round_trip:
                row += [nan, nan]
            table.append(row)
            continue
        row = [name, k_im, d, res.x_im, res.scale, link_phase, False]
        if args.round_trip:
            phase_d = gamma * d * j_k / (2.0 * np.pi * sc.hbar)
            phase_s = side.momentum * res.x_im / (2.0 * sc.hbar)
            row += [phase_d, phase_s]
        table.append(row)
    _write_table(_out_path(args, opts), header, table)
    return EXIT_OK


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="pathamp",
        description="Lattice transition amplitudes for coupled oscillator "
                    "sources, twin-slit interference, and coupling-derived "
                    "distances.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="path to the JSON scenario file")
    common.add_argument("--out", default=None,
                        help="output CSV path (default: output.path from the "
                             "config, else stdout)")
    common.add_argument("--seedless", action="store_true",
                        help="assert the pure mode; every command is "
                             "deterministic and seed-free, the flag is "
                             "accepted for pipeline compatibility")

    p = sub.add_parser(
        "amplitude", parents=[common],
        help="closed-form lattice amplitude",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="columns: log_magnitude, phase, det_phase, jaj_re, jaj_im"
               " [, oracle_log_magnitude, oracle_phase, closed_log_magnitude,"
               " closed_phase, oracle_rel_diff, oracle_ok]",
    )
    p.add_argument("--oracle", action="store_true",
                   help="also run the brute-force quadrature (dim <= 3) and "
                        "report the damped closed form next to it")
    p.set_defaults(func=_cmd_amplitude)

    p = sub.add_parser(
        "twinslit", parents=[common],
        help="interference pattern over a coupling schedule",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="columns: " + ", ".join(_SCAN_COLUMNS),
    )
    p.set_defaults(func=_cmd_twinslit)

    p = sub.add_parser(
        "converge", parents=[common],
        help="stencil refinement table",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="columns: dt, steps, max_residual, observed_order, order_ok\n"
               "order_ok flags observed orders outside [1.6, 2.4]",
    )
    p.set_defaults(func=_cmd_converge)

    p = sub.add_parser(
        "metric", parents=[common],
        help="inferred separation per configured link",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="columns: link, k_im, d_im, x_im, scale, link_phase, resonant"
               " [, phase_discrete, phase_schrodinger]",
    )
    p.add_argument("--include-self-terms", action="store_true",
                   help="add the diagonal-response self terms to link_phase")
    p.add_argument("--round-trip", action="store_true",
                   help="append the matched discrete and free-particle phases")
    p.set_defaults(func=_cmd_metric)
    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError, EquidistanceViolated, ZeroMomentum) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SingularAction as exc:
        print(f"error: singular action matrix: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except ResonantCoupling as exc:
        print(f"error: resonant coupling: {exc}", file=sys.stderr)
        return EXIT_RESONANT
    except PathampError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
