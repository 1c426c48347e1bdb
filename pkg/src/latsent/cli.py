"""Command-line interface.

    latsent partition --topology ring --n 3 --theta 1 --field 0 --method both
    latsent bound --topology complete --n 8 --theta 0.5 --gamma 0.5 --pbsc 0.2
    latsent detect --topology star --n 3 --theta 1 --gamma 0.5 --epsilon 0.5 --y "+1,-1,+1"
    latsent simulate --topology ring --n 8 --theta 1 --gamma 0.25 --pbsc 0.3 --trials 100000
    latsent exponent-sweep --var theta --from 0 --to 3 --steps 31 --gamma 0.5 --epsilon 0.5

Every subcommand also takes ``--config FILE.json`` whose keys mirror the
long flag names; flags given on the command line win. Output is CSV on
stdout unless ``--out`` is given. Exit status: 0 ok, 2 bad configuration,
3 numerical or size-guard failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import bounds, detector, mc
from .channel import epsilon_from_pbsc, pbsc_from_epsilon
from .graph import GraphError, make_topology, read_edge_list
from .ising import CLOSED_FORMS, ModelParams, SizeGuardError, log_Z_brute, log_partition
from .optimize import NumericalDomainError

EXIT_CONFIG = 2
EXIT_NUMERIC = 3

SWEEP_HEADER = ["sweep_var", "value", "alpha_complete", "alpha_star", "alpha_chain", "alpha_iid"]
SWEEP_RAW_HEADER = ["raw_complete", "raw_star", "raw_chain"]
SIMULATE_HEADER = ["topology", "n", "theta", "gamma", "pbsc", "detector", "trials",
                   "p_hat", "ci_low", "ci_high", "seed"]
BOUND_HEADER = ["topology", "n", "theta", "gamma", "epsilon", "log_pe_ub", "pe_ub",
                "b_star", "beta_star"]
DETECT_HEADER = ["t_hat", "log_l", "method"]
PARTITION_HEADER = ["topology", "n", "theta", "field", "log_z_closed", "log_z_brute", "abs_diff"]


class ConfigError(ValueError):
    pass


def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".12g")
    if v is None:
        return ""
    return str(v)


def write_csv(args, header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    text = buf.getvalue()
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ------------------------------------------------------------------ argument helpers

def _add_common(p):
    p.add_argument("--config", help="JSON file with flag values")
    p.add_argument("--out", help="write CSV here instead of stdout")


def _add_topology(p):
    p.add_argument("--topology", choices=["complete", "star", "ring", "chain", "custom"])
    p.add_argument("--n", type=int)
    p.add_argument("--edges", help="edge-list file (implies --topology custom)")


def _add_params(p):
    p.add_argument("--theta", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--pbsc", type=float)


def network_from(args):
    if args.edges:
        if args.topology not in (None, "custom"):
            raise ConfigError("--edges cannot be combined with a stylized --topology")
        return read_edge_list(args.edges)
    if args.topology in (None, "custom"):
        raise ConfigError("give --topology with --n, or --edges")
    if args.n is None:
        raise ConfigError("--n is required with --topology")
    return make_topology(args.topology, args.n)


def epsilon_from(args) -> float:
    if args.epsilon is not None and args.pbsc is not None:
        raise ConfigError("give only one of --epsilon and --pbsc")
    if args.pbsc is not None:
        return epsilon_from_pbsc(args.pbsc)
    if args.epsilon is None:
        raise ConfigError("one of --epsilon or --pbsc is required")
    return args.epsilon


def params_from(args) -> ModelParams:
    for name in ("theta", "gamma"):
        if getattr(args, name) is None:
            raise ConfigError(f"--{name} is required")
    return ModelParams(args.theta, args.gamma, epsilon_from(args))


def _pool_map(fn, items, threads):
    if threads is not None and threads <= 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(threads) as pool:
        return list(pool.map(fn, items))


# ------------------------------------------------------------------ commands

def run_partition(args):
    g = network_from(args)
    if args.theta is None:
        raise ConfigError("--theta is required")
    h = args.field or 0.0
    method = args.method
    closed = brute = None
    if method in ("closed", "both"):
        if g.topology_tag not in CLOSED_FORMS:
            raise ConfigError(f"no closed form for topology {g.topology_tag!r}")
        closed = log_partition(g, args.theta, h, method="closed")
    if method in ("brute", "both"):
        brute = log_Z_brute(g, args.theta, h)
    diff = abs(closed - brute) if method == "both" else None
    write_csv(args, PARTITION_HEADER, [[g.topology_tag, g.n, args.theta, h, closed, brute, diff]])


def run_bound(args):
    g = network_from(args)
    p = params_from(args)
    topo = g.topology_tag if g.topology_tag in CLOSED_FORMS else g
    res = bounds.pe_upper_bound(topo, p.theta, p.gamma, p.epsilon, n=g.n)
    write_csv(args, BOUND_HEADER, [[g.topology_tag, g.n, p.theta, p.gamma, p.epsilon,
                                    res.log_pe_ub, res.pe_ub, res.b_star, res.beta_star]])


def parse_spins(text: str) -> list[int]:
    tokens = text.replace(",", " ").split()
    try:
        values = [int(t) for t in tokens]
    except ValueError:
        raise ConfigError(f"observation vector must hold +1/-1 entries, got {text!r}") from None
    if not values or any(v not in (1, -1) for v in values):
        raise ConfigError(f"observation vector must hold +1/-1 entries, got {text!r}")
    return values


def run_detect(args):
    if (args.y is None) == (args.y_file is None):
        raise ConfigError("give exactly one of --y and --y-file")
    if args.y_file:
        with open(args.y_file) as fh:
            y = parse_spins(fh.read())
    else:
        y = parse_spins(args.y)
    g = network_from(args)
    p = params_from(args)
    if len(y) != g.n:
        raise ConfigError(f"observation has {len(y)} entries, network has {g.n} nodes")
    if args.detector == "majority":
        res = detector.majority_detect(y, p)
    else:
        res = detector.map_detect(y, g, p)
    write_csv(args, DETECT_HEADER, [[res.t_hat, res.log_l, res.method]])


def run_simulate(args):
    g = network_from(args)
    p = params_from(args)
    pbsc = pbsc_from_epsilon(p.epsilon)
    if args.detector == "both":
        cmp = mc.compare_detectors(g, p, args.trials, args.seed, threads=args.threads)
        estimates = [cmp.map, cmp.majority]
    else:
        estimates = [mc.estimate_pe(g, p, args.detector, args.trials, args.seed,
                                    threads=args.threads)]
    rows = [[g.topology_tag, g.n, p.theta, p.gamma, pbsc, e.detector_tag, e.trials,
             e.p_hat, e.ci_low, e.ci_high, e.seed] for e in estimates]
    write_csv(args, SIMULATE_HEADER, rows)


def sweep_values(start: float, stop: float, steps: int) -> np.ndarray:
    if steps < 2:
        raise ConfigError("--steps must be at least 2")
    if not start < stop:
        raise ConfigError("sweep needs --from < --to")
    return np.linspace(start, stop, steps)


def sweep_row(var: str, value: float, theta: float, gamma: float, eps: float, n_eval: int):
    vals = {"theta": theta, "gamma": gamma, "epsilon": eps}
    vals[var] = float(value)
    pts = [bounds.exponent_lower_bound(tag, vals["theta"], vals["gamma"], vals["epsilon"], n_eval)
           for tag in ("complete", "star", "ring")]
    iid = bounds.exponent_iid(vals["gamma"], vals["epsilon"])
    return [pt.alpha for pt in pts] + [iid.alpha], [pt.alpha_raw for pt in pts]


def run_exponent_sweep(args):
    if args.var not in ("theta", "gamma", "epsilon"):
        raise ConfigError("--var must be theta, gamma or epsilon")
    if args.start is None or args.stop is None:
        raise ConfigError("--from and --to are required")
    values = sweep_values(args.start, args.stop, args.steps)
    if args.var == "epsilon":
        if args.pbsc is not None or args.epsilon is not None:
            raise ConfigError("epsilon is the swept variable; do not fix it")
        eps = None
    else:
        eps = epsilon_from(args)
    for name in ("theta", "gamma"):
        if name != args.var and getattr(args, name) is None:
            raise ConfigError(f"--{name} is required when sweeping {args.var}")
    if args.n_eval < 3:
        raise ConfigError("--n-eval must be at least 3 (closed chain)")

    def point(v):
        return sweep_row(args.var, v, args.theta, args.gamma, eps, args.n_eval)
    results = _pool_map(point, list(values), args.threads)
    header = SWEEP_HEADER + (SWEEP_RAW_HEADER if args.raw else [])
    rows = []
    for v, (alphas, raws) in zip(values, results):
        rows.append([args.var, v, *alphas, *(raws if args.raw else [])])
    write_csv(args, header, rows)


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="latsent", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("partition", help="log partition function")
    _add_common(p)
    _add_topology(p)
    p.add_argument("--theta", type=float)
    p.add_argument("--field", type=float, default=0.0, help="signed field h")
    p.add_argument("--method", choices=["closed", "brute", "both"], default="closed")
    p.set_defaults(func=run_partition)

    p = sub.add_parser("bound", help="upper bound on the MAP error probability")
    _add_common(p)
    _add_topology(p)
    _add_params(p)
    p.set_defaults(func=run_bound)

    p = sub.add_parser("detect", help="decide the latent bit for one observation")
    _add_common(p)
    _add_topology(p)
    _add_params(p)
    p.add_argument("--y", help='observation, e.g. "+1,-1,+1"')
    p.add_argument("--y-file", help="file with the observation vector")
    p.add_argument("--detector", choices=["map", "majority"], default="map")
    p.set_defaults(func=run_detect)

    p = sub.add_parser("simulate", help="Monte Carlo error rate")
    _add_common(p)
    _add_topology(p)
    _add_params(p)
    p.add_argument("--detector", choices=["map", "majority", "both"], default="map")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None, help="default: all cores")
    p.set_defaults(func=run_simulate)

    p = sub.add_parser("exponent-sweep", help="error exponents over one parameter")
    _add_common(p)
    _add_params(p)
    p.add_argument("--var", choices=["theta", "gamma", "epsilon"])
    p.add_argument("--from", dest="start", type=float)
    p.add_argument("--to", dest="stop", type=float)
    p.add_argument("--steps", type=int, default=21)
    p.add_argument("--n-eval", type=int, default=bounds.DEFAULT_N_EVAL)
    p.add_argument("--raw", action="store_true", help="append unclamped exponents")
    p.add_argument("--threads", type=int, default=None, help="default: all cores")
    p.set_defaults(func=run_exponent_sweep)
    return parser


def _config_defaults(sub_parser, cfg: dict) -> dict:
    known = {a.dest: a for a in sub_parser._actions}
    aliases = {"from": "start", "to": "stop"}
    out = {}
    for key, value in cfg.items():
        if key == "command":
            continue
        dest = aliases.get(key, key.replace("-", "_"))
        if dest not in known or dest in ("help", "config", "func"):
            raise ConfigError(f"unknown config key {key!r}")
        out[dest] = value
    return out


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        pre = argparse.ArgumentParser(add_help=False)
        pre.add_argument("--config")
        known, _ = pre.parse_known_args(argv)
        cfg = {}
        if known.config:
            with open(known.config) as fh:
                cfg = json.load(fh)
            if not isinstance(cfg, dict):
                raise ConfigError("config file must hold a JSON object")
        commands = parser._subparsers._group_actions[0].choices
        if not any(a in commands for a in argv):
            if "command" not in cfg:
                parser.print_usage(sys.stderr)
                print("latsent: error: no command given", file=sys.stderr)
                return EXIT_CONFIG
            argv = [cfg["command"], *argv]
        command = next(a for a in argv if a in commands)
        if "command" in cfg and cfg["command"] != command:
            raise ConfigError(f"config is for {cfg['command']!r}, not {command!r}")
        commands[command].set_defaults(**_config_defaults(commands[command], cfg))
    except (ConfigError, OSError, json.JSONDecodeError) as exc:
        print(f"latsent: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else 0
    try:
        args.func(args)
    except (SizeGuardError, NumericalDomainError, FloatingPointError, OverflowError) as exc:
        print(f"latsent: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ConfigError, GraphError, ValueError, OSError) as exc:
        print(f"latsent: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return 0


if __name__ == "__main__":
    sys.exit(main())
