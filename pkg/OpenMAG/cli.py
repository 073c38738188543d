'''
MODULE: cli.py

@Details:
    Command line front end of OpenMAG:

        openmag <command> [--body FILE] [--points FILE] [--generators FILE]
                          [--measure SPEC] [--norm NORM] [--seed S] [--samples M]
                          [--epsilon E] [--ts T1,T2,..] [--grid K] [--workers W]
                          [--format json|csv] [--tolerance TOL] [--max-iter I] [--verbose]

    Commands: magnitude, maxdiv, l1iv, htiv, bound, l1exact, mahler, sudakov, steiner,
    wills, smallt.

    The report is written on the standard output (JSON with sorted keys, or CSV with a
    "# key=value" provenance header) and carries the inputs, the outputs, the caveats
    (measure discretization error, Monte Carlo standard errors), the seed, the
    tolerances, the number of workers and a sha256 digest of the inputs.
    Exit codes: 0 success, 2 domain errors (a JSON error object is written), 1 I/O and
    usage errors.

@Additional notes:
    This code is distributed in the hope that it will be useful, but WITHOUT ANY WARRANTY;
'''

import argparse
import json
import os
import re
import sys
from dataclasses import asdict, dataclass

import numpy as np
import pandas as pd

from .utilities import *
from . import bounds_apps, convex_bodies, finite_metric, generating_measures, intrinsic_volumes


COMMANDS = ("magnitude", "maxdiv", "l1iv", "htiv", "bound", "l1exact", "mahler", "sudakov", "steiner", "wills", "smallt")
NEEDS_BODY = ("l1iv", "htiv", "bound", "l1exact", "sudakov", "steiner", "wills", "smallt")
NEEDS_MEASURE = ("htiv", "bound", "smallt")
MEASURE_PATTERN = re.compile(r"^(l1|l2:\d+|random:\d+(:\d+)?)$")

DEFAULT_TS = {"steiner": (0.25, 0.5, 1.0, 2.0), "smallt": (0.1, 0.05, 0.01)}
DEFAULT_GRID = {"smallt": 24}

CSV_HELP = '''CSV columns per command:
  mahler    t, lower, upper, ok
  sudakov   t, magnitude, counting_bound, ok
  steiner   t, area, polynomial, abs_dev, rel_dev   (2D; 3D/4D: t, estimate, std_err, exact_hull, polynomial, ok)
  smallt    t, grid_points, slope, bound_slope, target, limit_gap, ok, exact_slope
  others    one row with the scalar outputs
'''


@dataclass(frozen=True)
class RunConfig:
    command: str
    body: dict = None
    points: list = None
    generators: list = None
    measure_spec: str = None
    norm: str = "l2"
    seed: int = DEFAULT_SEED
    samples: int = 100000
    epsilon: float = None
    ts: tuple = None
    grid: int = None
    workers: int = 1
    out_format: str = "json"
    tolerance: float = 1E-10
    max_iter: int = 10000
    verbose: bool = False


class _Parser(argparse.ArgumentParser):
    #usage errors become exceptions, so that the caller chooses the exit code
    def error(self, message):
        raise ConfigError(message)


def _default_workers():
    try:
        workers = int(os.environ.get("OPENMAG_WORKERS", 1))
    except ValueError:
        raise ConfigError("OPENMAG_WORKERS must be a positive integer.")
    if workers < 1:
        raise ConfigError("OPENMAG_WORKERS must be a positive integer.")
    return workers


def _load_json(path, flag):
    #OSError (missing file) propagates: it is an I/O error
    with open(path, "r") as f:
        try:
            return json.load(f)
        except json.JSONDecodeError as err:
            raise ConfigError("{}: malformed JSON in {} ({})".format(flag, path, err))


def _parse_ts(text):
    try:
        ts = tuple(float(token) for token in text.split(",") if token.strip())
    except ValueError:
        raise ConfigError("--ts: expected a comma separated list of numbers, got '{}'".format(text))
    if len(ts) == 0:
        raise ConfigError("--ts: at least one scale is needed")
    return ts


def build_parser():
    parser = _Parser(prog="openmag", description="Magnitude, intrinsic volumes and convex geometry checks.",
                     epilog=CSV_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--body", help="JSON body file (vpolytope, zonotope or box)")
    parser.add_argument("--points", help="JSON list of points (magnitude, maxdiv)")
    parser.add_argument("--generators", help="JSON list of zonotope generators (mahler)")
    parser.add_argument("--measure", help="l1 | l2:N | random:N | random:N:SEED | path of a JSON measure")
    parser.add_argument("--norm", default="l2", help="l1 | l2 | lp:p (1 <= p <= 2), used when no measure is given")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    parser.add_argument("--samples", type=int, default=100000)
    parser.add_argument("--epsilon", type=float)
    parser.add_argument("--ts", help="comma separated scales")
    parser.add_argument("--grid", type=int, help="grid points per side")
    parser.add_argument("--workers", type=int)
    parser.add_argument("--format", dest="out_format", choices=("json", "csv"), default="json")
    parser.add_argument("--tolerance", type=float, default=1E-10)
    parser.add_argument("--max-iter", dest="max_iter", type=int, default=10000)
    parser.add_argument("--verbose", action="store_true")
    return parser


def parse_config(argv):
    '''
    Parse and validate the command line.
    - Input:
    argv = list of arguments (without the program name)
    - Output:
    config = RunConfig
    Raises ConfigError naming the offending flag, or OSError for missing files.
    '''
    args = build_parser().parse_args(argv)
    command = args.command

    body = _load_json(args.body, "--body") if args.body else None
    points = _load_json(args.points, "--points") if args.points else None
    generators = _load_json(args.generators, "--generators") if args.generators else None
    if isinstance(points, dict):
        points = points.get("points")
    if isinstance(generators, dict):
        generators = generators.get("generators")

    if args.measure is not None and not (MEASURE_PATTERN.match(args.measure.strip().lower()) or os.path.isfile(args.measure)):
        raise ConfigError("--measure: not acceptable value '{}' (expected l1, l2:N, random:N, random:N:SEED or a file)".format(args.measure))
    if command in NEEDS_BODY and body is None:
        raise ConfigError("--body is required by the command '{}'".format(command))
    if command in NEEDS_MEASURE and args.measure is None:
        raise ConfigError("--measure is required by the command '{}'".format(command))
    if command in ("magnitude", "maxdiv"):
        if points is None and body is None:
            raise ConfigError("--points or --body (with --grid) is required by the command '{}'".format(command))
        if points is None and args.grid is None:
            raise ConfigError("--grid is required when the points are sampled from --body")
    if command == "mahler" and generators is None and (body is None or body.get("type") != "zonotope"):
        raise ConfigError("--generators (or a zonotope --body) is required by the command 'mahler'")
    if command == "sudakov" and (args.epsilon is None or not args.epsilon > 0):
        raise ConfigError("--epsilon (positive) is required by the command 'sudakov'")
    if args.samples < 1000:
        raise ConfigError("--samples: at least 1000 samples are needed")
    if args.grid is not None and args.grid < 1:
        raise ConfigError("--grid: at least one point per side is needed")
    if not args.tolerance > 0:
        raise ConfigError("--tolerance must be positive")
    if args.max_iter < 1:
        raise ConfigError("--max-iter must be positive")
    workers = _default_workers() if args.workers is None else args.workers
    if workers < 1:
        raise ConfigError("--workers must be a positive integer")

    ts = _parse_ts(args.ts) if args.ts else DEFAULT_TS.get(command)
    grid = args.grid if args.grid is not None else DEFAULT_GRID.get(command)

    return RunConfig(command, body, points, generators, args.measure, args.norm, args.seed, args.samples, args.epsilon,
                     ts, grid, workers, args.out_format, args.tolerance, args.max_iter, args.verbose)


# ------------------------------
# Dispatch
# ------------------------------


def _body(config):
    try:
        return convex_bodies.body_from_json(config.body)
    except ValueError as err:
        raise ConfigError("--body: {}".format(err))


def _measure(config, n):
    try:
        return generating_measures.measure_from_spec(config.measure_spec, n, config.seed)
    except DomainError:
        raise
    except ValueError as err:
        raise ConfigError("--measure: {}".format(err))


def _space(config):
    if config.points is not None:
        try:
            points = np.array(config.points, dtype=float)
        except ValueError:
            raise ConfigError("--points: all the points must have the same dimension")
        if points.ndim == 1:
            points = points.reshape(-1, 1)
    else:
        points = convex_bodies.grid_sample(_body(config), config.grid)
    norm = config.norm
    measure = None
    if config.measure_spec is not None and points.shape[0] > 0:
        measure = _measure(config, points.shape[1])
        norm = measure
    try:
        return finite_metric.build_space(points, norm), measure
    except DomainError:
        raise
    except ValueError as err:
        raise ConfigError(str(err))


def _run_magnitude(config):
    space, measure = _space(config)
    pd_report = finite_metric.check_positive_definite(space)
    value = finite_metric.magnitude(space)
    return {"k": space.size, "magnitude": value, "is_pd": pd_report.is_pd, "min_eig": pd_report.min_eig}, None, measure


def _run_maxdiv(config):
    space, measure = _space(config)
    weights = finite_metric.max_diversity(space, config.tolerance, config.max_iter)
    pd_report = finite_metric.check_positive_definite(space)
    value = finite_metric.magnitude(space) if pd_report.is_pd else None
    outputs = {"k": space.size, "diversity": weights.diversity, "objective": weights.objective, "weights": weights.v,
               "kkt_residual": weights.kkt_residual, "certified": weights.certified, "iterations": weights.iterations, "magnitude": value}
    return outputs, None, measure


def _run_l1iv(config):
    return {"l1_volumes": intrinsic_volumes.l1_intrinsic_volumes(_body(config)).to_dict()}, None, None


def _run_htiv(config):
    body = _body(config)
    measure = _measure(config, body.dim)
    mu = intrinsic_volumes.ht_intrinsic_volumes(body, measure, config.workers)
    return {"mu": mu.to_dict(), "normalized": intrinsic_volumes.normalize(mu).to_dict()}, None, measure


def _run_bound(config):
    body = _body(config)
    measure = _measure(config, body.dim)
    report = bounds_apps.magnitude_upper_bound(body, measure, config.workers)
    return report.to_dict(), None, measure


def _run_l1exact(config):
    return {"magnitude": bounds_apps.l1_magnitude_exact(_body(config))}, None, None


def _run_mahler(config):
    if config.generators is not None:
        try:
            z = convex_bodies.Zonotope(config.generators)
        except ValueError as err:
            raise ConfigError("--generators: {}".format(err))
    else:
        z = _body(config)
    settings = {"workers": config.workers, "verbose": config.verbose}
    report = bounds_apps.MahlerPipeline(z, config.samples, config.seed, settings).fit()
    return report.to_dict(), report.t_rows, None


def _run_sudakov(config):
    body = _body(config)
    settings = {"norm": config.norm, "verbose": config.verbose}
    if config.grid is not None:
        settings["grid_points_per_side"] = config.grid
    result = bounds_apps.SudakovPipeline(body, config.epsilon, config.seed, settings).fit()
    return result.to_dict(), result.scale_rows, None


def _run_steiner(config):
    body = _body(config)
    if body.dim == 2:
        report = bounds_apps.steiner_check(body, config.ts)
    else:
        report = bounds_apps.steiner_check_mc(body, config.ts, config.samples, config.seed, config.workers)
    return report, report["rows"], None


def _run_wills(config):
    return bounds_apps.wills_check(_body(config)).to_dict(), None, None


def _run_smallt(config):
    body = _body(config)
    measure = _measure(config, body.dim)
    settings = {"workers": config.workers, "verbose": config.verbose}
    rows = bounds_apps.SmallTSlope(body, measure, config.ts, config.grid, settings).fit()
    return {"rows": rows}, rows, measure


RUNNERS = {"magnitude": _run_magnitude, "maxdiv": _run_maxdiv, "l1iv": _run_l1iv, "htiv": _run_htiv, "bound": _run_bound,
           "l1exact": _run_l1exact, "mahler": _run_mahler, "sudakov": _run_sudakov, "steiner": _run_steiner, "wills": _run_wills,
           "smallt": _run_smallt}


def _caveats(outputs, measure):
    caveats = {"measure_discretization_error": None if measure is None else measure.discretization_error}
    if isinstance(outputs.get("vol_polar"), dict):
        caveats["mc_std_err"] = outputs["vol_polar"]["std_err"]
    if "certified" in outputs:
        caveats["certified"] = outputs["certified"]
    return caveats


def build_report(config, outputs, measure):
    '''
    Report of a run: inputs, outputs, caveats, seeds, tolerances, workers and the sha256
    digest of the inputs.
    '''
    inputs = asdict(config)
    inputs["measure"] = None if measure is None else measure.to_json()
    report = {"command": config.command, "inputs": inputs, "outputs": outputs, "caveats": _caveats(outputs, measure),
              "seeds": {"seed": config.seed}, "workers": config.workers,
              "tolerances": {"triangle_slack": TRIANGLE_SLACK, "pivot_threshold": PIVOT_THRESHOLD, "kkt": config.tolerance,
                             "membership": convex_bodies.MEMBERSHIP_TOL}}
    report["digest"] = digest(inputs)
    return report


def _scalar_row(outputs):
    return {key: value for key, value in to_builtin(outputs).items() if not isinstance(value, (list, dict))}


def run(config, stream=None):
    '''
    Run a command and write its report.
    - Output:
    exit_code = 0 on success, 2 on domain errors, 1 on I/O or configuration errors
    '''
    stream = sys.stdout if stream is None else stream
    progress("Running '{}'..".format(config.command), config.verbose)
    try:
        outputs, rows, measure = RUNNERS[config.command](config)
    except DomainError as err:
        stream.write(canonical_json({"error": type(err).__name__, "message": str(err)}) + "\n")
        return 2
    except (OpenMAGError, ValueError, OSError) as err:
        print("openmag: error: {}".format(err), file=sys.stderr)
        return 1

    report = build_report(config, outputs, measure)
    if config.out_format == "csv":
        table = pd.DataFrame(to_builtin(rows) if rows is not None else [_scalar_row(outputs)])
        header = {"command": config.command, "digest": report["digest"], "seed": config.seed, "workers": config.workers}
        write_csv(table, header, stream)
    else:
        stream.write(canonical_json(report) + "\n")

    return 0


def main(argv=None):
    try:
        config = parse_config(sys.argv[1:] if argv is None else argv)
    except (ConfigError, OSError) as err:
        print("openmag: error: {}".format(err), file=sys.stderr)
        return 1

    return run(config)
