#!/usr/bin/env python
import argparse
import contextlib
import logging
import os
import sys

from .bands import band_invariants, band_measures, band_set, gap_zeros, norm_identity
from .catalog import SUITES, run_examples, run_suite
from .exceptions import (
    ConvergenceError,
    InvalidInputError,
    InvariantViolation,
    NumericalError,
)
from .orbit import SWEEP_COLUMNS, orbit, sweep_rows, widom_sweep
from .output import dumps, write_csv, write_json
from .potential import equilibrium, green, is_infinite, pole_data
from .realset import load_problem, load_set_spec
from .settings import (
    DEFAULT_EPS,
    DEFAULT_GRID,
    DEFAULT_JOBS,
    DEFAULT_MAX_ITERATIONS,
    DEFAULT_RETURN_THRESHOLD,
    DEFAULT_TOL,
    LOG_ENV_VAR,
)
from .solver import alternation_certificate, degree_report, solve_residual
from .version import __version__

logger = logging.getLogger(__name__)

CHECK_COLUMNS = ["name", "value", "expected", "defect", "passed"]


class ArgumentError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ArgumentError("{0}: error: {1}".format(self.prog, message))


def parse_args(argv=None):
    parser = Parser(prog="respoly")

    parser.add_argument(
        "--version", action="version", version="%(prog)s " + __version__
    )

    common = argparse.ArgumentParser(add_help=False)

    common.add_argument(
        "--set",
        help='The set, as inline JSON or a path to a JSON file: {"intervals": [[a, b], ...], "x0": number}.',
    )

    common.add_argument(
        "--x0",
        type=float,
        help="The point x0 in a gap of the set. Overrides any x0 in the set spec.",
    )

    common.add_argument(
        "--tol",
        type=float,
        default=DEFAULT_TOL,
        help="Relative levelling tolerance of the exchange solver. Default: {0}".format(
            DEFAULT_TOL
        ),
    )

    common.add_argument(
        "--max-iterations",
        type=int,
        default=DEFAULT_MAX_ITERATIONS,
        help="Exchange iteration cap. Default: {0}".format(DEFAULT_MAX_ITERATIONS),
    )

    common.add_argument(
        "--format",
        choices=["json", "csv"],
        help="Output format. Tables (widom-sweep, verify, examples) default to csv where noted.",
    )

    common.add_argument("--out", help="Write the output to this file instead of stdout.")

    common.add_argument(
        "--quiet", action="store_true", help="Don't log progress to stderr."
    )

    commands = parser.add_subparsers(dest="command", parser_class=Parser)
    commands.required = True

    solve = commands.add_parser("solve", parents=[common], help="Compute one residual polynomial.")
    solve.add_argument("--n", type=int, required=True, help="The degree bound n.")

    green_cmd = commands.add_parser(
        "green",
        parents=[common],
        help="Capacity, Green's function values and, given x0, critical points and the PW constant.",
    )
    green_cmd.add_argument(
        "--z",
        action="append",
        default=[],
        help="A point at which to evaluate g; complex values as 'a+bj'. Repeatable.",
    )

    bands = commands.add_parser("bands", parents=[common], help="The period set of R_{x0,n}.")
    bands.add_argument("--n", type=int, required=True, help="The degree bound n.")

    sweep = commands.add_parser(
        "widom-sweep", parents=[common], help="Widom factors for n = 1..n-max (csv by default)."
    )
    sweep.add_argument("--n-max", type=int, required=True, help="Largest degree of the sweep.")
    sweep.add_argument(
        "--jobs",
        type=int,
        default=DEFAULT_JOBS,
        help="Worker processes. Default: {0}".format(DEFAULT_JOBS),
    )
    sweep.add_argument(
        "--progress",
        action="store_true",
        help="Print a progress bar. Mutes the default logging. Requires `tqdm` to be installed.",
    )
    sweep.add_argument(
        "--eps",
        type=float,
        default=DEFAULT_EPS,
        help="Distance to the integer lattice counted as a near return. Default: {0}".format(
            DEFAULT_EPS
        ),
    )
    sweep.add_argument(
        "--threshold",
        type=float,
        default=DEFAULT_RETURN_THRESHOLD,
        help="Largest accepted W_n - 2 along the near returns. Default: {0}".format(
            DEFAULT_RETURN_THRESHOLD
        ),
    )
    sweep.add_argument("--summary", help="Write the JSON summary to this file.")

    orbit_cmd = commands.add_parser("orbit", parents=[common], help="Harmonic measures and near returns.")
    orbit_cmd.add_argument("--n-max", type=int, required=True, help="Largest n to scan.")
    orbit_cmd.add_argument(
        "--eps",
        type=float,
        default=DEFAULT_EPS,
        help="Distance to the integer lattice counted as a near return. Default: {0}".format(
            DEFAULT_EPS
        ),
    )

    verify = commands.add_parser(
        "verify", parents=[common], help="Run an invariant suite; nonzero exit on any failure."
    )
    verify.add_argument("--suite", choices=SUITES, default="quick", help="Which suite. Default: quick")
    verify.add_argument("--seed", type=int, default=0, help="Seed for the random problems. Default: 0")
    verify.add_argument(
        "--grid",
        type=int,
        default=DEFAULT_GRID,
        help="Oracle grid points per band. Default: {0}".format(DEFAULT_GRID),
    )
    verify.add_argument(
        "--jobs",
        type=int,
        default=DEFAULT_JOBS,
        help="Worker processes. Default: {0}".format(DEFAULT_JOBS),
    )

    commands.add_parser(
        "examples", parents=[common], help="Reproduce the closed-form instances as a defect table."
    )

    args = parser.parse_args(argv)
    if args.tol <= 0:
        parser.error("--tol must be positive")
    return args


def _log_level(args):
    name = os.environ.get(LOG_ENV_VAR)
    if name:
        level = getattr(logging, name.upper(), None)
        if isinstance(level, int):
            return level
    return logging.WARN if (args.quiet or getattr(args, "progress", False)) else logging.INFO


def _problem(args):
    if not args.set:
        raise InvalidInputError("--set is required for `{0}`".format(args.command))
    return load_problem(args.set, x0=args.x0)


def _parse_point(text):
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise InvalidInputError("Cannot read z = {0!r}".format(text))


def _json_only(args):
    if args.format == "csv":
        raise InvalidInputError("`{0}` only writes json".format(args.command))


@contextlib.contextmanager
def _output(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w") as f:
            yield f


def cmd_solve(args, out):
    _json_only(args)
    prob = _problem(args)
    sol = solve_residual(prob, args.n, tol=args.tol, max_iterations=args.max_iterations)
    report = degree_report(sol, tol=args.tol, max_iterations=args.max_iterations)
    doc = sol.to_dict()
    doc["matched_chebyshev"] = report.matched_chebyshev
    doc["certificate"] = alternation_certificate(sol)
    write_json(doc, out)
    return 0


def cmd_green(args, out):
    _json_only(args)
    if not args.set:
        raise InvalidInputError("--set is required for `green`")
    realset, x0 = load_set_spec(args.set)
    x0 = args.x0 if args.x0 is not None else x0
    gd = equilibrium(realset)
    doc = gd.to_dict()
    values = []
    for text in args.z:
        z = _parse_point(text)
        on_set = not is_infinite(z) and z.imag == 0 and realset.contains(z.real)
        values.append({"z": [z.real, z.imag], "g": green(gd, z), "on_set": on_set})
    doc["values"] = values
    if x0 is not None:
        doc.update(pole_data(realset, float(x0)).to_dict())
    write_json(doc, out)
    return 0


def cmd_bands(args, out):
    _json_only(args)
    prob = _problem(args)
    sol = solve_residual(prob, args.n, tol=args.tol, max_iterations=args.max_iterations)
    bs = band_set(sol)
    invariants = band_invariants(bs, prob)
    doc = bs.to_dict()
    doc.update(
        {
            "n": sol.n,
            "r": sol.r,
            "norm_identity_defect": norm_identity(sol),
            "norm_identity_skipped": sol.d_n == 0,
            "band_measures": band_measures(bs),
            "gap_zeros": gap_zeros(sol, prob.set),
            "invariants": invariants,
        }
    )
    write_json(doc, out)
    return 0 if all(invariants.values()) else 3


def cmd_sweep(args, out):
    prob = _problem(args)
    result = widom_sweep(
        prob,
        args.n_max,
        jobs=args.jobs,
        progress=args.progress,
        eps=args.eps,
        threshold=args.threshold,
        tol=args.tol,
        max_iterations=args.max_iterations,
    )
    summary = result.summary()
    if args.format == "json":
        write_json({"records": list(result.records), "summary": summary}, out)
    else:
        write_csv(sweep_rows(result), SWEEP_COLUMNS, "widom-sweep", out)
    if args.summary:
        with open(args.summary, "w") as f:
            write_json(summary, f)
    hard = [result.checks["within_bounds"], result.checks["interval_constant"]]
    return 3 if any(ok is False for ok in hard) else 0


def cmd_orbit(args, out):
    _json_only(args)
    prob = _problem(args)
    data = orbit(equilibrium(prob.set), args.n_max, eps=args.eps)
    doc = data.to_dict()
    doc["m"] = prob.set.m
    write_json(doc, out)
    return 0


def _write_checks(args, results, kind, out):
    if args.format == "json":
        write_json({"suite": kind, "passed": all(r.passed for r in results), "checks": results}, out)
    else:
        write_csv(
            ([r.name, r.value, r.expected, r.defect, r.passed] for r in results),
            CHECK_COLUMNS,
            kind,
            out,
        )
    return 0 if all(r.passed for r in results) else 3


def cmd_verify(args, out):
    results = run_suite(args.suite, seed=args.seed, jobs=args.jobs, grid=args.grid)
    return _write_checks(args, results, args.suite, out)


def cmd_examples(args, out):
    return _write_checks(args, run_examples(), "examples", out)


COMMANDS = {
    "solve": cmd_solve,
    "green": cmd_green,
    "bands": cmd_bands,
    "widom-sweep": cmd_sweep,
    "orbit": cmd_orbit,
    "verify": cmd_verify,
    "examples": cmd_examples,
}


def _diagnostic(e):
    doc = {"error": e.__class__.__name__, "message": str(e)}
    if getattr(e, "diagnostic", None):
        doc["diagnostic"] = e.diagnostic
    if isinstance(e, ConvergenceError) and e.best is not None:
        doc["best"] = {
            "r": e.best.norm,
            "levelling_defect": e.best.defect,
            "iterations": e.best.iterations,
            "reference": list(e.best.reference.points),
        }
    return doc


def main(argv=None):
    try:
        args = parse_args(argv)
    except ArgumentError as e:
        sys.stderr.write("{0}\n".format(e))
        return 1

    logging.basicConfig(
        level=_log_level(args),
        format="%(levelname)s:%(name)s: %(message)s",
    )

    try:
        with _output(args.out) as out:
            return COMMANDS[args.command](args, out)
    except InvalidInputError as e:
        logger.error(str(e))
        return 1
    except NumericalError as e:
        sys.stderr.write(dumps(_diagnostic(e)) + "\n")
        return 2
    except InvariantViolation as e:
        logger.error("Invariant violated: {0}".format(e))
        return 3


if __name__ == "__main__":
    sys.exit(main())
