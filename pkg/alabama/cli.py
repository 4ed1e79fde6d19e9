"""
Command line interface for alabama.

Usage:  alabama [global options] <command> [options]

Commands: apportion, ties, simulate, periodic, prob, expected, psi, b, scatter, double.
Exit codes: 0 success, 2 input error, 3 tie unresolved, 4 numeric non-convergence.
"""

import argparse
import math
import sys
from fractions import Fraction
from typing import List, Sequence

import pandas

import alabama
import alabama.exceptions
import alabama.utils
from alabama import average, core, formula, render, simulate
from alabama.parameters import Parameters


# *****************************************************************************
# input
# *****************************************************************************


def _profile(args) -> core.PopulationProfile:
    """
    Population profile from --pop or --file.
    """

    if getattr(args, "shares", None) is not None:
        raise alabama.exceptions.InputError(f"{args.command} requires integer populations (--pop or --file)")
    if args.file is not None:
        populations, names = alabama.utils.read_profile_file(args.file)
        return core.PopulationProfile(populations, names)
    if args.pop is not None:
        return core.PopulationProfile(alabama.utils.parse_populations(args.pop))

    raise alabama.exceptions.InputError("no populations given")


def _shares(args) -> List[Fraction]:
    """
    Exact shares from --shares, or from --pop/--file as P_i / P.
    """

    if args.shares is not None:
        return alabama.utils.parse_shares(args.shares)

    return list(_profile(args).shares)


def _names(args, m: int) -> tuple:
    if args.shares is None and args.file is not None:
        return _profile(args).state_names

    return tuple(core.default_name(i) for i in range(m))


def _policy(text: str | None, seed: int | None, m: int, default: core.TiePolicy) -> core.TiePolicy:
    """
    Tie policy from --policy. "lot" takes its seed from --seed.
    """

    if text is None:
        policy = default
    elif text == "lot":
        if seed is None:
            raise alabama.exceptions.InputError("--seed is required for the lot policy")
        policy = core.TiePolicy.seeded_lot(seed)
    else:
        policy = core.TiePolicy.parse(text)
    policy.check(m)

    return policy


# *****************************************************************************
# commands
# *****************************************************************************


def cmd_apportion(args) -> render.Rendered:
    """
    Seat table for each house size.
    """

    profile = _profile(args)
    policy = _policy(args.policy, args.seed, profile.m, core.TiePolicy.error_on_tie())

    result = render.Rendered()
    allocations = []
    for n in alabama.utils.parse_range(args.n):
        allocation = core.hamilton_allocate(profile, n, policy)
        allocations.append(allocation.to_dict())
        result.add_table(render.allocation_frame(profile, allocation), f"n = {n}")
    result.data = {"states": list(profile.state_names), "populations": list(profile.populations), "allocations": allocations}

    return result


def cmd_ties(args) -> render.Rendered:
    """
    Tie events at the rounding cutoff, with the round-up probability of each tied state.
    """

    profile = _profile(args)
    names = profile.state_names

    rows = []
    events = []
    for n in alabama.utils.parse_range(args.n):
        quota = core.compute_quota(profile, n)
        for tie in core.detect_ties(quota, n):
            events.append(tie.to_dict())
            chance = Fraction(tie.contested_seats, len(tie.tied_states))
            for i in sorted(tie.tied_states):
                rows.append({"n": n, "state": names[i], "contested": tie.contested_seats, "tied": len(tie.tied_states), "chance": str(chance)})

    result = render.Rendered()
    result.add_table(pandas.DataFrame(rows, columns=["n", "state", "contested", "tied", "chance"]))
    result.data = {"states": list(names), "ties": events}

    return result


def cmd_simulate(args) -> render.Rendered:
    """
    Paradox counts over house sizes 1..N.
    """

    if args.shares_generic is not None:
        if args.seed is None:
            raise alabama.exceptions.InputError("--seed is required with --shares-generic")
        shares = simulate.generic_shares(args.shares_generic, args.seed)
        profile = core.PopulationProfile.from_shares(shares)
    elif args.shares is not None:
        profile = core.PopulationProfile.from_shares(alabama.utils.parse_shares(args.shares))
    else:
        profile = _profile(args)

    default = core.TiePolicy.fixed_priority(range(profile.m))
    policy = _policy(args.policy, args.seed, profile.m, default)
    report = simulate.paradox_events(profile, args.N, policy)

    result = render.Rendered()
    result.add_table(report.to_frame(), f"N = {args.N}, policy = {policy.variant}")
    result.add_table(report.histogram_frame(), "states losing a seat together")
    result.notes.append(f"steps with a paradox: {report.steps_with_paradox} ({report.any_paradox_frequency:.6f})")
    result.data = report.to_dict()
    result.data["policy"] = policy.variant

    return result


def cmd_periodic(args) -> render.Rendered:
    """
    Exact probabilities of a rational profile.
    """

    profile = _profile(args)
    exact = simulate.periodic_exact(profile, args.start)

    result = render.Rendered()
    result.add_table(render.probability_frame(exact.names, exact.per_state_probability), f"period = {exact.period}")
    result.notes.append(f"expected states suffering per step: {exact.expected_simultaneous}")
    result.data = exact.to_dict()

    return result


def cmd_prob(args) -> render.Rendered:
    """
    Per-state paradox probabilities by the requested method.
    """

    if args.method == "periodic":
        args.command = "prob --method periodic"
        return cmd_periodic(args)

    shares = _shares(args)
    names = _names(args, len(shares))
    vector = formula.q_vector(shares, args.method, args.tol)

    result = render.Rendered()
    result.add_table(render.probability_frame(names, vector.values, vector.error_bounds), f"method = {vector.method}")
    result.notes.append(f"expected states suffering per step: {render.fraction_text(vector.total)}")
    result.data = vector.to_dict()
    result.data["states"] = list(names)

    return result


def cmd_expected(args) -> render.Rendered:
    """
    Exact expected probabilities for random shares, with optional ratio and Monte Carlo columns.
    """

    m_values = alabama.utils.parse_range(args.m)
    if args.mc is not None and args.seed is None:
        raise alabama.exceptions.InputError("--seed is required with --mc")

    rows = []
    for m in m_values:
        smallest = average.expected_min_probability(m)
        given = average.expected_probability(m)
        row = {"m": m, "E q_(m)": str(smallest), "E q_m": str(given)}
        if args.ratio:
            row["ratio"] = round(float(given / smallest), 5) if m >= 3 else math.nan
        if args.mc is not None:
            mc_given, mc_smallest = average.monte_carlo_expected(m, args.mc, args.seed)
            row["mc E q_(m)"] = mc_smallest.mean
            row["se E q_(m)"] = mc_smallest.std_error
            row["mc E q_m"] = mc_given.mean
            row["se E q_m"] = mc_given.std_error
        rows.append(row)

    frame = pandas.DataFrame(rows)
    result = render.Rendered()
    result.add_table(frame)
    result.data = {"rows": [{k: (None if isinstance(v, float) and math.isnan(v) else v) for k, v in r.items()} for r in rows]}

    return result


def cmd_psi(args) -> render.Rendered:
    """
    The curve Psi on a grid.
    """

    curve = average.psi_curve(args.xmax, args.step)

    result = render.Rendered()
    result.add_table(pandas.DataFrame(curve, columns=["x", "psi"]))
    result.data = {"x": [x for x, _ in curve], "psi": [y for _, y in curve]}

    return result


def cmd_b(args) -> render.Rendered:
    """
    The limit constant b by quadrature and by extrapolation.
    """

    by_integral, by_sequence = average.b_estimates(args.tol)

    frame = pandas.DataFrame(
        {"method": ["integral", "sequence-limit"], "b": [by_integral, by_sequence]},
    )
    result = render.Rendered()
    result.add_table(frame)
    result.notes.append(f"difference: {abs(by_integral - by_sequence):.3g}")
    result.notes.append(f"b e = {by_integral * math.e:.5f}")
    result.data = {"integral": by_integral, "sequence_limit": by_sequence, "difference": abs(by_integral - by_sequence)}

    return result


def cmd_scatter(args) -> render.Rendered:
    """
    Scaled share against scaled probability for random share vectors.
    """

    points = average.scaled_scatter(args.m, args.samples, args.seed)
    deviation = average.scatter_deviation(points)

    frame = pandas.DataFrame(points, columns=["mp", "mq"])
    frame["deviation"] = deviation
    result = render.Rendered()
    result.add_table(frame)
    result.notes.append(f"largest deviation from Psi: {deviation.max():.4g}")
    result.data = {"m": args.m, "samples": args.samples, "seed": args.seed, "points": frame}

    return result


def cmd_double(args) -> render.Rendered:
    """
    Probability that the two smallest of five states suffer together.
    """

    value = formula.double_paradox_m5(_shares(args))

    result = render.Rendered()
    result.add_table(pandas.DataFrame({"q": [render.fraction_text(value)], "value": [float(value)]}))
    result.data = {"double_paradox": value}

    return result


COMMANDS = {
    "apportion": cmd_apportion,
    "ties": cmd_ties,
    "simulate": cmd_simulate,
    "periodic": cmd_periodic,
    "prob": cmd_prob,
    "expected": cmd_expected,
    "psi": cmd_psi,
    "b": cmd_b,
    "scatter": cmd_scatter,
    "double": cmd_double,
}


# *****************************************************************************
# parser
# *****************************************************************************


def _add_input(parser: argparse.ArgumentParser, shares: bool = False) -> None:
    group = parser.add_mutually_exclusive_group(required=not shares)
    group.add_argument("--pop", help="comma separated populations, e.g. 53,33,14")
    group.add_argument("--file", help="JSON or CSV profile file")
    if shares:
        group.add_argument("--shares", help="comma separated decimal shares summing to 1")
    parser.set_defaults(shares=None)

    return


def make_parser() -> argparse.ArgumentParser:
    """
    Returns the argument parser with all subcommands.
    """

    parser = argparse.ArgumentParser(
        prog="alabama",
        description="Hamilton apportionment and the probability of the Alabama paradox.",
    )
    parser.add_argument("--version", action="version", version=f"alabama {alabama.__version__}")
    parser.add_argument("--format", choices=render.FORMATS, default="text", help="output format")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="more messages on stderr")
    parser.add_argument("--logfile", help="also log to this file")
    parser.add_argument("--parfile", help="INI parameter file with an [alabama] section")
    parser.add_argument("--threads", type=int, help="maximum number of worker threads")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("apportion", help="seats by Hamilton's method")
    _add_input(p)
    p.add_argument("-n", required=True, help="house size, range a..b or list")
    p.add_argument("--policy", help="error, priority:i,j,.. or lot")
    p.add_argument("--seed", type=int)

    p = sub.add_parser("ties", help="tie events at the rounding cutoff")
    _add_input(p)
    p.add_argument("-n", required=True, help="house size, range a..b or list")

    p = sub.add_parser("simulate", help="count paradoxes over house sizes 1..N")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--pop")
    group.add_argument("--file")
    group.add_argument("--shares")
    group.add_argument("--shares-generic", type=int, metavar="M", help="M random shares with denominator 2**62")
    p.add_argument("-N", type=int, required=True, help="horizon")
    p.add_argument("--policy", help="error, priority:i,j,.. or lot (default input order priority)")
    p.add_argument("--seed", type=int)

    p = sub.add_parser("periodic", help="exact probabilities of integer populations")
    _add_input(p)
    p.add_argument("--start", type=int, default=1, help="first house size of the period")

    p = sub.add_parser("prob", help="asymptotic paradox probabilities")
    _add_input(p, shares=True)
    p.add_argument("--method", choices=list(formula.METHODS) + ["periodic"], default="dp")
    p.add_argument("--tol", type=float, help="Poisson series tolerance")
    p.add_argument("--start", type=int, default=1)

    p = sub.add_parser("expected", help="expected probabilities for random shares")
    p.add_argument("-m", required=True, help="number of states, range a..b or list")
    p.add_argument("--ratio", action="store_true", help="add the ratio E q_m / E q_(m)")
    p.add_argument("--mc", type=int, metavar="SAMPLES", help="add Monte Carlo estimates")
    p.add_argument("--seed", type=int)

    p = sub.add_parser("psi", help="tabulate Psi")
    p.add_argument("--xmax", type=float, default=5.0)
    p.add_argument("--step", type=float, default=0.1)

    p = sub.add_parser("b", help="the limit constant b")
    p.add_argument("--tol", type=float, help="agreement tolerance")

    p = sub.add_parser("scatter", help="scaled share against scaled probability")
    p.add_argument("-m", type=int, required=True)
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--seed", type=int, required=True)

    p = sub.add_parser("double", help="double paradox for five states")
    _add_input(p, shares=True)

    return parser


def _configure(args) -> None:
    """
    Apply parameter file, verbosity, log sinks and thread cap.
    """

    if args.parfile is not None:
        parameters = Parameters()
        parameters.read_parfile(alabama.utils.fix_path(args.parfile))
        parameters.update_pars()

    alabama.db.verbosity += args.verbose
    if args.logfile is None:
        alabama.logger.start_logging("1")
    else:
        alabama.logger.start_logging("13", args.logfile, use_timestamp=False)

    if args.threads is not None:
        if args.threads < 1:
            raise alabama.exceptions.InputError(f"--threads must be at least 1: {args.threads}")
        alabama.db.threads = min(args.threads, alabama.db.threads)

    return


def main(argv: Sequence[str] | None = None) -> int:
    """
    Run one command and write its output to stdout.

    Returns:
        exit code
    """

    args = make_parser().parse_args(argv)

    try:
        _configure(args)
        result = COMMANDS[args.command](args)
    except alabama.exceptions.AlabamaError as e:
        alabama.logger.error(str(e))
        return e.error_code

    sys.stdout.write(render.render(result, args.format))

    return 0
