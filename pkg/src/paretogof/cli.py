"""Command-line front end: ``pareto-gof {test,critical-values,power,verify}``.

Exit codes of ``test``: 0 retain, 2 reject, 1 error. ``verify`` exits 0 when
every check passes and 1 otherwise. The default replication count is 10000,
or the value of ``PARETO_GOF_REPS`` when set.

Every output carries a run manifest (subcommand, flags, seed, timestamp,
version). The timestamp is taken from ``SOURCE_DATE_EPOCH`` when set and is
``null`` otherwise, so repeated runs stay byte-identical. ``--threads`` only
changes speed and is left out of the manifest.
"""

import argparse
import json
import os
import sys
import warnings
from datetime import datetime, timezone

from . import __version__
from .distributions import POWER_ALTERNATIVES, Pareto, TiesWarning, as_sample, warn_if_ties
from .montecarlo import (
    ALTERNATIVE_SIDES,
    PAPER_LEVELS,
    STATISTICS,
    SimulationConfig,
    critical_value_table,
    run_test,
)
from .power import DEFAULT_SIDES, full_table

REPS_ENV = "PARETO_GOF_REPS"
DEFAULT_REPS = 10_000
DEFAULT_SEED = 20_160_101
EXIT_RETAIN, EXIT_ERROR, EXIT_REJECT = 0, 1, 2

_NOT_IN_MANIFEST = {"command", "func", "threads", "output"}


class UsageError(Exception):
    """Bad input; reported on stderr with exit code 1."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which would collide with "reject"
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def default_reps():
    raw = os.environ.get(REPS_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_REPS
    try:
        reps = int(raw)
    except ValueError:
        raise UsageError(f"{REPS_ENV}={raw!r} is not an integer")
    if reps < 1:
        raise UsageError(f"{REPS_ENV} must be positive")
    return reps


def read_observations(path):
    """Parse one decimal value per line; blank lines and ``#`` comments are skipped."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}")
    values = []
    for lineno, line in enumerate(lines, start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        try:
            v = float(text)
        except ValueError:
            raise UsageError(f"{path}:{lineno}: cannot parse {text!r} as a number")
        if v != v or v in (float("inf"), float("-inf")):
            raise UsageError(f"{path}:{lineno}: value {text!r} is not finite")
        if v < 1:
            raise UsageError(
                f"{path}:{lineno}: value {v!r} is below 1; observations must lie in "
                "the Pareto support [1, inf) (divide by the known scale first)"
            )
        values.append(v)
    if len(values) < 2:
        raise UsageError(f"{path}: need at least two observations, found {len(values)}")
    return values


def _timestamp():
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if not epoch:
        return None
    return datetime.fromtimestamp(int(epoch), tz=timezone.utc).isoformat()


def run_manifest(args):
    flags = {k: v for k, v in sorted(vars(args).items()) if k not in _NOT_IN_MANIFEST}
    return {
        "subcommand": args.command,
        "flags": flags,
        "seed": getattr(args, "seed", None),
        "timestamp": _timestamp(),
        "version": __version__,
    }


def _manifest_comment(manifest):
    return "# manifest: " + json.dumps(manifest, sort_keys=True) + "\n"


def _config(args, **kw):
    return SimulationConfig(
        reps=args.reps, seed=args.seed, workers=max(1, args.threads), **kw
    )


def _emit(text, output=None):
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------


def cmd_test(args):
    values = read_observations(args.data)
    sample = as_sample(values)
    warn_if_ties(sample)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TiesWarning)  # already reported once above
        outcome = run_test(sample, args.statistic, args.level, _config(args), args.alternative)
    manifest = run_manifest(args)
    if args.format == "json":
        doc = dict(outcome.to_dict(), decision="reject" if outcome.reject else "retain")
        doc["manifest"] = manifest
        _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        lower = (
            ""
            if outcome.lower_critical_value is None
            else f"lower critical value: {outcome.lower_critical_value:.6f}\n"
        )
        _emit(
            _manifest_comment(manifest)
            + f"statistic: {outcome.label} = {outcome.value:.6f} (n = {outcome.n})\n"
            + lower
            + f"critical value: {outcome.critical_value:.6f} "
            f"(level {outcome.level:g}, {outcome.alternative}, {outcome.reps} reps)\n"
            + f"p-value: {outcome.p_value:.4f}\n"
            + f"decision: {'reject' if outcome.reject else 'retain'} Pareto\n"
        )
    return EXIT_REJECT if outcome.reject else EXIT_RETAIN


def cmd_critical_values(args):
    table = critical_value_table(args.statistic, args.n, args.levels, _config(args))
    manifest = run_manifest(args)
    comparison = table.compare_paper() if args.compare_paper else None
    if args.format == "json":
        doc = json.loads(table.to_json(manifest))
        if comparison is not None:
            doc["paper_comparison"] = [
                {"n": n, "level": lv, "simulated": v, "printed": ref, "delta": d}
                for n, lv, v, ref, d in comparison
            ]
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    elif args.format == "tsv":
        text = _manifest_comment(manifest) + table.to_tsv()
    else:
        text = _manifest_comment(manifest) + table.to_text()
    if comparison is not None and args.format != "json":
        block = ["", "n\tlevel\tsimulated\tprinted\tdelta"]
        block += [f"{n}\t{lv:g}\t{v:.4f}\t{ref:.2f}\t{d:+.4f}" for n, lv, v, ref, d in comparison]
        if not comparison:
            block.append("# no printed values for this statistic")
        # keep the TSV file a single clean table; deviations go to stderr there
        if args.format == "tsv":
            sys.stderr.write("\n".join(block[1:]) + "\n")
        else:
            text += "\n".join(block) + "\n"
    for note in table.diagnostics():
        sys.stderr.write(f"note: {note}\n")
    _emit(text, args.output)
    return 0


def cmd_power(args):
    if args.alternative == "all":
        alternatives = POWER_ALTERNATIVES
    elif args.alternative == "pareto":
        alternatives = {"pareto": Pareto(1.0)}
    else:
        alternatives = {args.alternative: POWER_ALTERNATIVES[args.alternative]}
    report = full_table(
        _config(args),
        ns=tuple(args.n),
        level=args.level,
        alternatives=alternatives,
        sides={"tn": args.tn_side},
    )
    manifest = run_manifest(args)
    if args.format == "json":
        doc = json.loads(report.to_json(manifest))
        if args.compare_paper:
            doc["paper_comparison"] = [
                {"test": t, "alternative": a, "n": n, "simulated": p, "printed": ref,
                 "delta": d, "se": se}
                for t, a, n, p, ref, d, se in report.compare_paper()
            ]
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    else:
        body = report.to_tsv() if args.format == "tsv" else report.to_text()
        text = _manifest_comment(manifest) + body
        if args.compare_paper:
            rows = ["", "test\talternative\tn\tsimulated\tprinted\tdelta\tse"]
            rows += [
                f"{STATISTICS[t][0]}\t{a}\t{n}\t{p:.4f}\t{ref:.4f}\t{d:+.4f}\t{se:.4f}"
                for t, a, n, p, ref, d, se in report.compare_paper()
            ]
            text += "\n".join(rows) + "\n"
    _emit(text, args.output)
    return 0


def cmd_verify(args):
    from .verify import run_checks

    checks = run_checks(args.profile, seed=args.seed)
    manifest = run_manifest(args)
    if args.format == "json":
        doc = {
            "checks": [
                {"name": c.name, "computed": c.computed, "expected": c.expected,
                 "tolerance": c.tol, "relative": c.relative, "passed": c.passed}
                for c in checks
            ],
            "manifest": manifest,
        }
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    else:
        passed = sum(c.passed for c in checks)
        text = (
            _manifest_comment(manifest)
            + "\n".join(c.line() for c in checks)
            + f"\n{passed}/{len(checks)} checks passed\n"
        )
    _emit(text)
    return 0 if all(c.passed for c in checks) else 1


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _sample_size(text):
    v = int(text)
    if v < 2:
        raise argparse.ArgumentTypeError("sample sizes must be at least 2")
    return v


def _level(text):
    v = float(text)
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError("level must lie in (0, 1)")
    return v


def _seed(text):
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def build_parser():
    reps = default_reps()
    p = _Parser(prog="pareto-gof", description="Goodness-of-fit tests for the Pareto law.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def mc_flags(sp):
        sp.add_argument("--reps", type=_positive_int, default=reps,
                        help=f"Monte-Carlo replications (default {reps}; env {REPS_ENV})")
        sp.add_argument("--seed", type=_seed, default=DEFAULT_SEED)
        sp.add_argument("--threads", type=_positive_int, default=1,
                        help="worker threads; results do not depend on it")

    t = sub.add_parser("test", help="test a data file for the Pareto law")
    t.add_argument("data", help="one observation per line, '#' starts a comment")
    t.add_argument("--statistic", choices=sorted(STATISTICS), default="tn")
    t.add_argument("--level", type=_level, default=0.05)
    t.add_argument("--alternative", choices=ALTERNATIVE_SIDES, default="greater")
    t.add_argument("--format", choices=("text", "json"), default="text")
    mc_flags(t)
    t.set_defaults(func=cmd_test)

    c = sub.add_parser("critical-values", help="simulate a critical-value table")
    c.add_argument("--statistic", choices=sorted(STATISTICS), default="tn")
    c.add_argument("--n", type=_sample_size, nargs="+", default=[10, 20, 30, 40, 50, 100])
    c.add_argument("--levels", type=_level, nargs="+", default=list(PAPER_LEVELS))
    c.add_argument("--format", choices=("text", "tsv", "json"), default="text")
    c.add_argument("--compare-paper", action="store_true",
                   help="print deviations from the published table")
    c.add_argument("--output", help="write to this file instead of stdout")
    mc_flags(c)
    c.set_defaults(func=cmd_critical_values)

    w = sub.add_parser("power", help="power study over the standard alternatives")
    w.add_argument("--n", type=_sample_size, nargs="+", default=[20, 50])
    w.add_argument("--level", type=_level, default=0.05)
    w.add_argument("--alternative", choices=["all", "pareto", *POWER_ALTERNATIVES], default="all")
    w.add_argument("--tn-side", choices=ALTERNATIVE_SIDES, default=DEFAULT_SIDES["tn"])
    w.add_argument("--format", choices=("text", "tsv", "json"), default="text")
    w.add_argument("--compare-paper", action="store_true",
                   help="append per-cell deltas and standard errors")
    w.add_argument("--output", help="write to this file instead of stdout")
    mc_flags(w)
    w.set_defaults(func=cmd_power)

    v = sub.add_parser("verify", help="pass/fail ledger of the asymptotic constants")
    v.add_argument("--profile", choices=("default", "quick"), default="default")
    v.add_argument("--seed", type=_seed, default=7)
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.set_defaults(func=cmd_verify)
    return p


def _print_warning(message, category, filename, lineno, file=None, line=None):
    sys.stderr.write(f"warning: {message}\n")


def main(argv=None):
    warnings.showwarning = _print_warning
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
