"""
ffexpand: finite-field expansion lab

Command-line entry point. Every subcommand is parsed into a RunConfig, run
through the experiment graph and written by one report writer:

    check-nice          niceness verdict with Jacobian / annihilator certificate
    incidence           seeded point-curve incidence trials against the bound
    expand              image size and deficiency of P on X_1 x ... x X_k
    counterexample      the diagonal quadric construction with the 3p/4 ceiling
    classify-quadratic  structural classifier for ternary quadratics
    annihilator         polynomial relations among a list of polynomials
    conc-family         a*x^d + F(y,z)*x + G(y,z)

Exit codes: 0 success / Nice, 1 NotNice or failed check, 2 Inconclusive,
64-70 errors (see errors.py).
"""

import argparse
import atexit
import sys
from typing import Optional, Sequence

from dotenv import load_dotenv

import observability
from config import COMMANDS, OUTPUT_FORMATS, RunConfig
from errors import ConfigError, FFExpandError
from graph import run_experiment
from writers import create_writer


# ============================================================================
# Argument Parsing
# ============================================================================


class CLIArgumentParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors raise ConfigError (exit 64)."""

    def error(self, message):
        raise ConfigError(f"{self.prog}: {message}")


def _add_common(parser: argparse.ArgumentParser, field: bool = True) -> None:
    if field:
        parser.add_argument("--field", dest="field_spec", help='Field spec "p" or "p^k".')
    parser.add_argument("--seed", type=int, help="Unsigned 64-bit seed (default 0).")
    parser.add_argument("--format", dest="output_format", choices=OUTPUT_FORMATS, help="Report format.")
    parser.add_argument("--output", help="Write the report to this file instead of stdout.")
    parser.add_argument("--config", help="JSON config file; command-line flags win.")
    parser.add_argument("--verbose", action="store_true", help="Progress lines on stderr.")


def _add_search(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--bound", type=int, help="Annihilator degree bound M.")
    parser.add_argument("--column-cap", dest="column_cap", type=int, help="Cap on annihilator unknowns.")
    parser.add_argument("--nvars", type=int, help="Number of variables (inferred from the text if omitted).")


def _add_expansion(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--sets", help="Set descriptors: full, uniform:S, interval:S, random:S:SEED or [..], ';'-separated.")
    parser.add_argument("--primes", help="Sweep every odd prime in LO-HI.")
    parser.add_argument("--max-deficiency", dest="max_deficiency", type=int, help="Fail when the deficiency exceeds T.")
    parser.add_argument("--witness", action="store_true", help="Also rebuild the incidence witness.")
    parser.add_argument("--no-early-exit", dest="early_exit", action="store_false",
                        help="Scan the whole product even after the image is full.")


def build_parser() -> argparse.ArgumentParser:
    parser = CLIArgumentParser(
        prog="ffexpand",
        description="Expansion, incidence and niceness experiments over finite fields.",
        argument_default=argparse.SUPPRESS,
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="{" + ",".join(COMMANDS) + "}")

    p = sub.add_parser("check-nice", help="Decide niceness of a polynomial.", argument_default=argparse.SUPPRESS)
    p.add_argument("--poly", help="Polynomial text.")
    _add_search(p)
    _add_common(p)

    p = sub.add_parser("incidence", help="Incidence bound trials.", argument_default=argparse.SUPPRESS)
    p.add_argument("--degree", type=int, help="Curve degree n (1 = lines).")
    p.add_argument("--points", help="Number of points, 'full', or 'mixed' to draw each trial from 1, q, q^2, 2q^2.")
    p.add_argument("--curves", help="Number of curves, 'full', or 'mixed' to draw each trial from 1, q, q^2, 2q^2.")
    p.add_argument("--trials", type=int, help="Random instances to run.")
    p.add_argument("--adversarial", action="store_true", help="Add the structured instances.")
    _add_common(p)

    p = sub.add_parser("expand", help="Image size and deficiency.", argument_default=argparse.SUPPRESS)
    p.add_argument("--poly", help="Polynomial text.")
    p.add_argument("--C", dest="C", type=float, help="Constant C of the size hypothesis.")
    p.add_argument("--epsilon", type=float, help="Exponent slack of the almost-strong hypothesis.")
    p.add_argument("--delta", type=float, help="Proportion of the positive-proportion hypothesis.")
    _add_search(p)
    _add_expansion(p)
    _add_common(p)

    p = sub.add_parser("counterexample", help="Diagonal quadric counterexample.", argument_default=argparse.SUPPRESS)
    p.add_argument("--prime", type=int, help="Odd prime p.")
    p.add_argument("--primes", help="Sweep every odd prime in LO-HI.")
    p.add_argument("--coeffs", help="Coefficients a,b,c.")
    _add_common(p, field=False)

    p = sub.add_parser("classify-quadratic", help="Classify ternary quadratics.", argument_default=argparse.SUPPRESS)
    p.add_argument("--poly", help="A single quadratic to classify.")
    p.add_argument("--exhaustive", action="store_true", help="All constant-free quadratics over the field.")
    p.add_argument("--random", dest="random_count", type=int, help="Number of random quadratics.")
    _add_search(p)
    _add_common(p)

    p = sub.add_parser("annihilator", help="Search for polynomial relations.", argument_default=argparse.SUPPRESS)
    p.add_argument("--polys", help='Polynomials separated by ";".')
    p.add_argument("--fibre", action="store_true", help="Relations Q_k(x_k, P_1, ..., P_n) = 0 instead.")
    _add_search(p)
    _add_common(p)

    p = sub.add_parser("conc-family", help="a*x^d + F(y,z)*x + G(y,z).", argument_default=argparse.SUPPRESS)
    p.add_argument("-a", dest="a", type=int, help="Leading coefficient a.")
    p.add_argument("-d", dest="d", type=int, help="Degree d in x.")
    p.add_argument("--F", dest="f_poly", help="F(y, z).")
    p.add_argument("--G", dest="g_poly", help="G(y, z).")
    p.add_argument("--bound", type=int, help="Annihilator degree bound for the independence check.")
    p.add_argument("--column-cap", dest="column_cap", type=int, help="Cap on annihilator unknowns.")
    _add_expansion(p)
    _add_common(p)

    return parser


def config_from_args(argv: Optional[Sequence[str]] = None) -> RunConfig:
    values = vars(build_parser().parse_args(argv))
    config_path = values.pop("config", None)
    return RunConfig.from_sources(values, config_path)


# ============================================================================
# Main Application
# ============================================================================


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main application entry point; returns the process exit code."""
    load_dotenv()

    try:
        config = config_from_args(argv)
    except FFExpandError as e:
        print(f"Error: {e}", file=sys.stderr)
        return e.exit_code

    observability.set_verbose(config.verbose)
    observability.init_langfuse()
    atexit.register(observability.shutdown)

    observability.log_progress("Graph", f"Starting {config.command}...")
    state = run_experiment(config)

    document = state["document"]
    try:
        create_writer(config.output_format).write(document, config.output, sys.stdout)
    except OSError as e:
        print(f"Error: cannot write report: {e}", file=sys.stderr)
        return 70

    if state.get("error"):
        print(f"Error: {state['error']}", file=sys.stderr)
    return state["exit_code"]


if __name__ == "__main__":
    sys.exit(main())
