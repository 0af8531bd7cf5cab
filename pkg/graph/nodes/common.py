"""
Helpers shared by the executor nodes.
"""

import sys
import warnings
from contextlib import contextmanager
from typing import Iterator, Optional

from algebra.gf import FieldCtx
from algebra.mvpoly import MvPoly
from algebra.poly_parser import infer_nvars, parse
from errors import ConfigError, FFExpandError, PreconditionWarning
from graph.state import ExperimentState
from observability import log_progress


def failed(state: ExperimentState, node: str, error: Exception) -> ExperimentState:
    """Record an error and its exit code; unexpected exceptions map to 70."""
    exit_code = error.exit_code if isinstance(error, FFExpandError) else 70
    log_progress(node, f"failed: {error}")
    return {**state, "error": str(error), "exit_code": exit_code}


def require(value, flag: str):
    if value is None or (isinstance(value, str) and not value.strip()):
        raise ConfigError(f"{flag} is required for this command")
    return value


def parse_poly(text: str, ctx: FieldCtx, nvars: Optional[int] = None) -> MvPoly:
    """Parse with the given arity, else the arity inferred from the text."""
    return parse(text, nvars if nvars is not None else infer_nvars(text), ctx)


def parse_in_yz(text: str, ctx: FieldCtx) -> MvPoly:
    """Parse a polynomial in (y, z); x must not occur."""
    return parse(text, 3, ctx).drop_variable(0)


@contextmanager
def collect_warnings(sink: list[str]) -> Iterator[None]:
    """Record PreconditionWarnings into `sink` and echo them to stderr."""
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", PreconditionWarning)
        yield
    for w in caught:
        if issubclass(w.category, PreconditionWarning):
            sink.append(str(w.message))
            print(f"[Warning] {w.message}", file=sys.stderr, flush=True)
        else:
            warnings.warn_explicit(w.message, w.category, w.filename, w.lineno)
