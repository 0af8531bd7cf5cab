"""
Run Tracing and Progress Output

Each run becomes one LangFuse trace holding a span per graph node and the
headline scores. Tracing switches on only when the langfuse package is
importable and LANGFUSE_PUBLIC_KEY / LANGFUSE_SECRET_KEY are set; otherwise
only the stderr progress lines remain.
"""

import functools
import os
import sys
from typing import Any, Callable, Optional

from config import verbose_from_env

try:
    from langfuse import Langfuse
except ImportError:
    Langfuse = None


_client: Optional[Any] = None
_client_checked = False
_verbose = False


def set_verbose(flag: bool) -> None:
    global _verbose
    _verbose = bool(flag)


def log_progress(tag: str, message: str) -> None:
    if _verbose or verbose_from_env():
        print(f"[{tag}] {message}", file=sys.stderr, flush=True)


def init_langfuse() -> bool:
    """Create the client once; False when tracing stays off."""
    global _client, _client_checked
    if _client_checked:
        return _client is not None
    _client_checked = True

    public_key = os.getenv("LANGFUSE_PUBLIC_KEY")
    secret_key = os.getenv("LANGFUSE_SECRET_KEY")
    if Langfuse is None or not (public_key and secret_key):
        log_progress("Trace", "tracing off (langfuse missing or keys unset)")
        return False
    host = os.getenv("LANGFUSE_HOST", "https://cloud.langfuse.com")
    try:
        _client = Langfuse(public_key=public_key, secret_key=secret_key, host=host)
    except Exception as e:
        log_progress("Trace", f"tracing off, client setup failed: {e}")
        return False
    log_progress("Trace", f"tracing to {host}")
    return True


def _send(what: str, call: Callable[[Any], None]) -> None:
    if not init_langfuse():
        return
    try:
        call(_client)
        _client.flush()
    except Exception as e:
        log_progress("Trace", f"could not send {what}: {e}")


def trace_experiment(func: Callable) -> Callable:
    """Run func inside a trace and record the exit code of its final state."""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        if not init_langfuse():
            return func(*args, **kwargs)
        trace = _client.trace(name=func.__name__)
        try:
            state = func(*args, **kwargs)
        except Exception as e:
            trace.update(output={"status": "error", "error": str(e)})
            raise
        finally:
            _client.flush()
        exit_code = state.get("exit_code") if isinstance(state, dict) else None
        trace.update(output={"status": "ok" if exit_code in (0, None) else "failed", "exit_code": exit_code})
        _client.flush()
        return state

    return wrapper


def _summary(state: dict) -> dict:
    # report payloads stay out of spans
    return {
        key: value if isinstance(value, (str, int, float, bool, type(None))) else str(value)[:200]
        for key, value in state.items()
        if key not in ("result", "document")
    }


def log_node_execution(node_name: str, state: dict, result: dict) -> None:
    error = result.get("error")
    log_progress("Graph", f"{node_name} finished" + (f" with error: {error}" if error else ""))
    _send(
        f"span for {node_name}",
        lambda client: client.span(name=f"node:{node_name}", input=_summary(state), output=_summary(result)),
    )


def log_score(name: str, value: float, comment: Optional[str] = None) -> None:
    """Attach a headline number (deficiency, deviation ratio, agreement rate)."""
    _send(f"score {name}", lambda client: client.score(name=name, value=float(value), comment=comment))


def shutdown() -> None:
    global _client
    if _client is None:
        return
    try:
        _client.flush()
        _client.shutdown()
    except Exception:
        pass
    _client = None
