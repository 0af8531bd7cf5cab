"""Tracing hooks with and without a LangFuse client."""

import pytest

import observability


class FakeTrace:
    def __init__(self):
        self.updates = []

    def update(self, **kwargs):
        self.updates.append(kwargs)


class FakeLangfuse:
    def __init__(self, **kwargs):
        self.kwargs = kwargs
        self.traces = []
        self.spans = []
        self.scores = []
        self.flushes = 0
        self.closed = False

    def trace(self, **kwargs):
        trace = FakeTrace()
        self.traces.append((kwargs, trace))
        return trace

    def span(self, **kwargs):
        self.spans.append(kwargs)

    def score(self, **kwargs):
        self.scores.append(kwargs)

    def flush(self):
        self.flushes += 1

    def shutdown(self):
        self.closed = True


@pytest.fixture
def fresh(monkeypatch):
    monkeypatch.setattr(observability, "_client", None)
    monkeypatch.setattr(observability, "_client_checked", False)
    monkeypatch.setattr(observability, "_verbose", False)
    for key in ("LANGFUSE_PUBLIC_KEY", "LANGFUSE_SECRET_KEY", "FFEXPAND_VERBOSE"):
        monkeypatch.delenv(key, raising=False)
    return monkeypatch


@pytest.fixture
def traced(fresh):
    fresh.setattr(observability, "Langfuse", FakeLangfuse)
    fresh.setenv("LANGFUSE_PUBLIC_KEY", "pk")
    fresh.setenv("LANGFUSE_SECRET_KEY", "sk")
    assert observability.init_langfuse()
    return observability._client


def test_without_keys_everything_is_a_no_op(fresh):
    fresh.setattr(observability, "Langfuse", FakeLangfuse)
    assert not observability.init_langfuse()

    @observability.trace_experiment
    def run():
        return {"exit_code": 0}

    assert run() == {"exit_code": 0}
    observability.log_node_execution("prepare_run", {}, {})
    observability.log_score("max_deficiency", 0.5)
    observability.shutdown()


def test_spans_and_scores_reach_the_client(traced):
    observability.log_node_execution("execute_incidence", {"seed": 3, "result": [1] * 1000}, {"exit_code": 0})
    observability.log_score("max_ratio", 0.75, comment="degree 2")
    assert traced.spans == [
        {"name": "node:execute_incidence", "input": {"seed": 3}, "output": {"exit_code": 0}}
    ]
    assert traced.scores == [{"name": "max_ratio", "value": 0.75, "comment": "degree 2"}]


def test_trace_records_exit_code(traced):
    @observability.trace_experiment
    def run_experiment():
        return {"exit_code": 1}

    run_experiment()
    (kwargs, trace), = traced.traces
    assert kwargs["name"] == "run_experiment"
    assert trace.updates[-1]["output"] == {"status": "failed", "exit_code": 1}


def test_trace_records_errors_and_reraises(traced):
    @observability.trace_experiment
    def broken():
        raise RuntimeError("boom")

    with pytest.raises(RuntimeError):
        broken()
    _, trace = traced.traces[0]
    assert trace.updates == [{"output": {"status": "error", "error": "boom"}}]


def test_shutdown_closes_the_client(traced):
    observability.shutdown()
    assert traced.closed
    assert observability._client is None


def test_progress_lines_only_when_verbose(fresh, capsys):
    observability.log_progress("Graph", "quiet")
    observability.set_verbose(True)
    observability.log_progress("Graph", "loud")
    assert capsys.readouterr().err == "[Graph] loud\n"
