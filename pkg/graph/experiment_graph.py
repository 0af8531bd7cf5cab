"""
Experiment Graph Assembly

LangGraph state machine that takes one CLI run from configuration to the
final report document.
"""

from langgraph.graph import END, StateGraph

from config import RunConfig
from graph.nodes.expansion_executor import execute_expansion
from graph.nodes.finalize_report import finalize_report
from graph.nodes.incidence_executor import execute_incidence
from graph.nodes.niceness_executor import execute_check_nice
from graph.nodes.prepare_run import prepare_run
from graph.nodes.structure_executor import execute_structure
from graph.state import ExperimentState
from observability import log_node_execution, trace_experiment


# Subcommand -> executor node
ROUTES = {
    "check-nice": "execute_check_nice",
    "incidence": "execute_incidence",
    "expand": "execute_expansion",
    "counterexample": "execute_expansion",
    "conc-family": "execute_expansion",
    "classify-quadratic": "execute_structure",
    "annihilator": "execute_structure",
}

NODES = {
    "prepare_run": prepare_run,
    "execute_check_nice": execute_check_nice,
    "execute_incidence": execute_incidence,
    "execute_expansion": execute_expansion,
    "execute_structure": execute_structure,
    "finalize_report": finalize_report,
}


def _logged(name: str, node):
    """Wrap a node so every execution is logged."""
    def run(state: ExperimentState) -> ExperimentState:
        result = node(state)
        log_node_execution(name, state, result)
        return result
    run.__name__ = node.__name__
    return run


def _route_command(state: ExperimentState) -> str:
    """Routing function: failed preparation goes straight to the finalizer."""
    if state.get("error"):
        return "failed"
    return state["config"].command


def create_experiment_graph():
    """
    Create and compile the experiment graph.

    Graph flow:
    1. prepare_run: validate config, build the field, fix the worker count
    2. route on the subcommand (or skip to 4 on error)
    3. one executor node
    4. finalize_report
    5. Done

    Returns:
        Compiled StateGraph ready for invocation
    """
    builder = StateGraph(ExperimentState)

    for name, node in NODES.items():
        builder.add_node(name, _logged(name, node))

    builder.set_entry_point("prepare_run")

    builder.add_conditional_edges(
        "prepare_run",
        _route_command,
        {**ROUTES, "failed": "finalize_report"},
    )

    for executor in sorted(set(ROUTES.values())):
        builder.add_edge(executor, "finalize_report")
    builder.add_edge("finalize_report", END)

    return builder.compile()


@trace_experiment
def run_experiment(config: RunConfig, graph=None) -> ExperimentState:
    """Run one configuration through the graph and return the final state."""
    graph = graph or create_experiment_graph()
    return graph.invoke({"config": config})
