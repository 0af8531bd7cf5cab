"""
LangGraph-based experiment orchestration package.
"""

from .state import ExperimentState
from .experiment_graph import create_experiment_graph, run_experiment

__all__ = ["ExperimentState", "create_experiment_graph", "run_experiment"]
