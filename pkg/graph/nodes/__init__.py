"""
LangGraph node implementations.
"""

from .prepare_run import prepare_run
from .niceness_executor import execute_check_nice
from .incidence_executor import execute_incidence
from .expansion_executor import execute_expansion
from .structure_executor import execute_structure
from .finalize_report import finalize_report

__all__ = [
    "prepare_run",
    "execute_check_nice",
    "execute_incidence",
    "execute_expansion",
    "execute_structure",
    "finalize_report",
]
