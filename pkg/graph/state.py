"""
State definition for the ffexpand experiment graph.
"""

from typing import Any, TypedDict

from algebra.gf import FieldCtx
from config import RunConfig


class ExperimentState(TypedDict, total=False):
    """
    State object that flows through the LangGraph.

    All fields are optional (total=False) to allow incremental updates.
    """
    # Input
    config: RunConfig

    # Preparation
    ctx: FieldCtx | None
    workers: int
    started_at: float

    # Execution
    result: dict[str, Any] | None
    summary: dict[str, Any] | list[dict[str, Any]] | None
    warnings: list[str]
    exit_code: int | None

    # Output
    document: dict[str, Any] | None

    # Metadata
    error: str | None
