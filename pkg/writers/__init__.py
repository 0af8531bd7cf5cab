"""
Report writers.

Every output format is a ReportWriter backend; create_writer picks one by name.
"""

from .base import ReportWriter, create_writer

__all__ = ["ReportWriter", "create_writer"]
