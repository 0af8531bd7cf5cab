"""
Base Report Writer

Abstract base class for the output formats of a run document. The CLI works
with any backend through this interface without knowing the format details.
"""

import os
from abc import ABC, abstractmethod
from typing import Optional


class ReportWriter(ABC):
    """
    Renders the final run document (a JSON-compatible dict) to text.

    Documents carry schema_version, command, config, result, summary,
    warnings, wall_time_seconds and exit_code.
    """

    @property
    @abstractmethod
    def format_name(self) -> str:
        """Name of the output format (e.g. 'json', 'csv')."""
        pass

    @abstractmethod
    def render(self, document: dict) -> str:
        """Return the document as text in this format."""
        pass

    @staticmethod
    def summary_rows(document: dict) -> list[dict]:
        """The document summary as a list of flat rows."""
        summary = document.get("summary")
        if summary is None:
            return []
        if isinstance(summary, list):
            return summary
        return [summary]

    def write(self, document: dict, path: Optional[str] = None, stream=None) -> str:
        """Render the document to a file, or to the given stream when no path is set."""
        text = self.render(document)
        if path:
            directory = os.path.dirname(path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            with open(path, "w", newline="") as f:
                f.write(text)
        elif stream is not None:
            stream.write(text)
        return text


def create_writer(fmt: str) -> ReportWriter:
    """
    Factory function to create the writer for an output format.

    Args:
        fmt: "json", "csv" or "human"

    Returns:
        A ReportWriter implementation instance
    """
    from writers.csv_writer import CSVWriter
    from writers.human_writer import HumanWriter
    from writers.json_writer import JSONWriter

    writers = {
        "json": JSONWriter,
        "csv": CSVWriter,
        "human": HumanWriter,
    }

    if fmt not in writers:
        from errors import ConfigError
        raise ConfigError(f"Unknown format: {fmt}. Available: {list(writers.keys())}")

    return writers[fmt]()
