"""
JSON Writer

Canonical report format: sorted keys and fixed indentation, so identical
documents render to identical bytes.
"""

import json

from writers.base import ReportWriter


class JSONWriter(ReportWriter):

    @property
    def format_name(self) -> str:
        return "json"

    def render(self, document: dict) -> str:
        return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
