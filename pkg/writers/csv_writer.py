"""
CSV Writer

One row per summary entry (one per prime in sweeps, one per run otherwise).
Columns are the union of the row keys in first-seen order; nested values are
written as compact JSON.
"""

import csv
import io
import json

from writers.base import ReportWriter


class CSVWriter(ReportWriter):

    @property
    def format_name(self) -> str:
        return "csv"

    def render(self, document: dict) -> str:
        rows = self.summary_rows(document)
        columns: list[str] = []
        for row in rows:
            for key in row:
                if key not in columns:
                    columns.append(key)

        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: self._cell(row.get(k)) for k in columns})
        return buffer.getvalue()

    @staticmethod
    def _cell(value):
        if isinstance(value, (dict, list)):
            return json.dumps(value, sort_keys=True, separators=(",", ":"))
        if value is None:
            return ""
        return value
