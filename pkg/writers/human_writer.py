"""
Human Writer

Indented key/value rendering for reading at a terminal.
"""

from writers.base import ReportWriter


class HumanWriter(ReportWriter):

    @property
    def format_name(self) -> str:
        return "human"

    def render(self, document: dict) -> str:
        lines = [
            "=" * 60,
            f"ffexpand {document.get('command', '')}  (exit code {document.get('exit_code')})",
            "=" * 60,
        ]
        for row in self.summary_rows(document):
            lines.append("  ".join(f"{k}={self._scalar(v)}" for k, v in row.items()))
        for warning in document.get("warnings") or []:
            lines.append(f"warning: {warning}")
        if document.get("error"):
            lines.append(f"error: {document['error']}")
        lines.append("-" * 60)
        self._render(document.get("result"), 0, lines)
        return "\n".join(lines) + "\n"

    def _render(self, value, depth: int, lines: list[str]) -> None:
        pad = "  " * depth
        if isinstance(value, dict):
            if set(value) == {"num", "den"}:
                lines.append(f"{pad}{self._scalar(value)}")
                return
            for key, item in value.items():
                if isinstance(item, (dict, list)) and not self._is_leaf(item):
                    lines.append(f"{pad}{key}:")
                    self._render(item, depth + 1, lines)
                else:
                    lines.append(f"{pad}{key}: {self._scalar(item)}")
        elif isinstance(value, list):
            for item in value:
                if isinstance(item, (dict, list)) and not self._is_leaf(item):
                    lines.append(f"{pad}-")
                    self._render(item, depth + 1, lines)
                else:
                    lines.append(f"{pad}- {self._scalar(item)}")
        elif value is not None:
            lines.append(f"{pad}{self._scalar(value)}")

    @staticmethod
    def _is_leaf(value) -> bool:
        if isinstance(value, dict):
            return set(value) == {"num", "den"} or not value
        return all(not isinstance(v, (dict, list)) for v in value) and len(value) <= 12

    @staticmethod
    def _scalar(value) -> str:
        if isinstance(value, dict) and set(value) == {"num", "den"}:
            return f"{value['num']}/{value['den']}" if value["den"] != 1 else str(value["num"])
        if isinstance(value, list):
            return "[" + ", ".join(str(v) for v in value) + "]"
        if isinstance(value, float):
            return f"{value:.6g}"
        return str(value)
