"""
Table service: result rows to versioned CSV via pandas
"""

from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd

from .. import __version__

SCHEMA_VERSION = 1


class TableService:
    """Builds result tables and renders them as CSV"""

    def __init__(self):
        self.float_format = "%.17g"
        self.schema_version = SCHEMA_VERSION

    def to_frame(self, rows: List[Dict[str, Any]], columns: Sequence[str]) -> pd.DataFrame:
        """Frame with a fixed column order; missing cells stay empty"""
        return pd.DataFrame(rows, columns=list(columns))

    def header(self, command: str, config_hash: str) -> str:
        return f"# bqm-csv v{self.schema_version} tool=banach-qm/{__version__} command={command} config={config_hash}\n"

    def render_csv(self, frame: pd.DataFrame, command: str, config_hash: str,
                   footer: Optional[pd.DataFrame] = None) -> str:
        """
        CSV text: header comment, the table, then an optional footer table
        with its own column line.
        """
        text = self.header(command, config_hash)
        text += frame.to_csv(index=False, float_format=self.float_format, lineterminator="\n")
        if footer is not None:
            text += footer.to_csv(index=False, float_format=self.float_format, lineterminator="\n")
        return text

    def write(self, text: str, path: Optional[str]) -> Optional[Path]:
        """Write to path (UTF-8) or return None when the caller prints to stdout"""
        if path is None:
            return None
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text, encoding="utf-8")
        return target


# Global instance
table_service = TableService()
