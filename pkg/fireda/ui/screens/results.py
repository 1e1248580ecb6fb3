"""Results screen listing cycle metrics or calibration outcomes."""

from pathlib import Path
from typing import Any

from textual.app import ComposeResult
from textual.containers import Container, VerticalScroll
from textual.screen import Screen
from textual.widgets import DataTable, Footer, Header, Label, Static

from fireda.storage import tables

WAVE_FIELDS = ("Tmax", "width", "speed")


def _fmt(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return "-" if value is None else str(value)


def calibration_rows(report: dict[str, Any]) -> list[tuple[str, str]]:
    """Flatten a calibration report into (quantity, value) rows."""
    rows = [
        ("status", _fmt(report.get("status"))),
        ("identified B (K)", _fmt(report.get("identified_B"))),
        ("identified C (1/K)", _fmt(report.get("identified_C"))),
        ("identified A (K/s)", _fmt(report.get("identified_A"))),
    ]
    nondim = report.get("nondim") or {}
    rows.append(("lambda", _fmt(nondim.get("lam"))))
    rows.append(("beta", _fmt(nondim.get("beta"))))
    for source in ("measured", "target"):
        wave = report.get(source) or {}
        for name in WAVE_FIELDS:
            rows.append((f"{source} {name}", _fmt(wave.get(name))))
    rows.append(("displacement (m)", _fmt(report.get("displacement"))))
    if report.get("detail"):
        rows.append(("detail", str(report["detail"])))
    return rows


class ResultsScreen(Screen[None]):
    """Tabular view of an experiment output directory."""

    CSS = """
    #title {
        text-style: bold;
        color: $accent;
        margin: 1;
    }

    #table-container {
        width: 90%;
        height: auto;
        margin: 1;
        border: solid $primary;
        padding: 1;
    }

    #detail {
        margin: 1;
        color: $text-muted;
    }
    """

    BINDINGS = [
        ("r", "refresh", "Refresh"),
        ("escape", "app.quit", "Quit"),
    ]

    def __init__(self, directory: Path) -> None:
        """Initialize results screen.

        Args:
            directory: Experiment output directory
        """
        super().__init__()
        self.directory = directory

    def compose(self) -> ComposeResult:
        """Compose results screen.

        Yields:
            Widgets for the screen
        """
        yield Header()
        with VerticalScroll():
            yield Label(f"Results in {self.directory}", id="title")
            with Container(id="table-container"):
                yield DataTable(id="results", cursor_type="row")
            yield Static("", id="detail")
        yield Footer()

    def on_mount(self) -> None:
        """Load tables on mount."""
        self.action_refresh()

    def action_refresh(self) -> None:
        """Reload the output files."""
        table = self.query_one("#results", DataTable)
        table.clear(columns=True)
        detail = self.query_one("#detail", Static)
        metrics = self.directory / tables.METRICS_FILE
        report = self.directory / tables.CALIBRATION_REPORT_FILE
        if metrics.exists():
            header, rows = tables.read_table(metrics)
            table.add_columns(*header)
            for row in rows:
                table.add_row(*(_fmt(float(v)) if "." in v or "e" in v else v for v in row))
            detail.update(f"{len(rows)} assimilation cycle(s)")
        elif report.exists():
            table.add_columns("quantity", "value")
            for row in calibration_rows(tables.read_json(report)):
                table.add_row(*row)
            detail.update("Calibration report")
        else:
            detail.update("No metrics.csv or calibration_report.json found.")

    def on_data_table_row_selected(self, event: DataTable.RowSelected) -> None:
        """Show the selected row in full.

        Args:
            event: Row selected event
        """
        table = self.query_one("#results", DataTable)
        values = table.get_row(event.row_key)
        labels = [column.label.plain for column in table.columns.values()]
        self.query_one("#detail", Static).update(
            "  ".join(f"{label}={value}" for label, value in zip(labels, values, strict=False))
        )
