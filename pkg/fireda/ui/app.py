"""Textual report browser for experiment output directories."""

from pathlib import Path

from textual.app import App, ComposeResult
from textual.widgets import Footer, Header

from fireda import __version__
from fireda.ui.screens.results import ResultsScreen


class ReportApp(App[None]):
    """Browse metrics.csv and calibration_report.json of one output directory."""

    CSS = """
    Screen {
        background: $surface;
    }

    Header {
        background: $primary;
        color: $text;
        text-style: bold;
    }

    Footer {
        background: $primary-darken-1;
    }
    """

    BINDINGS = [
        ("q", "quit", "Quit"),
    ]

    TITLE = f"fireda v{__version__}"
    SUB_TITLE = "Experiment Report"

    def __init__(self, directory: str | Path) -> None:
        """Initialize application.

        Args:
            directory: Experiment output directory
        """
        super().__init__()
        self.directory = Path(directory)

    def on_mount(self) -> None:
        """Show the results screen."""
        self.push_screen(ResultsScreen(self.directory))

    def compose(self) -> ComposeResult:
        """Compose app layout.

        Yields:
            App widgets
        """
        yield Header()
        yield Footer()
