"""Console helpers: spinners, styled messages, result tables and logging."""

import logging
import time
from typing import Iterable, Optional, Sequence

from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape
from rich.panel import Panel
from rich.table import Table
from rich.text import Text

from rbmvec.errors import RbmVecError

console = Console()
err_console = Console(stderr=True)


def setup_logging(verbosity: int = 0) -> logging.Logger:
    """Route the ``rbmvec`` logger through rich on stderr."""
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG

    logger = logging.getLogger("rbmvec")
    logger.setLevel(level)
    if not any(isinstance(h, RichHandler) for h in logger.handlers):
        handler = RichHandler(console=err_console, show_path=False, rich_tracebacks=False)
        handler.setFormatter(logging.Formatter("%(message)s"))
        logger.addHandler(handler)
    logger.propagate = False
    return logger


class Spinner:
    """Custom spinner wrapper for long-running stages."""

    def __init__(self, message: str = "Working", style: str = "cyan"):
        self.message = message
        self.style = style
        self._start_time: Optional[float] = None

    def __enter__(self):
        from rich.live import Live
        from rich.spinner import Spinner as RichSpinner

        self.spinner = RichSpinner("dots", text=self.message, style=self.style)
        self.live = Live(self.spinner, console=console, refresh_per_second=12.5, transient=True)
        self.live.__enter__()
        self._start_time = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.live.__exit__(exc_type, exc_val, exc_tb)

    @property
    def elapsed(self) -> float:
        if self._start_time is None:
            return 0.0
        return time.perf_counter() - self._start_time

    def update(self, message: str):
        """Update spinner message."""
        self.spinner.text = message


class ErrorHandler:
    """Centralized error rendering and exit-code mapping."""

    HINTS = {
        2: "💡 Check the command-line flags and the --config file",
        3: "💡 Check the input files: paths, headers and dimensions",
        4: "💡 The numbers went degenerate: check for constant or all-zero vectors",
    }

    @staticmethod
    def exit_code_for(exc: BaseException) -> int:
        if isinstance(exc, RbmVecError):
            return exc.exit_code
        if isinstance(exc, ValidationError):
            return 2
        if isinstance(exc, OSError):
            return 3
        return 1

    @staticmethod
    def describe(exc: BaseException) -> str:
        if isinstance(exc, OSError) and exc.filename is not None:
            reason = exc.strerror or exc.__class__.__name__
            return f"[io] {reason}: {exc.filename}"
        return str(exc)

    @staticmethod
    def handle_exception(exc: BaseException, context: str = "") -> int:
        """Print the error with context and return the exit code to use."""
        code = ErrorHandler.exit_code_for(exc)
        err_console.print(Panel(f"❌ {escape(context)}", style="red", border_style="red"))
        # plain Text, unwrapped: messages carry "[module]" prefixes and long paths
        err_console.print(Text(ErrorHandler.describe(exc), style="red"), soft_wrap=True)
        hint = ErrorHandler.HINTS.get(code)
        if hint:
            err_console.print(hint)
        return code


def print_success(message: str, icon: str = "✓") -> None:
    """Print success message."""
    console.print(f"[green]{icon}[/green] [bold green]{message}[/bold green]")


def print_info(message: str, icon: str = "ℹ") -> None:
    """Print info message."""
    console.print(f"[cyan]{icon}[/cyan] [bold cyan]{message}[/bold cyan]")


def print_warning(message: str, icon: str = "⚠") -> None:
    """Print warning message."""
    console.print(f"[yellow]{icon}[/yellow] [bold yellow]{message}[/bold yellow]")


def print_header(title: str, subtitle: str = "") -> None:
    """Print header with styling."""
    console.print()
    console.print(Panel.fit(
        f"[bold cyan]{title}[/bold cyan]\n[dim]{subtitle}[/dim]" if subtitle else f"[bold cyan]{title}[/bold cyan]",
        border_style="cyan",
        padding=(1, 2),
    ))
    console.print()


def print_section(title: str) -> None:
    """Print section divider."""
    console.print(f"\n[bold cyan]▶ {title}[/bold cyan]")
    console.print("[dim]" + "─" * 60 + "[/dim]")


def create_score_table(
    rows: Iterable[Sequence[object]],
    columns: Sequence[str],
    title: str = "Scores",
) -> Table:
    """Create a table of scores; floats are shown with four decimals."""
    table = Table(title=title, show_header=True, header_style="bold cyan")
    styles = ["cyan", "magenta", "green", "green", "yellow", "yellow", "dim"]
    for i, name in enumerate(columns):
        table.add_column(name, style=styles[i % len(styles)])

    for row in rows:
        table.add_row(*(f"{v:.4f}" if isinstance(v, float) else str(v) for v in row))

    return table
