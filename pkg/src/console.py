"""
MatchEnt Console

Tagged status output on stderr. stdout is reserved for data.
"""

from rich.console import Console
from rich.markup import escape
from rich.table import Table

from config import get_config

console = Console(stderr=True, highlight=False)


def log(tag: str, message: str):
    console.print(f"[bold cyan]\\[{tag}][/] {escape(message)}")


def warn(tag: str, message: str):
    console.print(f"[bold yellow]\\[{tag}][/] {escape(message)}")


def debug(tag: str, message: str):
    if get_config().get("debug", False):
        console.print(f"[dim]\\[DEBUG] \\[{tag}] {escape(message)}[/]")


def summary_table(title: str, rows: list, columns: list):
    """Print a rich table of rows (each a list matching columns)."""
    table = Table(title=title)
    for col in columns:
        table.add_column(col)
    for row in rows:
        table.add_row(*[str(cell) for cell in row])
    console.print(table)
