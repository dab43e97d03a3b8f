"""rbmvec CLI - Main application."""

import typer

from rbmvec.commands import (
    adapt_extract,
    cluster,
    evaluate_command,
    normalize,
    pipeline,
    synth,
    train_urbm_command,
)
from rbmvec.ui import setup_logging

app = typer.Typer(
    help="🧩 RBM-vector clustering - adapted RBM supervectors + agglomerative clustering",
    pretty_exceptions_show_locals=False,
    no_args_is_help=True,
)


@app.callback()
def main(
    verbose: int = typer.Option(0, "--verbose", "-v", count=True, help="More logging (-v info, -vv debug)"),
):
    """Cluster items by the RBMs adapted to their frames."""
    setup_logging(verbose)


app.command(name="synth")(synth)
app.command(name="normalize")(normalize)
app.command(name="train-urbm")(train_urbm_command)
app.command(name="adapt-extract")(adapt_extract)
app.command(name="cluster")(cluster)
app.command(name="evaluate")(evaluate_command)
app.command(name="pipeline")(pipeline)


if __name__ == "__main__":
    app()
