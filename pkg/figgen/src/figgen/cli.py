"""figgen command line: render one figure spec."""

import sys

import click

from .errors import FiggenError
from .render import render
from .spec import load_spec


@click.command()
@click.option("--spec", "spec_path", required=True, type=click.Path(),
              help="JSON figure spec (see package docs for the format).")
def main(spec_path):
    """Render a multi-panel figure from experiment CSV files."""
    try:
        out = render(load_spec(spec_path))
    except FiggenError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    click.echo(str(out))


if __name__ == "__main__":
    main()
