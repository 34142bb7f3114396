"""Command-line surface: ``python -m app.cli check samples/two-object-multicat.json``."""
import json
import logging
import sys
from functools import wraps
from pathlib import Path
from typing import Optional

import click
from pydantic import ValidationError

from . import commands
from .config import RunConfig, configure_logging
from .core.errors import EngineError, ParseError

logger = logging.getLogger(__name__)


def run_options(fn):
    """The flags every command shares."""

    @click.option("--depth", type=int, default=None, help="Enumeration depth for lazy data (≥ 1).")
    @click.option("--samples", type=int, default=None, help="Number of sampled cases per suite.")
    @click.option("--seed", type=int, default=None, help="Seed for the sampled cases.")
    @click.option("--report", type=click.Choice(["text", "json"]), default=None, help="Report format.")
    @click.option("--out", type=click.Path(dir_okay=False), default=None, help="Where to write an output structure.")
    @click.option("--verbose", "-v", is_flag=True, help="Log at DEBUG level.")
    @wraps(fn)
    def wrapper(*args, depth, samples, seed, report, out, verbose, **kwargs):
        configure_logging("DEBUG" if verbose else None)
        flags = {"depth": depth, "samples": samples, "seed": seed, "report": report, "out": out}
        return fn(*args, flags=flags, **kwargs)

    return wrapper


def _config(command: str, flags: dict, inputs=()) -> RunConfig:
    try:
        return RunConfig.from_settings(command=command, inputs=[str(p) for p in inputs], **flags)
    except ValidationError as exc:
        first = exc.errors()[0]
        option = str(first["loc"][0]) if first["loc"] else "?"
        raise ParseError(f"invalid option {option}: {first['msg']}", {"option": option}) from None


def _run(command: str, flags: dict, inputs=(), **options) -> None:
    try:
        config = _config(command, flags, inputs)
        result = commands.run(config, **options)
    except EngineError as exc:
        click.echo(f"error: {exc.message}", err=True)
        if exc.witness:
            click.echo(f"witness: {json.dumps(exc.witness, sort_keys=True, ensure_ascii=False, default=str)}", err=True)
        sys.exit(exc.exit_code)
    click.echo(result.render(config.report))
    output = result.output_json()
    if output is not None and config.out:
        Path(config.out).write_text(output + "\n", encoding="utf-8")
        logger.info("wrote %s", config.out)
    sys.exit(result.exit_code)


@click.group()
def cli():
    """Check equipment laws, algebras over monads and their change of base."""


@cli.command()
@click.argument("inputs", nargs=-1, type=click.Path(dir_okay=False))
@run_options
def check(inputs, flags):
    """Run the law checker matching each input's kind."""
    _run("check", flags, inputs)


@cli.command()
@click.option("--morphism", default="identity", show_default=True, help="identity, unit, or an operad map file.")
@click.argument("input", type=click.Path(dir_okay=False))
@run_options
def cob(morphism: str, input: str, flags):
    """Change of base along a monad morphism."""
    _run("cob", flags, (input,), morphism=morphism)


@cli.command()
@click.argument("input", type=click.Path(dir_okay=False))
@run_options
def embed(input: str, flags):
    """Send an enriched structure to the internal structure it determines."""
    _run("embed", flags, (input,))


@cli.command()
@click.argument("input", type=click.Path(dir_okay=False))
@run_options
def enrich(input: str, flags):
    """Read an enriched structure off an internal one."""
    _run("enrich", flags, (input,))


@cli.command()
@click.argument("input", type=click.Path(dir_okay=False))
@run_options
def mate(input: str, flags):
    """Mate round trips on sampled cells of an equipment."""
    _run("mate", flags, (input,))


@cli.command()
@click.option("--monad", required=True, help="free_monoid, free_category, identity, ...")
@click.option("--backend", default="fingrph", show_default=True)
@click.option("--criteria", is_flag=True, help="Also compare the equivalent criteria.")
@click.option("--set-bound", type=int, default=None, help="Largest set size scanned (capped at the depth).")
@run_options
def discreteness(monad: str, backend: str, criteria: bool, set_bound: Optional[int], flags):
    """Fibrewise discreteness verdict with its witness."""
    _run("discreteness", {**flags, "set_bound": set_bound}, monad=monad, backend=backend, criteria=criteria)


def main(argv: Optional[list] = None) -> None:
    cli.main(args=argv, prog_name="engine")


if __name__ == "__main__":
    main()
