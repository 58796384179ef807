"""
Comandos del zoo: list, sample, check y emit
"""

from pathlib import Path
from typing import Optional

import click

from commands.common import (
    EXIT_MISMATCH, bound_option, emit, export_sample, format_option, handle_errors,
    make_options, render_sample, render_zoo_check, steps_option,
)
from models.RelkitModels import Formalism, OutputFormat
from patterns.formalism_factory import FormalismFactory
from services.zoo_service import zoo_check, zoo_list, zoo_sample, zoo_service


@click.group("zoo")
def zoo():
    """Registered relations with their brute-force oracles."""


@zoo.command("list")
@format_option
@handle_errors
def zoo_list_command(output_format: Optional[str]):
    """List the registered entries."""
    opts = make_options(output_format=output_format)
    entries = zoo_list()
    if opts.output_format == OutputFormat.STRUCTURED:
        click.echo("[")
        click.echo(",\n".join(e.model_dump_json(indent=2) for e in entries))
        click.echo("]")
        return
    for e in entries:
        reps = ", ".join(e.representations) or "decider only"
        click.echo(f"{e.name}\t{e.locus}\t[{reps}]")


@zoo.command("sample")
@click.argument("name")
@bound_option()
@click.option("--first", type=click.Path(exists=True, dir_okay=False), help="NFA restricting first components.")
@click.option("--second", type=click.Path(exists=True, dir_okay=False), help="NFA restricting second components.")
@format_option
@handle_errors
def zoo_sample_command(name, bound, first, second, output_format):
    """Print the oracle's bounded sample of NAME."""
    opts = make_options(bound=bound, output_format=output_format)
    restrict = [FormalismFactory.load(p, Formalism.NFA) if p else None for p in (first, second)]
    sample = zoo_sample(name, opts.bound, *restrict)
    emit(export_sample(sample), opts.output_format, render_sample(sample))


@zoo.command("check")
@click.argument("name")
@bound_option()
@steps_option
@format_option
@handle_errors
def zoo_check_command(name, bound, steps, output_format):
    """Compare every representation of NAME against its oracle."""
    opts = make_options(output_format=output_format)
    report = zoo_check(name, bound, steps)
    emit(report, opts.output_format, render_zoo_check(report))
    if not report.verified:
        raise click.exceptions.Exit(EXIT_MISMATCH)


@zoo.command("emit")
@click.argument("name")
@click.argument("representation")
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None)
@handle_errors
def zoo_emit_command(name, representation, output):
    """Write the grammar or automaton file of a representation."""
    obj = zoo_service.representation(name, representation)
    text = FormalismFactory.emit(obj)
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)
