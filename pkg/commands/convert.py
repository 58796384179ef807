"""
Comando convert: ejecuta una construcción sobre un archivo y escribe el resultado
solo si la verificación acotada lo respalda.
"""

from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Tuple

import click

from commands.common import (
    EXIT_MISMATCH, bound_option, emit, format_option, formalism_option, handle_errors,
    make_options, render_construction, steps_option, viewpoint_option,
)
from core.errors import VerificationMismatch
from core.logger import get_logger
from core.words import parse_word
from models.RelkitModels import CommandOptions, OutputFormat, Verdict, Viewpoint
from patterns.formalism_factory import FormalismFactory
from services.transform_service import CONSTRUCTIONS, run_construction

logger = get_logger(__name__)


def parse_mapping(items: Sequence[str]) -> Dict[str, Tuple[Any, ...]]:
    """`a=xy` manda a en xy; `a=` borra a"""
    mapping: Dict[str, Tuple[Any, ...]] = {}
    for item in items:
        key, eq, value = item.partition("=")
        if not eq or not key:
            raise click.BadParameter(f"expected SYMBOL=WORD, got {item!r}", param_hint="--map")
        mapping[key] = parse_word(value)
    return mapping


def run_and_write(
    name: str,
    source: Any,
    opts: CommandOptions,
    output: Optional[str],
    **options: Any,
) -> None:
    """Corre la construcción, imprime el reporte y escribe la salida si corresponde"""
    report = run_construction(name, source, opts.bound, opts.steps, opts.verify, **options)
    emit(report, opts.output_format, render_construction(report))
    if report.verdict == Verdict.MISMATCH:
        raise VerificationMismatch(report)
    if opts.verify and report.verdict != Verdict.VERIFIED:
        click.echo("refusing to write unverified output (use --no-verify to override)", err=True)
        raise click.exceptions.Exit(EXIT_MISMATCH)
    text = FormalismFactory.emit(report.output)
    if output:
        Path(output).write_text(text, encoding="utf-8")
        logger.info("wrote %s", output)
    elif opts.output_format == OutputFormat.TEXT:
        click.echo("")
        click.echo(text, nl=False)


@click.command("convert")
@click.argument("construction", type=click.Choice(sorted(CONSTRUCTIONS)))
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None, help="Write the result here.")
@click.option("--map", "mapping", multiple=True, help="Homomorphism rule SYMBOL=WORD (repeatable).")
@click.option("--alphabet", default=None, help="Extra generators for the word-problem constructions.")
@click.option("--no-verify", is_flag=True, help="Write the result without the bounded check.")
@bound_option()
@steps_option
@viewpoint_option(Viewpoint.PLAIN)
@formalism_option
@format_option
@handle_errors
def convert(construction, path, output, mapping, alphabet, no_verify, bound, steps, viewpoint, formalism, output_format):
    """Run CONSTRUCTION on PATH and check it against the input relation.

    --viewpoint only matters for the homomorphism check.
    """
    source = FormalismFactory.load(path, formalism)
    opts = make_options(bound, steps, viewpoint, output_format, verify=not no_verify)
    options: Dict[str, Any] = {}
    if construction == "homomorphism":
        if not mapping:
            raise click.UsageError("homomorphism needs at least one --map rule")
        options.update(h=parse_mapping(mapping), viewpoint=opts.viewpoint)
    if alphabet:
        options["alphabet"] = tuple(alphabet.split())
    run_and_write(construction, source, opts, output, **options)
