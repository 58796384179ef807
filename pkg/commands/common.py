"""
Piezas compartidas por los comandos: opciones comunes, manejo de errores
y salida en texto o estructurada.
"""

import functools
from typing import Any, Callable, Iterable, Optional

import click
from pydantic import BaseModel, ValidationError

from core.config import settings
from core.errors import RelkitError
from core.logger import get_logger
from core.words import RelationSample, format_word, sort_words
from models.RelkitModels import (
    CommandOptions, ConstructionReport, EnumerationResult, OutputFormat, SampleComparison,
    SampleExport, Viewpoint, WordListExport, WordSetComparison, ZooCheckReport,
)

logger = get_logger(__name__)

EXIT_MISMATCH = 1
EXIT_USAGE = 2


def bound_option(default: Optional[int] = None):
    return click.option(
        "--bound", type=click.IntRange(min=0), default=default,
        help=f"Length bound (default {settings.DEFAULT_BOUND}).",
    )


steps_option = click.option(
    "--steps", type=click.IntRange(min=0), default=None,
    help=f"Derivation / table-application budget (default {settings.DEFAULT_STEPS}).",
)

format_option = click.option(
    "--format", "output_format", type=click.Choice([f.value for f in OutputFormat]), default=None,
    help="Output format.",
)


def viewpoint_option(default: Viewpoint, choices: Iterable[Viewpoint] = tuple(Viewpoint)):
    return click.option(
        "--viewpoint", type=click.Choice([v.value for v in choices]), default=default.value, show_default=True,
        help="How words are measured and read as a relation.",
    )


formalism_option = click.option(
    "--formalism", default=None, help="Override the formalism inferred from the file extension.",
)


def make_options(
    bound: Optional[int] = None,
    steps: Optional[int] = None,
    viewpoint: Any = Viewpoint.TWO_TAPE,
    output_format: Optional[str] = None,
    verify: bool = True,
) -> CommandOptions:
    """Las banderas del CLI pisan los valores de settings"""
    return CommandOptions(
        bound=settings.DEFAULT_BOUND if bound is None else bound,
        steps=settings.DEFAULT_STEPS if steps is None else steps,
        viewpoint=viewpoint,
        output_format=output_format or settings.OUTPUT_FORMAT,
        verify=verify,
    )


def handle_errors(func: Callable) -> Callable:
    """Traduce RelkitError y ValidationError al código de salida del CLI"""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except RelkitError as e:
            if settings.DEBUG:
                logger.exception("command failed")
            click.echo(f"error: {e.detail}", err=True)
            raise click.exceptions.Exit(e.exit_code)
        except ValidationError as e:
            click.echo(f"error: {e.errors()[0]['msg']}", err=True)
            raise click.exceptions.Exit(EXIT_USAGE)

    return wrapper


# ================================
# SALIDA
# ================================

def _pairs_text(pairs) -> Iterable[str]:
    for u, v in pairs:
        yield f"  {format_word(u)}\t{format_word(v)}"


def render_comparison(c: Any) -> str:
    lines = [
        f"equal: {'yes' if c.equal else 'no'}",
        f"bound: {c.bound}",
        f"sizes: {c.first_size} / {c.second_size}",
    ]
    if isinstance(c, SampleComparison):
        if c.only_in_first:
            lines.append("only in first:")
            lines.extend(_pairs_text(c.only_in_first))
        if c.only_in_second:
            lines.append("only in second:")
            lines.extend(_pairs_text(c.only_in_second))
    elif isinstance(c, WordSetComparison):
        if c.only_in_first:
            lines.append("only in first:")
            lines.extend(f"  {w}" for w in c.only_in_first)
        if c.only_in_second:
            lines.append("only in second:")
            lines.extend(f"  {w}" for w in c.only_in_second)
    return "\n".join(lines)


def render_construction(r: ConstructionReport) -> str:
    lines = [
        f"construction: {r.construction}",
        f"input: {r.input_summary}",
        f"output: {r.output_summary}",
        f"verdict: {r.verdict.value} (bound {r.checked_bound})",
    ]
    if r.comparison is not None:
        lines.append(render_comparison(r.comparison))
    lines.extend(f"note: {n}" for n in r.notes)
    return "\n".join(lines)


def render_zoo_check(r: ZooCheckReport) -> str:
    lines = [f"entry: {r.name}", f"bound: {r.bound}", f"oracle pairs: {r.sample_size}"]
    for rep in r.representations:
        status = "ok" if rep.comparison.equal and rep.complete else "FAIL"
        if rep.comparison.equal and not rep.complete:
            status = "incomplete"
        lines.append(f"{rep.label} [{rep.formalism.value}, {rep.viewpoint.value}]: {status}")
        if not rep.comparison.equal:
            lines.extend("  " + line for line in render_comparison(rep.comparison).splitlines())
    lines.extend(f"note: {n}" for n in r.notes)
    lines.append(f"verified: {'yes' if r.verified else 'no'}")
    return "\n".join(lines)


def render_words(result: EnumerationResult) -> str:
    lines = [format_word(w) for w in sort_words(result.words)]
    if not result.complete:
        lines.append(f"// incomplete: step budget exhausted after {result.explored} forms")
    return "\n".join(lines)


def render_sample(sample: RelationSample) -> str:
    return sample.to_text().rstrip("\n")


def export_sample(sample: RelationSample) -> SampleExport:
    return SampleExport(bound=sample.bound, size=sample.size, pairs=sample.sorted_pairs())


def export_words(result: EnumerationResult) -> WordListExport:
    return WordListExport(
        bound=result.bound,
        viewpoint=result.viewpoint,
        complete=result.complete,
        words=[format_word(w) for w in sort_words(result.words)],
    )


def emit(model: BaseModel, output_format: str, text: str) -> None:
    """JSON del modelo en formato estructurado; si no, el texto ya armado"""
    if OutputFormat(output_format) == OutputFormat.STRUCTURED:
        click.echo(model.model_dump_json(indent=2))
    elif text:
        click.echo(text)
