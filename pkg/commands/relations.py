"""
Comandos sobre un archivo: validate, enumerate, member y compare
"""

from typing import Any, List, Optional

import click

from commands.common import (
    EXIT_MISMATCH, bound_option, emit, export_sample, export_words, format_option, formalism_option,
    handle_errors, make_options, render_comparison, render_sample, render_words, steps_option, viewpoint_option,
)
from core.errors import NotDeterministic
from core.words import PairLetter, compare_word_sets, format_word, parse_word, sample_equal
from models.RelkitModels import MembershipResult, ValidationReport, Viewpoint
from patterns.formalism_factory import FormalismFactory
from services.automata_service import Transducer
from services.indexed_service import IndexedGrammar, PartitionedIndexedGrammar, ig_validate
from services.lsystem_service import ET0LSystem, edt0l_validate
from services.relation_service import (
    enumerate_words, formalism_of, member, pair_member, relation_sample, summarize, unwrap,
)


def symbols_of(obj: Any) -> List[str]:
    """Símbolos atómicos que el lector de palabras debe reconocer"""
    obj = unwrap(obj)
    pool = getattr(obj, "terminals", None) or getattr(obj, "alphabet", ())
    out = set()
    for s in pool:
        if isinstance(s, PairLetter):
            out.update(x for x in s if x)
        else:
            out.add(s)
    return sorted(out)


@click.command("validate")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@formalism_option
@format_option
@handle_errors
def validate(path: str, formalism: Optional[str], output_format: Optional[str]):
    """Parse a grammar or automaton file and report its class."""
    obj = FormalismFactory.load(path, formalism)
    opts = make_options(output_format=output_format)
    report = ValidationReport(source=path, formalism=formalism_of(obj), summary=summarize(obj))
    inner = unwrap(obj)
    if isinstance(inner, IndexedGrammar):
        report.kind = ig_validate(inner)
    if isinstance(obj, PartitionedIndexedGrammar):
        report.partition_rows = list(obj.rows)
    if isinstance(inner, ET0LSystem):
        try:
            edt0l_validate(inner)
            report.deterministic = True
        except NotDeterministic:
            report.deterministic = False

    lines = [f"{path}: {report.summary}"]
    if report.kind is not None:
        lines.append(f"kind: {report.kind.kind.value}")
        lines.extend(f"  shared stack: {p}" for p in report.kind.shared_stack)
    if report.partition_rows:
        lines.append("rows: " + " ".join(str(r) for r in report.partition_rows))
    if report.deterministic is not None:
        lines.append(f"deterministic: {'yes' if report.deterministic else 'no'}")
    emit(report, opts.output_format, "\n".join(lines))


@click.command("enumerate")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@bound_option()
@steps_option
@viewpoint_option(Viewpoint.PLAIN)
@click.option("--pairs", is_flag=True, help="Print the encoded relation instead of the words.")
@formalism_option
@format_option
@handle_errors
def enumerate_command(path, bound, steps, viewpoint, pairs, formalism, output_format):
    """List the words (or pairs) of a language up to the bound."""
    obj = FormalismFactory.load(path, formalism)
    opts = make_options(bound, steps, viewpoint, output_format)
    if pairs or isinstance(obj, Transducer):
        if not isinstance(obj, Transducer) and opts.viewpoint == Viewpoint.PLAIN:
            raise click.UsageError("--pairs needs --viewpoint two-tape or unfolded")
        sample, complete = relation_sample(obj, opts.viewpoint, opts.bound, opts.steps)
        text = render_sample(sample)
        if not complete:
            text += "\n// incomplete: step budget exhausted"
        emit(export_sample(sample), opts.output_format, text)
        return
    result = enumerate_words(obj, opts.bound, opts.viewpoint, opts.steps)
    emit(export_words(result), opts.output_format, render_words(result))


@click.command("member")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.argument("word")
@click.argument("second", required=False)
@steps_option
@formalism_option
@format_option
@handle_errors
def member_command(path, word, second, steps, formalism, output_format):
    """Decide whether WORD (or the pair WORD SECOND for a transducer) is accepted."""
    obj = FormalismFactory.load(path, formalism)
    opts = make_options(steps=steps, output_format=output_format)
    symbols = symbols_of(obj)
    w = parse_word(word, symbols)
    if isinstance(obj, Transducer):
        if second is None:
            raise click.UsageError("a transducer needs two words")
        v = parse_word(second, symbols)
        accepted = pair_member(obj, w, v)
        label = f"({format_word(w)}, {format_word(v)})"
    else:
        if second is not None:
            raise click.UsageError("only transducers take a second word")
        accepted = member(obj, w, opts.steps)
        label = format_word(w)
    emit(MembershipResult(word=label, member=accepted), opts.output_format, "yes" if accepted else "no")


@click.command("compare")
@click.argument("first", type=click.Path(exists=True, dir_okay=False))
@click.argument("second", type=click.Path(exists=True, dir_okay=False))
@bound_option()
@steps_option
@viewpoint_option(Viewpoint.TWO_TAPE)
@click.option(
    "--second-viewpoint", type=click.Choice([v.value for v in Viewpoint]), default=None,
    help="Viewpoint of the second file when it encodes the relation differently.",
)
@format_option
@handle_errors
def compare(first, second, bound, steps, viewpoint, second_viewpoint, output_format):
    """Compare two languages or relations on their bounded samples."""
    a = FormalismFactory.load(first)
    b = FormalismFactory.load(second)
    opts = make_options(bound, steps, viewpoint, output_format)
    other = Viewpoint(second_viewpoint) if second_viewpoint else opts.viewpoint
    if (opts.viewpoint == Viewpoint.PLAIN) != (other == Viewpoint.PLAIN):
        raise click.UsageError("a plain language cannot be compared with a relation")
    if opts.viewpoint == Viewpoint.PLAIN:
        left = enumerate_words(a, opts.bound, Viewpoint.PLAIN, opts.steps)
        right = enumerate_words(b, opts.bound, Viewpoint.PLAIN, opts.steps)
        comparison = compare_word_sets(left.words, right.words, opts.bound)
        complete = left.complete and right.complete
    else:
        left, complete_a = relation_sample(a, opts.viewpoint, opts.bound, opts.steps)
        right, complete_b = relation_sample(b, other, opts.bound, opts.steps)
        comparison = sample_equal(left, right)
        complete = complete_a and complete_b
    text = render_comparison(comparison)
    if not complete:
        text += "\nnote: enumeration hit the step budget; result is not conclusive"
    emit(comparison, opts.output_format, text)
    if not comparison.equal:
        raise click.exceptions.Exit(EXIT_MISMATCH)
