"""
Comandos de problemas de la palabra: las dos construcciones y el decisor del zoo
"""

from typing import Optional

import click

from commands.common import (
    bound_option, emit, format_option, formalism_option, handle_errors, make_options, steps_option,
)
from commands.convert import run_and_write
from core.config import settings
from core.words import parse_word
from models.RelkitModels import MembershipResult
from patterns.formalism_factory import FormalismFactory
from services.zoo_service import zoo_service


@click.group("wp")
def wp():
    """Word problems of the monoids M[rho] and M(L)."""


def _construction_command(name: str, construction: str, help_text: str):
    @wp.command(name, help=help_text)
    @click.argument("path", type=click.Path(exists=True, dir_okay=False))
    @click.option("-o", "--output", type=click.Path(dir_okay=False), default=None)
    @click.option("--alphabet", default=None, help="Generators beyond those used by the input.")
    @click.option("--no-verify", is_flag=True)
    @bound_option()
    @steps_option
    @formalism_option
    @format_option
    @handle_errors
    def command(path, output, alphabet, no_verify, bound, steps, formalism, output_format):
        source = FormalismFactory.load(path, formalism)
        opts = make_options(bound, steps, output_format=output_format, verify=not no_verify)
        options = {"alphabet": tuple(alphabet.split())} if alphabet else {}
        run_and_write(construction, source, opts, output, **options)

    return command


two_tape = _construction_command(
    "two-tape", "wp-two-tape", "Two-tape grammar of the word problem of M[rho], rho given by a two-tape grammar.",
)
unfolded = _construction_command(
    "unfolded", "wp-unfolded", "Unfolded grammar of the word problem of M(L), L given by a grammar.",
)


@wp.command("decide")
@click.argument("name")
@click.argument("u")
@click.argument("v")
@format_option
@handle_errors
def decide(name: str, u: str, v: str, output_format: Optional[str]):
    """Decide u = v with the word-problem oracle of zoo entry NAME."""
    opts = make_options(output_format=output_format)
    entry = zoo_service.entry(name)
    symbols = list(entry.alphabet) + [settings.LEFT_MARKER, settings.RIGHT_MARKER]
    wu, wv = parse_word(u, symbols), parse_word(v, symbols)
    equal = entry.decide(wu, wv)
    emit(MembershipResult(word=f"{u} = {v}", member=equal), opts.output_format, "yes" if equal else "no")
