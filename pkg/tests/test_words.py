# tests/test_words.py
import pytest
from hypothesis import given
from pydantic import ValidationError

from core.errors import BoundMismatch, FoldError, FormatError
from core.words import (
    Alphabet, LengthBudget, PairLetter, RelationSample, all_words, fold, format_word,
    parse_word, pi_project, sample_equal, sample_from_classifier, sample_from_decider,
    sample_from_function, unfold,
)
from models.RelkitModels import Viewpoint
from tests.conftest import words_over

P = PairLetter

pytestmark = [pytest.mark.unit, pytest.mark.core]


def test_unfold_invierte_la_segunda_componente():
    assert unfold(("a", "b"), ("c", "d")) == ("a", "b", "#", "d", "c")
    assert unfold((), ()) == ("#",)


@given(words_over("ab"), words_over("ab"))
def test_fold_deshace_unfold(u, v):
    assert fold(unfold(u, v)) == (u, v)


@pytest.mark.parametrize("word", [("a", "b"), ("#", "a", "#")])
def test_fold_exige_un_solo_separador(word):
    with pytest.raises(FoldError):
        fold(word)


def test_pi_proyecta_por_componentes():
    word = (P("a", ""), P("", "b"), P("c", "c"))
    assert pi_project(word) == (("a", "c"), ("b", "c"))


def test_parse_word_lee_letras_y_pares():
    assert parse_word("ab") == ("a", "b")
    assert parse_word("eps") == ()
    assert parse_word("(a,.)(.,b)") == (P("a", ""), P("", "b"))
    assert parse_word("a1a2", ["a1", "a2"]) == ("a1", "a2")
    assert parse_word("a1 a2") == ("a1", "a2")


def test_parse_word_rechaza_par_vacio():
    with pytest.raises(FormatError):
        parse_word("(.,.)")


def test_format_word():
    assert format_word(()) == "ε"
    assert format_word(("a", "b")) == "ab"
    assert format_word(("a1", "a2")) == "a1 a2"
    assert format_word((P("a", ""),)) == "(a,.)"


def test_alphabet_valida_simbolos():
    assert len(Alphabet(symbols=("a", "b")).pair_letters()) == 8
    with pytest.raises(ValidationError):
        Alphabet(symbols=("a", "a"))
    with pytest.raises(ValidationError):
        Alphabet(symbols=("#",))


def test_all_words_en_orden_longitud_lexicografico():
    assert list(all_words(("b", "a"), 2)) == [
        (), ("a",), ("b",), ("a", "a"), ("a", "b"), ("b", "a"), ("b", "b"),
    ]


def test_length_budget_por_punto_de_vista():
    two_tape = LengthBudget(Viewpoint.TWO_TAPE, 2)
    assert two_tape.admits((P("a", "b"), P("a", "b")))
    assert not two_tape.admits((P("a", ""), P("a", ""), P("a", "")))
    assert two_tape.admits((P("", "b"), P("", "b"), P("a", ""), P("a", "")))

    unfolded = LengthBudget(Viewpoint.UNFOLDED, 1)
    assert unfolded.admits(("a", "#", "b"))
    assert not unfolded.admits(("a", "b"))
    assert not unfolded.admits(("a", "a", "#"))

    plain = LengthBudget(Viewpoint.PLAIN, 3)
    assert plain.admits(("a", "#", "b"))
    assert not plain.admits(("a", "a", "a", "a"))


def test_muestra_rechaza_pares_fuera_de_cota():
    with pytest.raises(ValidationError):
        RelationSample(bound=1, pairs=frozenset({(("a", "a"), ())}))
    s = RelationSample.truncated(1, [(("a", "a"), ()), (("a",), ("b",))])
    assert s.sorted_pairs() == [(("a",), ("b",))]


def test_comparar_muestras_de_cotas_distintas_falla():
    with pytest.raises(BoundMismatch):
        sample_equal(RelationSample(bound=1), RelationSample(bound=2))


def test_comparacion_reporta_testigos():
    a = RelationSample.truncated(2, [(("a",), ("a",)), (("b",), ())])
    b = RelationSample.truncated(2, [(("a",), ("a",))])
    c = sample_equal(a, b)
    assert not c.equal
    assert c.only_in_first == [(("b",), ())]
    assert c.only_in_second == []


def test_oraculos_de_fuerza_bruta():
    rev = sample_from_function(all_words(("a", "b"), 6), lambda u: tuple(reversed(u)), 6)
    assert rev.size == 127

    same_length = sample_from_classifier(all_words(("a", "b"), 2), len, 2)
    assert same_length.size == 1 + 4 + 16

    words = list(all_words(("x",), 3))
    shorter = sample_from_decider(words, words, lambda u, v: len(v) < len(u), 3)
    assert shorter.size == 6


def test_imagen_homomorfica_de_una_muestra():
    s = RelationSample.truncated(3, [(("a",), ()), (("a",), ("a", "a"))])
    image = s.image({"a": ("b", "b")})
    # (bb, bbbb) excede la cota y se descarta
    assert image.pairs == frozenset({(("b", "b"), ())})
