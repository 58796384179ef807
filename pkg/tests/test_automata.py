# tests/test_automata.py
import pytest

from core.errors import FormatError, MalformedProduction
from core.words import PairLetter
from models.RelkitModels import CounterMode, Guard, Viewpoint
from patterns.formalism_factory import FormalismFactory
from services.automata_service import (
    CounterAutomaton, left_regular_from_nfa, make_counter_automaton, nfa_enumerate, nfa_run,
    oca_enumerate, oca_reverse, oca_run, pda_enumerate, pda_run, transducer_enumerate, transducer_run,
)
from services.grammar_service import cfg_enumerate
from services.relation_service import relation_sample
from services.zoo_service import fg1_oca, fg2_pda, same_len_same_a_oca, zoo_service

pytestmark = [pytest.mark.unit, pytest.mark.automata]

P = PairLetter


def test_nfa_modulo_dos(data_path):
    a = FormalismFactory.load(data_path("rho_f.nfa"))
    assert nfa_run(a, ("x", "x", "x", "#", "x"))
    assert not nfa_run(a, ("x", "x", "#", "x"))
    sample, _ = relation_sample(a, Viewpoint.UNFOLDED, 6)
    assert sample == zoo_service.sample("rho_f(2)", 6)


def test_nfa_a_gramatica_regular(data_path):
    a = FormalismFactory.load(data_path("rho_f.nfa"))
    g = left_regular_from_nfa(a)
    assert cfg_enumerate(g, 4) == nfa_enumerate(a, 4)


def test_contador_ciego_grupo_libre_rango_uno(data_path, expected):
    a = FormalismFactory.load(data_path("fg1_blind.oca"))
    assert a.mode == CounterMode.BLIND
    assert oca_run(a, ("x", "X", "x", "#", "x"))
    assert not oca_run(a, ("x", "#", "X"))
    bound = expected["wp_FG1"]["bound"]
    sample, _ = relation_sample(a, Viewpoint.UNFOLDED, bound)
    assert sample.size == expected["wp_FG1"]["pairs"]
    assert sample == zoo_service.sample("wp_FG1", bound)


def test_contador_con_test_de_cero_coincide_con_el_ciego():
    tested = fg1_oca()
    assert tested.uses_guards
    for word in [("X", "x", "#"), ("x", "x", "#", "X", "X"), ("X", "#", "x"), ("x", "#")]:
        assert oca_run(tested, word) == (word in {("X", "x", "#"), ("x", "x", "#", "x", "x")})


def test_contador_no_baja_de_cero_en_modo_tested():
    a = make_counter_automaton([("q", "a", -1, "q")], {"q"}, {"q"}, CounterMode.TESTED)
    assert oca_run(a, ())
    assert not oca_run(a, ("a",))


def test_modo_ciego_prohibe_guardas():
    with pytest.raises(MalformedProduction):
        make_counter_automaton([("q", "a", Guard.ZERO, 0, "q")], {"q"}, {"q"}, CounterMode.BLIND)


def test_oca_de_dos_cintas(expected):
    bound = expected["same_len_same_a"]["bound"]
    sample, _ = relation_sample(same_len_same_a_oca(), Viewpoint.TWO_TAPE, bound)
    assert sample.size == expected["same_len_same_a"]["pairs"]


def test_reversa_de_contador_ciego(data_path):
    a = FormalismFactory.load(data_path("fg1_blind.oca"))
    rev = oca_reverse(a)
    assert isinstance(rev, CounterAutomaton)
    words = oca_enumerate(a, 3)
    assert oca_enumerate(rev, 3) == {tuple(reversed(w)) for w in words}


def test_transductor_duplica(data_path):
    t = FormalismFactory.load(data_path("double.fst"))
    assert transducer_run(t, ("x", "x"), ("x",) * 4)
    assert not transducer_run(t, ("x",), ("x",))
    assert transducer_enumerate(t, 4).pairs == {((), ()), (("x",), ("x", "x")), (("x", "x"), ("x",) * 4)}


def test_pda_por_pila_vacia(data_path):
    p = FormalismFactory.load(data_path("anbn.pda"))
    assert pda_run(p, tuple("aabb"))
    assert not pda_run(p, tuple("aab"))
    assert pda_enumerate(p, 4) == {(), ("a", "b"), tuple("aabb")}


def test_pda_grupo_libre_rango_dos():
    p = fg2_pda()
    assert pda_run(p, ("x", "y", "#", "y", "x"))
    assert pda_run(p, ("x", "X", "#"))
    assert not pda_run(p, ("x", "y", "#", "x", "y"))


@pytest.mark.parametrize("text", [
    "state q\ntrans q a q\n",
    "state q initial\ntrans q a\n",
    "state q initial bogus\n",
])
def test_nfa_mal_formado(text):
    with pytest.raises(FormatError):
        FormalismFactory.create("nfa", text)


def test_oca_con_operacion_invalida():
    with pytest.raises(FormatError):
        FormalismFactory.create("oca", "mode: tested\nstate q initial final\ntrans q a *2 q\n")
