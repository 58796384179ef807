# tests/test_zoo.py
import pytest

from core.errors import UnknownZooEntry
from core.words import RelationSample, all_words, sample_restrict
from services.automata_service import make_nfa
from services.grammar_service import cfg_enumerate, cfg_member, to_cnf
from services.zoo_service import zoo_check, zoo_list, zoo_sample, zoo_service

pytestmark = [pytest.mark.integration, pytest.mark.zoo]


def test_lista_del_zoo():
    names = [e.name for e in zoo_service.list_entries()]
    assert "rev" in names
    assert "wp_FG2" in names
    assert len(names) == len(zoo_service.names)


def test_resumen_de_una_entrada():
    summary = zoo_service.entry("rev").summary()
    assert summary.alphabet == ["a", "b"]
    assert summary.representations == ["two-tape-cfg"]


@pytest.mark.parametrize("name", [
    "rev", "rho_e", "equality", "same_len_same_a", "sort_o(3)", "swap_blocks",
    "pow2_diag", "abc", "lin_triple", "wp_FG1", "rho_f(3)",
])
def test_tamanos_de_las_muestras(name, expected):
    bound = expected[name]["bound"]
    assert zoo_service.sample(name, bound).size == expected[name]["pairs"]


def test_muestra_restringida_por_un_nfa():
    only_a = make_nfa([("q", "a", "q")], {"q"}, {"q"})
    sample = zoo_service.sample("rev", 3, first=only_a)
    assert sample.pairs == {(("a",) * n, ("a",) * n) for n in range(4)}


@pytest.mark.parametrize("name, bound", [
    ("rev", 4),
    ("rho_e", 6),
    ("rho_f(2)", 8),
    ("rho_f(3)", 8),
    ("rho_g", 4),
    ("sort_o(2)", 3),
    ("sort_o(3)", 3),
    ("kappa", 3),
    ("equality", 4),
    ("same_len_same_a", 3),
    ("pow2_diag", 8),
    ("lin_triple", 6),
    ("swap_ab", 4),
    ("swap_blocks", 8),
    ("abc", 6),
    ("wp_F1", 6),
    ("wp_FG1", 3),
    ("wp_FG2", 2),
    ("wp_M1", 4),
])
def test_representaciones_coinciden_con_el_oraculo(name, bound):
    report = zoo_service.check(name, bound)
    assert report.representations
    assert report.verified, [c.label for c in report.representations if not c.comparison.equal]


@pytest.mark.slow
@pytest.mark.parametrize("name", [
    "rev", "sort_o(3)", "kappa", "same_len_same_a", "wp_FG1", "wp_FG2", "wp_M1",
    "wp_M_rho(swap_ab)", "wp_M_L(ab)", "wp_M_L(abc)",
])
def test_zoo_en_su_cota_de_verificacion(name):
    assert zoo_service.check(name).verified


@pytest.mark.slow
def test_problema_de_la_palabra_de_m5():
    assert zoo_service.check("wp_M5", 3).verified


def test_rho_h_solo_tiene_decisor():
    report = zoo_service.check("rho_h", 4)
    assert report.verified
    assert report.representations == []
    assert report.notes


@pytest.mark.parametrize("u, v, related", [
    ((), ("x",), True),
    (("x", "x"), ("x",) * 4, True),
    (("x", "x"), ("x",) * 3, False),
    (("x",) * 3, ("x",) * 27, True),
])
def test_decisor_de_rho_h(u, v, related):
    assert zoo_service.decide("rho_h", u, v) is related


def test_decidir_en_el_grupo_libre():
    assert zoo_service.decide("wp_FG2", ("x", "y", "Y"), ("x",))
    assert not zoo_service.decide("wp_FG2", ("x", "y"), ("y", "x"))


@pytest.mark.parametrize("name", ["nope", "rho_f(0)", "rho_f(z)", "wp_M_L(zzz)"])
def test_entrada_desconocida(name):
    with pytest.raises(UnknownZooEntry):
        zoo_service.entry(name)


def test_restringir_una_muestra():
    only_a = make_nfa([("q", "a", "q")], {"q"}, {"q"})
    s = RelationSample(bound=2, pairs=frozenset({(("a", "b"), ("b", "a")), (("a",), ("a",))}))
    assert sample_restrict(s, only_a, only_a).pairs == {(("a",), ("a",))}


def test_sort_restringido_a_bloques_123():
    blocks = make_nfa([("q", "1", "s"), ("s", "2", "t"), ("t", "3", "q")], {"q"}, {"q"})
    anything = make_nfa([("q", x, "q") for x in "123"], {"q"}, {"q"})
    s = sample_restrict(zoo_service.sample("sort_o(3)", 6), blocks, anything)
    assert s.pairs == {((), ()), (tuple("123"), tuple("123")), (tuple("123123"), tuple("112233"))}


def test_atajos_del_modulo():
    assert [e.name for e in zoo_list()] == [e.name for e in zoo_service.list_entries()]
    assert zoo_sample("rev", 3) == zoo_service.sample("rev", 3)
    assert zoo_check("rho_e", 4).verified


# ================================
# COTAS DE ACEPTACIÓN
# ================================

@pytest.mark.slow
@pytest.mark.parametrize("name, bound", [
    ("rho_f(1)", 20),
    ("rho_f(2)", 20),
    ("rho_f(3)", 20),
    ("rho_f(5)", 20),
    ("rho_g", 25),
    ("kappa", 5),
    ("wp_FG1", 5),
    ("wp_FG2", 5),
    ("wp_M1", 8),
])
def test_zoo_en_las_cotas_de_aceptacion(name, bound):
    report = zoo_check(name, bound)
    assert report.verified, [c.label for c in report.representations if not c.comparison.equal]


def _partition(key, words):
    classes = {}
    for w in words:
        classes.setdefault(key(w), set()).add(w)
    return {frozenset(c) for c in classes.values()}


@pytest.mark.slow
@pytest.mark.parametrize("name", ["wp_F1", "wp_FG1", "wp_FG2", "wp_M1", "wp_M_rho(swap_ab)"])
def test_decisor_del_problema_de_la_palabra_es_una_equivalencia(name):
    entry = zoo_service.entry(name)
    words = list(all_words(entry.alphabet, 5))
    final = _partition(entry.classifier(5), words)
    # la partición no depende de la cota con la que se decide cada par
    for n in range(5):
        short = {w for w in words if len(w) <= n}
        restricted = {c & short for c in final} - {frozenset()}
        assert _partition(entry.classifier(n), short) == restricted
    for c in final:
        rep = min(c, key=len)
        assert all(entry.decide(w, rep) and entry.decide(rep, w) for w in c)


ZOO_GRAMMARS = [
    ("rev", "two-tape-cfg", 6),
    ("rho_e", "two-tape-rg", 6),
    ("equality", "two-tape-rg", 6),
    ("sort_o(2)", "two-tape-cfg", 6),
    ("swap_ab", "two-tape-cfg", 6),
    ("swap_blocks", "two-tape-cfg", 6),
    ("wp_M_rho(swap_ab)", "two-tape-wp", 4),
]


@pytest.mark.slow
@pytest.mark.parametrize("name, label, _", ZOO_GRAMMARS)
def test_forma_normal_conserva_el_lenguaje_del_zoo(name, label, _):
    g = zoo_service.representation(name, label)
    assert cfg_enumerate(to_cnf(g), 8) == cfg_enumerate(g, 8)


@pytest.mark.slow
@pytest.mark.parametrize("name, label, bound", ZOO_GRAMMARS)
def test_pertenencia_coincide_con_la_enumeracion(name, label, bound):
    g = zoo_service.representation(name, label)
    members = {w for w in all_words(g.terminals, bound) if cfg_member(g, w)}
    assert members == cfg_enumerate(g, bound)
