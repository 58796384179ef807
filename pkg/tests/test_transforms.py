# tests/test_transforms.py
import pytest

from core.errors import GuardedInput, NonUnaryLabel, ShapeViolation, UnknownFormalism
from core.words import unfold
from models.RelkitModels import GrammarKind, Verdict, Viewpoint
from patterns.formalism_factory import FormalismFactory
from services.automata_service import CounterAutomaton, make_transducer
from services.grammar_service import cfg_enumerate
from services.indexed_service import IndexedGrammar, ig_enumerate
from services.lsystem_service import EDT0LWitness
from services.relation_service import member, relation_sample
from services.transform_service import (
    CONSTRUCTIONS, apply_homomorphism, diagonal_grammar, run_construction, split_pair_letters,
    two_tape_cfg_to_unfolded_lig, two_tape_regular_to_unfolded_cfg, unary_transducer_to_unfolded_oca,
    unfolded_oca_to_two_tape,
)
from services.zoo_service import fg1_oca, lin_triple_lig, pow2_diagonal, rho_e_grammar, zoo_service

pytestmark = [pytest.mark.integration, pytest.mark.transforms]


def test_registro_de_construcciones():
    assert {
        "u2t-reg", "u2t-oca", "u2t-indexed", "t2u-edt0l", "t2u-reg-cfg", "t2u-cfg-lig",
        "unary-trans-oca", "split-pairs", "homomorphism", "wp-two-tape", "wp-unfolded",
    } <= set(CONSTRUCTIONS)


def test_construccion_desconocida():
    with pytest.raises(UnknownFormalism):
        run_construction("nope", rho_e_grammar())


def test_regular_desplegada_a_dos_cintas(data_path):
    g = FormalismFactory.load(data_path("rho_f.rg"))
    report = run_construction("u2t-reg", g, bound=6)
    assert report.verdict == Verdict.VERIFIED
    sample, _ = relation_sample(report.output, Viewpoint.TWO_TAPE, 6)
    assert sample == zoo_service.sample("rho_f(2)", 6)


def test_contador_desplegado_a_dos_cintas(data_path):
    a = FormalismFactory.load(data_path("fg1_blind.oca"))
    report = run_construction("u2t-oca", a, bound=3)
    assert report.verdict == Verdict.VERIFIED
    assert isinstance(report.output, CounterAutomaton)


def test_contador_con_guardas_no_se_convierte():
    with pytest.raises(GuardedInput):
        unfolded_oca_to_two_tape(fg1_oca())


def test_indexada_desplegada_a_dos_cintas(data_path):
    pg = FormalismFactory.load(data_path("sort3.lig"))
    report = run_construction("u2t-indexed", pg, bound=3)
    assert report.verdict == Verdict.VERIFIED
    assert isinstance(report.output, IndexedGrammar)
    assert report.output.kind == GrammarKind.LINEAR_INDEXED


def test_edt0l_de_dos_cintas_a_desplegado():
    report = run_construction("t2u-edt0l", pow2_diagonal(), bound=8)
    assert report.verdict == Verdict.VERIFIED
    assert isinstance(report.output, EDT0LWitness)


def test_regular_de_dos_cintas_necesita_letras_separadas():
    with pytest.raises(ShapeViolation):
        two_tape_regular_to_unfolded_cfg(rho_e_grammar())
    report = run_construction("t2u-reg-cfg", split_pair_letters(rho_e_grammar()), bound=6)
    assert report.verdict == Verdict.VERIFIED


def test_separar_letras_de_pares_conserva_pi():
    g = diagonal_grammar(FormalismFactory.create("rg", "S -> a S | b S | eps\n"))
    split = split_pair_letters(g)
    assert all(not (t.left and t.right) for t in split.terminals)
    first, _ = relation_sample(g, Viewpoint.TWO_TAPE, 4)
    second, _ = relation_sample(split, Viewpoint.TWO_TAPE, 4)
    assert first == second


def test_cfg_de_dos_cintas_a_lig_desplegada(data_path):
    g = FormalismFactory.load(data_path("rev.cfg"))
    report = run_construction("t2u-cfg-lig", g, bound=6)
    assert report.verdict == Verdict.VERIFIED
    assert member(report.output, unfold(("a", "b"), ("b", "a")))
    assert not member(report.output, unfold(("a", "b"), ("a", "b")))


def test_lig_desplegada_no_reinicia_la_derivacion(data_path):
    lig = two_tape_cfg_to_unfolded_lig(FormalismFactory.load(data_path("rev.cfg")))
    result = ig_enumerate(lig, 2, 48, Viewpoint.UNFOLDED)
    assert result.complete
    us = [(), ("a",), ("b",), ("a", "a"), ("a", "b"), ("b", "a"), ("b", "b")]
    assert result.words == {unfold(u, u[::-1]) for u in us}


def test_transductor_unario_a_contador(data_path):
    t = FormalismFactory.load(data_path("double.fst"))
    report = run_construction("unary-trans-oca", t, bound=4)
    assert report.verdict == Verdict.VERIFIED
    assert report.output.accepts(("x", "#", "x", "x"))


def test_transductor_no_unario():
    t = make_transducer([("t", (("a",), ("b",)), "t")], {"t"}, {"t"})
    with pytest.raises(NonUnaryLabel):
        unary_transducer_to_unfolded_oca(t)


def test_homomorfismo_sobre_una_cfg(data_path):
    g = FormalismFactory.load(data_path("anbn.cfg"))
    report = run_construction("homomorphism", g, bound=6, h={"a": ("c", "c")})
    assert report.verdict == Verdict.VERIFIED
    assert cfg_enumerate(report.output, 3) == {(), ("c", "c", "b")}


def test_homomorfismo_que_borra(data_path):
    g = FormalismFactory.load(data_path("anbn.cfg"))
    report = run_construction("homomorphism", g, bound=3, h={"a": ()})
    assert report.verdict == Verdict.VERIFIED
    assert any("erasing" in n for n in report.notes)


def test_homomorfismo_que_borra_una_preimagen_larga():
    g = FormalismFactory.create("cfg", "S -> a a a a a a b\n")
    report = run_construction("homomorphism", g, bound=1, h={"a": ()})
    assert report.verdict == Verdict.UNVERIFIED
    assert report.comparison.only_in_second == ["b"]
    assert report.comparison.only_in_first == []


def test_homomorfismo_sobre_conjuntos_de_palabras():
    image = apply_homomorphism({("a", "b"), ("b",)}, {"b": ("c",)})
    assert image == {("a", "c"), ("c",)}


def test_diagonal_de_un_lenguaje():
    g = diagonal_grammar(FormalismFactory.create("cfg", "S -> a S b | eps\n"))
    sample, _ = relation_sample(g, Viewpoint.TWO_TAPE, 4)
    assert sample.pairs == {((), ()), (("a", "b"), ("a", "b")), (tuple("aabb"), tuple("aabb"))}


def test_problema_de_la_palabra_de_dos_cintas(data_path):
    g = FormalismFactory.load(data_path("swap.cfg"))
    report = run_construction("wp-two-tape", g, bound=4)
    assert report.verdict == Verdict.VERIFIED


def test_problema_de_la_palabra_desplegado(data_path):
    g = FormalismFactory.load(data_path("ab.cfg"))
    report = run_construction("wp-unfolded", g, bound=3)
    assert report.verdict == Verdict.VERIFIED


# con 8 letras la identidad sola ya son 8^8 pares; esas entradas van en cotas menores
@pytest.mark.slow
@pytest.mark.parametrize("construction, source, bound", [
    ("wp-two-tape", "swap.cfg", 8),
    ("wp-unfolded", "ab.cfg", 8),
    ("wp-two-tape", "lin_triple", 5),
    ("wp-unfolded", "abc.lig", 6),
])
def test_problemas_de_la_palabra_en_cotas_grandes(data_path, construction, source, bound):
    g = lin_triple_lig() if source == "lin_triple" else FormalismFactory.load(data_path(source))
    report = run_construction(construction, g, bound=bound)
    assert report.verdict == Verdict.VERIFIED


def test_verificacion_desactivada_no_compara(data_path):
    g = FormalismFactory.load(data_path("rho_f.rg"))
    report = run_construction("u2t-reg", g, bound=6, verify=False)
    assert report.verdict == Verdict.UNVERIFIED
    assert report.comparison is None
