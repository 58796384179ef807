# tests/test_indexed.py
import pytest

from core.errors import FormatError, RelkitError
from models.RelkitModels import Formalism, GrammarKind, Viewpoint
from patterns.formalism_factory import FormalismFactory
from services.grammar_service import cfg_enumerate
from services.indexed_service import (
    PartitionedIndexedGrammar, flag_weights, ig_enumerate, ig_from_cfg, ig_member, ig_reverse, ig_to_cfg,
    ig_validate,
)
from services.relation_service import relation_sample
from services.zoo_service import sort_indexed_unfolded, zoo_service

pytestmark = [pytest.mark.unit, pytest.mark.indexed]


@pytest.fixture
def abc(data_path):
    return FormalismFactory.load(data_path("abc.lig"))


def test_lig_genera_anbncn(abc):
    result = ig_enumerate(abc, 6, 48)
    assert result.complete
    assert result.words == {(), ("a", "b", "c"), tuple("aabbcc")}


def test_pertenencia_en_gramatica_indexada(abc):
    assert ig_member(abc, tuple("aabbcc"), 48)
    assert not ig_member(abc, tuple("aabbc"), 48)
    assert not ig_member(abc, tuple("abcabc"), 48)


def test_un_solo_hijo_queda_designado(abc):
    report = ig_validate(abc)
    assert report.kind == GrammarKind.LINEAR_INDEXED
    assert report.shared_stack == []


def test_gramatica_con_pila_compartida_es_indexada():
    report = ig_validate(sort_indexed_unfolded(2).grammar)
    assert report.kind == GrammarKind.INDEXED
    assert report.shared_stack


def test_marca_de_heredero_en_el_archivo():
    text = "flags: f $\nS -> ^A+f B\nA[f] -> a\nB -> b\n"
    g = FormalismFactory.create(Formalism.INDEXED, text)
    assert ig_validate(g).kind == GrammarKind.LINEAR_INDEXED
    assert ig_enumerate(g, 2, 16).words == {("a", "b")}


def test_lig_sin_heredero_es_un_error_de_formato(write_file):
    path = write_file("shared.lig", "S -> A A\nA -> a\n")
    with pytest.raises(FormatError):
        FormalismFactory.load(path)


def test_particion_asigna_filas(data_path):
    pg = FormalismFactory.load(data_path("sort3.lig"))
    assert isinstance(pg, PartitionedIndexedGrammar)
    assert list(pg.rows) == [2, 2, 2, 1, 4, 4, 4]


def test_particion_exige_inicial_en_n_hash(write_file):
    path = write_file("bad.lig", "partition: S | | T\nflags: $\nS -> # T\nT[$] -> eps\n")
    with pytest.raises(RelkitError):
        FormalismFactory.load(path)


def test_sort_desplegado_coincide_con_el_oraculo(data_path):
    pg = FormalismFactory.load(data_path("sort3.lig"))
    sample, complete = relation_sample(pg, Viewpoint.UNFOLDED, 3)
    assert complete
    assert sample == zoo_service.sample("sort_o(3)", 3)


def test_cfg_como_gramatica_indexada_y_vuelta(data_path):
    cfg = FormalismFactory.load(data_path("anbn.cfg"))
    ig = ig_from_cfg(cfg)
    assert ig.kind == GrammarKind.LINEAR_INDEXED
    assert ig_enumerate(ig, 4, 16).words == cfg_enumerate(cfg, 4)
    assert cfg_enumerate(ig_to_cfg(ig), 4) == cfg_enumerate(cfg, 4)


def test_gramatica_con_flags_no_baja_a_cfg(abc):
    assert ig_to_cfg(abc) is None


def test_reversa_indexada(abc):
    words = ig_enumerate(ig_reverse(abc), 3, 48).words
    assert words == {(), ("c", "b", "a")}


def test_pesos_de_la_pila(abc):
    w = flag_weights(abc, 20)
    assert w.pop["f"] == 1
    assert w.lead == {"S": 0, "T": 0}
    assert w.escape == {"S": 20, "T": 20}
    assert w.bound("T", ("$", "f", "f"), 20) == 2


def test_pila_que_se_puede_descartar_no_poda():
    g = FormalismFactory.create(Formalism.INDEXED, "flags: f $\nS -> S+f | a\n")
    w = flag_weights(g, 20)
    assert w.escape["S"] == 1
    assert w.bound("S", ("$", "f", "f", "f"), 20) == 1
    result = ig_enumerate(g, 1, 8)
    assert result.words == {("a",)}
    assert not result.complete
