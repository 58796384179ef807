# tests/test_grammars.py
import pytest

from core.errors import FormatError, LanguageNotShaped, NotLeftRegular
from core.words import PairLetter
from models.RelkitModels import Formalism, Viewpoint
from patterns.formalism_factory import FormalismFactory
from services.grammar_service import (
    LeftRegularGrammar, PartitionedRegularGrammar, Production, cfg_enumerate, cfg_member,
    cfg_reverse, is_cnf, make_grammar, partition_for_hash, to_cnf, validate_left_regular,
)
from services.relation_service import formalism_of, relation_sample
from services.zoo_service import zoo_service

pytestmark = [pytest.mark.unit, pytest.mark.grammars]


@pytest.fixture
def anbn(data_path):
    return FormalismFactory.load(data_path("anbn.cfg"))


def test_cfg_enumera_exactamente_hasta_la_cota(anbn):
    words = cfg_enumerate(anbn, 4)
    assert words == {(), ("a", "b"), ("a", "a", "b", "b")}


def test_cyk_decide_pertenencia(anbn):
    assert cfg_member(anbn, ("a", "a", "b", "b"))
    assert cfg_member(anbn, ())
    assert not cfg_member(anbn, ("a", "b", "a", "b"))


def test_forma_normal_de_chomsky_conserva_el_lenguaje(anbn):
    cnf = to_cnf(anbn)
    assert is_cnf(cnf)
    assert cfg_enumerate(cnf, 6) == cfg_enumerate(anbn, 6)


def test_reversa_de_una_cfg(anbn):
    words = cfg_enumerate(cfg_reverse(anbn), 4)
    assert ("b", "b", "a", "a") in words
    assert ("a", "b") not in words


def test_archivo_rg_es_regular_a_izquierda(data_path):
    g = FormalismFactory.load(data_path("even.rg"))
    assert isinstance(g, LeftRegularGrammar)
    assert formalism_of(g) == Formalism.LEFT_REGULAR
    assert cfg_enumerate(g, 5) == {(), ("a", "a"), ("a", "a", "a", "a")}


def test_rg_rechaza_producciones_no_regulares(write_file):
    path = write_file("bad.rg", "S -> a S b | eps\n")
    with pytest.raises(FormatError):
        FormalismFactory.load(path)


def test_validar_regular_a_izquierda_senala_la_produccion():
    g = make_grammar([Production("S", ("S", "a")), Production("S", ())], "S")
    with pytest.raises(NotLeftRegular):
        validate_left_regular(g)


def test_particion_respecto_del_separador(data_path):
    g = FormalismFactory.load(data_path("rho_f.rg"))
    part = partition_for_hash(g)
    assert isinstance(part, PartitionedRegularGrammar)
    assert part.n2
    assert part.start in part.n1 | part.n2
    assert cfg_enumerate(part, 3, Viewpoint.UNFOLDED) == cfg_enumerate(g, 3, Viewpoint.UNFOLDED)


def test_particion_rechaza_lenguajes_sin_un_separador(data_path):
    g = FormalismFactory.load(data_path("even.rg"))
    with pytest.raises(LanguageNotShaped):
        partition_for_hash(g)


def test_reversa_en_dos_cintas_coincide_con_el_oraculo(data_path, expected):
    g = FormalismFactory.load(data_path("rev.cfg"))
    bound = expected["rev"]["bound"]
    sample, complete = relation_sample(g, Viewpoint.TWO_TAPE, bound)
    assert complete
    assert sample.size == expected["rev"]["pairs"]
    assert sample == zoo_service.sample("rev", bound)


def test_letras_de_pares_en_el_archivo(data_path):
    g = FormalismFactory.load(data_path("rev.cfg"))
    assert PairLetter("a", "") in g.terminals
    assert PairLetter("", "b") in g.terminals
