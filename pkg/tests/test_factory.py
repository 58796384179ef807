# tests/test_factory.py
import pytest

from core.errors import FormatError, UnknownFormalism
from models.RelkitModels import Formalism, Viewpoint
from patterns.formalism_factory import EXTENSIONS, FormalismFactory
from services.automata_service import nfa_enumerate, pda_enumerate
from services.grammar_service import cfg_enumerate
from services.indexed_service import ig_enumerate
from services.relation_service import relation_sample

pytestmark = [pytest.mark.unit]


@pytest.mark.parametrize("name, formalism", [
    ("rev.cfg", Formalism.CFG),
    ("even.rg", Formalism.LEFT_REGULAR),
    ("abc.lig", Formalism.LIG),
    ("kappa.etol", Formalism.ET0L),
    ("rho_f.nfa", Formalism.NFA),
    ("fg1_blind.oca", Formalism.COUNTER),
    ("double.fst", Formalism.TRANSDUCER),
    ("anbn.pda", Formalism.PDA),
])
def test_formalismo_por_extension(data_path, name, formalism):
    assert FormalismFactory.formalism_for_path(data_path(name)) == formalism


def test_extension_desconocida():
    with pytest.raises(UnknownFormalism):
        FormalismFactory.formalism_for_path("grammar.txt")


def test_formalismo_no_soportado():
    with pytest.raises(UnknownFormalism):
        FormalismFactory.create("turing", "S -> a\n")


def test_tipos_soportados():
    types = FormalismFactory.get_supported_types()
    assert set(types) == {f.value for f in Formalism}
    assert set(EXTENSIONS.values()) == set(Formalism)


def test_error_de_formato_indica_la_linea(data_path):
    with pytest.raises(FormatError) as exc:
        FormalismFactory.load(data_path("broken.cfg"))
    assert exc.value.line == 3
    assert "broken.cfg:3:" in exc.value.detail


def test_archivo_inexistente(tmp_path):
    with pytest.raises(FormatError):
        FormalismFactory.load(tmp_path / "missing.cfg")


def test_encabezado_duplicado():
    with pytest.raises(FormatError):
        FormalismFactory.create("cfg", "start: S\nstart: T\nS -> a\n")


def test_formalismo_explicito_ignora_la_extension(write_file):
    path = write_file("anbn.txt", "S -> a S b | eps\n")
    g = FormalismFactory.load(path, Formalism.CFG)
    assert cfg_enumerate(g, 2) == {(), ("a", "b")}


@pytest.mark.parametrize("name", ["rev.cfg", "sort3.lig"])
def test_emitir_gramatica_y_releer(data_path, name):
    g = FormalismFactory.load(data_path(name))
    ext = FormalismFactory.extension_for(g)
    again = FormalismFactory.create(EXTENSIONS[ext], FormalismFactory.emit(g))
    view = Viewpoint.TWO_TAPE if name == "rev.cfg" else Viewpoint.UNFOLDED
    assert relation_sample(g, view, 3)[0] == relation_sample(again, view, 3)[0]


def test_emitir_lig_y_releer(data_path):
    g = FormalismFactory.load(data_path("abc.lig"))
    again = FormalismFactory.create(Formalism.LIG, FormalismFactory.emit(g))
    assert ig_enumerate(again, 6, 48).words == ig_enumerate(g, 6, 48).words


def test_emitir_nfa_y_releer(data_path):
    a = FormalismFactory.load(data_path("rho_f.nfa"))
    again = FormalismFactory.create(Formalism.NFA, FormalismFactory.emit(a))
    assert nfa_enumerate(again, 5) == nfa_enumerate(a, 5)


def test_emitir_pda_y_releer(data_path):
    p = FormalismFactory.load(data_path("anbn.pda"))
    again = FormalismFactory.create(Formalism.PDA, FormalismFactory.emit(p))
    assert pda_enumerate(again, 6) == pda_enumerate(p, 6)


@pytest.mark.parametrize("name, ext", [
    ("rev.cfg", ".cfg"),
    ("even.rg", ".rg"),
    ("abc.lig", ".lig"),
    ("fg1_blind.oca", ".oca"),
    ("double.fst", ".fst"),
])
def test_extension_para_cada_objeto(data_path, name, ext):
    assert FormalismFactory.extension_for(FormalismFactory.load(data_path(name))) == ext
