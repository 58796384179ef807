# tests/test_lsystems.py
import pytest

from core.errors import FormatError, NotDeterministic
from models.RelkitModels import Formalism, Viewpoint
from patterns.formalism_factory import FormalismFactory
from services.lsystem_service import EDT0LWitness, apply_tables, edt0l_validate, etol_enumerate, etol_member
from services.relation_service import relation_sample
from services.zoo_service import pow2_system, rho_g_system, zoo_service

pytestmark = [pytest.mark.unit, pytest.mark.lsystems]


def test_potencias_de_dos():
    result = etol_enumerate(pow2_system(), 8, 48)
    assert result.complete
    assert result.words == {("x",) * n for n in (1, 2, 4, 8)}


def test_tablas_se_aplican_en_paralelo():
    forms = apply_tables(pow2_system(), ["d", "d", "t"])
    assert forms == {("x",) * 4}


def test_pertenencia_et0l():
    assert etol_member(pow2_system(), ("x",) * 4, 48)
    assert not etol_member(pow2_system(), ("x",) * 3, 48)


def test_cuadrados_desplegados():
    sample, complete = relation_sample(rho_g_system(), Viewpoint.UNFOLDED, 9)
    assert complete
    assert sample.pairs == {(("x",) * n, ("x",) * (n * n)) for n in range(4)}


def test_rotacion_desde_archivo(data_path):
    sys = FormalismFactory.load(data_path("kappa.etol"))
    sample, complete = relation_sample(sys, Viewpoint.UNFOLDED, 4)
    assert complete
    assert sample == zoo_service.sample("kappa", 4)
    assert (("a", "b", "b"), ("b", "a", "b")) in sample


def test_no_terminal_omitido_se_reescribe_por_si_mismo(data_path):
    sys = FormalismFactory.load(data_path("kappa.etol"))
    table = sys.table("1a")
    assert table.replacements("V") == (("V",),)
    assert "V" in table.implicit


def test_edt0l_detecta_tablas_no_deterministas():
    text = "axiom: S\ntable t: S -> a | b\n"
    sys = FormalismFactory.create(Formalism.ET0L, text)
    with pytest.raises(NotDeterministic):
        edt0l_validate(sys)
    assert isinstance(edt0l_validate(pow2_system()), EDT0LWitness)


def test_et0l_sin_axioma(write_file):
    path = write_file("noaxiom.etol", "table t: S -> a\n")
    with pytest.raises(FormatError):
        FormalismFactory.load(path)


def test_emitir_y_releer_conserva_el_lenguaje(data_path):
    sys = FormalismFactory.load(data_path("kappa.etol"))
    again = FormalismFactory.create(Formalism.ET0L, FormalismFactory.emit(sys))
    first, _ = relation_sample(sys, Viewpoint.UNFOLDED, 3)
    second, _ = relation_sample(again, Viewpoint.UNFOLDED, 3)
    assert first == second
