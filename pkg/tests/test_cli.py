# tests/test_cli.py
import json
from pathlib import Path

import pytest

pytestmark = [pytest.mark.integration, pytest.mark.cli]


def test_version(invoke):
    result = invoke("--version")
    assert result.exit_code == 0
    assert "1.0.0" in result.output


def test_nivel_de_log_invalido(invoke):
    assert invoke("--log-level", "LOUD", "zoo", "list").exit_code == 2


@pytest.mark.smoke
def test_validar_gramatica(invoke, data_path):
    result = invoke("validate", data_path("sort3.lig"))
    assert result.exit_code == 0
    assert "kind: linear-indexed" in result.output
    assert "rows: 2 2 2 1 4 4 4" in result.output


def test_validar_sistema_et0l(invoke, data_path):
    result = invoke("validate", data_path("kappa.etol"))
    assert result.exit_code == 0
    assert "deterministic:" in result.output


def test_validar_archivo_roto(invoke, data_path):
    result = invoke("validate", data_path("broken.cfg"))
    assert result.exit_code == 2
    assert "error:" in result.output
    assert ":3:" in result.output


def test_enumerar_palabras(invoke, data_path):
    result = invoke("enumerate", data_path("anbn.cfg"), "--bound", "4")
    assert result.exit_code == 0
    assert result.output.split() == ["ε", "ab", "aabb"]


def test_enumerar_pares_de_dos_cintas(invoke, data_path, expected):
    result = invoke("enumerate", data_path("rev.cfg"), "--pairs", "--viewpoint", "two-tape", "--bound", "6")
    assert result.exit_code == 0
    assert len(result.output.strip().splitlines()) == expected["rev"]["pairs"]


def test_enumerar_pares_necesita_una_codificacion(invoke, data_path):
    assert invoke("enumerate", data_path("rev.cfg"), "--pairs").exit_code == 2


def test_enumerar_en_formato_estructurado(invoke, data_path):
    result = invoke(
        "enumerate", data_path("rho_f.nfa"), "--pairs", "--viewpoint", "unfolded",
        "--bound", "6", "--format", "structured",
    )
    assert result.exit_code == 0
    data = json.loads(result.output)
    assert data["bound"] == 6
    assert data["size"] == 7


@pytest.mark.parametrize("word, answer", [("aabb", "yes"), ("aab", "no"), ("eps", "yes")])
def test_pertenencia(invoke, data_path, word, answer):
    result = invoke("member", data_path("anbn.cfg"), word)
    assert result.exit_code == 0
    assert result.output.strip() == answer


def test_pertenencia_de_un_par(invoke, data_path):
    assert invoke("member", data_path("double.fst"), "xx", "xxxx").output.strip() == "yes"
    assert invoke("member", data_path("double.fst"), "x", "x").output.strip() == "no"


def test_transductor_necesita_dos_palabras(invoke, data_path):
    assert invoke("member", data_path("double.fst"), "xx").exit_code == 2


def test_comparar_iguales(invoke, data_path):
    result = invoke("compare", data_path("rho_f.rg"), data_path("rho_f.nfa"), "--viewpoint", "unfolded")
    assert result.exit_code == 0
    assert "equal: yes" in result.output


def test_comparar_distintos(invoke, data_path):
    result = invoke("compare", data_path("rev.cfg"), data_path("swap.cfg"), "--bound", "2")
    assert result.exit_code == 1
    assert "equal: no" in result.output


def test_convertir_y_escribir(invoke, data_path, tmp_path):
    out = tmp_path / "rho_f_two_tape.cfg"
    result = invoke("convert", "u2t-reg", data_path("rho_f.rg"), "--bound", "6", "-o", out)
    assert result.exit_code == 0
    assert "verdict: verified" in result.output
    assert "(.,x)" in out.read_text(encoding="utf-8")


def test_convertir_homomorfismo(invoke, data_path):
    result = invoke("convert", "homomorphism", data_path("anbn.cfg"), "--map", "a=cc", "--bound", "4")
    assert result.exit_code == 0
    assert "c c" in result.output


def test_homomorfismo_sin_reglas(invoke, data_path):
    assert invoke("convert", "homomorphism", data_path("anbn.cfg")).exit_code == 2


def test_convertir_se_niega_sin_verificacion(invoke, data_path, tmp_path):
    out = tmp_path / "rev.lig"
    result = invoke("convert", "t2u-cfg-lig", data_path("rev.cfg"), "--bound", "2", "--steps", "1", "-o", out)
    assert result.exit_code == 1
    assert "refusing" in result.output
    assert not out.exists()


def test_convertir_sin_verificar(invoke, data_path, tmp_path):
    out = tmp_path / "rev.lig"
    result = invoke("convert", "t2u-cfg-lig", data_path("rev.cfg"), "--no-verify", "-o", out)
    assert result.exit_code == 0
    assert Path(out).exists()


def test_convertir_cfg_a_lig_verificada(invoke, data_path, tmp_path):
    out = tmp_path / "rev.lig"
    result = invoke("convert", "t2u-cfg-lig", data_path("rev.cfg"), "--bound", "6", "-o", out)
    assert result.exit_code == 0
    assert "verdict: verified" in result.output
    assert Path(out).exists()


def test_zoo_lista(invoke):
    result = invoke("zoo", "list")
    assert result.exit_code == 0
    assert result.output.startswith("rev\t")
    assert "decider only" in result.output


def test_zoo_lista_estructurada(invoke):
    data = json.loads(invoke("zoo", "list", "--format", "structured").output)
    assert data[0]["name"] == "rev"


def test_zoo_muestra(invoke):
    result = invoke("zoo", "sample", "rev", "--bound", "2")
    assert result.exit_code == 0
    assert len(result.output.strip().splitlines()) == 7


def test_zoo_verifica(invoke):
    result = invoke("zoo", "check", "rho_e", "--bound", "6")
    assert result.exit_code == 0
    assert "verified: yes" in result.output


def test_zoo_entrada_desconocida(invoke):
    result = invoke("zoo", "check", "nope")
    assert result.exit_code == 2
    assert "error:" in result.output


def test_zoo_emite_una_representacion(invoke, tmp_path):
    out = tmp_path / "rev.cfg"
    assert invoke("zoo", "emit", "rev", "two-tape-cfg", "-o", out).exit_code == 0
    result = invoke("compare", out, out, "--bound", "3")
    assert result.exit_code == 0


@pytest.mark.parametrize("u, v, answer", [("xX", "eps", "yes"), ("xx", "x", "no")])
def test_wp_decide(invoke, u, v, answer):
    result = invoke("wp", "decide", "wp_FG1", u, v)
    assert result.exit_code == 0
    assert result.output.strip() == answer


@pytest.mark.slow
def test_wp_de_dos_cintas(invoke, data_path, tmp_path):
    out = tmp_path / "wp.cfg"
    result = invoke("wp", "two-tape", data_path("swap.cfg"), "--bound", "3", "-o", out)
    assert result.exit_code == 0
    assert out.exists()
