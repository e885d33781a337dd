import subprocess
import sys

import pytest

from latvac.cli import main, parse_group_spec, parse_q_spec
from latvac.errors import LatvacError
from latvac.io import (
    ParseError,
    format_lattice,
    parse_automorphism_file,
    parse_lattice_file,
    parse_matrix,
    parse_vector,
    resolve_path,
    shipped_path,
)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def asym(tmp_path):
    p = tmp_path / "asym.lat"
    p.write_text("2\n2 1\n0 2\n")
    return str(p)


def test_lattice_info_leech(capsys):
    code, out, _ = run(capsys, "lattice", "info", "data/leech.lat")
    assert code == 0
    assert "roots: 0\n" in out


def test_lattice_info_e8(capsys):
    code, out, _ = run(capsys, "lattice", "info", "data/e8.lat", "--bound", "4")
    assert code == 0
    text = " ".join(out.split())
    assert "roots: 240" in text and "norm counts: 0:1 2:240 4:2160" in text


def test_theta_and_dform(capsys):
    code, out, _ = run(capsys, "lattice", "theta", "data/e8.lat", "--prec", "3")
    assert code == 0 and out.strip() == "1 + 240*q + 2160*q^2 + O(q^3)"
    code, out, _ = run(capsys, "lattice", "dform", "data/a1.lat")
    assert code == 0 and "1/4" in out


def test_orbifold_leech(capsys):
    code, out, _ = run(capsys, "orbifold", "data/leech.lat", "data/neg1_24.aut")
    text = " ".join(out.split())
    assert code == 0
    assert "type: 2{0}" in out and "dim V1 orb: 0" in out and "rho: 3/2" in text


def test_orbifold_dims_parse(capsys):
    code, _, err = run(capsys, "orbifold", "data/leech.lat", "data/neg1_24.aut", "--dims", "1=0,2")
    assert code == 2 and "--dims" in err


def test_schur_e8(capsys):
    code, out, _ = run(capsys, "schur", "data/e8.lat", "data/neg1_8.aut")
    text = " ".join(out.split())
    assert code == 0 and "indicator: +1" in out and "zeros of q: 136" in text


def test_character(capsys):
    code, out, _ = run(capsys, "character", "data/a1.lat", "--coset", "1/2", "--prec", "3")
    assert code == 0 and out.startswith("2*q^(5/24) + 2*q^(29/24) + 6*q^(53/24)")
    code, _, _ = run(capsys, "character", "data/a1.lat")
    assert code == 2


def test_zhu(capsys):
    code, out, _ = run(capsys, "zhu", "data/a1.lat")
    assert code == 0 and "(ST)^3 = S^2: exact ok" in out


def test_neighbor(capsys):
    code, out, _ = run(capsys, "neighbor", "data/e8.lat", "--b", "1,0,0,0,0,0,0,0")
    assert code in (0, 1)
    code, out, _ = run(capsys, "neighbor-search", "data/e8.lat", "--budget", "2")
    assert code == 0 and "fingerprint (240, 1): 2" in out
    code, _, _ = run(capsys, "neighbor-search", "data/e8.lat", "--budget", "-1")
    assert code == 1


def test_modcat(capsys):
    code, out, _ = run(capsys, "modcat", "from-form", "2,2", "0,0;1/2", "--verify", "--verlinde")
    assert code == 0
    assert "coherence: ok" in out and "trace roundtrip: ok" in out and "group law: ok" in out
    code, out, _ = run(capsys, "modcat", "from-form", "2", "1/2", "--verlinde")
    assert code == 1
    code, _, _ = run(capsys, "modcat", "from-form", "2,x", "0")
    assert code == 2
    code, _, _ = run(capsys, "modcat", "from-form", "2,2", "0")
    assert code == 2
    code, _, err = run(capsys, "modcat", "from-form", "3", "1/2")
    assert code == 1 and "not well defined" in err


def test_exit_codes(capsys, asym):
    assert run(capsys, "lattice", "info", "data/missing.lat")[0] == 2
    assert run(capsys, "lattice", "info", "/nonexistent/x.lat")[0] == 2
    code, _, err = run(capsys, "lattice", "info", asym)
    assert code == 1 and "symmetric" in err
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys)[0] == 2
    # automorphism of the wrong size is a domain error
    assert run(capsys, "schur", "data/e8.lat", "data/neg1_24.aut")[0] == 1


def test_byte_deterministic():
    cmd = [sys.executable, "-m", "latvac.cli", "orbifold", "data/leech.lat", "data/neg1_24.aut", "--summary"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and b"summary type=2{0}" in a


# -- io ---------------------------------------------------------------------------------


def test_parse_matrix_errors():
    with pytest.raises(ParseError, match="empty"):
        parse_matrix("# only a comment\n", True)
    with pytest.raises(ParseError, match="line 2"):
        parse_matrix("2\n1 x\n0 1\n", True)
    with pytest.raises(ParseError, match="expected 2 entries"):
        parse_matrix("2\n1 0 0\n0 1\n", True)
    with pytest.raises(ParseError, match="matrix rows"):
        parse_matrix("3\n1 0 0\n", True)
    assert parse_matrix("# c\n1 0\n\n0 1\n", False) == [[1, 0], [0, 1]]


def test_roundtrip(tmp_path):
    lat = parse_lattice_file(shipped_path("e8.lat"))
    p = tmp_path / "e8.lat"
    p.write_text(format_lattice(lat, "copy"))
    assert parse_lattice_file(p).gram == lat.gram


def test_automorphism_file(e8):
    sigma = parse_automorphism_file("data/neg1_8.aut", e8)
    assert sigma.order == 2
    with pytest.raises(LatvacError, match="size"):
        parse_automorphism_file("data/neg1_1.aut", e8)


def test_parse_vector():
    assert parse_vector("1/2, 0, -3") == (0.5, 0, -3)
    with pytest.raises(ParseError):
        parse_vector("1/0")
    with pytest.raises(ParseError, match="expected 2"):
        parse_vector("1", 2)


def test_resolve_path():
    assert resolve_path("data/e8.lat").is_file()
    with pytest.raises(ParseError, match="no such file"):
        resolve_path("data/nothing.lat")


def test_specs():
    assert parse_group_spec("1") == () and parse_group_spec("2,4") == (2, 4)
    with pytest.raises(ParseError):
        parse_group_spec("2,1")
    f = parse_q_spec("1/4,1/4;1/2", (2, 2))
    assert f.b_gen[0][1] == 0.5
