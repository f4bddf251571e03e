import json
import pathlib

import pytest

import cohw
from cohw.cli import (
    ParseError, load_description, main, parse_description, run_verify,
)

CORPUS = pathlib.Path(cohw.__file__).parent / "corpus"


def run(capsys, argv):
    code = main(argv)
    return code, capsys.readouterr().out


def test_corpus_parses_and_validates(capsys):
    files = sorted(CORPUS.glob("*.alg"))
    assert len(files) == 4
    for f in files:
        code, out = run(capsys, ["validate", str(f)])
        assert code == 0, out
        assert "verdict: ok" in out
        assert "sha256=" in out


def test_pi_s3_double_cosets(capsys):
    code, out = run(capsys, ["pi", "--degree", "1",
                             str(CORPUS / "s3_double_coset.alg")])
    assert code == 0
    assert "pi1 classes: 2" in out
    code, out = run(capsys, ["pi", "--degree", "0",
                             str(CORPUS / "s3_double_coset.alg")])
    assert code == 0
    assert "pi0 size: 1" in out
    # higher degrees are not defined for finite patterns
    code, out = run(capsys, ["pi", "--degree", "2",
                             str(CORPUS / "s3_double_coset.alg")])
    assert code == 2


def test_phin_les_flagship(capsys):
    code, out = run(capsys, ["phin-les",
                             str(CORPUS / "heisenberg_isocrystal.alg")])
    assert code == 0
    assert "middle map bijective: yes; H1_{g/e}(Z) dim 1" in out


def test_phin_classify(capsys):
    code, out = run(capsys, ["phin-classify",
                             str(CORPUS / "heisenberg_isocrystal.alg")])
    assert code == 0
    assert "transitive: yes" in out


def test_phin_classify_negative_certificate(tmp_path, capsys):
    # the identity Frobenius has everything as stabilizer: exit code 1
    f = tmp_path / "ident.alg"
    f.write_text("[lie_algebra]\ndim 3\nbracket 0 1 2 1\n"
                 "[phi]\nrow 1 0 0\nrow 0 1 0\nrow 0 0 1\n")
    code, out = run(capsys, ["phin-classify", str(f)])
    assert code == 1
    assert "transitive: no" in out
    assert "stabilizer dim: 3" in out


def test_hodge_classify_flagship(capsys):
    code, out = run(capsys, ["hodge-classify", "--element", "0,0,1+2i",
                             str(CORPUS / "heisenberg_mhs.alg")])
    assert code == 0
    assert "normal form: 0, 0, 2*i" in out
    assert "reduced coordinates: 2" in out
    # reducing the weight -1 block creates a central cross term: the
    # class of (1, 2i, 0) is the generator i of the center invariant
    code, out = run(capsys, ["hodge-classify", "--element", "1,2i,0",
                             str(CORPUS / "heisenberg_mhs.alg")])
    assert code == 0
    assert "normal form: 0, 0, 1*i" in out
    code, out = run(capsys, ["hodge-classify", "--element", "0,0,0",
                             str(CORPUS / "heisenberg_mhs.alg")])
    assert code == 0
    assert "base class" in out


def test_hodge_les_flagship(capsys):
    code, out = run(capsys, ["hodge-les",
                             str(CORPUS / "heisenberg_mhs.alg")])
    assert code == 0
    assert "middle map bijective: yes; H1(Z) dim 1" in out
    assert "h1 dimensions: Z 1, U 1, Q 0" in out


def test_h1_finite_action(tmp_path, capsys):
    # C2 inverting C3: trivial fixed points, H^1 trivial (coprime orders)
    f = tmp_path / "act.alg"
    f.write_text("[finite_group]\ncyclic 2\n"
                 "[action]\ncarrier cyclic 3\n"
                 "generator 1 permutation 0 2 1\n")
    code, out = run(capsys, ["h1", str(f)])
    assert code == 0
    assert "h0 size: 1" in out
    assert "h1 classes: 1" in out


def test_located_parse_errors():
    with pytest.raises(ParseError) as e:
        parse_description("")
    assert (e.value.line, e.value.col) == (1, 1)
    with pytest.raises(ParseError) as e:
        parse_description("[lie_algebra]\ndim 3\nbracket 0 1 7 1\n")
    assert e.value.line == 3
    assert e.value.col == 13
    assert "out of range" in e.value.message
    with pytest.raises(ParseError) as e:
        parse_description("[no_such_section]\n")
    assert e.value.line == 1
    with pytest.raises(ParseError) as e:
        parse_description("field quaternionic\n")
    assert "rational or gaussian" in e.value.message
    with pytest.raises(ParseError) as e:
        parse_description("[lie_algebra\ndim 1\n")
    assert "unterminated" in e.value.message
    # non-antisymmetric / non-Jacobi data is rejected by the validator
    with pytest.raises(ParseError):
        parse_description("[lie_algebra]\ndim 2\nbracket 0 0 1 1\n")


def test_parse_round_trip_objects():
    df = load_description(str(CORPUS / "heisenberg_isocrystal.alg"))
    assert df.L.dim == 3 and df.L.nilpotency_class == 2
    assert df.p == 2
    assert df.phi[2][2] == pytest.approx(0.5)
    assert len(df.extension["incl"]) == 1
    assert len(df.extension["proj"]) == 2


def test_exit_codes(capsys):
    code, _ = run(capsys, ["validate", "/no/such/file.alg"])
    assert code == 2
    code, out = run(capsys, ["verify", "--suite", "nope"])
    assert code == 2
    assert "unknown suite" in out


def test_json_format(capsys):
    code, out = run(capsys, ["validate", str(CORPUS / "heisenberg.alg"),
                             "--format", "json"])
    assert code == 0
    doc = json.loads(out)
    assert doc["exit"] == 0
    assert any("class 2" in line for line in doc["lines"])


def test_verify_small_suites(capsys):
    code, out = run(capsys, ["verify", "--suite", "bch", "--seed", "7",
                             "--instances", "50"])
    assert code == 0
    assert "suite bch: pass (50 instances)" in out
    assert "verdict: pass" in out


def test_verify_deterministic(capsys):
    args = ["verify", "--suite", "double-coset", "--seed", "3",
            "--instances", "3"]
    _, out1 = run(capsys, args)
    _, out2 = run(capsys, args)
    assert out1 == out2


def test_run_verify_all_suites_smoke():
    results = run_verify(None, 11, 2)
    assert [name for name, _ in results] == [
        "bch", "double-coset", "dold-kan", "eilenberg-zilber", "les",
        "twist", "twisted-conjugation", "hopf"]
    assert all(not rep["failures"] for _, rep in results)
