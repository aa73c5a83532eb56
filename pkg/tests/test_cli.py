import json

import pytest

from fracjump.cli import run
from fracjump.compiler import deserialize
from fracjump.generator import decode_raw

from conftest import BIG_P, PRINTED_F5_MATRIX


@pytest.fixture()
def f5_file(tmp_path):
    path = tmp_path / "f5.fjp"
    assert run(["compile", "--p", "5", "--poly", "x^3+3*x+3", "--out", str(path)]) == 0
    return path


@pytest.fixture()
def f3_file(tmp_path):
    path = tmp_path / "f3.fjp"
    assert run(["compile", "--p", "3", "--poly", "1,2,0,1", "--out", str(path)]) == 0
    return path


def lines(capsys):
    return capsys.readouterr().out.splitlines()


def test_version(capsys):
    assert run(["--version"]) == 0
    assert capsys.readouterr().out.strip() == "fracjump 0.1.0 (FJMP format 1)"


def test_usage_errors(capsys):
    assert run([]) == 2
    assert run(["bogus"]) == 2
    assert run(["check-poly", "--p", "5"]) == 2
    assert run(["bench"]) == 2


def test_search_poly(capsys):
    assert run(["search-poly", "--p", "2", "--degree", "3"]) == 0
    assert lines(capsys) == ["1,1,0,1\tx^3 + x + 1"]
    assert run(["search-poly", "--p", "7", "--degree", "2", "--all"]) == 0
    assert len(lines(capsys)) == 12


def test_search_poly_seeded(capsys, monkeypatch):
    monkeypatch.setenv("FRACJUMP_SEED", "9")
    assert run(["search-poly", "--p", "11", "--degree", "3", "--strategy", "seeded-random"]) == 0
    first = lines(capsys)
    assert run(["search-poly", "--p", "11", "--degree", "3", "--strategy", "seeded-random",
                "--seed", "9"]) == 0
    assert lines(capsys) == first


def test_search_poly_not_found(capsys):
    assert run(["search-poly", "--p", "5", "--degree", "3", "--strategy", "seeded-random",
                "--max-tries", "0"]) == 1
    assert capsys.readouterr().err.startswith("error[")


def test_check_poly(capsys):
    assert run(["check-poly", "--p", "5", "--poly", "x^3+3*x+3"]) == 0
    assert lines(capsys) == ["polynomial: x^3 + 3*x + 3", "irreducible: true",
                             "projectively_primitive: true"]
    assert run(["check-poly", "--p", "3", "--poly", "x^2+1"]) == 0
    assert lines(capsys)[1:] == ["irreducible: true", "projectively_primitive: false"]


def test_check_poly_big_prime_with_hint(capsys):
    N = (BIG_P**3 - 1) // (BIG_P - 1)
    assert run(["check-poly", "--p", str(BIG_P), "--poly", "x^3-x-1",
                "--hint-factors", str(N)]) == 0
    assert lines(capsys)[-1] == "projectively_primitive: true"
    assert run(["check-poly", "--p", "5", "--poly", "x^3+3*x+3", "--hint-factors", "7"]) == 1


def test_make_primitive(capsys):
    assert run(["make-primitive", "--p", "2", "--poly", "x^3+x+1"]) == 0
    assert lines(capsys)[:2] == ["lambda: 1", "primitive: 1,1,0,1"]
    assert run(["make-primitive", "--p", "3", "--poly", "x^2+1"]) == 1


def test_compile_and_describe(tmp_path, capsys):
    out = tmp_path / "p.fjp"
    assert run(["compile", "--p", "5", "--matrix", PRINTED_F5_MATRIX, "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert text.count("branch") == 3 and "bytes: 18" in text
    prog = deserialize(out.read_bytes())
    assert (prog.p, prog.n) == (5, 2)


def test_compile_refuses_non_transitive(tmp_path, capsys):
    out = tmp_path / "bad.fjp"
    assert run(["compile", "--p", "5", "--matrix", "1,1;0,1", "--out", str(out)]) == 1
    assert "error[" in capsys.readouterr().err
    assert not out.exists()
    assert run(["compile", "--p", "5", "--out", str(out)]) == 1


def test_gen_dec_and_raw(f5_file, tmp_path, capsys):
    assert run(["gen", "--program", str(f5_file), "--start", "1,1", "--count", "3"]) == 0
    out = lines(capsys)
    assert out[0] == "2 3" and len(out) == 3
    assert run(["gen", "--program", str(f5_file), "--count", "25"]) == 0
    assert len(set(lines(capsys))) == 25
    raw = tmp_path / "s.bin"
    assert run(["gen", "--program", str(f5_file), "--count", "25", "--format", "raw",
                "--out", str(raw)]) == 0
    assert len(set(decode_raw(raw.read_bytes(), 5, 2))) == 25


def test_gen_bad_inputs(f5_file, tmp_path, capsys):
    assert run(["gen", "--program", str(f5_file), "--start", "1"]) == 1
    assert run(["gen", "--program", str(f5_file), "--start", "a,b"]) == 1
    assert run(["gen", "--program", str(f5_file), "--count", "0"]) == 1
    assert run(["gen", "--program", str(tmp_path / "missing.fjp")]) == 1
    junk = tmp_path / "junk.fjp"
    junk.write_bytes(b"not a program")
    assert run(["gen", "--program", str(junk)]) == 1
    assert "error[" in capsys.readouterr().err


def test_verify_orbit(f5_file, tmp_path, capsys):
    js, png = tmp_path / "o.json", tmp_path / "o.png"
    assert run(["verify-orbit", "--program", str(f5_file), "--json", str(js), "--plot", str(png)]) == 0
    out = lines(capsys)
    assert "orbit_length: 25" in out and "is_full_cycle: true" in out
    assert "branch_histogram: 20 4 1" in out
    assert json.loads(js.read_text())["orbit_length"] == 25
    assert png.stat().st_size > 1000


def test_jump_index(capsys):
    assert run(["jump-index", "--p", "5", "--matrix", PRINTED_F5_MATRIX]) == 0
    assert lines(capsys) == ["absolute_jump_index: 3"]
    assert run(["jump-index", "--p", "5", "--matrix", "1,1;0,1"]) == 0
    assert lines(capsys) == ["absolute_jump_index: 1"]


def test_compound(f5_file, f3_file, tmp_path, capsys):
    assert run(["compound", "--program", str(f5_file), "--program", str(f3_file),
                "--start", "1,1", "--count", "2"]) == 0
    assert lines(capsys)[0] == "2 8"
    js = tmp_path / "c.json"
    assert run(["compound", "--program", str(f5_file), "--program", str(f3_file),
                "--verify", "--json", str(js)]) == 0
    out = lines(capsys)
    assert "N: 15" in out and "u: 6 10" in out and "is_full_cycle: true" in out
    assert json.loads(js.read_text())["orbit_length"] == 225
    assert run(["compound", "--program", str(f5_file), "--program", str(f5_file)]) == 1


def test_harden_secret_prime(tmp_path, capsys):
    prog = tmp_path / "f11.fjp"
    assert run(["search-poly", "--p", "11", "--degree", "3"]) == 0
    poly = lines(capsys)[0].split("\t")[0]
    assert run(["compile", "--p", "11", "--poly", poly, "--out", str(prog)]) == 0
    capsys.readouterr()
    assert run(["harden", "--mode", "secret-prime", "--program", str(prog),
                "--out-modulus", "3", "--count", "81"]) == 0
    out = [tuple(map(int, ln.split())) for ln in lines(capsys)]
    assert len(out) == 81 and all(0 <= c < 3 for v in out for c in v)
    assert run(["harden", "--mode", "secret-prime", "--program", str(prog)]) == 1
    assert run(["harden", "--mode", "secret-prime", "--program", str(prog),
                "--out-modulus", "5"]) == 1


def test_harden_forced_jump(f5_file, capsys):
    assert run(["harden", "--mode", "forced-jump", "--program", str(f5_file), "--count", "13"]) == 0
    assert len(set(lines(capsys))) == 13
    assert run(["harden", "--mode", "forced-jump", "--program", str(f5_file),
                "--threshold", "99"]) == 1


def test_bench(f5_file, tmp_path, capsys):
    js, png = tmp_path / "b.json", tmp_path / "b.png"
    assert run(["bench", "--program", str(f5_file), "--runs", "1", "--json", str(js),
                "--plot", str(png)]) == 0
    out = lines(capsys)
    assert "fj_inversions_per_coordinate: 1/2" in out
    assert "icg_inversions_per_element: 1" in out
    assert json.loads(js.read_text())["iterations"] == 10_000
    assert png.stat().st_size > 1000
    assert run(["bench", "--p", "5", "--poly", "x^3+3*x+3", "--runs", "1"]) == 0
    assert run(["bench", "--program", str(f5_file), "--iterations", "10"]) == 1
