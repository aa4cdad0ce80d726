import io
import json
import re
import subprocess
import sys
from fractions import Fraction

import pytest

from ekr_kit.cli import main
from ekr_kit.formats import dumps_coo, load_coo, loads_coo
from ekr_kit.errors import DomainError
from ekr_kit.pseudoadjacency import wilson_descriptor
from ekr_kit.scheme import DenseRationalMatrix, SchemeParams

RAT = re.compile(r"^-?\d+(/[1-9]\d*)?$")


def run(*argv, env=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, _ = run("--format", "json", *argv)
    return code, json.loads(out)


def rationals_in(obj):
    if isinstance(obj, dict):
        for v in obj.values():
            yield from rationals_in(v)
    elif isinstance(obj, list):
        for v in obj:
            yield from rationals_in(v)
    elif isinstance(obj, str) and re.match(r"^-?\d", obj):
        yield obj


# -- verify-equality ---------------------------------------------------------

def test_verify_equality_default_grid():
    code, rep = run_json("verify-equality", "--n-max", "12", "--k-max", "5")
    assert code == 0
    assert rep["results"]["all_equal"] and len(rep["results"]["triples"]) == 50
    triples = [(r["n"], r["k"], r["t"]) for r in rep["results"]["triples"]]
    assert triples == sorted(triples)


def test_verify_equality_materialized():
    code, out, _ = run("verify-equality", "--n-max", "7", "--k-max", "3", "--mode", "materialized")
    assert code == 0
    assert "8/8 triples equal (materialized)" in out


@pytest.mark.parametrize("argv", [["--n-max", "0"], ["--n-max", "3", "--k-max", "5"], ["--mode", "fast"], ["--n-max", "x"]])
def test_verify_equality_bad_flags(argv):
    code, _, err = run("verify-equality", *argv)
    assert code == 2 and err


def test_verify_equality_failure_exit(monkeypatch):
    from ekr_kit import pseudoadjacency as pa

    original = pa._wilson_coefficient
    monkeypatch.setattr(pa, "_wilson_coefficient", lambda p, i: original(p, i) * 2)
    code, rep = run_json("verify-equality", "--n-max", "7", "--k-max", "3")
    assert code == 1
    bad = [r for r in rep["results"]["triples"] if not r["equal"]]
    assert bad and "mismatches" in bad[0]


# -- coeffs ------------------------------------------------------------------

def test_coeffs_wilson_and_schrijver_agree():
    _, a, _ = run("coeffs", "--n", "7", "--k", "3", "--t", "2", "--matrix", "wilson", "--basis", "D")
    _, b, _ = run("coeffs", "--n", "7", "--k", "3", "--t", "2", "--matrix", "schrijver", "--basis", "D")
    assert "D_3: -1" in a and "D_2: 1/3" in a
    assert a.splitlines()[1:] == b.splitlines()[1:]


def test_coeffs_schrijver_A():
    code, rep = run_json("coeffs", "--n", "5", "--k", "2", "--t", "1", "--matrix", "schrijver", "--basis", "A")
    assert code == 0 and rep["results"]["coefficients"] == {"A_2": "1/2"}


@pytest.mark.parametrize("triple", [("5", "3", "1"), ("7", "3", "3"), ("7", "3", "0")])
def test_coeffs_invalid_triple(triple):
    n, k, t = triple
    assert run("coeffs", "--n", n, "--k", k, "--t", t)[0] == 2


# -- spectrum ----------------------------------------------------------------

def test_spectrum_732():
    code, rep = run_json("spectrum", "--n", "7", "--k", "3", "--t", "2")
    r = rep["results"]
    assert code == 0
    assert (r["lambda_max_certified"], r["lambda_min_certified"], r["hoffman_bound"]) == ("6", "-1", "5")


def test_spectrum_below_threshold():
    code, rep = run_json("spectrum", "--n", "8", "--k", "4", "--t", "2")
    r = rep["results"]
    assert code == 1
    assert r["shifted_psd"]["verdict"] == "not_psd"
    assert r["hoffman_bound"] is None and r["lambda_min_certified"] == "uncertified"
    w = [Fraction(x) for x in r["shifted_psd"]["witness"]]
    M = wilson_descriptor(SchemeParams(8, 4, 2)).materialize().shifted(1)
    assert M.quadratic_form(w) == Fraction(r["shifted_psd"]["witness_value"]) < 0


def test_spectrum_cap():
    assert run("spectrum", "--n", "20", "--k", "10", "--t", "2")[0] == 3
    assert run("spectrum", "--n", "7", "--k", "3", "--t", "2", "--cap-n", "34")[0] == 3


def test_cap_from_environment(monkeypatch):
    monkeypatch.setenv("EKR_KIT_CAP", "34")
    assert run("spectrum", "--n", "7", "--k", "3", "--t", "2")[0] == 3
    assert run("spectrum", "--n", "7", "--k", "3", "--t", "2", "--cap-n", "35")[0] == 0
    monkeypatch.setenv("EKR_KIT_CAP", "lots")
    assert run("spectrum", "--n", "7", "--k", "3", "--t", "2")[0] == 2


# -- matrix ------------------------------------------------------------------

def test_matrix_petersen(tmp_path):
    path = tmp_path / "omega.coo"
    code, out, _ = run("matrix", "--n", "5", "--k", "2", "--t", "1", "--out", str(path))
    assert code == 0 and "wrote" in out
    text = path.read_text()
    assert text.splitlines()[0] == "rational-coo 10 10 15"
    M = load_coo(path)
    nz = [x for row in M.rows for x in row if x != 0]
    assert len(nz) == 30 and set(nz) == {Fraction(1, 2)}
    assert M == wilson_descriptor(SchemeParams(5, 2, 1)).materialize()


def test_matrix_to_stdout_round_trip():
    code, out, _ = run("matrix", "--n", "7", "--k", "3", "--t", "2", "--matrix", "schrijver")
    assert code == 0
    header = out.splitlines()[0].split()
    assert header[:3] == ["rational-coo", "35", "35"] and int(header[3]) == len(out.splitlines()) - 1
    assert loads_coo(out) == wilson_descriptor(SchemeParams(7, 3, 2)).materialize()


def test_matrix_io_error(tmp_path):
    assert run("matrix", "--n", "5", "--k", "2", "--t", "1", "--out", str(tmp_path / "no" / "x.coo"))[0] == 4


def test_coo_format_round_trip_and_errors():
    M = DenseRationalMatrix([[Fraction(1, 3), Fraction(-2)], [Fraction(-2), Fraction(0)]])
    text = dumps_coo(M)
    assert text == "rational-coo 2 2 2\n0 0 1/3\n0 1 -2\n"
    assert loads_coo(text) == M
    for bad in ["", "coo 2 2 0\n", "rational-coo 2 3 0\n", "rational-coo 2 2 1\n", "rational-coo 2 2 1\n1 0 1\n",
                "rational-coo 2 2 1\n0 0 1.5\n", "rational-coo 2 2 1\n0 0\n"]:
        with pytest.raises(DomainError):
            loads_coo(bad)


# -- alpha, inner-dist, designs ---------------------------------------------

def test_alpha():
    code, rep = run_json("alpha", "--n", "7", "--k", "3", "--t", "2")
    r = rep["results"]
    assert code == 0 and r["alpha"] == 5 == r["ekr_bound"] == r["star_size"]
    assert len(r["witness"]) == 5
    assert run("alpha", "--n", "8", "--k", "3", "--t", "2")[0] == 3


def test_inner_dist_file(data_dir):
    code, out, _ = run("inner-dist", "--family", str(data_dir / "fano.blocks"))
    assert code == 0 and out.strip() == "1, 0, 6, 0"


def test_inner_dist_errors(tmp_path):
    assert run("inner-dist", "--family", str(tmp_path / "missing"))[0] == 4
    bad = tmp_path / "bad.blocks"
    bad.write_text("n=7 k=3\n1 2\n")
    assert run("inner-dist", "--family", str(bad))[0] == 2
    assert run("inner-dist")[0] == 2
    assert run("inner-dist", "--design", "sts9")[1].strip() == "1, 0, 9, 2"


def test_designs_check():
    code, rep = run_json("designs", "--name", "sts9", "--check")
    d = rep["results"]["designs"][0]
    assert code == 0 and d["matches"]
    assert d["inner_distribution"] == ["1", "0", "9", "2"]
    assert d["a_vector"] == {"a_3": "2", "a_2": "9"}
    assert run("designs", "--name", "nope")[0] == 2


# -- reports -----------------------------------------------------------------

@pytest.mark.parametrize(
    "argv",
    [
        ["spectrum", "--n", "8", "--k", "4", "--t", "2"],
        ["verify-equality", "--n-max", "9", "--k-max", "4"],
        ["designs", "--check"],
        ["coeffs", "--n", "9", "--k", "4", "--t", "3", "--matrix", "schrijver", "--basis", "A"],
    ],
)
def test_json_reports_rationals_and_determinism(argv):
    _, a = run_json(*argv)
    _, b = run_json(*argv)
    assert a.pop("timing_seconds") >= 0
    b.pop("timing_seconds")
    assert a == b
    assert json.dumps(a) == json.dumps(b)
    for s in rationals_in(a["results"]):
        assert RAT.match(s), s
        x = Fraction(s)
        assert s == (str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}")


def test_report_to_file(tmp_path):
    path = tmp_path / "rep.json"
    code, out, _ = run("--format", "json", "--out", str(path), "designs")
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["command"] == "designs"


def test_global_flags_after_subcommand():
    code, out, _ = run("coeffs", "--n", "7", "--k", "3", "--t", "2", "--format", "json")
    assert code == 0 and json.loads(out)["results"]["coefficients"]["D_2"] == "1/3"


@pytest.mark.parametrize("argv", [[], ["frobnicate"], ["spectrum", "--n", "7"], ["--format", "xml", "designs"]])
def test_malformed_invocations_exit_2(argv):
    assert run(*argv)[0] == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "ekr_kit", "coeffs", "--n", "7", "--k", "3", "--t", "2"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and "D_2: 1/3" in proc.stdout
