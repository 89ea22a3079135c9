import json
import shutil

import pytest

import cli
from services import suites
from services.checks import CheckReport


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def json_lines(out):
    return [json.loads(line) for line in out.splitlines() if line.strip()]


@pytest.fixture
def small_corpus(tmp_path, corpus_dir):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    shutil.copy(corpus_dir / "eval_trivial.json", corpus)
    return corpus


def test_algebra_info(capsys):
    code, out, _ = run(capsys, "algebra", "info", '{"type":"sl","m":2,"n":1}')
    assert code == 0
    (info,) = json_lines(out)
    assert info["dim"] == 8
    assert info["z"] == ["1", "1", "2"]
    assert info["grading"] == {"-1": 2, "0": 4, "1": 2}


def test_algebra_info_text_format(capsys):
    code, out, _ = run(capsys, "--format", "text", "algebra", "info", '{"type":"C","m":3}')
    assert code == 0
    assert "dim: 19\n" in out
    assert "algebra: C(3)\n" in out


def test_format_after_subcommand(capsys):
    code, out, _ = run(capsys, "algebra", "info", '{"type":"sl","m":2,"n":1}', "--format", "text")
    assert code == 0
    assert "dim: 8\n" in out
    code, out, _ = run(capsys, "--format", "text", "algebra", "info", '{"type":"sl","m":2,"n":1}')
    assert "dim: 8\n" in out


def test_algebra_info_from_spec_file(capsys, corpus_dir):
    code, out, _ = run(capsys, "algebra", "info", str(corpus_dir / "eval_c3_natural.json"))
    assert code == 0
    assert json_lines(out)[0]["odd_positive_roots"] == 4


def test_equal_blocks_exit_with_usage_error(capsys):
    code, _, err = run(capsys, "algebra", "info", '{"type":"sl","m":2,"n":2}')
    assert code == 2
    assert "A(n,n) out of scope" in err


def test_bad_arguments(capsys):
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "algebra", "info", "{not json")[0] == 2


def test_module_build_trivial(capsys, corpus_dir):
    code, out, _ = run(capsys, "module", "build", str(corpus_dir / "eval_trivial.json"))
    assert code == 0
    (dump,) = json_lines(out)
    assert dump["dim"] == 1
    assert dump["period"] == 0
    assert dump["irreducible"] is True
    assert dump["annihilator"]["witness"] is None
    assert dump["annihilator"]["radical_witness"] is None


def test_module_build_linear_tau(capsys, corpus_dir):
    path = corpus_dir / "tau_sl21_linear.json"
    code, out, _ = run(capsys, "module", "build", str(path), "--weights", "--window", "0..1")
    assert code == 0
    (dump,) = json_lines(out)
    assert dump["evaluation"] is False
    assert dump["induced_dim"] == 16
    assert dump["spec"]["tau_window"] == ["0", "1"]
    assert set(dump["slices"]) == {"0", "1"}
    assert sum(dump["weights"].values()) == dump["dim"]
    certificate = dump["annihilator"]
    assert certificate["witness"] is None
    assert certificate["radical"] == {"points": ["1"], "mults": [1]}
    assert certificate["radical_witness"]["element"].endswith("⊗P(t)t^0")


def test_iso_identical_specs(capsys, corpus_dir):
    path = str(corpus_dir / "tau_sl21_linear.json")
    code, out, _ = run(capsys, "iso", path, path)
    assert code == 0
    (verdict,) = json_lines(out)
    assert verdict == {"iso": True, "iso_prime": True, "kappa": "1", "sigma": []}


def test_iso_pair_file(capsys, corpus_dir):
    code, out, _ = run(capsys, "iso", str(corpus_dir / "iso_kappa_negative.json"))
    assert code == 0
    (verdict,) = json_lines(out)
    assert verdict["kappa"] == "-1"
    assert verdict["iso_prime"] is False


def test_iso_needs_a_pair_file(capsys, corpus_dir):
    code, _, err = run(capsys, "iso", str(corpus_dir / "eval_trivial.json"))
    assert code == 2
    assert "pair file" in err


def test_verify_unknown_suite(capsys, small_corpus):
    code, _, err = run(capsys, "verify", "nonsense", "--corpus", str(small_corpus))
    assert code == 2
    assert "unknown suite" in err


def test_verify_and_report(capsys, tmp_path, small_corpus):
    results = tmp_path / "results"
    code, out, _ = run(
        capsys, "verify", "evaluation", "--corpus", str(small_corpus), "--results", str(results)
    )
    assert code == 0
    lines = json_lines(out)
    assert {line["name"] for line in lines if "name" in line} == {
        "annihilator",
        "evaluation_kernel",
        "T0_irreducible",
    }
    assert lines[-1]["summary"]["failed"] == 0
    assert (results / "evaluation.json").exists()

    code, out, _ = run(
        capsys, "--format", "text", "report", "--results", str(results), "--output", "-"
    )
    assert code == 0
    assert "VERIFICATION REPORT" in out
    assert "eval_trivial" in out


def test_verify_exits_one_on_unexpected_failure(capsys, tmp_path, small_corpus, monkeypatch):
    def broken(inst):
        return [CheckReport("bracket_soundness", inst.spec.name, False, ["[E12, E21]"])]

    monkeypatch.setitem(suites.SUITES, "evaluation", broken)
    code, out, _ = run(
        capsys,
        "verify",
        "evaluation",
        "--corpus",
        str(small_corpus),
        "--results",
        str(tmp_path / "results"),
        "--ignore-cache",
    )
    assert code == 1
    assert json_lines(out)[-1]["summary"]["failed"] == 1
