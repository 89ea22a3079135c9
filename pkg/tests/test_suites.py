from pathlib import Path

import pytest

from errors import OutOfScopeError
from services import specfile, suites
from services.specfile import IsoPair, SpecFile


def instance(corpus_dir, name):
    return specfile.build_instance(specfile.load_spec(corpus_dir / f"{name}.json"))


def unexpected(reports):
    return [r.to_dict() for r in reports if not r.expected]


def test_algebra_checks_include_corrupted_control():
    reports = suites.algebra_checks(suites.STRUCTURE_ALGEBRAS[0])
    assert [r.control for r in reports] == [False, True]
    assert all(r.expected for r in reports)
    assert reports[0].instance == "algebra/sl(2,1)"


def test_structure_suite_on_natural_module(corpus_dir):
    reports = suites.structure_suite(instance(corpus_dir, "eval_sl21_natural"))
    assert [r.name for r in reports] == [
        "bracket_soundness",
        "integrable",
        "hw_exists",
        "odd_nilpotency",
    ]
    assert unexpected(reports) == []


def test_suites_skip_other_kinds(corpus_dir):
    inst = instance(corpus_dir, "eval_trivial")
    assert suites.loop_suite(inst) == []
    assert suites.tau_suite(inst) == []
    assert len(suites.evaluation_suite(inst)) == 3


def test_loop_suite(corpus_dir):
    reports = suites.loop_suite(instance(corpus_dir, "loop_sl21_period2"))
    assert [r.name for r in reports] == [
        "period",
        "loop_decomposition",
        "offset_shift",
        "T0_irreducible",
    ]
    assert unexpected(reports) == []


def test_tau_suite_controls(corpus_dir):
    reports = suites.tau_suite(instance(corpus_dir, "tau_sl21_linear"))
    controls = [r for r in reports if r.control]
    assert {r.name for r in controls} == {"annihilator", "T0_irreducible"}
    assert unexpected(reports) == []


def test_classification_suite(corpus_dir):
    reports = suites.classification_suite(instance(corpus_dir, "loop_sl21_typical"))
    assert [r.name for r in reports] == ["main_theorem", "dimension"]
    assert unexpected(reports) == []


@pytest.mark.parametrize(
    "name, control",
    [("iso_kappa_negative", False), ("iso_tau_doubled", True), ("iso_swapped_points", False)],
)
def test_iso_suite(corpus_dir, name, control):
    pair = specfile.load(corpus_dir / f"{name}.json")
    assert isinstance(pair, IsoPair)
    (report,) = suites.iso_suite(pair)
    assert report.control is control
    assert report.expected


def test_wrong_kappa_is_reported(corpus_dir):
    pair = specfile.load(corpus_dir / "iso_kappa_negative.json")
    pair.expect = {"iso": True, "kappa": "2"}
    (report,) = suites.iso_suite(pair)
    assert not report.passed
    assert report.witness["kappa"] == "-1"


def test_run_suite_reports_aborts(corpus_dir, monkeypatch):
    def explode(inst):
        raise OutOfScopeError("cannot run")

    monkeypatch.setitem(suites.SUITES, "structure", explode)
    (report,) = suites.run_suite("structure", instance(corpus_dir, "eval_trivial"))
    assert not report.passed
    assert report.witness["error"] == "OutOfScopeError"


def test_dimension_expectation_can_fail(corpus_dir):
    spec = specfile.load_spec(corpus_dir / "eval_sl21_natural.json")
    spec.expect = {"dim": 4}
    reports = suites.classification_suite(specfile.build_instance(spec))
    (dimension,) = [r for r in reports if r.name == "dimension"]
    assert dimension.witness == {"dim": 3}


@pytest.mark.slow
@pytest.mark.parametrize(
    "path",
    sorted(p.name for p in (Path(__file__).resolve().parents[1] / "corpus").glob("*.json")),
)
def test_corpus_runs_as_expected(corpus_dir, path):
    loaded = specfile.load(corpus_dir / path)
    if isinstance(loaded, SpecFile):
        inst = specfile.build_instance(loaded)
        names = loaded.suites or tuple(suites.SUITES)
        reports = [r for name in names for r in suites.run_suite(name, inst)]
    else:
        reports = suites.iso_suite(loaded)
    assert unexpected(reports) == []
