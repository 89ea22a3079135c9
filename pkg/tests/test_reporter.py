import pytest

import reporter
from services.cache_manager import CacheManager

REPORTS = [
    {"name": "annihilator", "passed": True, "control": False, "expected": True, "elapsed": 0.5},
    {
        "name": "dimension",
        "passed": False,
        "control": False,
        "expected": False,
        "elapsed": 0.25,
        "witness": {"dim": 3},
    },
]


@pytest.fixture
def results_dir(tmp_path):
    results = tmp_path / "results"
    CacheManager(results).cache_reports(
        "classification", "eval_sl21_natural", "{}", REPORTS, "2026-03-01 12:00:00"
    )
    return results


def test_build_context_puts_failures_first():
    context = reporter.build_context(
        {
            "timestamp": "t",
            "suites": {
                "loop": {
                    "instances": {"a": REPORTS},
                    "summary": {"total": 2, "passed": 1, "failed": 1, "controls": 0},
                }
            },
        }
    )
    (suite,) = context["suites"]
    assert suite["rate"] == 50
    assert suite["total_elapsed"] == 0.75
    assert [row["check"] for row in suite["rows"]] == ["dimension", "annihilator"]
    assert suite["rows"][0]["witness"] == '{"dim": 3}'


def test_render_html(results_dir):
    html = reporter.render_report(str(results_dir))
    assert "Last updated: 2026-03-01 12:00:00" in html
    assert "<h2>classification</h2>" in html
    assert "eval_sl21_natural" in html
    assert "1 / 2 as expected" in html


def test_render_text(results_dir):
    text = reporter.render_report(str(results_dir), output_format="text")
    assert text.startswith("VERIFICATION REPORT (2026-03-01 12:00:00)")
    assert "✗ eval_sl21_natural: dimension" in text
    assert "witness=" in text


def test_render_without_results(tmp_path):
    text = reporter.render_report(str(tmp_path / "missing"), output_format="text")
    assert "No cached results." in text


def test_generate_report_to_file_and_stdout(results_dir, tmp_path, capsys):
    output = tmp_path / "docs" / "index.html"
    reporter.generate_report(str(results_dir), str(output), output_format="json")
    assert "<h2>classification</h2>" in output.read_text(encoding="utf-8")

    reporter.generate_report(str(results_dir), "-", output_format="text")
    assert "VERIFICATION REPORT" in capsys.readouterr().out


def test_generate_report_missing_results(tmp_path, capsys):
    reporter.generate_report(str(tmp_path / "nowhere"), str(tmp_path / "out.html"))
    assert "Results path not found" in capsys.readouterr().err
    assert not (tmp_path / "out.html").exists()


def test_missing_template(tmp_path):
    with pytest.raises(FileNotFoundError):
        reporter.load_template(str(tmp_path / "nope.html"))
