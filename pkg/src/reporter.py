"""Reporter - Generates HTML/text reports from cached verification results."""

import json
import sys
from pathlib import Path
from typing import Any, Dict, Optional

from jinja2 import Template

from services.checks import summarize

TEMPLATES_DIR = Path(__file__).with_name("templates")
DEFAULT_TEMPLATES = {"html": TEMPLATES_DIR / "report.html", "text": TEMPLATES_DIR / "report.txt"}


def load_template(template_file: Optional[str] = None, output_format: str = "html") -> Template:
    """Load the report template from disk."""
    template_path = Path(template_file) if template_file else DEFAULT_TEMPLATES[output_format]

    if not template_path.exists():
        raise FileNotFoundError(f"Template file not found at {template_path}")

    template_text = template_path.read_text(encoding="utf-8")
    return Template(template_text, trim_blocks=True, lstrip_blocks=True)


def _load_suite_files(results_dir: Path) -> Dict[str, Any]:
    suites: Dict[str, Dict[str, Any]] = {}
    latest_timestamp: Optional[str] = None

    for suite_file in sorted(results_dir.glob("*.json")):
        try:
            data = json.loads(suite_file.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError):
            continue

        suite_name = data.get("suite") or suite_file.stem
        instances = {
            name: entry["reports"]
            for name, entry in data.get("instances", {}).items()
            if isinstance(entry.get("reports"), list)
        }
        if not instances:
            continue

        summary = data.get("summary") or summarize(
            r for reports in instances.values() for r in reports
        )
        suites[suite_name] = {"instances": instances, "summary": summary}

        timestamp = data.get("last_updated")
        if timestamp and (latest_timestamp is None or timestamp > latest_timestamp):
            latest_timestamp = timestamp

    return {"timestamp": latest_timestamp or "Unknown", "suites": suites}


def build_context(results: Dict[str, Any]) -> Dict[str, Any]:
    """Rows per suite, failures first, with a pass rate for the header."""
    suites_data = []
    for suite_name, suite_info in sorted(results.get("suites", {}).items()):
        summary = suite_info.get("summary", {})
        total = summary.get("total", 0)
        rows = []
        total_elapsed = 0.0
        for instance, reports in sorted(suite_info.get("instances", {}).items()):
            for report in reports:
                total_elapsed += report.get("elapsed", 0.0)
                rows.append(
                    {
                        "instance": instance,
                        "check": report.get("name", ""),
                        "passed": report.get("passed", False),
                        "expected": report.get("expected", False),
                        "control": report.get("control", False),
                        "elapsed": report.get("elapsed", 0.0),
                        "witness": json.dumps(report.get("witness"), sort_keys=True),
                    }
                )
        rows.sort(key=lambda row: (row["expected"], row["instance"], row["check"]))
        suites_data.append(
            {
                "name": suite_name,
                "rate": (summary.get("passed", 0) / total * 100) if total > 0 else 0,
                "total_elapsed": total_elapsed,
                "summary": summary,
                "rows": rows,
            }
        )
    return {"timestamp": results.get("timestamp", "Unknown"), "suites": suites_data}


def render_report(
    results_path: str = "results", template_file: Optional[str] = None, output_format: str = "html"
) -> str:
    path = Path(results_path)
    results = _load_suite_files(path) if path.is_dir() else {"timestamp": "Unknown", "suites": {}}
    return load_template(template_file, output_format).render(**build_context(results))


def generate_report(
    results_path: str = "results",
    output_file: str = "docs/index.html",
    template_file: Optional[str] = None,
    output_format: str = "html",
) -> None:
    """
    Generate a report from cached verification results.

    Args:
        results_path: Path to the results directory
        output_file: Path where the report should be saved ("-" for stdout)
        template_file: Optional override for the Jinja template path
        output_format: "html" or "text"; "json" on the command line selects html
    """
    if output_format == "json":
        output_format = "html"
    path = Path(results_path)
    if not path.exists():
        print(f"Error: Results path not found at {results_path}", file=sys.stderr)
        return

    content = render_report(results_path, template_file, output_format)
    if output_file == "-":
        sys.stdout.write(content)
        return

    output_path = Path(output_file)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    output_path.write_text(content, encoding="utf-8")
    print(f"Report generated at {output_file}", file=sys.stderr)


def main():
    """Main entry point for the reporter"""
    results_path = sys.argv[1] if len(sys.argv) > 1 else "results"
    output_file = sys.argv[2] if len(sys.argv) > 2 else "docs/index.html"
    template_file = sys.argv[3] if len(sys.argv) > 3 else None

    generate_report(results_path, output_file, template_file)


if __name__ == "__main__":
    main()
