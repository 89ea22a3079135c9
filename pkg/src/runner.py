"""Verification runner - Executes check suites against the instance corpus"""

import argparse
import json
import logging
import os
import sys
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from errors import SpecFileError, SuperloopError
from services import suites
from services.cache_manager import CacheManager
from services.checks import CheckReport, summarize
from services.specfile import Instance, IsoPair, SpecFile, build_instance, load

logger = logging.getLogger(__name__)


def default_threads() -> int:
    """``SUPERLOOP_THREADS`` if set, otherwise the CPU count capped at 4."""
    value = os.environ.get("SUPERLOOP_THREADS")
    if value:
        try:
            return max(1, int(value))
        except ValueError:
            logger.warning("ignoring SUPERLOOP_THREADS=%r", value)
    return min(os.cpu_count() or 1, 4)


class VerificationRunner:
    """Runs verification suites over the corpus and any extra spec files"""

    def __init__(
        self,
        corpus_dir: str = "corpus",
        results_dir: str = "results",
        ignore_cache: bool = False,
        threads: Optional[int] = None,
        use_cache: bool = True,
    ):
        self.corpus_dir = Path(corpus_dir)
        self.ignore_cache = ignore_cache
        self.threads = threads or default_threads()
        self.cache_manager = CacheManager(results_dir) if use_cache else None
        self._instances: Dict[str, Union[Instance, SuperloopError]] = {}
        self._build_lock = threading.Lock()
        self._key_locks: Dict[str, threading.Lock] = {}

    def load_specs(self, extra: Sequence[str] = ()) -> List[Union[SpecFile, IsoPair]]:
        """Load corpus spec files, then the extra files in the given order"""
        specs = []
        files = sorted(self.corpus_dir.glob("*.json")) if self.corpus_dir.is_dir() else []
        for spec_file in [*files, *(Path(p) for p in extra)]:
            specs.append(load(spec_file))
        if not specs:
            raise SpecFileError(f"No spec files found in {self.corpus_dir}")
        return specs

    def instance(self, spec: SpecFile) -> Instance:
        """Build a module once per run; suites share it"""
        key = spec.digest_source()
        with self._build_lock:
            key_lock = self._key_locks.setdefault(key, threading.Lock())
        with key_lock:
            cached = self._instances.get(key)
            if cached is None:
                try:
                    cached = build_instance(spec)
                except SuperloopError as exc:
                    cached = exc
                self._instances[key] = cached
        if isinstance(cached, SuperloopError):
            raise cached
        return cached

    def _jobs(
        self, suite_names: Iterable[str], specs: Sequence[Union[SpecFile, IsoPair]]
    ) -> List[Tuple[str, str, str, Any]]:
        jobs = []
        for suite in suite_names:
            if suite == "structure":
                for descriptor in suites.STRUCTURE_ALGEBRAS:
                    canonical = json.dumps(descriptor, sort_keys=True)
                    jobs.append((suite, suites.algebra_job_name(descriptor), canonical, descriptor))
            for spec in specs:
                if isinstance(spec, IsoPair):
                    if suite == "iso":
                        jobs.append((suite, spec.name, spec.digest_source(), spec))
                elif suite != "iso" and (not spec.suites or suite in spec.suites):
                    jobs.append((suite, spec.name, spec.digest_source(), spec))
        return jobs

    def _run_job(self, suite: str, payload: Any) -> List[CheckReport]:
        if isinstance(payload, dict):
            return suites.algebra_checks(payload)
        if isinstance(payload, IsoPair):
            return suites.iso_suite(payload)
        try:
            inst = self.instance(payload)
        except SuperloopError as exc:
            return [
                CheckReport(
                    "build", payload.name, False, {"error": type(exc).__name__, "message": str(exc)}
                )
            ]
        return suites.run_suite(suite, inst)

    def run_all(
        self, suite_names: Sequence[str], extra_specs: Sequence[str] = ()
    ) -> Dict[str, Any]:
        """
        Run the selected suites over every spec

        Returns:
            Dictionary with the reports and summary per suite
        """
        specs = self.load_specs(extra_specs)
        jobs = self._jobs(suite_names, specs)
        timestamp = time.strftime("%Y-%m-%d %H:%M:%S")
        print(f"Found {len(specs)} spec files and {len(jobs)} suite jobs", file=sys.stderr)
        if self.cache_manager:
            cache_stats = self.cache_manager.get_cache_stats()
            note = " (ignoring existing results)" if self.ignore_cache else ""
            print(
                f"Cache enabled{note}: {cache_stats['total_cached']} cached results available",
                file=sys.stderr,
            )

        cache_hits = 0
        results: Dict[str, Any] = {"timestamp": timestamp, "suites": {}}
        pending = []
        for suite, name, canonical, payload in jobs:
            cached = None
            if self.cache_manager and not self.ignore_cache:
                cached = self.cache_manager.get_cached_reports(suite, name, canonical)
            if cached is not None:
                cache_hits += 1
                self._record(results, suite, name, cached, cached=True)
            else:
                pending.append((suite, name, canonical, payload))

        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            futures = [
                (job, pool.submit(self._run_job, job[0], job[3])) for job in pending
            ]
            for (suite, name, canonical, _), future in futures:
                reports = [r.to_dict() for r in future.result()]
                if self.cache_manager:
                    self.cache_manager.cache_reports(suite, name, canonical, reports, timestamp)
                self._record(results, suite, name, reports)

        for suite_data in results["suites"].values():
            suite_data["summary"] = summarize(
                r for entry in suite_data["instances"].values() for r in entry
            )
        if self.cache_manager:
            print(
                f"\nCache hits: {cache_hits}/{len(jobs)}; new executions: {len(pending)}",
                file=sys.stderr,
            )
        return results

    @staticmethod
    def _record(
        results: Dict[str, Any],
        suite: str,
        name: str,
        reports: List[Dict[str, Any]],
        cached: bool = False,
    ) -> None:
        suite_data = results["suites"].setdefault(suite, {"instances": {}})
        suite_data["instances"][name] = reports
        tag = " [CACHED]" if cached else ""
        for report in reports:
            mark = "✓" if report["expected"] else "✗"
            control = " (control)" if report.get("control") else ""
            print(
                f"  {mark} {suite}/{name}: {report['name']}{control}"
                f" ({report.get('elapsed', 0.0):.2f}s){tag}",
                file=sys.stderr,
            )


def failed_reports(results: Dict[str, Any]) -> List[Dict[str, Any]]:
    return [
        report
        for suite_data in results["suites"].values()
        for entry in suite_data["instances"].values()
        for report in entry
        if not report.get("expected")
    ]


def main():
    """Main entry point for the verification runner"""
    parser = argparse.ArgumentParser(description="Run superloop verification suites")
    parser.add_argument(
        "--ignore-cache",
        action="store_true",
        help="Ignore cached results and re-run all checks while still updating the cache",
    )
    parser.add_argument("--suite", default="all", help="Suite name to run (default: all)")
    args = parser.parse_args()

    if args.suite != "all" and args.suite not in suites.SUITE_NAMES:
        parser.error(f"unknown suite {args.suite!r}")
    selected = suites.SUITE_NAMES if args.suite == "all" else (args.suite,)
    logging.basicConfig(level=logging.DEBUG if os.environ.get("VERBOSE") else logging.WARNING)
    results = VerificationRunner(ignore_cache=args.ignore_cache).run_all(selected)

    print("\n" + "=" * 60)
    print("VERIFICATION SUMMARY")
    print("=" * 60)
    for suite, suite_data in results["suites"].items():
        summary = suite_data["summary"]
        print(f"\n{suite}:")
        print(f"  Total checks: {summary['total']}")
        print(f"  As expected: {summary['passed']}")
        print(f"  Unexpected: {summary['failed']}")
        print(f"  Negative controls: {summary['controls']}")
    sys.exit(1 if failed_reports(results) else 0)


if __name__ == "__main__":
    main()
