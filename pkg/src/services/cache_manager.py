"""Cache manager for verification reports stored per suite."""

import hashlib
import json
import threading
from pathlib import Path
from typing import Any, Dict, List, Optional

SOURCE_ROOT = Path(__file__).resolve().parents[1]
SOURCE_PATTERNS = ("errors.py", "algebra/*.py", "services/*.py")


class CacheManager:
    """Reads/writes cached check reports for each suite, keyed by instance digest.

    An entry is reused only while the sources of the algebra and the checks are unchanged.
    """

    CACHE_VERSION = "v1.0"

    def __init__(self, results_dir: str = "results", source_hash: Optional[str] = None):
        self.results_dir = Path(results_dir)
        self.results_dir.mkdir(parents=True, exist_ok=True)
        self.source_hash = source_hash or self.compute_source_hash()
        self.cache_data: Dict[str, Dict[str, Any]] = {}
        self._lock = threading.Lock()

    def _suite_file(self, suite: str) -> Path:
        return self.results_dir / f"{suite}.json"

    def _empty_suite_cache(self, suite: str) -> Dict[str, Any]:
        return {
            "suite": suite,
            "cache_version": self.CACHE_VERSION,
            "instances": {},
            "summary": {"total": 0, "passed": 0, "failed": 0, "controls": 0},
            "last_updated": None,
        }

    def _load_suite_cache(self, suite: str) -> Dict[str, Any]:
        if suite in self.cache_data:
            return self.cache_data[suite]

        suite_file = self._suite_file(suite)
        if suite_file.exists():
            try:
                data = json.loads(suite_file.read_text(encoding="utf-8"))
            except (json.JSONDecodeError, OSError):
                data = self._empty_suite_cache(suite)
            if data.get("cache_version") != self.CACHE_VERSION:
                data = self._empty_suite_cache(suite)
        else:
            data = self._empty_suite_cache(suite)

        self.cache_data[suite] = data
        return data

    def _save_suite_cache(self, suite: str) -> None:
        suite_file = self._suite_file(suite)
        suite_file.parent.mkdir(parents=True, exist_ok=True)

        data = self.cache_data[suite]
        suite_file.write_text(
            json.dumps(data, indent=2, ensure_ascii=False, sort_keys=True), encoding="utf-8"
        )

    def _recalculate_summary(self, suite_cache: Dict[str, Any]) -> None:
        summary = {"total": 0, "passed": 0, "failed": 0, "controls": 0}
        for entry in suite_cache.get("instances", {}).values():
            for report in entry.get("reports", []):
                summary["total"] += 1
                if report.get("control"):
                    summary["controls"] += 1
                if report.get("expected"):
                    summary["passed"] += 1
                else:
                    summary["failed"] += 1
        suite_cache["summary"] = summary

    @staticmethod
    def compute_file_hash(file_path: Path) -> str:
        """
        Compute SHA256 hash of a file.
        """
        sha256_hash = hashlib.sha256()
        with open(file_path, "rb") as f:
            for byte_block in iter(lambda: f.read(4096), b""):
                sha256_hash.update(byte_block)
        return sha256_hash.hexdigest()

    @classmethod
    def compute_source_hash(cls, root: Optional[Path] = None) -> str:
        """SHA256 over the algebra and check sources that produce the reports."""
        root = Path(root) if root else SOURCE_ROOT
        files = sorted({p for pattern in SOURCE_PATTERNS for p in root.glob(pattern)})
        sha256_hash = hashlib.sha256()
        for path in files:
            sha256_hash.update(path.relative_to(root).as_posix().encode())
            sha256_hash.update(cls.compute_file_hash(path).encode())
        return sha256_hash.hexdigest()

    @classmethod
    def compute_digest(cls, canonical: str) -> str:
        """SHA256 of an instance's canonical JSON together with the cache version."""
        return hashlib.sha256(f"{cls.CACHE_VERSION}\n{canonical}".encode()).hexdigest()

    def get_cached_reports(
        self, suite: str, name: str, canonical: str
    ) -> Optional[List[Dict[str, Any]]]:
        """Return cached reports if the instance digest and the source hash match."""
        with self._lock:
            suite_cache = self._load_suite_cache(suite)
            cached_entry = suite_cache.get("instances", {}).get(name)
        if not cached_entry:
            return None
        if cached_entry.get("source_hash") != self.source_hash:
            return None
        if cached_entry.get("digest") == self.compute_digest(canonical):
            return cached_entry.get("reports")
        return None

    def cache_reports(
        self,
        suite: str,
        name: str,
        canonical: str,
        reports: List[Dict[str, Any]],
        timestamp: str,
    ) -> None:
        """Persist the reports of one instance."""
        with self._lock:
            suite_cache = self._load_suite_cache(suite)
            suite_cache.setdefault("instances", {})[name] = {
                "digest": self.compute_digest(canonical),
                "source_hash": self.source_hash,
                "timestamp": timestamp,
                "reports": reports,
            }
            suite_cache["last_updated"] = timestamp
            self._recalculate_summary(suite_cache)
            self._save_suite_cache(suite)

    def clear_cache(self) -> None:
        """Remove all cached suite files."""
        with self._lock:
            self.cache_data.clear()
            for json_file in self.results_dir.glob("*.json"):
                try:
                    json_file.unlink()
                except OSError:
                    continue

    def get_cache_stats(self) -> Dict[str, Any]:
        """Return statistics about cached results."""
        total_cached = 0
        for json_file in self.results_dir.glob("*.json"):
            try:
                data = json.loads(json_file.read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError):
                continue
            if data.get("cache_version") == self.CACHE_VERSION:
                total_cached += len(data.get("instances", {}))

        return {
            "total_cached": total_cached,
            "cache_version": self.CACHE_VERSION,
        }
