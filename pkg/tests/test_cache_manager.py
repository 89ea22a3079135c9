import json

from services.cache_manager import CacheManager

REPORTS = [
    {"name": "annihilator", "passed": True, "control": False, "expected": True},
    {"name": "T0_irreducible", "passed": False, "control": True, "expected": True},
]


def test_digest_depends_on_canonical_text():
    a = CacheManager.compute_digest('{"a": ["2"]}')
    assert a == CacheManager.compute_digest('{"a": ["2"]}')
    assert a != CacheManager.compute_digest('{"a": ["3"]}')


def test_cache_hit_and_miss(tmp_path):
    cache = CacheManager(tmp_path)
    assert cache.get_cached_reports("evaluation", "eval_trivial", "{}") is None
    cache.cache_reports("evaluation", "eval_trivial", "{}", REPORTS, "2026-01-01T00:00:00")

    fresh = CacheManager(tmp_path)
    assert fresh.get_cached_reports("evaluation", "eval_trivial", "{}") == REPORTS
    assert fresh.get_cached_reports("evaluation", "eval_trivial", '{"changed": 1}') is None

    data = json.loads((tmp_path / "evaluation.json").read_text(encoding="utf-8"))
    assert data["summary"] == {"total": 2, "passed": 2, "failed": 0, "controls": 1}
    assert data["last_updated"] == "2026-01-01T00:00:00"


def test_version_mismatch_resets_suite(tmp_path):
    stale = {"suite": "loop", "cache_version": "v0.1", "instances": {"x": {"digest": "d"}}}
    (tmp_path / "loop.json").write_text(json.dumps(stale), encoding="utf-8")
    cache = CacheManager(tmp_path)
    assert cache.get_cached_reports("loop", "x", "{}") is None
    assert cache.get_cache_stats() == {"total_cached": 0, "cache_version": "v1.0"}


def test_clear_cache_and_stats(tmp_path):
    cache = CacheManager(tmp_path)
    cache.cache_reports("tau", "a", "{}", REPORTS, "t")
    cache.cache_reports("tau", "b", "{}", REPORTS[:1], "t")
    assert cache.get_cache_stats()["total_cached"] == 2

    cache.clear_cache()
    assert list(tmp_path.glob("*.json")) == []
    assert cache.get_cached_reports("tau", "a", "{}") is None


def test_changed_sources_miss(tmp_path):
    CacheManager(tmp_path, source_hash="before").cache_reports("loop", "x", "{}", REPORTS, "t")
    assert CacheManager(tmp_path, source_hash="before").get_cached_reports("loop", "x", "{}")
    assert CacheManager(tmp_path, source_hash="after").get_cached_reports("loop", "x", "{}") is None


def test_source_hash_follows_algebra_files(tmp_path):
    (tmp_path / "algebra").mkdir()
    module = tmp_path / "algebra" / "superalg.py"
    module.write_text("DIM = 8\n", encoding="utf-8")
    (tmp_path / "notes.txt").write_text("ignored", encoding="utf-8")
    before = CacheManager.compute_source_hash(tmp_path)
    assert before == CacheManager.compute_source_hash(tmp_path)

    (tmp_path / "notes.txt").write_text("still ignored", encoding="utf-8")
    assert CacheManager.compute_source_hash(tmp_path) == before
    module.write_text("DIM = 9\n", encoding="utf-8")
    assert CacheManager.compute_source_hash(tmp_path) != before


def test_default_source_hash_covers_package():
    assert CacheManager.compute_source_hash() == CacheManager.compute_source_hash()
    assert len(CacheManager.compute_source_hash()) == 64
