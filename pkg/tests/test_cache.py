from hilbcalc.cache import DiskCache


def test_miss_then_hit(tmp_path):
    cache = DiskCache(tmp_path)
    calls = []

    def compute():
        calls.append(1)
        return {"x": "1/2"}

    assert cache.cached("fp", "op", [1, 2], compute) == {"x": "1/2"}
    assert cache.cached("fp", "op", [1, 2], compute) == {"x": "1/2"}
    assert len(calls) == 1


def test_key_separates_models_and_args(tmp_path):
    cache = DiskCache(tmp_path)
    keys = {cache.key("a", "op", [1]), cache.key("b", "op", [1]),
            cache.key("a", "op", [2]), cache.key("a", "other", [1])}
    assert len(keys) == 4


def test_disabled_cache_writes_nothing(tmp_path):
    cache = DiskCache(tmp_path, enabled=False)
    cache.put(cache.key("a", "op", []), 1)
    assert list(tmp_path.iterdir()) == []


def test_corrupt_entry_is_a_miss(tmp_path):
    cache = DiskCache(tmp_path)
    k = cache.key("a", "op", [])
    cache.put(k, 5)
    path = next(tmp_path.rglob("*.json"))
    path.write_text("{not json")
    assert cache.get(k) is None


def test_env_override(tmp_path, monkeypatch):
    monkeypatch.setenv("HILBCALC_CACHE", str(tmp_path / "c"))
    assert DiskCache().root == tmp_path / "c"
