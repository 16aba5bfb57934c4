import hashlib
import json

import pytest

from cyclodescent.cache import SeriesCache, _canonical, cache_roundtrip, dumps, loads
from cyclodescent.errors import CorruptCache, VersionMismatch
from cyclodescent.lseries import iwasawa_series


@pytest.fixture(scope="module")
def series():
    return iwasawa_series(5, 2, 6, 8)


def test_roundtrip_is_identical(series, tmp_path):
    back = cache_roundtrip(series, tmp_path)
    assert back == series
    cache = SeriesCache(tmp_path)
    assert cache.path_for(series).read_text() == dumps(back)
    assert not list(tmp_path.glob(".tmp-*"))


def test_flipped_byte_is_detected(series, tmp_path):
    cache = SeriesCache(tmp_path)
    path = cache.store(series)
    text = path.read_text()
    i = text.index('"coeffs"') + 20
    flipped = text[:i] + ("1" if text[i] != "1" else "2") + text[i + 1:]
    path.write_text(flipped)
    with pytest.raises(CorruptCache):
        cache.load(path)
    with pytest.raises(CorruptCache):
        loads("not json")


def test_old_version_is_rejected_with_hint(series):
    doc = json.loads(dumps(series))
    doc["payload"]["format_version"] = 1
    doc["sha256"] = hashlib.sha256(_canonical(doc["payload"])).hexdigest()
    with pytest.raises(VersionMismatch, match="regenerate"):
        loads(json.dumps(doc))


def test_lookup(series, tmp_path):
    cache = SeriesCache(tmp_path)
    assert cache.lookup(5, 2, 6, 8, 6) is None
    cache.store(series)
    assert cache.lookup(5, 2, 6, 8, 6) == series
    assert cache.lookup(5, 2, 6, 8, 6, min_level=series.level_used + 1) is None
    assert cache.lookup(5, 2, 7, 8, 6) is None


def test_series_uses_cache(series, tmp_path):
    cache = SeriesCache(tmp_path)
    first = iwasawa_series(5, 2, 6, 8, cache=cache)
    assert list(tmp_path.glob("p5_j2_N6_M8_u6_*.json"))
    assert iwasawa_series(5, 2, 6, 8, cache=cache) == first
