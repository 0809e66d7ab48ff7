from __future__ import annotations

from pathlib import Path

from resupal.cache import compute_cache_key, load_cached_result, save_cached_result
from resupal.catalog import catalog_get, catalog_restricted


def test_cache_key_is_stable_and_order_free() -> None:
    L = catalog_get("L_{2|2}^3", 3).algebra
    a = compute_cache_key(kind="fingerprint", algebra=L, degrees=[1, 2])
    b = compute_cache_key(degrees=[1, 2], algebra=L, kind="fingerprint")
    assert a == b
    assert len(a) == 64


def test_cache_key_sees_structure_not_labels() -> None:
    L = catalog_get("L_{2|2}^3", 3).algebra
    relabelled = L.with_label("renamed")
    other_prime = catalog_get("L_{2|2}^3", 5).algebra
    key = compute_cache_key(algebra=L)
    assert compute_cache_key(algebra=relabelled) == key
    assert compute_cache_key(algebra=other_prime) != key


def test_cache_key_distinguishes_p_maps() -> None:
    a = catalog_restricted("L_{2|2}^3(a)", 3)
    b = catalog_restricted("L_{2|2}^3(b)", 3)
    assert compute_cache_key(algebra=a) != compute_cache_key(algebra=b)


def test_save_and_load(tmp_path: Path) -> None:
    cache_dir = tmp_path / "cache"
    key = compute_cache_key(kind="demo")
    assert load_cached_result(cache_dir, key) is None
    save_cached_result(cache_dir, key, {"h": [[1, 2]], "name": "L_{1|2}^4"})
    assert load_cached_result(cache_dir, key) == {"h": [[1, 2]], "name": "L_{1|2}^4"}
