import json
import os
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

import pytest

from jetbound import formats
from jetbound.bounds import seshadri_lower_bound, multipoint_seshadri_lower, Weights
from jetbound.cache import RankCache
from jetbound.cli import main

INSTANCES = Path(__file__).resolve().parent.parent / "instances"


def inst(name):
    return str(INSTANCES / name)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# -- formats ----------------------------------------------------------------


@pytest.mark.parametrize("path", sorted(p.name for p in INSTANCES.glob("*.json")))
def test_round_trip(path):
    spec = formats.load(inst(path))
    again = formats.loads(formats.dumps(spec))
    assert again.kind == spec.kind
    assert again.obj == spec.obj
    assert formats.canonical_hash(again) == formats.canonical_hash(spec)


def test_rationals_are_strings():
    spec = formats.loads('{"vertices": [["0","0"],["1/2","0"],["0","3/2"]]}')
    assert spec.kind == "polytope"
    assert Fraction(3, 2) in {v[1] for v in spec.obj.vertices}
    assert formats.emit(spec)["vertices"][0] == ["0", "0"]
    assert "3/2" in formats.dumps(spec)


def test_kind_inference_and_errors():
    assert formats.loads('{"generators": [[1,0],[0,1]]}').kind == "ideal"
    assert formats.loads('{"matrix": [[1,0],[0,1]]}').kind == "lattice-map"
    with pytest.raises(formats.InputError, match="line 2, column"):
        formats.loads('{"vertices":\n  [[0,0],,]}')
    with pytest.raises(formats.InputError, match=r"vertices\[2\]\[1\]"):
        formats.loads('{"vertices": [["0","0"],["1","0"],["0","x"]]}')
    with pytest.raises(formats.InputError, match="kind"):
        formats.loads('{"foo": 1}')
    with pytest.raises(formats.InputError, match="axis"):
        formats.loads('{"generators": [[2,0]]}')
    with pytest.raises(formats.InputError, match="pool"):
        formats.loads('{"pool": [[0,0]], "parent": [0, 5], "cells": [[0]]}')
    with pytest.raises(formats.InputError, match="No such file"):
        formats.load("/nonexistent/file.json")


def test_canonical_hash_ignores_name_and_order():
    a = formats.loads('{"name": "a", "vertices": [["0","0"],["1","0"],["0","1"]]}')
    b = formats.loads('{"name": "b", "vertices": [["1","0"],["0","1"],["0","0"]]}')
    assert formats.canonical_hash(a) == formats.canonical_hash(b)


# -- cli --------------------------------------------------------------------


def test_cli_jets(capsys):
    code, out, _ = run(capsys, "jets", inst("simplex2.json"), "--no-cache")
    assert code == 0 and "max_jet_order: 1" in out
    code, out, _ = run(capsys, "jets", inst("thirteen_points.json"), "--ideal", inst("collision_ideal.json"), "--no-cache")
    assert code == 0 and "rank: 13" in out and "full: True" in out
    code, out, _ = run(capsys, "jets", inst("collinear.json"), "--no-cache")
    assert code == 0 and "max_jet_order: 0" in out and "u1" in out and "u2" in out


def test_cli_seshadri(capsys):
    code, out, _ = run(capsys, "seshadri", inst("simplex2.json"), "--json", "--no-cache")
    rec = json.loads(out)
    assert code == 0 and rec["lower"] == "1" and rec["exact"]
    code, out, _ = run(capsys, "seshadri", inst("square.json"), "--k-budget", "4", "--json", "--no-cache")
    rec = json.loads(out)
    assert rec["lower"] == "1" and rec["upper"] == {"radicand": "2", "root": 2} and not rec["exact"]
    code, out, _ = run(
        capsys, "seshadri", inst("tetrahedron.json"), "--weights", "1,1", "--lattice-map", inst("tetra_map.json"),
        "--k-budget", "3", "--json", "--no-cache",
    )
    rec = json.loads(out)
    assert code == 0 and rec["lower"] == "1" and rec["exact"] and rec["method"] == "lattice-change"


def test_cli_certified_label(capsys):
    _, out, _ = run(capsys, "seshadri", inst("simplex2.json"), "--k-budget", "2", "--no-cache")
    assert "probabilistic" in out and "certified)" not in out
    _, out, _ = run(capsys, "seshadri", inst("simplex2.json"), "--k-budget", "2", "--certify", "--no-cache")
    assert "(certified)" in out
    assert "lower bound" in out and "upper bound" in out


def test_cli_decompose(capsys):
    code, out, _ = run(capsys, "decompose", inst("triangle_fan.json"), "--k-budget", "2", "--no-cache")
    assert code == 0 and "lifting function" in out and "(1,1) ->" in out
    assert "value          1" in out
    code, _, err = run(capsys, "decompose", inst("pinwheel.json"), "--k-budget", "1", "--no-cache")
    assert code == 1 and "non-regular" in (err + _)


def test_cli_decompose_two_files(capsys, tmp_path):
    data = json.loads((INSTANCES / "triangle_fan.json").read_text())
    cells = {"pool": data["pool"], "parent": data["parent"], "cells": data["cells"]}
    (tmp_path / "cells.json").write_text(json.dumps(cells))
    code, out, _ = run(
        capsys, "decompose", inst("triangle.json"), str(tmp_path / "cells.json"), "--k-budget", "2",
        "--weights-per-cell", "1;1;1", "--json", "--no-cache",
    )
    assert code == 0
    assert json.loads(out[: out.index("\n}") + 2])["lower"] == "1"


def test_cli_trivial_decomposition_matches_seshadri(capsys, tmp_path):
    payload = {"pool": [["0", "0"], ["2", "1"], ["1", "2"]], "parent": [0, 1, 2], "cells": [[0, 1, 2]]}
    (tmp_path / "d.json").write_text(json.dumps(payload))
    _, out_d, _ = run(capsys, "decompose", str(tmp_path / "d.json"), "--k-budget", "2", "--json", "--no-cache", "--seed", "3")
    _, out_s, _ = run(capsys, "seshadri", inst("triangle.json"), "--k-budget", "2", "--json", "--no-cache", "--seed", "3")
    d = json.loads(out_d[: out_d.index("\n}") + 2])
    s = json.loads(out_s)
    assert (d["lower"], d["upper"]) == (s["lower"], s["upper"])


def test_cli_multi_and_lattice_change(capsys):
    code, out, _ = run(capsys, "multi", inst("triangle.json"), "--weights", "1,1,1", "--k-budget", "2", "--json", "--no-cache")
    rec = json.loads(out)
    assert code == 0 and rec["method"] == "multipoint" and rec["upper"] == {"radicand": "1", "root": 2}
    code, out, _ = run(capsys, "lattice-change", inst("tetrahedron.json"), "--map", inst("tetra_map.json"), "--weights", "1,1", "--k-budget", "2", "--no-cache")
    assert code == 0 and "value" in out
    code, out, _ = run(capsys, "lattice-change", inst("tetrahedron.json"), "--search-degree", "2", "--weights", "1,1", "--k-budget", "2", "--no-cache")
    assert code == 0


def test_cli_input_errors(capsys, tmp_path):
    assert run(capsys, "seshadri", inst("simplex2.json"), "--k-budget", "0")[0] == 1
    assert run(capsys, "seshadri", inst("simplex2.json"), "--weights", "1,-1")[0] == 1
    assert run(capsys, "seshadri", inst("simplex2.json"), "--weights", "abc")[0] == 1
    assert run(capsys, "seshadri", "/nonexistent.json")[0] == 1
    bad = tmp_path / "bad.json"
    bad.write_text('{"vertices": [["0","0"],\n ["1",]]}')
    code, _, err = run(capsys, "seshadri", str(bad))
    assert code == 1 and "line 2" in err
    assert run(capsys, "seshadri", inst("collinear.json"))[0] == 1
    with pytest.raises(SystemExit) as e:
        main(["frobnicate"])
    assert e.value.code == 1


def test_cli_internal_error(capsys, monkeypatch):
    import jetbound.cli as cli

    def boom(*a, **k):
        raise RuntimeError("boom")

    monkeypatch.setattr(cli.bounds, "seshadri_lower_bound", boom)
    code, _, err = run(capsys, "seshadri", inst("simplex2.json"), "--no-cache")
    assert code == 2 and "internal error" in err


def test_json_deterministic(capsys, monkeypatch):
    monkeypatch.delenv("JETBOUND_SEED", raising=False)
    args = ("multi", inst("square.json"), "--weights", "1,1", "--k-budget", "3", "--json", "--no-cache")
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a == b
    assert list(json.loads(a)) == [
        "instance", "method", "weights", "lower", "upper", "upper_float", "exact", "k_used", "m_achieved", "certified", "notes",
    ]
    monkeypatch.setenv("JETBOUND_SEED", "17")
    _, c, _ = run(capsys, *args)
    _, d, _ = run(capsys, *args[:-1], "--no-cache", "--seed", "17")
    assert c == d


# -- cache ------------------------------------------------------------------


def test_cache_round_trip(tmp_path):
    cache = RankCache(tmp_path)
    key = cache.key("jet", ((1, 2), 3))
    assert cache.get(key) is None
    cache.put(key, {"rank": 5, "certified": True})
    assert cache.get(key) == {"rank": 5, "certified": True}
    assert len(cache.entries()) == 1
    assert cache.clear() == 1 and cache.get(key) is None


def test_cache_version_bump(tmp_path):
    RankCache(tmp_path, version="1").put("k", {"rank": 1, "certified": False})
    assert RankCache(tmp_path, version="2").get("k") is None
    assert RankCache(tmp_path, version="1").get("k") == {"rank": 1, "certified": False}


def test_cache_corrupt_entries_evicted(tmp_path):
    cache = RankCache(tmp_path)
    cache.put("k", {"rank": 1, "certified": False})
    path = tmp_path / "k.json"
    path.write_text("{not json")
    assert cache.get("k") is None and not path.exists()
    (tmp_path / "j.json").write_text(json.dumps({"key": "other", "value": {}, "version": "1"}))
    assert cache.get("j") is None and not (tmp_path / "j.json").exists()


def _writer(args):
    directory, i = args
    cache = RankCache(directory)
    for j in range(20):
        cache.put(f"shared{j % 5}", {"rank": j % 5, "certified": True, "writer": i})
    return True


def test_cache_concurrent_writers(tmp_path):
    with ProcessPoolExecutor(4) as pool:
        assert all(pool.map(_writer, [(str(tmp_path), i) for i in range(8)]))
    cache = RankCache(tmp_path)
    for j in range(5):
        assert cache.get(f"shared{j}")["rank"] == j
    assert not list(tmp_path.glob("*.tmp"))


def test_cache_on_off_identical(tmp_path, triangle, tetrahedron):
    cache = RankCache(tmp_path)
    for _ in range(2):  # cold then warm
        assert seshadri_lower_bound(triangle, 3, cache=cache) == seshadri_lower_bound(triangle, 3)
        w = Weights.of([1, 1])
        assert multipoint_seshadri_lower(tetrahedron, w, 2, cache=cache) == multipoint_seshadri_lower(tetrahedron, w, 2)
    assert cache.entries()


def test_cli_cache_commands(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("JETBOUND_CACHE_DIR", str(tmp_path))
    run(capsys, "seshadri", inst("simplex2.json"), "--k-budget", "2")
    code, out, _ = run(capsys, "cache", "stats")
    assert code == 0 and int(out.split()[0]) > 0
    code, out, _ = run(capsys, "cache", "clear")
    assert code == 0 and out.startswith("removed")
    assert not os.listdir(tmp_path)
    monkeypatch.delenv("JETBOUND_CACHE_DIR")
    assert run(capsys, "cache", "stats")[0] == 1
