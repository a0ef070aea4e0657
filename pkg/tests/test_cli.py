from __future__ import annotations

import csv
import io
import json
import subprocess
import sys

import pytest

from gvkit.cli import fixture_path, main, random_chern_data
from gvkit.grr import parity_check
from gvkit.schemas import (
    SchemaError,
    chern_from_json,
    chern_to_json,
    gv_input_from_json,
    gv_input_to_json,
    gw_table_from_json,
    gw_table_to_json,
)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc) if not isinstance(doc, str) else doc)
    return str(p)


# -- k3 -----------------------------------------------------------------------
def test_k3_kmax_one(capsys):
    code, out, err = run(capsys, "k3", "--kmax", "1")
    assert code == 0
    assert rows(out) == [["k", "h", "n", "r"], ["1", "0", "24", "24"], ["1", "1", "-2", "-2"]]
    assert "passed" in err


def test_k3_kmax_three_json(capsys):
    code, out, _ = run(capsys, "k3", "--kmax", "3", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["kkv_equal"] is True
    n0 = [e["n"] for e in doc["entries"] if e["h"] == 0]
    assert n0 == [24, 324, 3200]
    assert doc["entries"] == doc["kkv_entries"]


def test_k3_kmax_zero_is_usage_error(capsys):
    code, _, err = run(capsys, "k3", "--kmax", "0")
    assert code == 1 and "kmax" in err


def test_bad_flag_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["k3", "--kmax", "x"])
    assert info.value.code == 1


# -- gw / gv-invert ----------------------------------------------------------------
def test_gw_multiple_cover(tmp_path, capsys):
    gv = write(tmp_path, "gv.json", {"entries": [{"h": 0, "k": 1, "n": 1}]})
    code, out, _ = run(capsys, "gw", "--gv", gv, "--gmax", "0", "--dmax", "3")
    assert code == 0
    assert rows(out) == [
        ["g", "d", "num", "den"], ["0", "1", "1", "1"], ["0", "2", "1", "8"], ["0", "3", "1", "27"]
    ]


def test_gw_empty_table(tmp_path, capsys):
    gv = write(tmp_path, "gv.json", {"entries": []})
    code, out, _ = run(capsys, "gw", "--gv", gv)
    assert code == 0 and out == "g,d,num,den\n"


def test_gw_round_trip_through_invert(tmp_path, capsys):
    src = {"entries": [{"h": 0, "k": 1, "n": 24}, {"h": 1, "k": 1, "n": -2}, {"h": 2, "k": 3, "n": 7}]}
    gv = write(tmp_path, "gv.json", src)
    gw = tmp_path / "gw.json"
    back = tmp_path / "back.json"
    assert main(["gw", "--gv", gv, "--gmax", "3", "--dmax", "4", "--format", "json", "--out", str(gw)]) == 0
    assert main(["gv-invert", "--gw", str(gw), "--hmax", "3", "--dmax", "4", "--format", "json",
                 "--out", str(back)]) == 0
    assert gv_input_from_json(json.loads(back.read_text())) == gv_input_from_json(src)


def test_gv_invert_pure_cover(tmp_path, capsys):
    gw = write(tmp_path, "gw.json", {"entries": [
        {"g": 0, "d": 1, "num": 1, "den": 1}, {"g": 0, "d": 2, "num": 1, "den": 8}]})
    code, out, _ = run(capsys, "gv-invert", "--gw", gw, "--hmax", "0", "--dmax", "2")
    assert code == 0 and rows(out) == [["k", "h", "n"], ["1", "0", "1"]]


def test_gv_invert_inconsistent_exit_three(tmp_path, capsys):
    gw = write(tmp_path, "gw.json", {"entries": [{"g": 0, "d": 1, "num": 1, "den": 3}]})
    code, _, err = run(capsys, "gv-invert", "--gw", gw, "--hmax", "0", "--dmax", "1")
    assert code == 3 and "not an integer" in err


@pytest.mark.parametrize(
    "doc,field",
    [
        ({"entries": [{"h": 0, "k": 1}]}, "$.entries[0].n"),
        ({"entries": [{"h": 0, "k": 0, "n": 1}]}, "$.entries[0].k"),
        ({"entries": [{"h": "0", "k": 1, "n": 1}]}, "$.entries[0].h"),
        ({"rows": []}, "$.entries"),
    ],
)
def test_gw_schema_errors_name_the_field(tmp_path, capsys, doc, field):
    gv = write(tmp_path, "gv.json", doc)
    code, _, err = run(capsys, "gw", "--gv", gv)
    assert code == 2 and field in err


def test_malformed_json_is_schema_error(tmp_path, capsys):
    gv = write(tmp_path, "gv.json", "{not json")
    code, _, err = run(capsys, "gw", "--gv", gv)
    assert code == 2 and "invalid JSON" in err


def test_missing_file_is_usage_error(tmp_path, capsys):
    code, _, err = run(capsys, "gw", "--gv", str(tmp_path / "nope.json"))
    assert code == 1 and "nope.json" in err


def test_degree_above_dmax_is_usage_error(tmp_path, capsys):
    gv = write(tmp_path, "gv.json", {"entries": [{"h": 0, "k": 4, "n": 1}]})
    code, _, _ = run(capsys, "gw", "--gv", gv, "--dmax", "3")
    assert code == 1


# -- config precedence -----------------------------------------------------------
def test_config_precedence(tmp_path, capsys, monkeypatch):
    cfg = write(tmp_path, "cfg.json", {"kmax": 2, "format": "json"})
    monkeypatch.setenv("GVKIT_CONFIG", cfg)
    code, out, _ = run(capsys, "k3")
    assert code == 0 and json.loads(out)["k_max"] == 2
    code, out, _ = run(capsys, "k3", "--kmax", "1", "--format", "csv")
    assert code == 0 and rows(out)[-1] == ["1", "1", "-2", "-2"]


def test_config_unknown_key(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("GVKIT_CONFIG", write(tmp_path, "cfg.json", {"kmx": 2}))
    code, _, err = run(capsys, "k3")
    assert code == 2 and "kmx" in err


def test_defaults_without_config(capsys, monkeypatch):
    monkeypatch.delenv("GVKIT_CONFIG", raising=False)
    code, out, _ = run(capsys, "k3", "--format", "json")
    assert code == 0 and json.loads(out)["k_max"] == 5


# -- parity ---------------------------------------------------------------------
def test_parity_line_bundle_fixture(capsys):
    code, out, err = run(capsys, "parity", "--chern", "@line_bundle")
    assert code == 0
    assert rows(out) == [["key", "value"], ["integral", "true"], ["even", "true"]]
    assert "c1 = 0" in err


def test_parity_kunneth_fixture(capsys):
    code, out, _ = run(capsys, "parity", "--chern", "@kunneth_sheaf", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["even"] is True
    # alpha2 = 3L + H b1 + b2 on the quintic: c1 = 2 (int H.L) * 3 b1
    assert doc["c1"] == [{"generator": "b1", "num": 6, "den": 1}]


@pytest.mark.parametrize("seed", [0, 1, 7, 42])
def test_parity_seeded(capsys, seed):
    assert run(capsys, "parity", "--seed", str(seed))[0] == 0
    assert run(capsys, "parity", "--seed", str(seed), "--reduce")[0] == 0


def test_parity_odd_input_exit_three(tmp_path, capsys):
    doc = json.loads(fixture_path("line_bundle").read_text())
    # rank 1, alpha1 = 0 and delta4 = b (x) pt / 2 gives c1 = b, which is odd
    doc["alpha1"] = []
    doc["delta4"] = [{"x_monomial": ["x1"], "y_basis": "pt", "coeff_num": 1, "coeff_den": 2}]
    doc["rank"] = 1
    code, out, _ = run(capsys, "parity", "--chern", write(tmp_path, "odd.json", doc))
    assert code == 3 and ["even", "false"] in rows(out)


def test_parity_schema_errors(tmp_path, capsys):
    doc = json.loads(fixture_path("line_bundle").read_text())
    doc["alpha1"][0]["coeff_den"] = 2
    code, _, err = run(capsys, "parity", "--chern", write(tmp_path, "bad.json", doc))
    assert code == 2 and "$.alpha1[0]" in err
    doc = json.loads(fixture_path("line_bundle").read_text())
    doc["alpha1"][0]["y_basis"] = "nope"
    code, _, err = run(capsys, "parity", "--chern", write(tmp_path, "bad.json", doc))
    assert code == 2 and "$.alpha1[0].y_basis" in err


def test_chern_schema_round_trip(tmp_path):
    for seed in range(10):
        cd = random_chern_data(seed)
        again = chern_from_json(json.loads(json.dumps(chern_to_json(cd))))
        assert chern_to_json(again) == chern_to_json(cd)
        assert parity_check(again).c1 == parity_check(cd).c1


def test_emit_input_round_trip(tmp_path, capsys):
    path = tmp_path / "input.json"
    code, out, _ = run(capsys, "parity", "--seed", "5", "--emit-input", str(path), "--format", "json")
    code2, out2, _ = run(capsys, "parity", "--chern", str(path), "--format", "json")
    assert code == code2 == 0 and out == out2


# -- cech -------------------------------------------------------------------------
def cech_doc(capsys, name):
    code, out, _ = run(capsys, "cech", "--cover", f"@{name}", "--format", "json")
    return code, json.loads(out)


def test_cech_fixtures(capsys):
    code, doc = cech_doc(capsys, "simplex")
    assert code == 0 and doc["trivial"] is True and doc["torsor_count"] == 1 and doc["witness"]
    code, doc = cech_doc(capsys, "projective_plane")
    assert code == 0 and doc["trivial"] is False and doc["torsor_count"] == 2
    assert doc["witness"] is None
    code, doc = cech_doc(capsys, "circle")
    assert code == 0 and doc["trivial"] is True and doc["torsor_count"] == 2 and doc["h2_dim"] == 0


def test_cech_non_closed_nerve(tmp_path, capsys):
    cover = {"vertices": [0, 1, 2], "faces": {"2": [[0, 1], [1, 2]], "3": [[0, 1, 2]]}}
    code, _, err = run(capsys, "cech", "--cover", write(tmp_path, "c.json", cover))
    assert code == 2 and "[0, 2]" in err


def test_cech_not_a_cocycle(tmp_path, capsys):
    doc = json.loads(fixture_path("simplex").read_text())
    doc["signs"]["triples"] = {"0,1,2": -1}
    code, out, _ = run(capsys, "cech", "--cover", write(tmp_path, "c.json", doc))
    assert code == 3 and ["cocycle", "false"] in rows(out)


def test_cech_bad_sign(tmp_path, capsys):
    doc = json.loads(fixture_path("circle").read_text())
    doc["signs"]["pairs"]["0,1"] = 2
    code, _, err = run(capsys, "cech", "--cover", write(tmp_path, "c.json", doc))
    assert code == 2 and "$.signs.pairs.0,1" in err


# -- determinism and schema round trips ------------------------------------------
@pytest.mark.parametrize(
    "argv",
    [
        ["k3", "--kmax", "3"],
        ["k3", "--kmax", "3", "--format", "json"],
        ["parity", "--seed", "11", "--format", "json"],
        ["cech", "--cover", "@projective_plane"],
    ],
)
def test_byte_identical_outputs(tmp_path, argv):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(argv + ["--out", str(a)]) == main(argv + ["--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_emitted_tables_reparse(tmp_path, capsys):
    gv = write(tmp_path, "gv.json", {"entries": [{"h": 0, "k": 1, "n": 3}, {"h": 1, "k": 2, "n": -1}]})
    code, out, _ = run(capsys, "gw", "--gv", gv, "--dmax", "4", "--format", "json")
    table = gw_table_from_json(json.loads(out))
    assert gw_table_to_json(table) == json.loads(out)
    doc = gv_input_to_json(gv_input_from_json(json.loads(open(gv).read())))
    assert gv_input_to_json(gv_input_from_json(doc)) == doc


def test_schema_error_carries_field():
    with pytest.raises(SchemaError) as info:
        gw_table_from_json({"entries": [{"g": 0, "d": 1, "num": 1, "den": 0}]})
    assert info.value.field == "$.entries[0].den"


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "gvkit", "k3", "--kmax", "1"], capture_output=True, text=True
    )
    assert proc.returncode == 0 and proc.stdout.splitlines()[1] == "1,0,24,24"
