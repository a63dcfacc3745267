import json

import pytest

from betauto.cli import main

from conftest import fixture_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def cfg(name):
    return str(fixture_path(name))


# --- relations ----------------------------------------------------------------


def test_relations_intro(tmp_path, capsys):
    code, out, _ = run(capsys, "relations", "--config", cfg("intro"),
                       "--out", tmp_path)
    assert code == 0
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["status"] == "ok"
    assert summary["state_count"] == 3
    assert summary["free"] is False
    doc = json.loads((tmp_path / "relations.json").read_text())
    assert len(doc["states"]) == 3
    assert (tmp_path / "relations.dot").read_text().startswith("digraph")


def test_relations_deterministic_output(tmp_path, capsys):
    d1, d2 = tmp_path / "a", tmp_path / "b"
    run(capsys, "relations", "--config", cfg("kenyon_2_5"), "--out", d1)
    run(capsys, "relations", "--config", cfg("kenyon_2_5"), "--out", d2)
    for f in ["relations.json", "relations.dot", "summary.json"]:
        assert (d1 / f).read_bytes() == (d2 / f).read_bytes()


def test_relations_free_case(tmp_path, capsys):
    code, _, _ = run(capsys, "relations", "--config", cfg("kenyon_1_5"),
                     "--out", tmp_path)
    assert code == 0
    assert json.loads((tmp_path / "summary.json").read_text())["free"] is True


def test_relations_salem_blocked(tmp_path, capsys):
    code, _, err = run(capsys, "relations", "--config", cfg("salem"),
                       "--out", tmp_path)
    assert code == 2
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["status"] == "blocked"
    assert not (tmp_path / "relations.json").exists()


def test_relations_salem_forced_capped(tmp_path, capsys):
    code, _, err = run(capsys, "relations", "--config", cfg("salem"),
                       "--out", tmp_path, "--force", "--max-states", "2000")
    assert code == 2
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["status"] == "capped"
    assert "does not certify" in summary["note"]


# --- structure ----------------------------------------------------------------


def test_structure_intro(tmp_path, capsys):
    code, _, _ = run(capsys, "structure", "--config", cfg("intro"),
                     "--out", tmp_path, "-N", "6", "--candidate-pi", "1,-3,1",
                     "--json")
    assert code == 0
    g = json.loads((tmp_path / "growth.json").read_text())
    assert g["counts"] == ["1", "3", "8", "21", "55", "144", "377"]
    assert g["char_poly"] == [1, -3, 1]
    assert g["pi_check"]["ok"] is True
    assert abs(g["lambda"]["lo"] - 2.618034) < 1e-5
    for f in ["reduced.json", "reduced.dot", "mult_0.json", "mult_1.json",
              "mult_3.json", "mult_0.dot"]:
        assert (tmp_path / f).exists()


def test_structure_revlex(tmp_path, capsys):
    code, _, _ = run(capsys, "structure", "--config", cfg("intro"),
                     "--out", tmp_path, "--order", "revlex", "-N", "4")
    assert code == 0
    g = json.loads((tmp_path / "growth.json").read_text())
    assert g["counts"] == ["1", "3", "8", "21", "55"]


def test_structure_bad_candidate(tmp_path, capsys):
    code, _, err = run(capsys, "structure", "--config", cfg("intro"),
                       "--out", tmp_path, "--candidate-pi", "1,x,3")
    assert code == 1


# --- word commands --------------------------------------------------------------


def test_reduce_word(tmp_path, capsys):
    code, out, _ = run(capsys, "reduce", "--config", cfg("intro"),
                       "--out", tmp_path, "10")
    assert code == 0
    assert out.strip() == "03"


def test_equiv(tmp_path, capsys):
    code, out, _ = run(capsys, "equiv", "--config", cfg("intro"),
                       "--out", tmp_path, "110", "033")
    assert code == 0 and out.strip() == "equivalent"
    code, out, _ = run(capsys, "equiv", "--config", cfg("intro"),
                       "--out", tmp_path, "110", "031")
    assert code == 0 and out.strip() == "distinct"


def test_verify_words(tmp_path, capsys):
    code, out, _ = run(capsys, "verify", "--config", cfg("intro"),
                       "--out", tmp_path, "10", "03")
    assert code == 0 and out.strip() == "true"
    code, out, _ = run(capsys, "verify", "--config", cfg("intro"),
                       "--out", tmp_path, "10", "33")
    assert code == 3 and out.strip() == "false"
    code, _, _ = run(capsys, "verify", "--config", cfg("intro"),
                     "--out", tmp_path, "10", "033")
    assert code == 1


def test_verify_identity(tmp_path, capsys):
    code, out, _ = run(capsys, "verify", "--config", cfg("salem"),
                       "--out", tmp_path,
                       "--identity", cfg("salem_identity"), "--json")
    assert code == 0
    assert json.loads(out)["verified"] is True


# --- free ------------------------------------------------------------------------


def test_free_kenyon(tmp_path, capsys):
    code, out, _ = run(capsys, "free", "--config", cfg("kenyon_1_5"),
                       "--out", tmp_path, "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["free"] is True
    assert any(r.startswith("kenyon") for r in doc["reasons"])


def test_free_mahler(tmp_path, capsys):
    code, out, _ = run(capsys, "free", "--config", cfg("pisot_x2-x-1"),
                       "--out", tmp_path, "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["free"] is False
    assert "mahler<2" in doc["reasons"]


def test_free_quick_sufficient(tmp_path, capsys):
    code, out, _ = run(capsys, "free", "--config",
                       cfg("free_x4-3x3-3x2-3x+1"), "--out", tmp_path, "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["free"] is True
    assert "expanding-separation" in doc["reasons"]


def test_free_salem_mahler(tmp_path, capsys):
    # the Mahler bound settles this without building the (blocked) automaton
    code, out, _ = run(capsys, "free", "--config", cfg("salem"),
                       "--out", tmp_path, "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["free"] is False
    assert "mahler<2" in doc["reasons"]


def test_free_salem_inconclusive(tmp_path, capsys):
    # with three digits no shortcut applies and the build is blocked
    config = json.loads(fixture_path("salem").read_text())
    config["digits"] = [0, 1, 2]
    f = tmp_path / "salem3.json"
    f.write_text(json.dumps(config))
    code, out, _ = run(capsys, "free", "--config", f, "--out", tmp_path,
                       "--json")
    assert code == 2
    doc = json.loads(out)
    assert doc["free"] is None
    assert doc["status"] == "blocked"


# --- oracle ----------------------------------------------------------------------


def test_oracle_intro(tmp_path, capsys):
    code, out, _ = run(capsys, "oracle", "--config", cfg("intro"),
                       "--out", tmp_path, "-n", "4")
    assert code == 0
    assert "4/4 oracle checks passed" in out
    assert "[FAIL]" not in out


# --- input errors ------------------------------------------------------------------


def test_missing_config(tmp_path, capsys):
    code, _, err = run(capsys, "relations", "--config",
                       tmp_path / "nope.json", "--out", tmp_path)
    assert code == 1 and "error" in err


def test_invalid_config(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"beta": {"minpoly": [1, -2, 1]}, "digits": [0, 1]}))
    code, _, err = run(capsys, "relations", "--config", bad, "--out", tmp_path)
    assert code == 1


def test_bad_word_digit(tmp_path, capsys):
    code, _, err = run(capsys, "reduce", "--config", cfg("intro"),
                       "--out", tmp_path, "12")
    assert code == 1
