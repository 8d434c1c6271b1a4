import json
import subprocess
import sys

import pytest

from bs23.cli import run


def out(*argv):
    code, text = run(list(argv))
    return code, text


def test_equal():
    assert out("equal", "b a^2", "a^3 b") == (0, "true\n")
    assert out("equal", "a", "b") == (1, "false\n")
    code, text = out("equal", "b a^2", "a^3 b", "--format", "json")
    assert json.loads(text) == {"equal": True}


def test_reduce_and_nf():
    assert out("reduce", "b a^2 b^-1 a^-3") == (0, "1\n")
    code, text = out("reduce", "b a^2 b^-1", "--format", "json")
    data = json.loads(text)
    assert data["reduced"] == "a^3" and data["trace"] == [{"position": 0, "kind": "up", "k": 1}]
    assert out("nf", "a^5 b") == (0, "a^2 b a^2\n")
    code, text = out("nf", "b^-1 a^4 b", "--format", "json")
    assert json.loads(text)["tail"] == 2


def test_trivial_exit_codes():
    assert out("trivial", "b a^2 b^-1 a^-3") == (0, "Trivial\n")
    code, text = out("trivial", "[b a b^-1, a]")
    assert code == 1 and text.startswith("NonTrivial")


def test_kernel():
    assert out("kernel", "[b a b^-1, a]")[0] == 0
    assert out("kernel", "[b a b^-1, a]", "--prime")[0] == 0
    assert out("kernel", "a")[0] == 1
    assert out("kernel", "[b^2 a b^-2, a]")[0] == 1
    assert out("kernel", "[b^2 a b^-2, a]", "--power", "2")[0] == 0


def test_decompose_json():
    code, text = out("decompose", "b [b a b^-1, a] b^-1", "--format", "json")
    assert code == 0
    assert json.loads(text) == {"factors": [{"conjugator": "b", "i": 0, "j": 1}], "certified": True}
    code, text = out("decompose", "b a")
    assert code == 1 and text == ""


def test_classify_and_siblings():
    code, text = out("classify", "b a b^-1 a b", "--format", "json")
    data = json.loads(text)
    assert data["swiss"] is True and data["path"] == "u0 d1 u1"
    code, text = out("siblings", "b^2 a b^-2")
    assert code == 0 and text.splitlines()[-1] == "canonical: b^2 a b^-2"
    assert out("siblings", "b a b^-1")[0] == 1
    code, text = out("siblings", "a b^-1", "--flips")
    assert text.splitlines()[-1] == "canonical: b^-1"


def test_basis():
    code, text = out("basis", "--depth", "0", "--format", "json")
    data = json.loads(text)
    assert [(e["conjugator"], e["i"], e["j"]) for e in data["elements"]] == [
        ("1", 0, 1), ("1", 0, -1), ("1", 1, 1), ("1", 1, -1)]
    assert out("basis", "--depth", "-1")[0] == 2


def test_probes():
    code, text = out("probe", "freeness", "--trials", "50", "--seed", "1")
    assert code == 0 and text.startswith("PASS")
    assert out("probe", "samekernel", "--trials", "40", "--kernel-samples", "10")[0] == 0
    code, text = out("probe", "homomorphism", "--trials", "20", "--format", "json")
    assert json.loads(text)["checks"][0]["pass"] is True


def test_checks():
    code, text = out("check", "corollary")
    assert code == 0 and text.count("PASS") == 3
    assert out("check", "tietze")[0] == 0
    assert out("check", "tietze", "--lam", "a", "--mu", "b")[0] == 1
    code, text = out("check", "limit", "--format", "json")
    assert json.loads(text) == {"orders": [{"m": 1, "k": 2, "N": 1}, {"m": 1, "k": 3, "N": 2}, {"m": 2, "k": 3, "N": 1}]}


def test_export_formats():
    code, text = out("export", "cayley", "--radius", "1", "--format", "dot")
    assert code == 0 and text.count("->") == 4
    code, text = out("export", "tree", "--radius", "2", "--format", "json")
    assert len(json.loads(text)["vertices"]) == 26
    code, text = out("export", "forest", "--radius", "1", "--format", "csv")
    assert text.splitlines() == ["height,vertices,edges", "0,4,3"]
    assert out("export", "quotient", "--radius", "2")[0] == 0


def test_caps(monkeypatch):
    assert out("export", "cayley", "--radius", "7")[0] == 3
    monkeypatch.setenv("BS23_TREE_RADIUS_CAP", "1")
    assert out("export", "tree", "--radius", "2")[0] == 3
    monkeypatch.setenv("BS23_SIBLING_CAP", "2")
    assert out("siblings", "b^2 a b^-1 a^-1 b^-1 a b^2")[0] == 3
    monkeypatch.setenv("BS23_SIBLING_CAP", "many")
    assert out("siblings", "b^2")[0] == 2


@pytest.mark.parametrize("argv", [
    [],
    ["reduce"],
    ["reduce", "a^"],
    ["frobnicate"],
    ["export", "cayley"],
    ["kernel", "a", "--n", "1", "--m", "2"],
    ["nf", "a", "--n", "0"],
])
def test_usage_errors(argv):
    assert run(argv)[0] == 2


def test_other_parameters():
    assert out("equal", "b a", "a^2 b", "--n", "1", "--m", "2")[0] == 0
    # a^2 b = b a when b a b^-1 = a^2
    assert out("nf", "a^3 b", "--n", "1", "--m", "2") == (0, "a b a\n")


def test_file_batch(tmp_path):
    f = tmp_path / "words.txt"
    f.write_text("b a^2 b^-1 a^-3\n\n[b a b^-1, a]\n", encoding="utf-8")
    code, text = out("trivial", "--file", str(f))
    assert code == 1
    assert text.splitlines()[0] == "Trivial" and text.splitlines()[1].startswith("NonTrivial")
    assert out("reduce", "--file", str(tmp_path / "missing.txt"))[0] == 2
    assert out("reduce", "a", "--file", str(f))[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "bs23", "equal", "b a^2", "a^3 b"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "true\n"
