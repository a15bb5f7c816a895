import csv
import io
import json

import pytest

from thompson_moonshine import thompson as th
from thompson_moonshine.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO("".join(l + "\n" for l in text.splitlines()
                                                    if not l.startswith("#")))))


def test_f3_table(capsys):
    code, out, _ = run(capsys, "f3")
    got = {int(r["m"]): int(r["c"]) for r in rows(out)}
    assert code == 0
    assert got[-3] == 2 and got[9] == -8192000 and got[12] == 88660992
    assert max(got) == 33


@pytest.mark.parametrize("cls,n,value", [("3B", 8, -108), ("1A", 4, 54000), ("31A", 5, -2)])
def test_mt_examples(capsys, cls, n, value):
    code, out, _ = run(capsys, "mt", cls, "--trunc", "8")
    r = {int(x["n"]): x for x in rows(out)}
    assert code == 0 and int(r[n]["value"]) == value
    assert r[n]["route"] in ("exact", "trace", "rademacher") and r[n]["residue"]


def test_unknown_class(capsys):
    code, _, err = run(capsys, "mt", "99Z")
    assert code != 0 and "unknown class" in err


def test_rademacher_command(capsys):
    code, out, _ = run(capsys, "rademacher", "--N", "3", "--n", "5", "--cutoff", "2000")
    (r,) = rows(out)
    assert code == 0 and int(r["nearest"]) == 27
    assert set(r) >= {"estimate", "nearest", "residue", "tail_indicator"}


def test_trace_command(capsys):
    code, out, _ = run(capsys, "trace", "--N", "1", "--D1", "-3", "--D2", "5")
    (r,) = rows(out)
    assert code == 0 and int(r["nearest"]) == -85995
    assert "[1,1,4]" in out and "[2,1,2]" in out


def test_json_and_determinism(capsys):
    _, a, _ = run(capsys, "mt", "5A", "--trunc", "12", "--format", "json")
    _, b, _ = run(capsys, "mt", "5A", "--trunc", "12", "--format", "json")
    assert a == b
    doc = json.loads(a)
    assert [r["n"] for r in doc["rows"]] == [-3, 0, 1, 4, 5, 8, 9, 12]


def test_flags_beat_environment(capsys, monkeypatch, tmp_path):
    packaged = th.data_dir()
    monkeypatch.setenv(th.ENV_DATA_DIR, str(tmp_path))        # an empty directory
    code, _, err = run(capsys, "mt", "2A", "--trunc", "4")
    assert code == 2 and "cannot read" in err
    code, _, _ = run(capsys, "mt", "2A", "--trunc", "4", "--data-dir", str(packaged))
    assert code == 0


def test_bad_config(capsys):
    code, _, err = run(capsys, "f3", "--digits", "10")
    assert code == 2 and "digits" in err
    code, _, _ = run(capsys, "f3", "--trunc", "2")
    assert code == 2


def test_decompose_small(capsys):
    code, out, _ = run(capsys, "decompose", "--max-m", "8", "--jobs", "2")
    r = {int(x["m"]): x for x in rows(out)}
    assert code == 0
    assert r[4]["V4"] == r[4]["V5"] == "1" and r[0]["V2"] == "1"
    assert "# [PASS] b D0=-15 m=5: W_5 = V9 + V10" in out
