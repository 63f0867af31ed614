import json

import pytest

from conftest import EVEN_SHIFT, GOLDEN_MEAN
from soficinv.cli import main
from soficinv.semigroup import brandt_semigroup


@pytest.fixture
def files(tmp_path):
    gm = tmp_path / "golden_mean.shift"
    gm.write_text(GOLDEN_MEAN)
    ev = tmp_path / "even.shift"
    ev.write_text(EVEN_SHIFT)
    b2 = tmp_path / "b2.sgp"
    b2.write_text(brandt_semigroup(2).dumps())
    bad = tmp_path / "bad.shift"
    bad.write_text("1 a 2\n")
    return {"gm": str(gm), "even": str(ev), "b2": str(b2), "bad": str(bad), "dir": tmp_path}


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_analyze_golden_mean(files, capsys):
    code, out, _ = run(capsys, "analyze", files["gm"])
    assert code == 0
    assert json.loads(out)["flags"]["property_a"] is True


def test_analyze_even_shift(files, capsys):
    code, out, _ = run(capsys, "analyze", files["even"])
    flags = json.loads(out)["flags"]
    assert code == 0
    assert flags["aperiodic"] is False and flags["property_a"] is False


def test_analyze_raw_semigroup(files, capsys):
    code, out, _ = run(capsys, "analyze", files["b2"], "--raw-semigroup")
    rep = json.loads(out)
    assert code == 0
    assert rep["semigroup"]["order"] == 5
    assert len(rep["karoubi"]["skeleton_objects"]) == 2


def test_analyze_text_format(files, capsys):
    code, out, _ = run(capsys, "analyze", files["gm"], "--format", "text")
    assert code == 0
    assert "|S| = 5" in out


def test_analyze_writes_dot_files(files, capsys):
    out_dir = files["dir"] / "dot"
    code, _, _ = run(capsys, "analyze", files["gm"], "--dot", str(out_dir))
    assert code == 0
    names = sorted(p.name for p in out_dir.iterdir())
    assert "karoubi.dot" in names and "krieger.dot" in names and "fischer.dot" in names


def test_analyze_oracle_check(files, capsys):
    code, out, _ = run(capsys, "analyze", files["gm"], "--oracle-bound", "18")
    assert code == 0
    assert json.loads(out)["oracle_check"]["separated"] is True
    code, _, err = run(capsys, "analyze", files["gm"], "--oracle-bound", "2")
    assert code == 2 and "BoundTooSmall" in err


def test_invalid_input_exits_two(files, capsys):
    code, _, err = run(capsys, "analyze", files["bad"])
    assert code == 2
    assert "EmptyShift" in err
    code, _, err = run(capsys, "analyze", str(files["dir"] / "missing.shift"))
    assert code == 2


def test_compare_golden_mean_with_expansion(files, capsys):
    expanded = files["dir"] / "gmx.shift"
    assert run(capsys, "transform", files["gm"], "expand", "a", "-o", str(expanded))[0] == 0
    code, out, _ = run(capsys, "compare", files["gm"], str(expanded))
    assert code == 0
    assert json.loads(out)["verdict"] == "karoubi_equivalent"


def test_compare_golden_mean_with_even(files, capsys):
    code, out, _ = run(capsys, "compare", files["gm"], files["even"])
    assert code == 1
    assert json.loads(out)["separator"] == "aperiodic"


def test_compare_with_itself(files, capsys):
    code, out, _ = run(capsys, "compare", files["even"], files["even"])
    assert code == 0
    assert json.loads(out)["witness"]["skeleton_objects"] >= 1


def test_budget_exhaustion_exits_three(files, capsys):
    code, _, err = run(capsys, "compare", files["gm"], files["gm"], "--budget", "1", "--exhaustive")
    assert code == 3
    assert "budget" in err


def test_compare_is_deterministic(files, capsys):
    first = run(capsys, "compare", files["gm"], files["even"], "--exhaustive")
    second = run(capsys, "compare", files["gm"], files["even"], "--exhaustive")
    assert first == second


def test_transform_expand_counts(files, capsys):
    code, out, _ = run(capsys, "transform", files["gm"], "expand", "a")
    edges = [ln for ln in out.splitlines() if ln and not ln.startswith("#")]
    assert code == 0
    assert len(edges) == 5
    assert len({t for ln in edges for t in ln.split()[::2]}) == 4


def test_transform_block_one_is_byte_identical(files, capsys):
    _, canon, _ = run(capsys, "transform", files["gm"], "block", "1")
    path = files["dir"] / "canon.shift"
    path.write_text(canon)
    _, again, _ = run(capsys, "transform", str(path), "block", "1")
    assert canon == again


def test_transform_power_and_induce(files, capsys):
    code, out, _ = run(capsys, "transform", files["gm"], "power", "2")
    assert code == 0 and "ab" in out
    code, out, _ = run(capsys, "transform", files["b2"], "induce")
    assert code == 0 and out.strip()


def test_transform_errors_exit_two(files, capsys):
    assert run(capsys, "transform", files["gm"], "expand", "z")[0] == 2
    assert run(capsys, "transform", files["gm"], "block", "0")[0] == 2
    assert run(capsys, "transform", files["gm"], "expand")[0] == 2


def test_batch_compare(files, capsys):
    manifest = files["dir"] / "pairs.txt"
    manifest.write_text("golden_mean.shift golden_mean.shift\ngolden_mean.shift even.shift\n")
    code, out, _ = run(capsys, "compare", "--batch", str(manifest), "--jobs", "2")
    results = json.loads(out)
    assert code == 1
    assert [r["verdict"] for r in results] == ["karoubi_equivalent", "distinguished"]


def test_batch_reports_invalid_pairs(files, capsys):
    manifest = files["dir"] / "pairs.txt"
    manifest.write_text("golden_mean.shift bad.shift\n")
    code, out, _ = run(capsys, "compare", "--batch", str(manifest))
    assert code == 2
    assert "EmptyShift" in json.loads(out)[0]["error"]


def test_corpus_command_writes_files(files, capsys):
    out_dir = files["dir"] / "corpus"
    assert run(capsys, "corpus", str(out_dir), "--count", "3")[0] == 0
    assert len(list(out_dir.glob("*.shift"))) == 3


def test_budget_must_be_positive(files, capsys):
    with pytest.raises(SystemExit):
        main(["analyze", files["gm"], "--budget", "0"])
