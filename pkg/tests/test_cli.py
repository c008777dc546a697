"""Command-line interface: output formats, exit codes, cache, determinism."""

import json
import math

import pytest

from zeta_eta.cli import main

GAMMA_LINES = "14.134725141734694\n21.022039638771554\n25.010857580145688\n"


@pytest.fixture(autouse=True)
def isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("ZETA_ETA_CACHE", str(tmp_path / "cache"))
    return tmp_path


def _run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval_zeta_point(capsys):
    code, out, err = _run(capsys, ["eval", "--what", "zeta", "--s", "2"])
    assert code == 0 and err == ""
    re_, im_, est = out.strip().split(",")
    assert float(re_) == pytest.approx(1.6449340668482264, abs=1e-10)
    assert float(im_) == 0.0
    assert float(est) == 1e-10


def test_eval_logzeta_matches_branch_value(capsys):
    code, out, _ = _run(capsys,
                        ["eval", "--what", "logzeta", "--s", "0.5+30i"])
    assert code == 0
    re_, im_, est = (float(p) for p in out.strip().split(","))
    assert re_ == pytest.approx(-0.5174667619879809, abs=1e-9)
    assert im_ == pytest.approx(-1.7746148293844037, abs=1e-9)
    assert 0.0 <= est <= 1e-9


def test_eval_abs_err_flag(capsys):
    code, out, _ = _run(capsys, ["--abs-err", "1e-12",
                                 "eval", "--what", "zeta", "--s", "2"])
    assert code == 0
    assert float(out.strip().split(",")[2]) == 1e-12


def test_eval_eta_check_routes(capsys):
    code, out, _ = _run(capsys, ["eval", "--what", "eta", "--s", "0.5+50i",
                                 "--m", "1", "--check-routes"])
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 3
    assert lines[0].startswith("vertical,")
    assert lines[1].startswith("iterated,")
    tail = lines[2].split(",")
    assert tail[0] == "diff" and tail[4] == "agree" and tail[5] == "true"


def test_eval_s_m(capsys):
    code, out, _ = _run(capsys, ["eval", "--what", "s_m", "--t", "30",
                                 "--m", "0"])
    assert code == 0
    val = float(out.strip().split(",")[0])
    assert val == pytest.approx(-0.5648774443614166, abs=1e-9)


def test_usage_errors_exit_three(capsys):
    for argv in (["eval", "--what", "zeta"],                 # missing --s
                 ["eval", "--what", "eta", "--s", "2+20i"],  # missing --m
                 ["eval", "--what", "nonsense", "--s", "2"],
                 ["eval", "--what", "zeta", "--s", "two"],
                 ["dist", "tails", "--t-big", "1000"],       # missing --seed
                 ["dist", "tails", "--t-big", "1000", "--seed", "1"],
                 ["residual-scan", "--m", "1", "--x-list", "",
                  "--t-from", "50", "--t-to", "60", "--t-step", "5"]):
        code, _, err = _run(capsys, argv)
        assert code == 3, argv
        assert "error:" in err or "usage" in err.lower()


def test_out_of_domain_exits_three(capsys):
    code, _, err = _run(capsys, ["eval", "--what", "logzeta",
                                 "--s", "0.5+1e9i"])
    assert code == 3 and "error:" in err


def test_missing_zeros_file_exits_two(capsys, tmp_path):
    code, _, err = _run(capsys, ["--zeros", str(tmp_path / "nope.csv"),
                                 "eval", "--what", "logzeta",
                                 "--s", "0.5+30i"])
    assert code == 2 and "error:" in err


def test_malformed_zeros_file_exits_three(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("14.13\n25.01\n21.02\n")        # out of order
    code, _, err = _run(capsys, ["--zeros", str(bad),
                                 "--zeros-format", "plain-ordinates",
                                 "eval", "--what", "logzeta",
                                 "--s", "0.5+20i"])
    assert code == 3 and "error:" in err


def test_zeros_import_populates_cache(capsys, tmp_path):
    src = tmp_path / "zeros.txt"
    src.write_text(GAMMA_LINES)
    code, out, _ = _run(capsys, ["zeros-import", str(src)])
    assert code == 0
    assert "imported 3 zeros" in out
    cache = tmp_path / "cache" / "zeros.csv"
    assert cache.exists()
    # later runs prefer the (tiny) cached table: t=100 is now out of range
    code, _, err = _run(capsys, ["eval", "--what", "s_m", "--t", "100",
                                 "--m", "0"])
    assert code == 3 and "error:" in err
    # but in-range requests use it fine
    code, out, _ = _run(capsys, ["eval", "--what", "s_m", "--t", "20",
                                 "--m", "0"])
    assert code == 0


def test_zeros_flag_overrides_cache(capsys, tmp_path):
    src = tmp_path / "zeros.txt"
    src.write_text(GAMMA_LINES)
    assert main(["zeros-import", str(src)]) == 0
    bigger = tmp_path / "bigger.txt"
    bigger.write_text(GAMMA_LINES + "30.424876125859513\n")
    capsys.readouterr()
    code, _, err = _run(capsys, ["--zeros", str(bigger),
                                 "--zeros-format", "plain-ordinates",
                                 "eval", "--what", "s_m", "--t", "28",
                                 "--m", "0"])
    assert code == 0, err


def test_residual_scan_rows_and_threads(capsys):
    argv = ["residual-scan", "--m", "1", "--x-list", "10,30",
            "--t-from", "50", "--t-to", "60", "--t-step", "5"]
    code, out, _ = _run(capsys, argv)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("# metadata: ")
    meta = json.loads(lines[0][len("# metadata: "):])
    assert meta["command"] == "residual-scan" and meta["x_list"] == [10.0,
                                                                     30.0]
    assert "timestamp" not in json.dumps(meta).lower()
    header = lines[1].split(",")
    assert header[:2] == ["t", "x"] and "ratio" in header
    assert len(lines) == 2 + 3 * 2          # 3 t-values x 2 X-values
    # a threaded run yields identical rows (metadata records the thread
    # count, so only the comment line may differ)
    code2, out2, _ = _run(capsys, ["--threads", "3"] + argv)
    assert code2 == 0
    assert out2.strip().splitlines()[1:] == lines[1:]


def test_dist_tails_csv_and_json_deterministic(capsys, tmp_path):
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    base = ["dist", "tails", "--t-big", "1000", "--seed", "7",
            "--count", "120", "--v-list", "0,1"]
    assert main(["--out", str(out1)] + base) == 0
    assert main(["--out", str(out2)] + base) == 0
    capsys.readouterr()
    assert out1.read_bytes() == out2.read_bytes()
    assert (tmp_path / "a.csv.json").read_bytes() == \
        (tmp_path / "b.csv.json").read_bytes()
    doc = json.loads((tmp_path / "a.csv.json").read_text())
    assert set(doc) == {"metadata", "rows"}
    assert doc["metadata"]["seed"] == 7
    fr = [row["fraction"] for row in doc["rows"]]
    assert fr[0] >= fr[1]
    header = out1.read_text().splitlines()[0]
    assert header == "V,fraction,stderr,gaussian_ref,jutila_ref"


def test_dist_tails_different_seed_differs(capsys, tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "c.csv"
    assert main(["--out", str(a), "dist", "tails", "--t-big", "1000",
                 "--seed", "7", "--count", "120", "--v-list", "0.5"]) == 0
    assert main(["--out", str(b), "dist", "tails", "--t-big", "1000",
                 "--seed", "8", "--count", "120", "--v-list", "0.5"]) == 0
    capsys.readouterr()
    assert a.read_bytes() != b.read_bytes()


def test_dist_tmeasure(capsys):
    code, out, _ = _run(capsys, ["dist", "tmeasure", "--t-big", "1000",
                                 "--seed", "3", "--count", "100",
                                 "--x", "10", "--v", "0", "--m", "1"])
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[1] == "V,fraction,stderr,gaussian_ref,count_exceed"
    row = lines[2].split(",")
    assert float(row[1]) == 1.0 and int(row[4]) == 100


def test_dist_moments_waiver_and_guard(capsys):
    base = ["dist", "moments", "--t-big", "1000", "--seed", "2",
            "--count", "30", "--x", "10", "--m", "1", "--k", "1"]
    code, _, err = _run(capsys, base)
    assert code == 3 and "waive" in err            # hypothesis enforced
    code, out, _ = _run(capsys, base + ["--waive-range"])
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[1] == "empirical,bound,interval,hypothesis_waived"
    emp, bound, interval, waived = lines[2].split(",")
    assert float(emp) > 0.0 and float(bound) > 0.0
    assert interval == "theorem" and waived == "true"
    meta = json.loads(lines[0][len("# metadata: "):])
    assert meta["waive_range"] is True
