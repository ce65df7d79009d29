import json

import pytest

import elldep.cli as cli


def run(argv):
    return cli.main(argv)


def test_config_parse_and_canonical_echo():
    text = "# comment\nn = 3\ncurve = 0,-2\n\np = 3,5\n"
    cfg = cli.parse_config_text(text)
    assert cfg == {"n": "3", "curve": "0,-2", "p": "3,5"}
    canonical = cli.canonical_config(cfg)
    assert canonical == "curve = 0,-2\nn = 3\np = 3,5\n"
    # canonical form parses back to itself, byte for byte
    assert cli.canonical_config(cli.parse_config_text(canonical)) == canonical


def test_config_parse_errors():
    with pytest.raises(cli.UsageError):
        cli.parse_config_text("just words\n")
    with pytest.raises(cli.UsageError):
        cli.parse_config_text("= value\n")


def test_sequence_command(tmp_path, capsys):
    out = tmp_path / "seq.csv"
    code = run([
        "sequence", "--curve", "0,-2", "--p", "3,5", "--n", "3",
        "--cache-dir", str(tmp_path / "cache"), "--out", str(out),
    ])
    assert code == 0
    assert out.read_text().splitlines() == [
        "n,aP,bP,dP",
        "1,3,5,1",
        "2,129,-383,10",
        "3,164323,-66234835,171",
    ]
    first = out.read_bytes()
    code = run([
        "sequence", "--curve", "0,-2", "--p", "3,5", "--n", "3",
        "--cache-dir", str(tmp_path / "cache"), "--out", str(out),
    ])
    assert code == 0 and out.read_bytes() == first


def test_sequence_with_offset_and_start(tmp_path):
    out = tmp_path / "seq.csv"
    code = run([
        "sequence", "--curve", "0,-2", "--p", "3,5", "--q", "129/100,-383/1000",
        "--m", "2", "--n", "2",
        "--cache-dir", str(tmp_path / "cache"), "--out", str(out),
    ])
    assert code == 0
    lines = out.read_text().splitlines()
    # nP + 2P = (n+2)P: rows 3 and 4 carry d(5P) and d(6P)
    assert lines[1].split(",")[0] == "3"
    assert lines[1].endswith(",12660211")
    assert lines[2].endswith(",22652313570")


def test_sequence_rejects_torsion(tmp_path):
    code = run([
        "sequence", "--curve", "0,1", "--p", "2,3", "--n", "3",
        "--cache-dir", str(tmp_path / "cache"), "--out", str(tmp_path / "x.csv"),
    ])
    assert code == cli.EXIT_USAGE
    assert not (tmp_path / "x.csv").exists()


def test_sequence_missing_field(tmp_path):
    code = run(["sequence", "--curve", "0,-2", "--p", "3,5",
                "--cache-dir", str(tmp_path / "cache")])
    assert code == cli.EXIT_USAGE


def test_cache_lock(tmp_path):
    cache_dir = tmp_path / "cache"
    with cli.CacheLock(str(cache_dir)):
        code = run([
            "sequence", "--curve", "0,-2", "--p", "3,5", "--n", "2",
            "--cache-dir", str(cache_dir), "--out", "-",
        ])
        assert code == cli.EXIT_INVARIANT  # directory owned by someone else
    code = run([
        "sequence", "--curve", "0,-2", "--p", "3,5", "--n", "2",
        "--cache-dir", str(cache_dir), "--out", str(tmp_path / "ok.csv"),
    ])
    assert code == 0


def test_heights_command(tmp_path):
    out = tmp_path / "h.json"
    code = run(["heights", "--curve", "0,-2", "--p", "3,5", "--n-max", "24",
                "--out", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["n_lo"] == 12 and payload["n_hi"] == 24
    assert payload["hhat"] > 0 and payload["spread"] > 0


def test_rp_census_command(tmp_path):
    out = tmp_path / "census.csv"
    code = run(["rp-census", "--curve", "0,-2", "--p", "3,5", "--r", "3",
                "--prime-bound", "30", "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "p,r_p,method"
    rows = {l.split(",")[0]: l for l in lines[1:]}
    assert rows["2"] == "2,2,scan"
    assert rows["5"] == "5,2,order"
    assert rows["19"] == "19,3,order"


def test_count_command(tmp_path, monkeypatch):
    prefix = str(tmp_path / "dstar")
    code = run([
        "count", "--curve", "0,-2", "--p", "3,5", "--target", "D*",
        "--series", "8,12,16,20", "--out-prefix", prefix,
    ])
    assert code == 0
    csv_lines = (tmp_path / "dstar.csv").read_text().splitlines()
    assert csv_lines[0] == "N,count,alpha_partial"
    assert len(csv_lines) == 5
    payload = json.loads((tmp_path / "dstar.json").read_text())
    assert payload["theoretical"] == pytest.approx(12 / 7)
    assert payload["alpha"] >= 0 and payload["monotone"]
    dat = (tmp_path / "dstar.dat").read_text().splitlines()
    assert len(dat) == 4 and all(len(l.split()) == 2 for l in dat)


def test_count_distinct_coordinates(tmp_path):
    prefix = str(tmp_path / "mixed")
    code = run([
        "count", "--curve", "0,-2;0,-4", "--p", "3,5;2,2", "--target", "D",
        "--series", "4,6,8", "--out-prefix", prefix,
    ])
    assert code == 0
    payload = json.loads((tmp_path / "mixed.json").read_text())
    assert payload["config"]["curve"] == "0,-2;0,-4"
    assert payload["monotone"]


def test_count_budget_exit(tmp_path):
    code = run([
        "count", "--curve", "0,-2", "--p", "3,5", "--target", "D",
        "--series", "8,12,16", "--budget", "10",
        "--out-prefix", str(tmp_path / "b"),
    ])
    assert code == cli.EXIT_BUDGET


def test_count_missing_series(tmp_path):
    code = run(["count", "--curve", "0,-2", "--p", "3,5",
                "--out-prefix", str(tmp_path / "c")])
    assert code == cli.EXIT_USAGE


def test_semigroup_command(tmp_path):
    out = tmp_path / "sg.json"
    code = run(["semigroup", "--curve", "0,-2", "--p", "3,5", "--n", "40",
                "--generators", "10,171", "--out", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["hits"] == [1, 2, 3]
    assert payload["bound"] == 3 and payload["within_bound"]


def test_verify_lemmas_command(tmp_path, capsys):
    out = tmp_path / "checks.json"
    code = run(["verify-lemmas", "--curve", "0,-2", "--p", "3,5",
                "--out", str(out)])
    assert code == 0
    checks = json.loads(out.read_text())
    statuses = {c["name"]: c["status"] for c in checks}
    assert statuses["group_law_exactness"] == "PASS"
    assert statuses["hasse_bound"] == "PASS"
    assert statuses["appearance_small_primes"] == "PASS"
    assert "FAIL" not in statuses.values()
    printed = capsys.readouterr().out
    assert "strong_divisibility: PASS" in printed


def test_echo_config(tmp_path, capsys):
    cfg_file = tmp_path / "run.cfg"
    cfg_file.write_text("curve = 0,-2\np = 3,5\nn = 3\n")
    code = run(["sequence", "--config", str(cfg_file), "--echo-config"])
    assert code == 0
    assert capsys.readouterr().out == "curve = 0,-2\nn = 3\np = 3,5\n"


def test_usage_exit_for_bad_flags():
    with pytest.raises(SystemExit) as exc:
        run(["sequence", "--no-such-flag"])
    assert exc.value.code == cli.EXIT_USAGE
