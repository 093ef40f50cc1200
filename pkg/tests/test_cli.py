import json
import subprocess
import sys

import pytest

from gchom.cli import main
from gchom.complexes import dump_basis, enumerate_basis, ComplexSpec, Variant, load_basis
from gchom.graphs import Parity
from gchom.sparse import IntSparseMatrix, dump_sms, load_sms


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_counts(capsys, tmp_path):
    code, out, _ = run(capsys, "gen", "--parity", "even", "--variant", "full",
                       "--loops", "3", "--vertices", "4",
                       "--out", str(tmp_path / "b.gls"))
    assert code == 0 and out.strip() == "count=1"
    loaded = load_basis((tmp_path / "b.gls").read_text())
    assert len(loaded) == 1

    code, out, _ = run(capsys, "gen", "--parity", "odd", "--variant", "full",
                       "--loops", "2", "--vertices", "2")
    assert code == 0 and out.strip() == "count=1"

    code, out, _ = run(capsys, "gen", "--parity", "even", "--variant", "full",
                       "--loops", "3", "--vertices", "5")
    assert code == 0 and out.strip() == "count=0"


def test_diff_and_rank_round_trip(capsys, tmp_path):
    sms = tmp_path / "d.sms"
    code, out, _ = run(capsys, "diff", "--parity", "odd", "--variant", "full",
                       "--loops", "3", "--vertices", "4", "--out", str(sms))
    assert code == 0
    assert "rows=1 cols=2" in out
    matrix = load_sms(sms.read_text())
    assert matrix.entries  # d is nonzero here

    code, out, _ = run(capsys, "rank", "--matrix", str(sms), "--prime", "3323",
                       "--method", "gauss", "--seed", "0")
    assert code == 0
    assert out.strip() == "rank=1 method=gauss prime=3323 seed=0 certified=true"


def test_rank_zero_matrix(capsys, tmp_path):
    sms = tmp_path / "z.sms"
    sms.write_text(dump_sms(IntSparseMatrix(3, 3, {})))
    code, out, _ = run(capsys, "rank", "--matrix", str(sms), "--seed", "7")
    assert code == 0
    assert out.startswith("rank=0 ")


def test_rank_wiedemann_prints_seed_line(capsys, tmp_path):
    sms = tmp_path / "m.sms"
    sms.write_text(dump_sms(IntSparseMatrix(2, 2, {(0, 0): 1, (1, 1): 2})))
    code, out, _ = run(capsys, "rank", "--matrix", str(sms),
                       "--method", "wiedemann", "--block", "1", "--seed", "3")
    assert code == 0
    assert "method=wiedemann" in out and "seed=3" in out and "certified=false" in out


def test_cohomology_table_output(capsys):
    code, out, _ = run(capsys, "cohomology", "--parity", "odd", "--variant",
                       "full", "--loops", "5", "--prime", "3323",
                       "--method", "gauss", "--json", "-")
    assert code == 0
    payload = json.loads(out)
    rows = {r["k"]: r["h"] for r in payload["rows"]}
    assert rows[-3] == 2  # published odd table, top degree, g=5

    code, out, _ = run(capsys, "cohomology", "--parity", "odd", "--variant",
                       "full", "--loops", "3")
    assert code == 0
    assert out.splitlines()[0].split() == ["k", "dim", "rank", "h"]


def test_kneissler_report(capsys):
    code, out, _ = run(capsys, "kneissler", "--parity", "even", "--loops", "6",
                       "--prime", "3323")
    assert code == 0
    payload = json.loads(out)
    assert payload["upper_bound"] == 1
    assert payload["dim_B"] == 2


def test_cache_round_trip_is_byte_identical(capsys, tmp_path):
    cache = tmp_path / "cache"
    args = ["gen", "--parity", "odd", "--variant", "full", "--loops", "4",
            "--vertices", "5", "--cache", str(cache)]
    code, out1, _ = run(capsys, *args)
    assert code == 0
    files = sorted(p for p in cache.rglob("*") if p.is_file())
    assert files
    snapshots = {p: p.read_bytes() for p in files}
    code, out2, _ = run(capsys, *args)
    assert code == 0 and out1 == out2
    for p, blob in snapshots.items():
        assert p.read_bytes() == blob
    # cached content equals a fresh in-memory computation
    spec = ComplexSpec(Parity.ODD, Variant.FULL, 4)
    fresh = dump_basis(enumerate_basis(spec, 5)).encode()
    basis_file = next(p for p in files if p.suffix == ".gls")
    assert basis_file.read_bytes() == fresh


def test_cache_env_var(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("GC_CACHE_DIR", str(tmp_path / "envcache"))
    code, _, _ = run(capsys, "gen", "--parity", "even", "--variant", "full",
                     "--loops", "3", "--vertices", "4")
    assert code == 0
    assert list((tmp_path / "envcache").rglob("*.gls"))


def test_diff_with_cache_matches_direct(capsys, tmp_path):
    cache = tmp_path / "c2"
    sms1 = tmp_path / "a.sms"
    sms2 = tmp_path / "b.sms"
    base = ["diff", "--parity", "even", "--variant", "tri", "--loops", "5",
            "--vertices", "8"]
    assert run(capsys, *base, "--out", str(sms1), "--cache", str(cache))[0] == 0
    assert run(capsys, *base, "--out", str(sms2))[0] == 0
    assert sms1.read_text() == sms2.read_text()


def test_check_suite_exit_codes(capsys):
    code, out, _ = run(capsys, "check", "--suite", "d2", "--max-loops", "4")
    assert code == 0
    assert "checks passed" in out
    assert all(line.startswith(("PASS", "FAIL")) or "checks passed" in line
               for line in out.strip().splitlines())


def test_errors_exit_nonzero(capsys, tmp_path):
    code, _, err = run(capsys, "rank", "--matrix", str(tmp_path / "nope.sms"))
    assert code == 1 and "error" in err

    bad = tmp_path / "bad.sms"
    bad.write_text("not an sms file\n")
    code, _, err = run(capsys, "rank", "--matrix", str(bad))
    assert code == 1

    code, _, err = run(capsys, "rank", "--matrix", str(bad), "--prime", "4")
    assert code == 1

    code, _, err = run(capsys, "gen", "--parity", "even", "--variant", "full",
                       "--loops", "1", "--vertices", "3")
    assert code == 1 and "loop order" in err


def test_bad_flags_exit_two(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["gen", "--parity", "sideways", "--variant", "full",
              "--loops", "3", "--vertices", "4"])
    assert exc.value.code == 2


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "gchom.cli", "gen", "--parity", "even",
         "--variant", "full", "--loops", "3", "--vertices", "4"],
        capture_output=True, text=True, timeout=120,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "count=1"
