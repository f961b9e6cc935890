import csv
import io
import json
import math
import subprocess
import sys

import pytest

from gmecert.cli import EXIT_CAP, EXIT_INCONCLUSIVE, EXIT_OK, EXIT_PARSE, main
from gmecert.graph_core import ring
from gmecert.statesim import white_noise_record

DICKE_3_2 = [0, -0.53, -0.33, math.pi, -0.53, -0.33, 0, -0.53, -0.33]


def _run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def _write(path, data):
    path.write_text(json.dumps(data))
    return path


def test_graph_gen(capsys, tmp_path):
    code, out, _ = _run(capsys, "graph", "gen", "ring", "n=6")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["n"] == 6 and len(data["edges"]) == 6
    target = tmp_path / "lat.json"
    assert main(["graph", "gen", "lattice2d", "n_x=3", "n_y=2", "-o", str(target)]) == EXIT_OK
    assert len(json.loads(target.read_text())["edges"]) == 7


def test_graph_gen_bad_params(capsys):
    assert _run(capsys, "graph", "gen", "ring", "n")[0] == EXIT_PARSE
    assert _run(capsys, "graph", "gen", "ring", "n=x")[0] == EXIT_PARSE
    assert _run(capsys, "graph", "gen", "moebius", "n=4")[0] == EXIT_PARSE


def test_simulate_white_noise_record(capsys, tmp_path):
    spec = _write(tmp_path / "s.json", {"graph": "ring:n=4", "noise": {"white": 0.2}})
    code, out, _ = _run(capsys, "simulate", spec)
    assert code == EXIT_OK
    rec = json.loads(out)
    values = [t["value"] for t in rec["vertex_terms"]] + [t["value"] for t in rec["edge_terms"]]
    assert len(values) == 8
    assert all(abs(v - 0.8) < 1e-12 for v in values)


def test_simulate_is_deterministic(tmp_path):
    spec = _write(tmp_path / "s.json", {"graph": "chain:n=4", "noise": {"white": 0.1}})
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for target in (a, b):
        assert main(["simulate", str(spec), "--shots", "10000", "--seed", "7", "-o", str(target)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_simulate_cap_and_parse_errors(capsys, tmp_path):
    big = _write(tmp_path / "big.json", {"graph": "chain:n=13"})
    assert _run(capsys, "simulate", big)[0] == EXIT_CAP
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert _run(capsys, "simulate", bad)[0] == EXIT_PARSE
    assert _run(capsys, "simulate", tmp_path / "missing.json")[0] == EXIT_PARSE
    odd = _write(tmp_path / "odd.json", {"graph": "chain:n=3", "state": {"kind": "ghz"}})
    assert _run(capsys, "simulate", odd)[0] == EXIT_PARSE


def test_certify_exit_codes(capsys, tmp_path):
    rec = _write(tmp_path / "rec.json", white_noise_record(ring(6), 0.1).to_json())
    code, out, _ = _run(capsys, "certify", rec)
    report = json.loads(out)
    assert code == EXIT_OK
    assert report["certified_k"] == 2 and report["status"] == "certified"
    assert len(report["results"]) == 5

    zero = white_noise_record(ring(6), 1.0)
    code, out, _ = _run(capsys, "certify", _write(tmp_path / "zero.json", zero.to_json()))
    assert code == EXIT_INCONCLUSIVE
    assert json.loads(out)["certified_k"] is None


def test_certify_early_exit_and_k_max(capsys, tmp_path):
    rec = _write(tmp_path / "rec.json", white_noise_record(ring(6), 0.1).to_json())
    _, out, _ = _run(capsys, "certify", rec, "--early-exit")
    report = json.loads(out)
    assert len(report["results"]) == 1
    # the bound table still covers every k
    assert [row["k"] for row in report["bound_table"]] == [2, 3, 4, 5, 6]
    first = {b["gamma"]: b["bound"] for b in report["bound_table"][0]["bounds"]}
    assert first["1"] == "9" and first["0"] == "5"
    _, out, _ = _run(capsys, "certify", rec, "--k-max", "3")
    assert [r["k"] for r in json.loads(out)["results"]] == [2, 3]


def test_certify_parse_error(capsys, tmp_path):
    bad = _write(tmp_path / "bad.json", {"schema": "gmecert.record/1", "graph": {"n": 2}})
    assert _run(capsys, "certify", bad)[0] == EXIT_PARSE


def test_certify_cap_exit(capsys, tmp_path, monkeypatch):
    rec = _write(tmp_path / "rec.json", white_noise_record(ring(6), 0.1).to_json())
    monkeypatch.setenv("GMECERT_ENUM_CAP", "3")
    code, _, err = _run(capsys, "certify", rec)
    assert code == EXIT_CAP and "--loose" in err
    assert _run(capsys, "certify", rec, "--loose")[0] == EXIT_OK


def test_certify_fixed_gamma_zero(capsys, tmp_path):
    # at gamma = 0 the k = 2 bound is n - 1, the vertex-only witness
    rec = _write(tmp_path / "rec.json", white_noise_record(ring(6), 0.1).to_json())
    _, out, _ = _run(capsys, "certify", rec, "--gamma", "0")
    report = json.loads(out)
    first = report["fixed_gamma_results"][0]
    assert first["k"] == 2 and first["bound"] == "5" and first["gamma"] == "0"


def test_certify_sdp_ring6(capsys, tmp_path):
    rec = white_noise_record(ring(6), 0.1, measure_edges=False)
    path = _write(tmp_path / "rec.json", rec.to_json())
    code, out, _ = _run(capsys, "certify", path, "--sdp")
    assert code == EXIT_OK
    assert json.loads(out)["certified_k"] == 2


def test_sdp_bound_command(capsys, tmp_path):
    rec = white_noise_record(ring(6), 0.24, measure_edges=False)
    path = _write(tmp_path / "rec.json", rec.to_json())
    code, out, _ = _run(capsys, "sdp-bound", path)
    assert code == EXIT_OK
    terms = json.loads(out)["edge_terms"]
    assert all(t["provenance"] == "sdp_lower_bound" for t in terms)
    assert all(abs(t["value"] - 0.52) < 1e-6 for t in terms)


def test_threshold_formats(capsys):
    code, out, _ = _run(capsys, "threshold", "chain:n=5", "--format", "csv")
    assert code == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["tight"] for r in rows] == ["2/9", "1/3", "4/9", "5/9"]
    _, out, _ = _run(capsys, "threshold", "lattice2d:n_x=3,n_y=2", "--k-max", "3")
    rows = json.loads(out)["rows"]
    assert rows[0]["tight"] == "3/13"
    assert rows[1]["tight"] == "1/3" and "0" in rows[1]["tight_gamma"]


def test_threshold_cap_falls_back_to_loose(capsys, monkeypatch):
    monkeypatch.setenv("GMECERT_ENUM_CAP", "10")
    code, out, err = _run(capsys, "threshold", "ring:n=6")
    assert code == EXIT_OK and "warning" in err
    rows = json.loads(out)["rows"]
    assert all("loose" in r for r in rows)
    assert any("tight" not in r for r in rows)


def test_dicke_spec_end_to_end(capsys, tmp_path):
    base = {"graph": "complete:n=3", "state": {"kind": "dicke", "i": 2}, "rotations": DICKE_3_2}
    codes = {}
    for p in (0.30, 0.33):
        spec = _write(tmp_path / f"d{p}.json", dict(base, noise={"white": p}))
        rec = tmp_path / f"r{p}.json"
        assert main(["simulate", str(spec), "-o", str(rec)]) == EXIT_OK
        codes[p] = _run(capsys, "certify", rec)[0]
    assert codes == {0.30: EXIT_OK, 0.33: EXIT_INCONCLUSIVE}


def test_stdin_record(tmp_path):
    data = json.dumps(white_noise_record(ring(6), 0.1).to_json())
    proc = subprocess.run(
        [sys.executable, "-m", "gmecert.cli", "certify", "-"], input=data, capture_output=True, text=True,
    )
    assert proc.returncode == EXIT_OK
    assert json.loads(proc.stdout)["certified_k"] == 2


def test_report_bytes_deterministic(tmp_path):
    spec = _write(tmp_path / "s.json", {"graph": "ring:n=5", "noise": {"white": 0.15}, "shots": 2000, "seed": 3})
    outputs = []
    for i in range(2):
        rec, rep = tmp_path / f"rec{i}.json", tmp_path / f"rep{i}.json"
        main(["simulate", str(spec), "-o", str(rec)])
        main(["certify", str(rec), "-o", str(rep)])
        outputs.append(rep.read_bytes())
    assert outputs[0] == outputs[1]


def test_missing_subcommand_exits_2():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
