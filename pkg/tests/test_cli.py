import json
import subprocess
import sys

from locindex.cli import main

MODEL_Z = {"kind": "toeplitz", "K": 4, "symbol": {"coeffs": {"1": 1}}}


def run(tmp_path, sub, cfg, *extra, capsys=None):
    path = tmp_path / "cfg.json"
    path.write_text(cfg if isinstance(cfg, str) else json.dumps(cfg))
    out = tmp_path / "out.txt"
    code = main([sub, "--config", str(path), "--out", str(out), *extra])
    return code, (out.read_text() if out.exists() else None)


def test_pair_shift(tmp_path):
    code, text = run(tmp_path, "pair", {"model": MODEL_Z, "phi": {"kind": "constant"}, "q": 0})
    assert code == 0
    assert json.loads(text)["tau_value"] == "1"


def test_explicit_phi(tmp_path):
    cfg = {"model": MODEL_Z, "q": 2, "N": 6,
           "phi": {"kind": "explicit", "entries": [[[0, 1, 2], 1]], "epsilon": 3.0}}
    code, text = run(tmp_path, "pair", cfg)
    assert code == 0 and json.loads(text)["q"] == 2


def test_malformed_json(tmp_path, capsys):
    code, _ = run(tmp_path, "index", "{nope")
    assert code == 2
    err = json.loads(capsys.readouterr().err)
    assert err["exit_code"] == 2


def test_unknown_field(tmp_path):
    code, _ = run(tmp_path, "index", {"model": MODEL_Z, "colour": 1})
    assert code == 2


def test_budget_exit(tmp_path, capsys):
    code, _ = run(tmp_path, "cyclic", {"algebra": {"kind": "matrix", "k": 5}, "variant": "hochschild",
                                       "degrees": [0, 4]})
    assert code == 3
    assert json.loads(capsys.readouterr().err)["dimension"] > 2_000_000


def test_consistency_exit(tmp_path, monkeypatch):
    from locindex import operator_model

    # a tampered residue identity must surface as an internal-consistency failure
    monkeypatch.setattr(operator_model, "eq31_defect", lambda R, e: R.entries + 1)
    code, _ = run(tmp_path, "index", {"model": MODEL_Z})
    assert code == 4


def test_as_cohomology_formats(tmp_path):
    space = {"kind": "simplicial", "maximal_simplices": [[0, 1], [1, 2], [2, 0]]}
    code, text = run(tmp_path, "as-cohomology", {"space": space, "max_degree": 1})
    assert code == 0 and json.loads(text)["ranks"] == [1, 1]
    code, text = run(tmp_path, "as-cohomology", {"space": space, "max_degree": 1, "epsilon": "inf"}, "--format", "csv")
    header, values = text.strip().split("\n")
    assert "epsilon" in header.split(",") and "ranks" not in header.split(",")


def test_degree_cap_flag(tmp_path):
    cfg = {"space": {"kind": "circle", "n": 3}, "max_degree": 3, "epsilon": "inf"}
    assert run(tmp_path, "as-cohomology", cfg)[0] == 2
    assert run(tmp_path, "as-cohomology", cfg, "--degree-cap", "4")[0] == 0


def test_cyclic_and_local(tmp_path):
    code, text = run(tmp_path, "cyclic", {"algebra": {"kind": "matrix", "k": 2}, "variant": "cyclic_bprime",
                                          "degrees": [0, 2], "separable_e": {"diagonal": [[1, 0]]}})
    assert code == 0 and json.loads(text)["ranks"] == [1, 0, 1]
    code, text = run(tmp_path, "cyclic", {"space": {"kind": "simplicial",
                                                    "maximal_simplices": [[0, 1], [1, 2], [2, 0]]}})
    assert code == 0 and json.loads(text)["ranks"] == [1, 1]


def test_probe_and_index(tmp_path):
    code, text = run(tmp_path, "probe", {"model": MODEL_Z, "q_max": 1})
    assert code == 0 and json.loads(text)["label"] == "conjecture probe"
    code, text = run(tmp_path, "index", {"model": MODEL_Z}, "--scalar", "float")
    assert code == 0 and abs(json.loads(text)["trace_R"] - 1) < 1e-9


def test_reports_are_byte_identical(tmp_path):
    cfg = {"model": MODEL_Z, "q": 0}
    _, a = run(tmp_path, "pair", cfg)
    _, b = run(tmp_path, "pair", cfg)
    assert a == b


def test_suite_deterministic_across_runs(tmp_path):
    cfg = {"only": [1, 4, 8]}
    code1, a = run(tmp_path, "suite", cfg, "--seed", "5")
    code2, b = run(tmp_path, "suite", cfg, "--seed", "5")
    assert code1 == code2 == 0 and a == b


def test_module_entry_point(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"model": MODEL_Z}))
    proc = subprocess.run([sys.executable, "-m", "locindex", "index", "--config", str(path)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["rank_nullity_index"] == 1
