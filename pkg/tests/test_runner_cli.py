import csv
import json
import math

import pytest

from hausdorff_lab.cli import DEMOS, main
from hausdorff_lab.runner import (ConfigError, load_config, parse_config, report_json,
                                  run_experiment)

DILATION = {
    "symbol": {"kind": "constant", "value": 1.0},
    "measure": {"kind": "atomic", "atoms": [[2.0, 1.0]]},
    "space": {"kind": "pw"},
    "diagnostics": ["norm_sweep"],
    "knobs": {"N_list": [8, 16, 32, 64]},
}

GAP = {
    "symbol": {"kind": "constant", "value": 1.0},
    "measure": {"kind": "atomic", "atoms": [[0.5, 1.0]]},
    "space": {"kind": "fock", "phi": {"kind": "gaussian"}},
    "diagnostics": ["verdicts"],
}


def write(tmp_path, doc, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return p


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


@pytest.mark.parametrize("mutate,field", [
    (lambda d: d.update(diagnostic=["hs"]), "diagnostic"),
    (lambda d: d["measure"].update(atom=[[1, 1]]), "atom"),
    (lambda d: d.setdefault("knobs", {}).update(Nlist=[8, 16]), "Nlist"),
    (lambda d: d["space"].update(phi={"kind": "gaussian"}), "phi"),
])
def test_misspelled_keys_rejected(mutate, field):
    doc = json.loads(json.dumps(DILATION))
    mutate(doc)
    with pytest.raises(ConfigError, match=field):
        parse_config(doc)


@pytest.mark.parametrize("bad,msg", [
    ({"diagnostics": []}, "nonempty"),
    ({"diagnostics": ["plots"]}, "unknown diagnostic"),
    ({"knobs": {"N_list": [16, 8]}}, "N_list"),
    ({"knobs": {"grid": {"half_width": 50, "spacing": 1.0}}}, "too coarse"),
    ({"seed": "zero"}, "seed"),
])
def test_invalid_values_rejected(bad, msg):
    doc = {**json.loads(json.dumps(DILATION)), **bad}
    with pytest.raises(ConfigError, match=msg):
        parse_config(doc)


def test_missing_measure_has_no_default():
    doc = {k: v for k, v in DILATION.items() if k != "measure"}
    with pytest.raises(ConfigError, match="measure"):
        parse_config(doc)


def test_json_syntax_error_names_line(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text('{\n  "symbol": {,\n}')
    with pytest.raises(ConfigError, match="line 2"):
        load_config(p)


def test_dilation_sweep_report():
    rep = run_experiment(DILATION)
    sig = rep.tables["norm_sweep"]["sigma_max"]
    assert sig[-1] == pytest.approx(math.sqrt(2), rel=1e-2)
    assert all(b >= a - 1e-12 for a, b in zip(sig, sig[1:]))
    rows = list(rep.ledger)
    assert len(rows) == 4 and all(r.passed for r in rows)
    assert rows[-1].computed_rhs == pytest.approx(1.414214, abs=1e-6)
    assert rep.all_pass


def test_gap_failure_report():
    rep = run_experiment(GAP)
    assert rep.verdicts["boundedness"]["verdict"] == "unbounded"
    gap_rows = [r for r in rep.ledger if "support gap" in r.bound_name]
    assert len(gap_rows) == 1 and gap_rows[0].verdict == "fail"
    assert not rep.all_pass


@pytest.mark.parametrize("space", [{"kind": "pw"}, {"kind": "fock", "phi": {"kind": "gaussian"}}])
def test_zero_symbol_all_diagnostics(space):
    doc = {"symbol": {"kind": "zero"}, "measure": {"kind": "atomic", "atoms": [[3.0, 1.0]]},
           "space": space, "diagnostics": list(DEMOS["zero"]["diagnostics"]),
           "knobs": {"n_max": 16, "N_list": [8, 16]}}
    rep = run_experiment(doc)
    assert not rep.errors
    assert len(rep.ledger) > 0 and rep.all_pass
    assert all(m["lambda_n"] == 0 for m in rep.moments)
    for r in rep.ledger:
        assert r.computed_lhs == 0


def test_moments_csv(tmp_path):
    doc = {**DILATION, "diagnostics": ["moments"], "knobs": {"n_max": 4}}
    run_experiment(doc, out_dir=tmp_path)
    rows = read_csv(tmp_path / "moments.csv")
    assert rows[0] == ["n", "lambda_n", "log_abs", "sign"]
    assert [(int(r[0]), float(r[1])) for r in rows[1:]] == [
        (0, 1.0), (1, 0.5), (2, 0.25), (3, 0.125), (4, 0.0625)]
    # shortest round-trip decimals
    assert rows[2][1] == "0.5"
    for name in ("singular_values.csv", "bounds.csv"):
        assert read_csv(tmp_path / name)[0]


def test_bounds_csv_prop_row(tmp_path):
    run_experiment(DILATION, out_dir=tmp_path)
    rows = read_csv(tmp_path / "bounds.csv")
    assert rows[0] == ["bound_name", "anchor", "lhs", "rhs", "verdict"]
    last = rows[-1]
    assert last[0] == "PW norm bound N=64" and last[4] == "pass"
    assert float(last[2]) == pytest.approx(1.4142, abs=1e-2)
    assert float(last[3]) == pytest.approx(1.414214, abs=1e-6)


def test_kernel_grid_csv(tmp_path):
    doc = {**DILATION, "diagnostics": ["moments"],
           "knobs": {"n_max": 4, "kernel_grid": {"t": [0.0, 2.0], "x": [0.0, 1.0]}}}
    run_experiment(doc, out_dir=tmp_path)
    rows = read_csv(tmp_path / "kernel_grid.csv")
    assert rows[0] == ["t", "x", "K"]
    table = {(float(t), float(x)): float(k) for t, x, k in rows[1:]}
    assert table[(0.0, 0.0)] == 1 and table[(2.0, 1.0)] == 1 and table[(2.0, 0.0)] == 0


@pytest.mark.parametrize("doc", [DILATION, GAP, DEMOS["fock-compact"], DEMOS["two-atoms"]])
def test_round_trip_byte_identical(doc):
    first = run_experiment(doc)
    again = run_experiment(parse_config(json.loads(report_json(first))["config"]))
    assert report_json(again) == report_json(first)
    assert again.config_hash == first.config_hash


def test_seed_changes_hash():
    a = run_experiment({**DEMOS["fock-compact"], "seed": 1})
    b = run_experiment({**DEMOS["fock-compact"], "seed": 2})
    assert a.config_hash != b.config_hash


def test_per_diagnostic_errors_are_captured():
    # the tail check demands r_max far beyond 1, so the weight fails to build
    doc = {**GAP, "space": {"kind": "fock", "phi": {"kind": "gaussian"}, "r_max": 1.0},
           "diagnostics": ["bounds", "moments"], "knobs": {"n_max": 8}}
    rep = run_experiment(doc)
    assert "bounds" in rep.errors
    assert len(rep.moments) == 9


def test_fock_skips_pw_only():
    rep = run_experiment({**GAP, "diagnostics": ["hs", "moments"]})
    assert "hs" in rep.skipped and rep.moments


def test_cli_exit_codes(tmp_path, capsys):
    good = write(tmp_path, DILATION)
    assert main(["validate", str(good)]) == 0
    assert main(["run", str(good), "--out", str(tmp_path / "out")]) == 0
    assert (tmp_path / "out" / "bounds.csv").exists()
    bad = write(tmp_path, {**DILATION, "measur": {}}, "bad.json")
    assert main(["validate", str(bad)]) == 1
    assert main(["run", str(tmp_path / "missing.json")]) == 1
    gap = write(tmp_path, GAP, "gap.json")
    assert main(["run", str(gap)]) == 2
    out = capsys.readouterr().out
    assert "[FAIL] support gap" in out


def test_cli_json_format_and_seed(tmp_path):
    good = write(tmp_path, {**DILATION, "diagnostics": ["moments"], "knobs": {"n_max": 4}})
    out = tmp_path / "j"
    assert main(["run", str(good), "--out", str(out), "--format", "json", "--seed", "7"]) == 0
    doc = json.loads((out / "report.json").read_text())
    assert doc["config"]["seed"] == 7
    assert doc["moments"][1]["lambda_n"] == 0.5
    assert not (out / "moments.csv").exists()
    assert "moments" in json.loads((out / "timings.json").read_text())


@pytest.mark.parametrize("case", sorted(DEMOS))
def test_demo_cases(case, tmp_path):
    expected = 2 if case == "gap-failure" else 0
    assert main(["demo", case, "--out", str(tmp_path)]) == expected
