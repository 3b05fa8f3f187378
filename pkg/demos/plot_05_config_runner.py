"""
Running a declarative experiment
================================

The runner takes the same JSON document the command line reads, runs the
requested diagnostics in order and writes CSV files plus report.json.
"""

import json
import tempfile
from pathlib import Path

from hausdorff_lab.runner import run_experiment

config = {
    "symbol": {"kind": "constant", "value": 1.0},
    "measure": {"kind": "atomic", "atoms": [[2.0, 1.0]]},
    "space": {"kind": "pw"},
    "diagnostics": ["moments", "norm_sweep", "hs"],
    "knobs": {"N_list": [8, 16, 32, 64], "n_max": 4},
}

out = Path(tempfile.mkdtemp())
report = run_experiment(config, out_dir=out)
for row in report.ledger:
    print(f"[{row.verdict}] {row.bound_name}: {row.computed_lhs:.10f} <= {row.computed_rhs:.10f}")
print("HS verdict:", report.verdicts["hilbert_schmidt"])
print((out / "moments.csv").read_text())

# The echoed config reproduces the report byte for byte.
echo = json.loads((out / "report.json").read_text())["config"]
print("re-run identical:", run_experiment(echo).to_dict() == report.to_dict())
