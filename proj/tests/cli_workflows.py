#!/usr/bin/env python3
"""End-to-end CLI checks: exit codes, output schemas, determinism, config
round trip. Invoked by ctest with the CLI path and a scratch directory."""

import json
import math
import pathlib
import subprocess
import sys

CLI = sys.argv[1]
WORK = pathlib.Path(sys.argv[2])
WORK.mkdir(parents=True, exist_ok=True)

failures = []


def run(args, expect=0):
    proc = subprocess.run([CLI] + args, capture_output=True, text=True)
    if proc.returncode != expect:
        failures.append(f"{' '.join(args)} -> exit {proc.returncode} (expected {expect}): {proc.stderr.strip()}")
    return proc


def write(name, obj):
    path = WORK / name
    path.write_text(json.dumps(obj))
    return str(path)


def read_summary(out_dir):
    return json.loads((WORK / out_dir / "summary.json").read_text())


def read_csv(out_dir):
    return (WORK / out_dir / "results.csv").read_text()


# --- replicate: determinism and config round trip ---------------------------
replicate_cfg = write("replicate.json", {
    "law": {"family": "survival_formula", "a": 3.4, "b": 1.0, "k": 0.2},
    "n": 150, "reps": 4, "truth_draws": 200000,
    "beta_grid": [0.05, 0.01],
    "methods": [
        {"kind": "rpev", "delta": 0.1, "M": 8, "tail_draws": 500},
        {"kind": "saa"},
    ],
})
run(["replicate", "--config", replicate_cfg, "--seed", "11", "--out", str(WORK / "rep1")])
run(["replicate", "--config", replicate_cfg, "--seed", "11", "--out", str(WORK / "rep2")])
if read_csv("rep1") != read_csv("rep2"):
    failures.append("replicate: identical config+seed produced different results.csv")

csv_lines = read_csv("rep1").splitlines()
if csv_lines[0] != "method,beta,rep,value,status":
    failures.append(f"results.csv header mismatch: {csv_lines[0]}")
if len(csv_lines) != 1 + 2 * 2 * 4:
    failures.append(f"replicate: expected 16 data rows, got {len(csv_lines) - 1}")

# round trip: a summary.json re-runs the exact same study
run(["replicate", "--config", str(WORK / "rep1" / "summary.json"), "--out", str(WORK / "rep3")])
if read_csv("rep1") != read_csv("rep3"):
    failures.append("replicate: config echo did not reproduce results.csv")

summary = read_summary("rep1")
for key in ("command", "config", "seed", "versions", "cells", "truth"):
    if key not in summary:
        failures.append(f"replicate summary.json missing '{key}'")

# --- diagnose on heavy-tailed data ------------------------------------------
diag_cfg = write("diag.json", {
    "law": {"family": "generalized_pareto", "shape": 1.0 / 3.0, "scale": 1.0},
    "n": 2000, "M": 8,
    "ambiguity": [{"kind": "wasserstein", "p": 1, "delta": 0.1},
                  {"kind": "phi", "phi": "exp_shifted", "delta": 0.1}],
})
run(["diagnose", "--config", diag_cfg, "--seed", "5", "--out", str(WORK / "diag")])
diag = read_summary("diag")
if diag.get("regime") != "frechet":
    failures.append(f"diagnose: expected frechet regime, got {diag.get('regime')}")
if diag["inflation"][1]["type"] != "rate_preserving":
    failures.append("diagnose: exp_shifted ball should be rate_preserving")

# --- estimate vs robust-cvar with delta = 0 ----------------------------------
est_cfg = write("est.json", {
    "law": {"family": "survival_formula", "a": 3.4, "b": 1.0, "k": 0.2},
    "n": 400, "beta": 0.001, "M": 8,
})
run(["estimate", "--config", est_cfg, "--seed", "9", "--out", str(WORK / "est")])
rc_cfg = write("rc.json", {
    "law": {"family": "survival_formula", "a": 3.4, "b": 1.0, "k": 0.2},
    "n": 400, "beta": 0.001,
    "method": {"kind": "rpev", "delta": 0.0, "M": 8, "tail_draws": 10000},
})
run(["robust-cvar", "--config", rc_cfg, "--seed", "9", "--out", str(WORK / "rc")])
est, rc = read_summary("est"), read_summary("rc")
if est["nominal_cvar"] != rc["value"]:
    failures.append(f"robust-cvar at delta=0 ({rc['value']}) != estimate nominal CVaR ({est['nominal_cvar']})")

# --- flag overrides -----------------------------------------------------------
run(["robust-cvar", "--config", rc_cfg, "--seed", "9", "--delta", "0.1", "--out", str(WORK / "rc_d")])
rc_d = read_summary("rc_d")
if not rc_d["value"] > rc["value"]:
    failures.append("robust-cvar: --delta override did not widen the ball")
if rc_d["config"]["method"]["delta"] != 0.1:
    failures.append("robust-cvar: --delta override missing from the config echo")

# --- windows on a plain file ---------------------------------------------------
data_path = WORK / "series.txt"
rows = [str(1.0 + 0.8 * math.sin(i) + (8.0 if i % 97 == 0 else 0.0)) for i in range(420)]
data_path.write_text("\n".join(rows) + "\n")
win_cfg = write("win.json", {
    "dataset": str(data_path), "format": "plain",
    "n": 100, "stride": 60, "reps": 4,
    "beta_grid": [0.1, 0.05],
    "methods": [{"kind": "saa"}, {"kind": "rpev", "delta": 0.05, "M": 8, "tail_draws": 500}],
})
run(["windows", "--config", win_cfg, "--seed", "3", "--out", str(WORK / "win")])
win = read_summary("win")
if "benchmark_full_sample" not in win or len(win["benchmark_full_sample"]) != 2:
    failures.append("windows: benchmark missing")

# --- fama-french ingestion through the network loss ----------------------------
ff_path = WORK / "ff.csv"
lines = ["  Average Value Weighted Returns -- Daily", "Date,A,B,C,D"]
for i in range(260):
    r = [0.3 * math.sin(i * 1.7 + j) - (3.0 if (i * 7 + j) % 101 == 0 else 0.0) for j in range(4)]
    if i == 40:
        r[2] = -99.99
    lines.append(f"{19990101 + i}," + ",".join(f"{v:.4f}" for v in r))
ff_path.write_text("\n".join(lines) + "\n")
ff_cfg = write("ff.json", {
    "dataset": str(ff_path), "format": "fama_french", "columns": 4, "sign_flip": True,
    "network": {"K": 2, "lambda": 0.5, "p": 2, "normalize": True, "clamp": True},
    "n": 60, "stride": 60, "reps": 3,
    "beta_grid": [0.1],
    "methods": [{"kind": "saa"}],
})
run(["windows", "--config", ff_cfg, "--seed", "3", "--out", str(WORK / "ff_out")])
ff = read_summary("ff_out")
if ff.get("dropped_rows") != 1:
    failures.append(f"fama_french: expected 1 dropped row, got {ff.get('dropped_rows')}")

# --- hedge (tiny) ---------------------------------------------------------------
hedge_cfg = write("hedge.json", {
    "S0": 25, "strike": 25, "r": 0.1, "mu": 0.1, "sigma2": 0.075, "k1": 0.0025,
    "m_grid": [2, 8], "beta": 0.05, "n": 60, "truth_paths": 20000,
    "methods": [{"kind": "saa"}],
})
run(["hedge", "--config", hedge_cfg, "--seed", "2", "--out", str(WORK / "hedge")])
hj = read_summary("hedge")
if len(hj["truth_by_m"]) != 2:
    failures.append("hedge: truth_by_m wrong length")

# --- network (tiny) -------------------------------------------------------------
net_cfg = write("net.json", {
    "d": 8,
    "network": {"K": 4, "lambda": 0.0, "p": 1, "normalize": True, "clamp": False},
    "marginal": {"family": "generalized_pareto", "shape": 1.0 / 3.0, "scale": 1.0},
    "nu": 4, "n": 80, "reps": 3, "truth_draws": 50000,
    "beta_grid": [0.05],
    "methods": [{"kind": "saa"}],
})
run(["network", "--config", net_cfg, "--seed", "2", "--out", str(WORK / "net")])

# --- sweep (tiny) ----------------------------------------------------------------
sweep_cfg = write("sweep.json", {
    "law": {"family": "survival_formula", "a": 3.4, "b": 1.0, "k": 0.2},
    "n": 150, "reps": 3, "beta": 0.01, "truth_draws": 100000,
    "delta_grid": [0.05, 0.1], "theta_grid": [0.5],
    "method": {"kind": "rpev", "delta": 0.1, "M": 8, "tail_draws": 500},
})
run(["sweep", "--config", sweep_cfg, "--seed", "2", "--out", str(WORK / "sweep")])
sw = read_summary("sweep")
if len(sw["cells"]) != 2:
    failures.append("sweep: expected 2 cells")

# --- error paths ------------------------------------------------------------------
bad_cfg = write("bad.json", {"law": {"family": "generalized_pareto", "shape": 0.3}, "typo_key": 1,
                             "method": {"kind": "saa"}, "beta": 0.01})
run(["robust-cvar", "--config", bad_cfg], expect=1)  # unknown key rejected
missing = write("missing.json", {"dataset": str(WORK / "does_not_exist.txt"), "beta": 0.01,
                                 "method": {"kind": "saa"}})
run(["robust-cvar", "--config", missing], expect=1)

if failures:
    print("CLI workflow failures:")
    for f in failures:
        print(" -", f)
    sys.exit(1)
print("all CLI workflows passed")
