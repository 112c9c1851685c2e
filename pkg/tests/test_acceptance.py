"""One test per acceptance criterion, each timed against its limit."""
import json
import subprocess
import sys
import time

from eisgen.config import Config
from eisgen.verify import SUITES

LIMITS = {1: 60, 2: 30, 3: 1, 4: 1, 6: 30, 8: 1, 10: 60, 11: 60, 12: 60}


def run_criterion(n, criterion):
    name = next(k for k in SUITES if k.split()[0] == str(n))
    t = time.perf_counter()
    result = SUITES[name](Config())
    dt = time.perf_counter() - t
    limit = LIMITS.get(n)
    ok = result["ok"] and (limit is None or dt < limit)
    criterion(n, ok, dt, limit)
    return result, dt


def check_time(n, dt):
    if n in LIMITS:
        assert dt < LIMITS[n], f"took {dt:.2f} s"


def test_criterion_1_section_counts(criterion):
    r, dt = run_criterion(1, criterion)
    assert r["ok"] and not r["mismatches"] and r["skipped_budget"] == 0
    # degrees -k..k+6 for k = 0, 1, 2 and q = 2, 3
    assert r["checked"] == 2 * sum(2 * k + 7 for k in range(3))
    check_time(1, dt)


def test_criterion_2_quasisections(criterion):
    r, dt = run_criterion(2, criterion)
    assert r["ok"] and not r["mismatches"] and r["checked"] == 2 * 4 * 4
    check_time(2, dt)


def test_criterion_3_hecke(criterion):
    r, dt = run_criterion(3, criterion)
    assert r["ok"] and not r["failing_k"]
    check_time(3, dt)


def test_criterion_4_functional_equations(criterion):
    r, dt = run_criterion(4, criterion)
    assert r["ok"] and not r["failures"] and len(r["curves"]) >= 6
    check_time(4, dt)


def test_criterion_5_projector(criterion):
    r, dt = run_criterion(5, criterion)
    assert r["ok"] and r["checked"] == 2 * 17


def test_criterion_6_pairing(criterion):
    r, dt = run_criterion(6, criterion)
    assert r["ok"] and not r["failures"]
    check_time(6, dt)


def test_criterion_7_spectral(criterion):
    r, dt = run_criterion(7, criterion)
    assert r["ok"] and r["residues_positive"] and r["gram_psd"]
    assert r["kernel_residue"] == "(q^2 - 1)/(2*q)" and r["kernel_residue_at_2"] == "3/4"
    assert r["numeric_residue_ok"] and not r["split_failures"]


def test_criterion_8_scissor(criterion):
    r, dt = run_criterion(8, criterion)
    assert r["ok"] and r["checked"] == 4 * 13
    check_time(8, dt)


def test_criterion_9_qgamma(criterion):
    r, dt = run_criterion(9, criterion)
    assert r["ok"] and r["order"] >= 12 and not r["nonzero"]


def test_criterion_10_tree(criterion):
    r, dt = run_criterion(10, criterion)
    assert r["ok"]
    check_time(10, dt)


def test_criterion_11_correspondence_relations(criterion):
    r, dt = run_criterion(11, criterion)
    assert r["ok"] and not r["failures"] and not r["negative_controls_missed"]
    check_time(11, dt)


def test_criterion_12_weights_and_characters(criterion):
    r, dt = run_criterion(12, criterion)
    assert r["ok"] and r["exception_scan"] == [[2, 0]]
    assert not r["ledger_failures"] and not r["character_failures"] and not r["perturbations_not_detected"]
    check_time(12, dt)


def verify_all_json(jobs):
    cmd = [sys.executable, "-m", "eisgen", "verify-all", "--json", "--jobs", str(jobs)]
    return subprocess.run(cmd, capture_output=True, text=True, check=False)


def test_criterion_13_round_trip_and_determinism(criterion):
    t = time.perf_counter()
    r = SUITES["13 round trip"](Config())
    runs = [verify_all_json(1), verify_all_json(1), verify_all_json(2)]
    dt = time.perf_counter() - t
    outputs = [p.stdout for p in runs]
    ok = r["ok"] and r["corpus"] == 50 and all(p.returncode == 0 for p in runs) and len(set(outputs)) == 1
    criterion(13, ok, dt)
    assert r["ok"] and r["corpus"] == 50 and not r["failures"]
    assert [p.returncode for p in runs] == [0, 0, 0]
    assert outputs[0] == outputs[1] == outputs[2]
    assert json.loads(outputs[0])["ok"] is True
