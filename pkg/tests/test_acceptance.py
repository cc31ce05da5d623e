"""End-to-end acceptance suite at full scale.

Each test prints one PASS/FAIL line (visible without -s) and asserts both
the outcome and the runtime bound.
"""
import os
import subprocess
import sys
import time

import pytest

from fmlog import verify
from fmlog.logcalc.checks import surjections

SEED = 20240611


@pytest.fixture
def verdict(capsys):
    def emit(number, title, ok, seconds, detail=""):
        line = f"acceptance {number}/9 {title}: {'PASS' if ok else 'FAIL'} ({seconds:.1f}s){' ' + detail if detail else ''}"
        with capsys.disabled():
            print("\n" + line)

    return emit


def _timed(fn):
    t = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t


def test_fm_operad_axioms(verdict):
    r, dt = _timed(lambda: verify.fm_suite(500, SEED))
    cases = r["cases"]
    enough = len(cases) == 20 and all(c["trials"] >= 500 for c in cases.values())
    ok = r["passed"] and enough and dt < 120
    verdict(1, "FM associativity, unit, equivariance (D<=4, n<=5, 500 each)", ok, dt, f"checks={r['checked']}")
    assert r["passed"], r["failures"]
    assert enough
    assert dt < 120


def test_coordinate_law(verdict):
    r, dt = _timed(lambda: verify.coordinate_suite(500, SEED))
    ok = r["passed"] and len(r["cases"]) == 20
    verdict(2, "coordinate law of composites on the same samples", ok, dt, f"checks={r['checked']}")
    assert r["passed"], r["failures"]
    assert len(r["cases"]) == 20


def test_framed_axioms(verdict):
    r, dt = _timed(lambda: verify.framed_suite(200, SEED))
    ok = r["passed"] and set(r["cases"]) == {"d=1", "d=2"} and all(c["trials"] >= 200 for c in r["cases"].values())
    verdict(3, "framed axioms, d in {1, 2}, 200 each", ok, dt, f"checks={r['checked']}")
    assert ok, r["failures"]


def test_strata_counts_and_bijection(verdict):
    r, dt = _timed(lambda: verify.strata_suite(6))
    counts_ok = [r["counts"][str(n)] for n in (1, 2, 3, 4)] == [1, 1, 4, 26]
    ok = r["passed"] and counts_ok and dt < 60
    verdict(4, "strata counts 1,1,4,26 and tree/nested bijection n<=6", ok, dt, f"counts={r['counts']}")
    assert r["passed"], r["failures"]
    assert counts_ok
    assert dt < 60


def test_screen_bijection(verdict):
    r, dt = _timed(lambda: verify.screen_suite(200, SEED, max_n=4, max_d=3))
    ok = r["passed"] and r["trials"] >= 200
    verdict(5, "screen compose/decompose inverse, vanishing on fibres", ok, dt, f"checks={r['checked']}")
    assert ok, r["failures"]


def test_log_calculus(verdict):
    r, dt = _timed(lambda: verify.log_suite(max_arity=6, assoc_exhaustive=4))
    cases = r["cases"]
    all_q = sum(1 for m in range(1, 7) for _ in surjections(m))
    legality_full = cases["legality"]["checked"] == all_q
    no_unit = cases["strict_unit_search"]["strict_units"] == [] and cases["strict_unit_search"]["bound"] == 3
    ok = r["passed"] and legality_full and no_unit and dt < 120
    verdict(6, "log calculus legality, associativity, equivariance, units, no strict unit", ok, dt, f"checks={r['checked']}")
    assert r["passed"], r["failures"]
    assert legality_full and no_unit
    assert dt < 120


def test_kn_numerics(verdict):
    r, dt = _timed(lambda: verify.kn_suite(SEED, samples=10_000, tol=1e-9, small=1000))
    ok = r["passed"] and r["max_error"] < 1e-9 and dt < 60
    verdict(7, "KN numerics below 1e-9", ok, dt, f"max_error={r['max_error']:.2e}")
    assert r["passed"], r["failures"]
    assert r["max_error"] < 1e-9
    assert r["cases"]["hopf_m=1"]["checked"] == r["cases"]["hopf_m=2"]["checked"] == 10_000
    assert dt < 60


def test_screen_fm_bridge(verdict):
    r, dt = _timed(lambda: verify.bridge_suite(100, SEED))
    ok = r["passed"] and r["trials"] == 100
    verdict(8, "screen covectors and FM directions agree on 100 configurations", ok, dt, f"checks={r['checked']}")
    assert ok, r["failures"]


def test_verify_all_is_deterministic(verdict, tmp_path):
    outs = []
    t = time.perf_counter()
    for hashseed in ("1", "2"):
        dest = tmp_path / f"run{hashseed}.json"
        env = dict(os.environ, PYTHONHASHSEED=hashseed)
        proc = subprocess.run(
            [sys.executable, "-m", "fmlog.cli", "verify", "all", "--seed", "42", "--quick", "--out", str(dest)],
            env=env,
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0, proc.stderr
        outs.append(dest.read_bytes())
    dt = time.perf_counter() - t
    same = outs[0] == outs[1]
    verdict(9, "verify all --seed 42 --quick is byte-identical across runs", same, dt, f"bytes={len(outs[0])}")
    assert same
    assert dt < 120
