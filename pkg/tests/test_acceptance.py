"""Exit criteria. Every identity is exact; runtime budgets are wall clock.

Criterion 5 (q = 7, eight workers) takes minutes and runs only when
PFAFFGRASS_LONG=1 is set.
"""

import os
import time
from pathlib import Path

import pytest

from pfaffgrass.altform import AlternatingForm, N_COEFFS, form_rank, linear_combination
from pfaffgrass.census import (
    WSystem,
    check_genericity,
    n_planes,
    plane_census,
    projective_points,
    sample_W,
)
from pfaffgrass.cli import main
from pfaffgrass.ffield import make_field
from pfaffgrass.harness import run_numeric, run_symbolic
from pfaffgrass.motivic import L, class_grassmannian, class_projective, frame_factor
from pfaffgrass.rng import SplitMix64

GOLDEN = Path(__file__).parent / "golden" / "numeric_q2_seed1_full.json"


def timed(fn, *args, **kw):
    t0 = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t0


def assert_checks(report, names):
    got = {c.name: c for c in report.checks}
    for name in names:
        assert got[name].passed, f"{name}: {got[name].lhs} != {got[name].rhs}"


@pytest.fixture(scope="module")
def q5_report():
    return timed(run_numeric, 5, 7, "fast")


def test_criterion_1_symbolic():
    report, elapsed = timed(run_symbolic)
    assert [c.name for c in report.checks] == ["S1", "S2", "S3", "S4"]
    assert report.verdict
    s4 = report.check("S4")
    cofactor = (L**2 - 1) * (L - 1) * L**7
    assert s4.lhs == f"(0) + ({cofactor})*[X] + ({-cofactor})*[Y]"
    assert elapsed < 1.0


def test_criterion_2_q2_full():
    (report, W), elapsed = timed(run_numeric, 2, 1, "full")
    assert W.attempts <= 100
    assert [c.name for c in report.checks] == [f"N{k}" for k in range(1, 9)]
    assert_checks(report, [f"N{k}" for k in range(1, 9)])
    counts = report.counts
    assert counts.n_X == counts.n_Y
    assert counts.n_G == 2667
    assert counts.n_P6 == 127
    assert frame_factor().eval_at(2) == 6
    # sizes of the brute-force searches
    assert counts.n_G * counts.n_P6 == 338709
    assert 127 * 126 * 127 == 2032254
    assert elapsed < 10.0


def test_criterion_3_q3():
    (report, _), elapsed = timed(run_numeric, 3, 1, "full")
    assert report.check("N1").lhs == "99463"
    assert_checks(report, ["N1", "N2", "N4", "N5", "N6"])
    assert elapsed < 60.0


def test_criterion_4_q5_fast(q5_report):
    (report, _), elapsed = q5_report
    assert report.counts.n_G == 12714681
    assert_checks(report, ["N1", "N4", "N5", "N6"])
    assert elapsed < 300.0


@pytest.mark.long
@pytest.mark.skipif(os.environ.get("PFAFFGRASS_LONG") != "1", reason="set PFAFFGRASS_LONG=1 for the q=7 run")
def test_criterion_5_q7_fast_long():
    (report, W), elapsed = timed(run_numeric, 7, 1, "fast", workers=8)
    # (7^7 - 1)(7^6 - 1) / ((7^2 - 1)(7 - 1))
    assert report.counts.n_G == class_grassmannian(2, 7).eval_at(7) == 336416907
    assert_checks(report, ["N1", "N4", "N5", "N6", "N7"])
    assert report.counts.n_X == report.counts.n_Y
    assert elapsed < 900.0
    # one worker on a subsample range reproduces the eight-worker counts there
    sub = (0, 3_000_000)
    assert plane_census(W, 1, ranges=[sub]) == plane_census(W, 8, *sub)


def test_criterion_6_negative_control():
    f2 = make_field(2)
    e12 = AlternatingForm.elementary(f2, 0, 1)
    grid = [list(e12.upper)] + [list(f.upper) for f in sample_W(2, 1).forms[1:]]
    W = WSystem.from_grid(2, grid)
    verdict = check_genericity(W)
    assert not verdict.passed
    assert verdict.witness_rank == 2
    assert form_rank(linear_combination(W, verdict.witness)) == 2

    # replay rejected first draws: the sampler saw them and moved on
    replayed = 0
    for seed in range(60):
        W = sample_W(2, seed)
        assert check_genericity(W).passed
        if W.attempts == 1:
            continue
        rng = SplitMix64(seed)
        first = [[rng.below(2) for _ in range(N_COEFFS)] for _ in range(7)]
        assert not check_genericity(WSystem.from_grid(2, first)).passed
        assert W.grid.tolist() != first
        replayed += 1
    assert replayed > 0


@pytest.mark.parametrize("q", [2, 3, 5])
def test_criterion_7_cross_module(q, q5_report):
    if q == 5:
        seen = q5_report[0][0].counts.n_G
    else:
        seen, _ = plane_census(sample_W(q, 1))
    assert seen == n_planes(q) == class_grassmannian(2, 7).eval_at(q)
    assert len(projective_points(q)) == class_projective(6).eval_at(q)


def test_criterion_8_golden_stability(tmp_path):
    outs = []
    for workers in ("1", "3", "1"):
        path = tmp_path / f"r{len(outs)}.json"
        argv = ["verify", "numeric", "--q", "2", "--seed", "1", "--level", "full", "--workers", workers]
        assert main(argv + ["--out", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1] == outs[2]
    assert outs[0] == GOLDEN.read_bytes()
