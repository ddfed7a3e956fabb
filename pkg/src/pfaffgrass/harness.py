"""Verification runs, report documents and W-system files."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .altform import COEFF_ORDER, DIM, N_COEFFS
from .census import (
    CensusCounts,
    WSystem,
    check_genericity,
    check_q,
    count_H_brute,
    count_tildeH,
    count_Y,
    H_BRUTE_MAX_Q,
    plane_census,
    rank_profile,
    sample_W,
)
from .motivic import (
    VALUE_BOUND,
    ArithmeticOverflow,
    class_grassmannian,
    class_projective,
    frame_factor,
    tildeH1_fiber,
    tildeH2_fiber,
    verify_symbolic,
)

COUNT_BOUND = 1 << 63
N7_SAMPLE = 1 << 18
LEVELS = ("fast", "full")


class WFileError(ValueError):
    pass


@dataclass
class Check:
    name: str
    lhs: str
    rhs: str
    passed: bool


@dataclass
class VerificationReport:
    mode: str
    q: int | None = None
    seed: int | None = None
    level: str | None = None
    counts: CensusCounts | None = None
    checks: list[Check] = field(default_factory=list)
    sampling: dict = field(default_factory=dict)
    timing_ms: dict[str, int] = field(default_factory=dict)
    version: str = __version__

    @property
    def verdict(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> Check:
        return next(c for c in self.checks if c.name == name)

    def to_dict(self) -> dict:
        counts = None
        if self.counts is not None:
            counts = {}
            for k, v in vars(self.counts).items():
                if k == "rank_histogram":
                    counts[k] = {str(r): str(n) for r, n in sorted(v.items())}
                else:
                    counts[k] = None if v is None else str(v)
        return {
            "mode": self.mode,
            "q": self.q,
            "seed": None if self.seed is None else str(self.seed),
            "level": self.level,
            "version": self.version,
            "counts": counts,
            "checks": [{"name": c.name, "lhs": c.lhs, "rhs": c.rhs, "pass": c.passed} for c in self.checks],
            "verdict": self.verdict,
            "sampling": self.sampling,
            "timing_ms": self.timing_ms,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


class _Timer:
    def __init__(self) -> None:
        self.phases: dict[str, int] = {}

    @contextmanager
    def __call__(self, phase: str):
        t0 = time.perf_counter()
        yield
        self.phases[phase] = self.phases.get(phase, 0) + round((time.perf_counter() - t0) * 1000)


def run_symbolic(timing: bool = False) -> VerificationReport:
    timer = _Timer()
    with timer("symbolic"):
        checks = [Check(c.name, c.lhs, c.rhs, c.passed) for c in verify_symbolic()]
    return VerificationReport("symbolic", checks=checks, timing_ms=timer.phases if timing else {})


def _i128(x: int) -> int:
    if not (-VALUE_BOUND <= x < VALUE_BOUND):
        raise ArithmeticOverflow(f"{x} exceeds the 128-bit check range")
    return x


def _i64(x: int) -> int:
    if not (0 <= x < COUNT_BOUND):
        raise ArithmeticOverflow(f"count {x} exceeds 64 bits")
    return x


def _int_check(name: str, lhs: int, rhs: int) -> Check:
    return Check(name, str(_i128(lhs)), str(_i128(rhs)), lhs == rhs)


def _n7_ranges(total: int) -> list[tuple[int, int]]:
    # deliberately uneven cut points, none aligned with CHUNK
    cuts = sorted({0, total} | {total * k // 7 + 11 * k for k in range(1, 7) if total * k // 7 + 11 * k < total})
    return list(zip(cuts, cuts[1:]))


def run_numeric(
    q: int,
    seed: int,
    level: str = "fast",
    workers: int = 1,
    max_retries: int = 100,
    W: WSystem | None = None,
    timing: bool = False,
) -> tuple[VerificationReport, WSystem]:
    """Sample (or take) a generic W and check the integer identities.

    fast runs N1, N4-N7; full adds N2 (brute-force H, q <= 3), N3 and, at
    q = 2, N8 against the triple-by-triple count of H~.
    """
    check_q(q)
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}")
    timer = _Timer()
    if W is None:
        with timer("sample"):
            W = sample_W(q, seed, max_retries)
    elif W.q != q:
        raise ValueError(f"W is over F_{W.q}, not F_{q}")

    counts = CensusCounts()
    with timer("ranks"):
        ranks = rank_profile(W)
        counts.n_Y, counts.rank_histogram = count_Y(W, ranks)
        th = count_tildeH(W, "pair", ranks)
    counts.n_P6 = int(len(ranks))
    counts.n_P5 = class_projective(5).eval_at(q)
    with timer("planes"):
        counts.n_G, counts.n_X = plane_census(W, workers)
    counts.n_tH, counts.n_tH1, counts.n_tH2 = th.n_tH, th.n_tH1, th.n_tH2
    counts.n_tH11, counts.n_tH12 = th.n_tH11, th.n_tH12
    for v in vars(counts).values():
        if isinstance(v, int):
            _i64(v)

    checks = [
        _int_check("N1", counts.n_G, class_grassmannian(2, 7).eval_at(q)),
        _int_check("N4", counts.n_tH1, counts.n_Y * tildeH1_fiber().eval_at(q)),
        _int_check("N5", counts.n_tH2, (counts.n_P6 - counts.n_Y) * tildeH2_fiber().eval_at(q)),
        _int_check("N6", counts.n_X, counts.n_Y),
    ]

    with timer("determinism"):
        sample = min(counts.n_G, N7_SAMPLE)
        whole = plane_census(W, 1, ranges=[(0, sample)])
        split = plane_census(W, workers, ranges=_n7_ranges(sample))
    checks.append(Check("N7", f"{whole[0]}:{whole[1]}", f"{split[0]}:{split[1]}", whole == split))

    if level == "full":
        frame = frame_factor().eval_at(q)
        h_formula = counts.n_G * counts.n_P5 + counts.n_X * q**6
        if q <= H_BRUTE_MAX_Q:
            with timer("brute_H"):
                counts.n_H = count_H_brute(W, workers)
            checks.append(_int_check("N2", counts.n_H, h_formula))
        if q == 2:
            with timer("triples"):
                tri = count_tildeH(W, "triple")
            checks.append(_int_check("N3", tri.n_tH, counts.n_H * frame))
            pair_s = ",".join(str(x) for x in (th.n_tH, th.n_tH1, th.n_tH2, th.n_tH11, th.n_tH12))
            tri_s = ",".join(str(x) for x in (tri.n_tH, tri.n_tH1, tri.n_tH2, tri.n_tH11, tri.n_tH12))
            checks.append(Check("N8", pair_s, tri_s, th == tri))
        else:
            checks.append(_int_check("N3", counts.n_tH, h_formula * frame))

    checks.sort(key=lambda c: c.name)
    report = VerificationReport(
        "numeric",
        q=q,
        seed=W.seed,
        level=level,
        counts=counts,
        checks=checks,
        sampling={"attempts": str(W.attempts), "rejected_for": list(W.rejected_for)},
        timing_ms=timer.phases if timing else {},
    )
    return report, W


# --- W files -----------------------------------------------------------------


def w_to_dict(W: WSystem) -> dict:
    hist = W.rank_histogram if W.rank_histogram is not None else check_genericity(W).rank_histogram
    return {
        "q": W.q,
        "seed": str(W.seed),
        "coeff_order": COEFF_ORDER,
        "forms": W.grid.tolist(),
        "rank_histogram": {str(r): n for r, n in sorted(hist.items())},
    }


def save_W(W: WSystem, path: str | Path) -> None:
    Path(path).write_text(json.dumps(w_to_dict(W), indent=2) + "\n")


def w_from_dict(doc: dict) -> WSystem:
    try:
        q = doc["q"]
        seed = int(doc["seed"])
        grid = doc["forms"]
        stored = doc["rank_histogram"]
        order = doc["coeff_order"]
    except (KeyError, TypeError, ValueError) as exc:
        raise WFileError(f"malformed W file: {exc!r}") from None
    if order != COEFF_ORDER:
        raise WFileError(f"unknown coeff_order {order!r}")
    if not isinstance(q, int):
        raise WFileError("q must be an integer")
    try:
        check_q(q)
    except ValueError as exc:
        raise WFileError(str(exc)) from None
    if (
        not isinstance(grid, list)
        or len(grid) != DIM
        or any(not isinstance(row, list) or len(row) != N_COEFFS for row in grid)
        or any(type(c) is not int for row in grid for c in row)
    ):
        raise WFileError(f"forms must be a {DIM}x{N_COEFFS} integer grid")
    if any(not (0 <= c < q) for row in grid for c in row):
        raise WFileError(f"coefficient outside [0, {q})")
    try:
        W = WSystem.from_grid(q, grid, seed, attempts=0)
    except ValueError as exc:
        raise WFileError(str(exc)) from None
    verdict = check_genericity(W)
    if not verdict.passed:
        raise WFileError(f"W is not generic: {verdict.describe()}")
    try:
        stored_hist = {int(k): int(v) for k, v in stored.items()}
    except (AttributeError, TypeError, ValueError):
        raise WFileError("malformed rank_histogram") from None
    if stored_hist != verdict.rank_histogram:
        raise WFileError(f"stored rank histogram {stored} does not match {verdict.rank_histogram}")
    return WSystem.from_grid(q, grid, seed, attempts=0, rank_histogram=verdict.rank_histogram)


def load_W(path: str | Path) -> WSystem:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise WFileError(f"malformed W file: {exc}") from None
    if not isinstance(doc, dict):
        raise WFileError("malformed W file: top level must be an object")
    return w_from_dict(doc)
