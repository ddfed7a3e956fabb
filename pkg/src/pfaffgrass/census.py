"""Point counts over F_q for X_W, Y_W, the Cayley hypersurface H and its frame
bundle H~.

Planes are enumerated directly in canonical RREF.  For a pivot pair (i, j)
the first row is e_i plus free entries at positions > i other than j, the
second row is e_j plus free entries at positions > j.  Blocks come in
lexicographic order of (i, j); inside a block the free entries, read
row-major, run through base-q digits with the first entry most significant.
That fixes a global index for every plane, and every count below is a sum
over contiguous index ranges, so splitting the work changes nothing.

A plane t = span(r1, r2) is tested against a form with coefficients c by the
dot product of c with the Pluecker vector of (r1, r2); whole chunks of planes
are tested at once as a matrix product.  Float32 is exact here: every partial
sum is bounded by 21 * (q-1)^2 * (q-1) < 2^24 for q <= 13.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

import numpy as np

from .altform import (
    DIM,
    N_COEFFS,
    AlternatingForm,
    Plane2,
    batch_rank,
    form_rank,
    forms_to_matrices,
    kernel_basis,
    linear_combination,
    matrix_rank,
    plucker,
)
from .ffield import make_field

log = logging.getLogger(__name__)

SUPPORTED_Q = (2, 3, 5, 7, 11, 13)
CHUNK = 1 << 17  # planes per work unit
RANK_CHUNK = 1 << 16


class CensusError(ValueError):
    pass


class SamplingError(RuntimeError):
    def __init__(self, attempts: int, last_violation: str) -> None:
        super().__init__(f"no generic W after {attempts} attempts; last violation: {last_violation}")
        self.attempts = attempts
        self.last_violation = last_violation


def check_q(q: int) -> int:
    make_field(q)  # raises "not prime" / range errors
    if q not in SUPPORTED_Q:
        raise CensusError(f"q={q} not supported; choose one of {SUPPORTED_Q}")
    return q


# --- W systems ---------------------------------------------------------------


@dataclass(frozen=True)
class WSystem:
    """Seven linearly independent alternating forms over F_q."""

    q: int
    forms: tuple[AlternatingForm, ...]
    seed: int = 0
    attempts: int = field(default=1, compare=False)
    rejected_for: tuple[str, ...] = field(default=(), compare=False)
    rank_histogram: dict[int, int] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if len(self.forms) != DIM:
            raise ValueError(f"W needs {DIM} forms, got {len(self.forms)}")
        if any(f.field.p != self.q for f in self.forms):
            raise ValueError("all forms must live over F_q")
        if matrix_rank([list(f.upper) for f in self.forms], self.q) != DIM:
            raise ValueError("forms are linearly dependent (dim W < 7)")

    @classmethod
    def from_grid(cls, q: int, grid: Sequence[Sequence[int]], seed: int = 0, **kw) -> WSystem:
        fld = make_field(q)
        return cls(q, tuple(AlternatingForm(fld, tuple(row)) for row in grid), seed, **kw)

    @classmethod
    def unchecked(cls, q: int, grid: Sequence[Sequence[int]], seed: int = 0) -> WSystem:
        """Build without the independence check. Test fixtures only."""
        fld = make_field(q)
        w = object.__new__(cls)
        for name, value in (
            ("q", q),
            ("forms", tuple(AlternatingForm(fld, tuple(row)) for row in grid)),
            ("seed", seed),
            ("attempts", 0),
            ("rejected_for", ()),
            ("rank_histogram", None),
        ):
            object.__setattr__(w, name, value)
        return w

    @property
    def grid(self) -> np.ndarray:
        return np.array([f.upper for f in self.forms], dtype=np.int64)


@dataclass
class CensusCounts:
    n_G: int | None = None
    n_P5: int | None = None
    n_P6: int | None = None
    n_X: int | None = None
    n_Y: int | None = None
    n_H: int | None = None
    n_tH: int | None = None
    n_tH1: int | None = None
    n_tH2: int | None = None
    n_tH11: int | None = None
    n_tH12: int | None = None
    rank_histogram: dict[int, int] = field(default_factory=dict)


# --- enumeration -------------------------------------------------------------


@dataclass(frozen=True)
class PlaneBlock:
    i: int
    j: int
    free1: tuple[int, ...]
    free2: tuple[int, ...]
    offset: int
    size: int


def plane_blocks(q: int) -> list[PlaneBlock]:
    blocks = []
    offset = 0
    for i in range(DIM):
        for j in range(i + 1, DIM):
            free1 = tuple(m for m in range(i + 1, DIM) if m != j)
            free2 = tuple(range(j + 1, DIM))
            size = q ** (len(free1) + len(free2))
            blocks.append(PlaneBlock(i, j, free1, free2, offset, size))
            offset += size
    return blocks


def n_planes(q: int) -> int:
    last = plane_blocks(q)[-1]
    return last.offset + last.size


def plane_rows(q: int, start: int, stop: int, chunk: int = CHUNK) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Canonical row pairs (r1, r2) for planes with index in [start, stop)."""
    for b in plane_blocks(q):
        lo, hi = max(start, b.offset), min(stop, b.offset + b.size)
        if lo >= hi:
            continue
        nf1 = len(b.free1)
        nfree = nf1 + len(b.free2)
        weights = q ** np.arange(nfree - 1, -1, -1, dtype=np.int64)
        for s in range(lo, hi, chunk):
            local = np.arange(s, min(hi, s + chunk), dtype=np.int64) - b.offset
            digits = (local[:, None] // weights) % q
            r1 = np.zeros((len(local), DIM), dtype=np.int16)
            r2 = np.zeros((len(local), DIM), dtype=np.int16)
            r1[:, b.i] = 1
            r2[:, b.j] = 1
            r1[:, list(b.free1)] = digits[:, :nf1]
            r2[:, list(b.free2)] = digits[:, nf1:]
            yield r1, r2


def enumerate_planes(q: int, start: int = 0, stop: int | None = None) -> Iterator[Plane2]:
    """Every 2-plane of F_q^7 once, as a Plane2, in canonical order."""
    fld = make_field(q)
    stop = n_planes(q) if stop is None else stop
    for r1, r2 in plane_rows(q, start, stop):
        for a, b in zip(r1.tolist(), r2.tolist()):
            pivots = (a.index(1), b.index(1))
            yield Plane2(fld, (tuple(a), tuple(b)), pivots)


def projective_points(q: int) -> np.ndarray:
    """Normalized representatives of P^6(F_q): first nonzero coordinate 1.

    Ordered by position of the leading 1, then lexicographically.
    """
    out = []
    for lead in range(DIM):
        rest = DIM - lead - 1
        tail = (np.arange(q**rest)[:, None] // q ** np.arange(rest - 1, -1, -1)) % q
        pts = np.zeros((q**rest, DIM), dtype=np.int64)
        pts[:, lead] = 1
        pts[:, lead + 1 :] = tail
        out.append(pts)
    return np.concatenate(out)


def enumerate_projective_points(q: int, dim: int = 6) -> Iterator[tuple[int, ...]]:
    if dim != DIM - 1:
        raise ValueError("only P^6 = P(W) is needed")
    for row in projective_points(q).tolist():
        yield tuple(row)


# --- parallel range reduction ------------------------------------------------


def split_range(start: int, stop: int, chunk: int = CHUNK) -> list[tuple[int, int]]:
    return [(s, min(stop, s + chunk)) for s in range(start, stop, chunk)]


def _reduce(fn: Callable, jobs: list[tuple], workers: int) -> tuple[int, ...]:
    if workers <= 1 or len(jobs) <= 1:
        parts = [fn(*job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(fn, *zip(*jobs)))
    return tuple(sum(col) for col in zip(*parts)) if parts else ()


def _x_range(q: int, grid: np.ndarray, start: int, stop: int) -> tuple[int, int]:
    coeffs = (np.asarray(grid) % q).astype(np.float32).T
    seen = hits = 0
    for r1, r2 in plane_rows(q, start, stop):
        vals = plucker(r1, r2).astype(np.float32) @ coeffs
        vals = np.fmod(vals, q)
        seen += len(r1)
        hits += int(np.count_nonzero(~vals.any(axis=1)))
    return seen, hits


def plane_census(
    W: WSystem,
    workers: int = 1,
    start: int = 0,
    stop: int | None = None,
    ranges: list[tuple[int, int]] | None = None,
) -> tuple[int, int]:
    """(planes visited, planes in X_W) over an index range of the plane stream.

    Only the seven basis forms are tested: vanishing on t is linear in w.
    """
    q = W.q
    if ranges is None:
        stop = n_planes(q) if stop is None else stop
        ranges = split_range(start, stop)
    grid = W.grid
    jobs = [(q, grid, a, b) for a, b in ranges]
    seen, hits = _reduce(_x_range, jobs, workers) or (0, 0)
    return seen, hits


def count_X(W: WSystem, workers: int = 1) -> int:
    return plane_census(W, workers)[1]


# --- ranks over P(W) ---------------------------------------------------------


def combination_coeffs(W: WSystem, points: np.ndarray) -> np.ndarray:
    """Rows of 21 coefficients of sum_k points[:, k] * W_k."""
    return (points @ W.grid) % W.q


def rank_profile(W: WSystem) -> np.ndarray:
    """Rank of every form in P(W), in projective_points order."""
    pts = projective_points(W.q)
    ranks = []
    for s in range(0, len(pts), RANK_CHUNK):
        mats = forms_to_matrices(combination_coeffs(W, pts[s : s + RANK_CHUNK]), W.q)
        ranks.append(batch_rank(mats, W.q))
    return np.concatenate(ranks)


def _histogram(ranks: np.ndarray) -> dict[int, int]:
    values, counts = np.unique(ranks, return_counts=True)
    return {int(v): int(c) for v, c in zip(values, counts)}


@dataclass(frozen=True)
class GenericityVerdict:
    passed: bool
    rank_histogram: dict[int, int]
    witness: tuple[int, ...] | None = None
    witness_rank: int | None = None

    def describe(self) -> str:
        if self.passed:
            return "generic"
        return f"rank {self.witness_rank} combination {list(self.witness)}"


def check_genericity(W: WSystem, ranks: np.ndarray | None = None) -> GenericityVerdict:
    """Every nonzero form of W must have rank 4 or 6."""
    if ranks is None:
        ranks = rank_profile(W)
    bad = np.flatnonzero((ranks != 4) & (ranks != 6))
    hist = _histogram(ranks)
    if len(bad):
        k = int(bad[0])
        witness = tuple(int(x) for x in _projective_point(W.q, k))
        return GenericityVerdict(False, hist, witness, int(ranks[k]))
    return GenericityVerdict(True, hist)


def _projective_point(q: int, k: int) -> np.ndarray:
    for lead in range(DIM):
        n = q ** (DIM - lead - 1)
        if k < n:
            pt = np.zeros(DIM, dtype=np.int64)
            pt[lead] = 1
            for pos in range(DIM - 1, lead, -1):
                pt[pos] = k % q
                k //= q
            return pt
        k -= n
    raise IndexError("projective index out of range")


def count_Y(W: WSystem, ranks: np.ndarray | None = None) -> tuple[int, dict[int, int]]:
    """(#Y_W, rank histogram over P(W)); Y_W is the rank < 6 locus."""
    if ranks is None:
        ranks = rank_profile(W)
    return int(np.count_nonzero(ranks < 6)), _histogram(ranks)


# --- Cayley hypersurface -----------------------------------------------------

H_BRUTE_MAX_Q = 3


def _h_range(q: int, wcoeffs: np.ndarray, start: int, stop: int) -> tuple[int]:
    cols = (np.asarray(wcoeffs) % q).astype(np.float32).T
    hits = 0
    for r1, r2 in plane_rows(q, start, stop, chunk=1 << 12):
        vals = np.fmod(plucker(r1, r2).astype(np.float32) @ cols, q)
        hits += int(vals.size - np.count_nonzero(vals))
    return (hits,)


def count_H_brute(W: WSystem, workers: int = 1, max_q: int = H_BRUTE_MAX_Q) -> int:
    """Pairs (t, w) in G(2,7) x P(W) with w vanishing on t, by double loop."""
    if W.q > max_q:
        raise CensusError(f"brute-force H count refused for q={W.q} > {max_q}")
    wcoeffs = combination_coeffs(W, projective_points(W.q))
    jobs = [(W.q, wcoeffs, a, b) for a, b in split_range(0, n_planes(W.q))]
    return _reduce(_h_range, jobs, workers)[0]


# --- frame bundle H~ ---------------------------------------------------------


@dataclass(frozen=True)
class TildeHCounts:
    n_tH: int
    n_tH1: int
    n_tH2: int
    n_tH11: int
    n_tH12: int


def _tildeH_pairs(W: WSystem, ranks: np.ndarray) -> TildeHCounts:
    # For each w: nonzero v1 in Ker(w) number q^dim(ker) - 1 and admit q^7 - q
    # partners v2; any other v1 admits the q^6 - q vectors of the hyperplane
    # w(v1, .) = 0 that are not multiples of v1.
    q = W.q
    n11 = n12 = n2 = 0
    for rank, count in _histogram(ranks).items():
        ker = q ** (DIM - rank)
        in_ker = (ker - 1) * (q**7 - q)
        off_ker = (q**7 - ker) * (q**6 - q)
        if rank < 6:
            n11 += count * in_ker
            n12 += count * off_ker
        else:
            n2 += count * (in_ker + off_ker)
    return TildeHCounts(n11 + n12 + n2, n11 + n12, n2, n11, n12)


def _tildeH_triples(W: WSystem) -> TildeHCounts:
    q = W.q
    if q != 2:
        raise CensusError(f"triple-brute H~ count refused for q={q}; only q=2 is feasible")
    vecs = projective_points(2)  # over F_2 these are all nonzero vectors
    off_diag = ~np.eye(len(vecs), dtype=bool)
    n11 = n12 = n2 = 0
    for pt in projective_points(2):
        w = linear_combination(W, pt.tolist())
        m = np.array(w.matrix(), dtype=np.int64)
        vm = (vecs @ m) % 2
        gram = (vm @ vecs.T) % 2
        vanishing = (gram == 0) & off_diag
        in_ker = ~vm.any(axis=1)
        k_part = int(np.count_nonzero(vanishing[in_ker]))
        o_part = int(np.count_nonzero(vanishing[~in_ker]))
        if form_rank(w) < 6:
            n11 += k_part
            n12 += o_part
        else:
            n2 += k_part + o_part
    return TildeHCounts(n11 + n12 + n2, n11 + n12, n2, n11, n12)


def count_tildeH(W: WSystem, mode: str = "pair", ranks: np.ndarray | None = None) -> TildeHCounts:
    """Triples (v1, v2, w), v1 and v2 independent, w in P(W), w(v1, v2) = 0.

    ``mode="pair"`` classifies (w, v1) by whether v1 lies in Ker(w) and counts
    v2 in closed form; ``mode="triple"`` visits every triple (q=2 only).
    """
    if mode == "triple":
        return _tildeH_triples(W)
    if mode != "pair":
        raise ValueError(f"unknown mode {mode!r}")
    if ranks is None:
        ranks = rank_profile(W)
    return _tildeH_pairs(W, ranks)


def kernel_pair_count(W: WSystem) -> tuple[int, int]:
    """(pairs (w, v1) with 0 != v1 in Ker(w), for w in Y_W / outside Y_W), via
    explicit kernel bases.  Independent of ``batch_rank``; used as a cross-check.
    """
    q = W.q
    in_y = out_y = 0
    for pt in projective_points(q).tolist():
        w = linear_combination(W, pt)
        n = q ** len(kernel_basis(w)) - 1
        if form_rank(w) < 6:
            in_y += n
        else:
            out_y += n
    return in_y, out_y


# --- sampling ----------------------------------------------------------------


def sample_W(q: int, seed: int, max_retries: int = 100) -> WSystem:
    """Draw a generic W from SplitMix64(seed); same (q, seed) gives the same W.

    Each attempt draws 7 x 21 residues in order (form by form, coefficient
    order as in ``altform``).  Attempts continue the same stream.
    """
    from .rng import SplitMix64

    check_q(q)
    if max_retries < 1:
        raise ValueError("max_retries must be at least 1")
    rng = SplitMix64(seed)
    rejected: list[str] = []
    for attempt in range(1, max_retries + 1):
        grid = [[rng.below(q) for _ in range(N_COEFFS)] for _ in range(DIM)]
        if matrix_rank(grid, q) < DIM:
            rejected.append("dependent")
            continue
        W = WSystem.from_grid(q, grid, seed)
        verdict = check_genericity(W)
        if not verdict.passed:
            log.debug("attempt %d rejected: %s", attempt, verdict.describe())
            rejected.append(verdict.describe())
            continue
        return WSystem.from_grid(
            q, grid, seed, attempts=attempt, rejected_for=tuple(rejected), rank_histogram=verdict.rank_histogram
        )
    raise SamplingError(max_retries, rejected[-1])
