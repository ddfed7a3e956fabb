"""Alternating bilinear forms on F_p^7.

A form is stored by its 21 upper-triangle coefficients c_ij, i < j, in
row-major order (0,1), (0,2), ..., (5,6); indices are 0-based here, so the
first coefficient is the one usually written c_12.  The full matrix has zero
diagonal and M[j][i] = -M[i][j].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .ffield import FieldCtx

DIM = 7
PAIRS: tuple[tuple[int, int], ...] = tuple((i, j) for i in range(DIM) for j in range(i + 1, DIM))
N_COEFFS = len(PAIRS)  # 21
COEFF_ORDER = "upper-row-major-(1,2)..(6,7)"

_PAIR_I = np.array([i for i, _ in PAIRS])
_PAIR_J = np.array([j for _, j in PAIRS])

Vec7 = tuple[int, ...]


@dataclass(frozen=True)
class AlternatingForm:
    field: FieldCtx
    upper: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.upper) != N_COEFFS:
            raise ValueError(f"expected {N_COEFFS} coefficients, got {len(self.upper)}")
        p = self.field.p
        object.__setattr__(self, "upper", tuple(int(c) % p for c in self.upper))

    @classmethod
    def zero(cls, field: FieldCtx) -> AlternatingForm:
        return cls(field, (0,) * N_COEFFS)

    @classmethod
    def elementary(cls, field: FieldCtx, i: int, j: int) -> AlternatingForm:
        """e_i* ^ e_j* for 0-based i != j."""
        if i == j:
            raise ValueError("e_i* ^ e_i* is zero")
        sign = 1
        if i > j:
            i, j, sign = j, i, -1
        coeffs = [0] * N_COEFFS
        coeffs[PAIRS.index((i, j))] = sign
        return cls(field, tuple(coeffs))

    @classmethod
    def from_matrix(cls, field: FieldCtx, m: Sequence[Sequence[int]]) -> AlternatingForm:
        p = field.p
        for i in range(DIM):
            if m[i][i] % p:
                raise ValueError("alternating form needs a zero diagonal")
            for j in range(i + 1, DIM):
                if (m[i][j] + m[j][i]) % p:
                    raise ValueError(f"matrix not skew at ({i}, {j})")
        return cls(field, tuple(m[i][j] for i, j in PAIRS))

    def matrix(self) -> list[list[int]]:
        p = self.field.p
        m = [[0] * DIM for _ in range(DIM)]
        for (i, j), c in zip(PAIRS, self.upper):
            m[i][j] = c
            m[j][i] = -c % p
        return m

    def __add__(self, other: AlternatingForm) -> AlternatingForm:
        _same_field(self, other)
        return AlternatingForm(self.field, tuple(a + b for a, b in zip(self.upper, other.upper)))

    def scale(self, c: int) -> AlternatingForm:
        return AlternatingForm(self.field, tuple(c * a for a in self.upper))


def _same_field(a: AlternatingForm, b: AlternatingForm) -> None:
    if a.field != b.field:
        raise TypeError(f"forms over F_{a.field.p} and F_{b.field.p} cannot be mixed")


def _check_vec(field: FieldCtx, v: Sequence[int]) -> None:
    if len(v) != DIM:
        raise ValueError(f"vector must have length {DIM}")
    if any(not (0 <= x < field.p) for x in v):
        raise ValueError(f"vector entries must be reduced mod {field.p}")


def form_eval(w: AlternatingForm, v1: Sequence[int], v2: Sequence[int]) -> int:
    """w(v1, v2) as a residue in [0, p)."""
    _check_vec(w.field, v1)
    _check_vec(w.field, v2)
    s = 0
    for (i, j), c in zip(PAIRS, w.upper):
        if c:
            s += c * (v1[i] * v2[j] - v1[j] * v2[i])
    return s % w.field.p


def _rref(rows: list[list[int]], p: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form mod p; returns (nonzero rows, pivot columns)."""
    m = [[x % p for x in r] for r in rows]
    pivots: list[int] = []
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((k for k in range(r, len(m)) if m[k][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [x * inv % p for x in m[r]]
        for k in range(len(m)):
            if k != r and m[k][c]:
                f = m[k][c]
                m[k] = [(x - f * y) % p for x, y in zip(m[k], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def matrix_rank(rows: list[list[int]], p: int) -> int:
    return len(_rref(rows, p)[1])


def form_rank(w: AlternatingForm) -> int:
    return matrix_rank(w.matrix(), w.field.p)


def kernel_basis(w: AlternatingForm) -> list[Vec7]:
    """Basis of {v : w(v, .) = 0}, one vector per free column of the RREF."""
    p = w.field.p
    red, pivots = _rref(w.matrix(), p)
    basis = []
    for f in (c for c in range(DIM) if c not in pivots):
        v = [0] * DIM
        v[f] = 1
        for row, pc in zip(red, pivots):
            v[pc] = -row[f] % p
        basis.append(tuple(v))
    return basis


def linear_combination(forms, coeffs: Sequence[int]) -> AlternatingForm:
    """sum_k coeffs[k] * forms[k]; ``forms`` may be a WSystem."""
    forms = getattr(forms, "forms", forms)
    if len(coeffs) != len(forms):
        raise ValueError("one coefficient per form required")
    field = forms[0].field
    acc = [0] * N_COEFFS
    for a, f in zip(coeffs, forms):
        if f.field != field:
            raise TypeError("forms live over different fields")
        if a:
            acc = [x + a * c for x, c in zip(acc, f.upper)]
    return AlternatingForm(field, tuple(acc))


@dataclass(frozen=True)
class Plane2:
    """A 2-dimensional subspace of F_p^7 in canonical RREF.

    Construct with :meth:`from_vectors`; two planes compare equal exactly when
    they are the same subspace.
    """

    field: FieldCtx
    rows: tuple[Vec7, Vec7]
    pivots: tuple[int, int]

    @classmethod
    def from_vectors(cls, field: FieldCtx, v1: Sequence[int], v2: Sequence[int]) -> Plane2:
        red, piv = _rref([list(v1), list(v2)], field.p)
        if len(piv) != 2:
            raise ValueError("vectors are linearly dependent")
        return cls(field, (tuple(red[0]), tuple(red[1])), (piv[0], piv[1]))


def restrict_vanishes(w: AlternatingForm, t: Plane2) -> bool:
    # a change of basis of t scales w(r1, r2) by its determinant
    if w.field != t.field:
        raise TypeError("form and plane live over different fields")
    return form_eval(w, *t.rows) == 0


# --- batched numpy routines used by the census -------------------------------


def forms_to_matrices(coeffs: np.ndarray, p: int) -> np.ndarray:
    """(n, 21) coefficient rows -> (n, 7, 7) alternating matrices mod p."""
    coeffs = np.asarray(coeffs, dtype=np.int64) % p
    m = np.zeros(coeffs.shape[:-1] + (DIM, DIM), dtype=np.int64)
    m[..., _PAIR_I, _PAIR_J] = coeffs
    m[..., _PAIR_J, _PAIR_I] = (-coeffs) % p
    return m


def batch_rank(mats: np.ndarray, p: int) -> np.ndarray:
    """Ranks mod p of a stack of square matrices, by simultaneous elimination."""
    # int32 holds (p-1)^2 + p for every p <= 61
    m = (np.asarray(mats) % p).astype(np.int32)
    n, nrows, ncols = m.shape
    inv = np.zeros(p, dtype=np.int32)
    inv[1:] = [pow(a, -1, p) for a in range(1, p)]
    rank = np.zeros(n, dtype=np.int64)
    rowidx = np.arange(nrows)
    every = np.arange(n)
    for c in range(ncols):
        cand = (m[:, :, c] != 0) & (rowidx[None, :] >= rank[:, None])
        has = cand.any(axis=1)
        # without a pivot, "swap" row min(rank, last) with itself and eliminate nothing
        r = np.minimum(rank, nrows - 1)
        piv = np.where(has, cand.argmax(axis=1), r)
        top = m[every, r].copy()
        m[every, r] = m[every, piv]
        m[every, piv] = top
        prow = m[every, r] * inv[m[every, r, c]][:, None] % p
        m[every, r] = np.where(has[:, None], prow, m[every, r])
        factors = np.where(has[:, None], m[:, :, c], 0)
        factors[every, r] = 0
        # the pivot row is zero left of column c
        tail = m[:, :, c:]
        tail -= factors[:, :, None] * prow[:, None, c:]
        tail %= p
        rank += has
    return rank


def plucker(r1: np.ndarray, r2: np.ndarray) -> np.ndarray:
    """2x2 minors r1_i r2_j - r1_j r2_i over PAIRS, so w(r1, r2) = plucker . upper."""
    return r1[..., _PAIR_I] * r2[..., _PAIR_J] - r1[..., _PAIR_J] * r2[..., _PAIR_I]
