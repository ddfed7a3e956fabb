import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pfaffgrass.altform import (
    DIM,
    N_COEFFS,
    PAIRS,
    AlternatingForm,
    Plane2,
    batch_rank,
    form_eval,
    form_rank,
    forms_to_matrices,
    kernel_basis,
    linear_combination,
    matrix_rank,
    restrict_vanishes,
)
from pfaffgrass.ffield import make_field

F2, F3, F5, F7 = (make_field(p) for p in (2, 3, 5, 7))


def e(k):
    v = [0] * DIM
    v[k] = 1
    return tuple(v)


def wedge(field, *pairs):
    w = AlternatingForm.zero(field)
    for i, j in pairs:
        w = w + AlternatingForm.elementary(field, i, j)
    return w


@st.composite
def forms(draw, field):
    return AlternatingForm(field, tuple(draw(st.lists(st.integers(0, field.p - 1), min_size=21, max_size=21))))


def vectors(field):
    return st.tuples(*[st.integers(0, field.p - 1)] * DIM)


def test_coefficient_order():
    assert PAIRS[0] == (0, 1) and PAIRS[1] == (0, 2) and PAIRS[-1] == (5, 6)
    assert len(PAIRS) == N_COEFFS == 21


def test_form_eval_examples():
    w12 = AlternatingForm.elementary(F7, 0, 1)
    assert form_eval(w12, e(0), e(1)) == 1
    w3 = AlternatingForm.elementary(F3, 0, 1)
    assert form_eval(w3, (1, 1, 0, 0, 0, 0, 0), e(1)) == 1


@given(forms(F5), vectors(F5))
def test_alternating(w, v):
    assert form_eval(w, v, v) == 0


@given(forms(F7), vectors(F7), vectors(F7))
def test_antisymmetric(w, v1, v2):
    assert form_eval(w, v1, v2) == (-form_eval(w, v2, v1)) % 7


def test_antisymmetric_exhaustive_p2():
    rng = random.Random(3)
    w = AlternatingForm(F2, tuple(rng.randrange(2) for _ in range(21)))
    vecs = list(itertools.product((0, 1), repeat=DIM))
    for v1 in vecs:
        for v2 in vecs:
            assert form_eval(w, v1, v2) == form_eval(w, v2, v1)  # -1 = 1 mod 2


def test_matrix_is_alternating_in_char_2():
    w = AlternatingForm(F2, (1,) * 21)
    m = w.matrix()
    assert all(m[i][i] == 0 for i in range(DIM))
    assert all(m[i][j] == m[j][i] for i in range(DIM) for j in range(DIM))
    assert AlternatingForm.from_matrix(F2, m) == w
    with pytest.raises(ValueError):
        AlternatingForm.from_matrix(F2, [[1 if i == j else 0 for j in range(DIM)] for i in range(DIM)])


@pytest.mark.parametrize(
    "pairs, rank",
    [((), 0), (((0, 1),), 2), (((0, 1), (2, 3)), 4), (((0, 1), (2, 3), (4, 5)), 6)],
)
def test_rank_examples(pairs, rank):
    for f in (F2, F3, F7):
        assert form_rank(wedge(f, *pairs)) == rank


def test_kernel_examples():
    assert len(kernel_basis(AlternatingForm.zero(F5))) == 7
    ker = kernel_basis(AlternatingForm.elementary(F5, 0, 1))
    assert matrix_rank([list(v) for v in ker], 5) == 5
    assert all(v[0] == v[1] == 0 for v in ker)
    assert len(kernel_basis(wedge(F5, (0, 1), (2, 3), (4, 5)))) == 1


@settings(max_examples=60)
@given(st.sampled_from([F2, F3, F5, F7]).flatmap(forms))
def test_rank_kernel_consistency(w):
    r = form_rank(w)
    assert r % 2 == 0 and r in (0, 2, 4, 6)
    ker = kernel_basis(w)
    assert len(ker) == 7 - r
    for v in ker:
        assert all(form_eval(w, v, e(k)) == 0 for k in range(DIM))


def _random_invertible(rng, p):
    while True:
        a = [[rng.randrange(p) for _ in range(DIM)] for _ in range(DIM)]
        if matrix_rank(a, p) == DIM:
            return a


@pytest.mark.parametrize("field", [F2, F3, F5, F7])
def test_rank_congruence_invariant(field):
    rng = random.Random(field.p)
    p = field.p
    for _ in range(25):
        w = AlternatingForm(field, tuple(rng.randrange(p) for _ in range(21)))
        a = np.array(_random_invertible(rng, p))
        m = (a.T @ np.array(w.matrix()) @ a) % p
        assert form_rank(AlternatingForm.from_matrix(field, m.tolist())) == form_rank(w)


def test_linear_combination_examples():
    rng = random.Random(0)
    ws = [AlternatingForm(F2, tuple(rng.randrange(2) for _ in range(21))) for _ in range(7)]
    assert linear_combination(ws, (1, 0, 0, 0, 0, 0, 0)) == ws[0]
    assert linear_combination(ws, (0,) * 7) == AlternatingForm.zero(F2)
    both = linear_combination(ws, (1, 1, 0, 0, 0, 0, 0))
    assert both.upper == tuple((a + b) % 2 for a, b in zip(ws[0].upper, ws[1].upper))


def test_plane_canonical_form():
    t = Plane2.from_vectors(F3, (0, 0, 1, 1, 0, 0, 0), (0, 0, 2, 0, 1, 0, 0))
    assert t.pivots == (2, 3)
    assert t.rows[0][2] == 1 and t.rows[0][3] == 0 and t.rows[1][3] == 1 and t.rows[1][2] == 0
    assert t == Plane2.from_vectors(F3, t.rows[1], t.rows[0])
    with pytest.raises(ValueError):
        Plane2.from_vectors(F3, e(0), (2, 0, 0, 0, 0, 0, 0))


def test_restrict_vanishes_examples():
    w = AlternatingForm.elementary(F5, 0, 1)
    assert restrict_vanishes(w, Plane2.from_vectors(F5, e(2), e(3)))
    assert not restrict_vanishes(w, Plane2.from_vectors(F5, e(0), e(1)))


@settings(max_examples=80)
@given(st.data())
def test_restrict_vanishes_basis_free(data):
    field = data.draw(st.sampled_from([F2, F3, F5, F7]))
    p = field.p
    w = data.draw(forms(field))
    v1 = data.draw(vectors(field))
    v2 = data.draw(vectors(field))
    a, b, c, d = data.draw(st.tuples(*[st.integers(0, p - 1)] * 4))
    if matrix_rank([list(v1), list(v2)], p) < 2 or (a * d - b * c) % p == 0:
        return
    u1 = tuple((a * x + b * y) % p for x, y in zip(v1, v2))
    u2 = tuple((c * x + d * y) % p for x, y in zip(v1, v2))
    t = Plane2.from_vectors(field, v1, v2)
    assert t == Plane2.from_vectors(field, u1, u2)
    assert restrict_vanishes(w, t) == (form_eval(w, u1, u2) == 0) == (form_eval(w, v1, v2) == 0)


@pytest.mark.parametrize("p", [2, 3, 5, 7, 13])
def test_batch_rank_matches_scalar(p):
    rng = np.random.default_rng(p)
    coeffs = rng.integers(0, p, (400, 21))
    # sprinkle in low-rank forms so every rank value shows up
    coeffs[:50] = 0
    coeffs[:40, 0] = rng.integers(0, p, 40)
    coeffs[20:40, 14] = 1
    f = make_field(p)
    got = batch_rank(forms_to_matrices(coeffs, p), p)
    want = [form_rank(AlternatingForm(f, tuple(row))) for row in coeffs.tolist()]
    assert got.tolist() == want


def test_rank2_forms_over_f2_exhaustive():
    # every alternating form over F_2: nonzero rank-2 forms are e* ^ f* for a
    # 2-dimensional subspace of the dual, one per subspace: [7 choose 2]_2
    total = 1 << 21
    bits = 1 << np.arange(21)
    rank_counts = np.zeros(8, dtype=np.int64)
    step = 1 << 16
    for s in range(1, total, step):
        idx = np.arange(s, min(total, s + step))
        coeffs = (idx[:, None] & bits) != 0
        ranks = batch_rank(forms_to_matrices(coeffs.astype(np.int64), 2), 2)
        rank_counts += np.bincount(ranks, minlength=8)
    assert rank_counts[2] == 2667
    assert rank_counts[1] == rank_counts[3] == rank_counts[5] == rank_counts[7] == 0
    assert rank_counts.sum() == total - 1
