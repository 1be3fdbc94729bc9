"""Exact linear algebra over F2, Fp, and Q."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from sheafkit.field import Field, F2, QQ, GF

from . import oracles


def test_parse_labels():
    assert Field.parse("F2").label == "F2"
    assert Field.parse("Fp:5").label == "Fp:5"
    assert Field.parse("Q").label == "Q"
    assert Field.parse("F2") == F2
    assert Field.parse("Q") == QQ
    assert GF(7) == Field.parse("Fp:7")


def test_parse_rejects_junk():
    for bad in ("F3", "Fp:4", "Fp:1", "R", "", "Fp:"):
        with pytest.raises(ValueError):
            Field.parse(bad)


def test_scalar_arithmetic_mod_p():
    f = GF(5)
    assert f.scalar(7) == f.scalar(2)
    assert f.scalar_is_zero(f.scalar(10))
    assert f.inv_scalar(f.scalar(2)) == f.scalar(3)
    assert f.neg_scalar(f.scalar(2)) == f.scalar(3)


def test_rational_scalars_are_exact():
    f = QQ
    third = f.scalar(Fraction(1, 3))
    assert third + third + third == f.scalar(1)
    assert f.scalar_repr(Fraction(-2, 7)) == "-2/7"


def _random_matrix(rng, field, rows, cols):
    a = field.zeros(rows, cols)
    for i in range(rows):
        for j in range(cols):
            if rng.random() < 0.6:
                a[i, j] = field.scalar(rng.randint(-3, 3))
    return a


def _to_lists(field, a):
    rows, cols = a.shape
    return [[a[i, j] for j in range(cols)] for i in range(rows)]


@given(st.integers(0, 10**6), st.sampled_from(["F2", "Fp:5", "Q"]))
def test_rank_matches_independent_elimination(seed, label):
    import random

    rng = random.Random(seed)
    field = Field.parse(label)
    rows = rng.randint(1, 5)
    cols = rng.randint(1, 5)
    a = _random_matrix(rng, field, rows, cols)
    p = None if field.kind == "q" else field.p
    want = oracles.rank(_to_lists(field, a), p)
    assert field.rank(a) == want


@given(st.integers(0, 10**6), st.sampled_from(["F2", "Fp:5", "Q"]))
def test_nullspace_columns_are_killed(seed, label):
    import random

    rng = random.Random(seed)
    field = Field.parse(label)
    rows = rng.randint(1, 4)
    cols = rng.randint(1, 4)
    a = _random_matrix(rng, field, rows, cols)
    ns = field.nullspace(a)
    assert field.is_zero(field.matmul(a, ns)) or ns.shape[1] == 0
    assert field.rank(ns) == ns.shape[1]
    assert ns.shape[1] == cols - field.rank(a)


@given(st.integers(0, 10**6))
def test_rref_is_idempotent(seed):
    import random

    rng = random.Random(seed)
    field = GF(5)
    a = _random_matrix(rng, field, rng.randint(1, 4), rng.randint(1, 4))
    r, _pivots = field.rref(a)
    r2, _ = field.rref(r)
    assert field.eq(r, r2)


def test_matmul_and_kron_shapes():
    f = F2
    a = f.mat([[1, 0], [1, 1]])
    b = f.mat([[1], [1]])
    assert f.matmul(a, b).shape == (2, 1)
    assert f.kron(a, a).shape == (4, 4)
    assert f.eq(f.matmul(f.eye(2), a), a)
