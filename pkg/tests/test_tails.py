"""Tame values: finite complexes plus eventually periodic tails."""

import pytest
from hypothesis import given, strategies as st

from sheafkit import chain, gen, tails
from sheafkit.errors import ShapeError, StrideMismatch
from sheafkit.field import F2, GF, Field


@given(st.integers(0, 10**6))
def test_anchor_folds_into_base(seed):
    rng = gen.rng_for(seed)
    base = gen.random_complex(rng, F2, max_total=2)
    if base.is_zero():
        base = chain.one_complex(F2, 0, 1)
    fin = chain.zero_complex(F2)
    t = tails.TailValue(fin, base, anchor=2, stride=1)
    assert t.anchor == 0
    assert t.base == chain.shift(base, 2)


def test_tail_constructor_rejects_bad_input():
    fin = chain.zero_complex(F2)
    base = chain.one_complex(F2, 0, 1)
    with pytest.raises(StrideMismatch):
        tails.TailValue(fin, base, stride=0)
    with pytest.raises(ShapeError):
        tails.TailValue(fin, chain.zero_complex(F2))


@given(st.integers(0, 10**6))
def test_perfect_means_acyclic_base(seed):
    rng = gen.rng_for(seed)
    t = gen.random_tail(rng, F2, acyclic=True)
    assert tails.value_is_perfect(t)
    bad = gen.random_tail(rng, F2, acyclic=False)
    assert not tails.value_is_perfect(bad)
    assert tails.value_is_perfect(gen.random_complex(rng, F2))


@given(st.integers(0, 10**6), st.integers(3, 5))
def test_truncation_matches_symbolic_betti_below_cutoff(seed, copies):
    """Materializing T slices reproduces the symbolic Betti numbers in all
    degrees safely below the last materialized slice."""
    rng = gen.rng_for(seed)
    t = gen.random_tail(rng, F2)
    data = tails.betti_value(t)
    trunc = tails.truncate_value(t, copies)
    got = trunc.betti()
    top = max(data.slice_betti)
    # slice i contributes in degrees key - i*stride, so every degree strictly
    # above top - copies*stride is untouched by the slices left out
    cutoff = top - copies * t.stride
    degs = set(got) | set(data.finite) | {top - i * t.stride for i in range(copies + 2)}
    for n in sorted(degs):
        if n <= cutoff:
            continue
        assert got.get(n, 0) == data.in_degree(n), (n, got, data.render())


@given(st.integers(0, 10**6))
def test_sum_values_adds_betti_degreewise(seed):
    rng = gen.rng_for(seed)
    a = gen.random_tail(rng, F2, stride=2)
    b = gen.random_tail(rng, F2, stride=2)
    s = tails.sum_values(a, b)
    da, db, ds = tails.betti_value(a), tails.betti_value(b), tails.betti_value(s)
    for n in range(-6, 4):
        assert ds.in_degree(n) == da.in_degree(n) + db.in_degree(n)


def test_sum_values_rejects_mixed_strides():
    fin = chain.zero_complex(F2)
    a = tails.TailValue(fin, chain.one_complex(F2, 0, 1), stride=1)
    b = tails.TailValue(fin, chain.one_complex(F2, 0, 1), stride=2)
    with pytest.raises(StrideMismatch):
        tails.sum_values(a, b)


@given(st.integers(0, 10**6), st.integers(-2, 2))
def test_shift_value_shifts_betti(seed, k):
    rng = gen.rng_for(seed)
    t = gen.random_tail(rng, GF(5))
    shifted = tails.shift_value(t, k)
    d0, d1 = tails.betti_value(t), tails.betti_value(shifted)
    for n in range(-8, 6):
        assert d1.in_degree(n) == d0.in_degree(n + k)


@given(st.integers(0, 10**6))
def test_tame_identity_and_compose(seed):
    rng = gen.rng_for(seed)
    t = gen.random_tail(rng, F2)
    i = tails.tame_identity(t)
    assert tails.tame_eq(tails.tame_compose(i, i), i)
    z = tails.tame_zero(t, t)
    assert tails.tame_map_is_zero(z)
    assert tails.tame_map_is_zero(tails.tame_compose(i, z))
    assert tails.tame_eq(tails.tame_add(z, i), i)


@given(st.integers(0, 10**6))
def test_truncate_map_of_identity_is_identity(seed):
    rng = gen.rng_for(seed)
    t = gen.random_tail(rng, F2)
    i = tails.tame_identity(t)
    m = tails.truncate_map(i, 3)
    src = tails.truncate_value(t, 3)
    assert chain.is_quasi_iso(m)
    for n in src.degrees:
        assert F2.eq(m.component(n), F2.eye(src.dim(n)))


@given(st.integers(0, 10**6))
def test_tensor_value_betti_convolves(seed):
    """Tensor with a plain finite complex convolves symbolic Betti data."""
    rng = gen.rng_for(seed)
    t = gen.random_tail(rng, F2)
    c = gen.random_complex(rng, F2, max_total=3)
    prod = tails.tensor_value(t, c)
    dt, dc = tails.betti_value(t), c.betti()
    dp = tails.betti_value(prod)
    for n in range(-8, 6):
        want = sum(dt.in_degree(n - m) * dc.get(m, 0) for m in dc)
        assert dp.in_degree(n) == want


def test_value_is_zero_and_equal():
    z = chain.zero_complex(F2)
    assert tails.value_is_zero(z)
    t = tails.TailValue(z, chain.one_complex(F2, 0, 1))
    assert not tails.value_is_zero(t)
    assert tails.values_equal(t, tails.TailValue(z, chain.one_complex(F2, 0, 1)))
    assert not tails.values_equal(t, z)


def test_betti_render_mentions_tail():
    t = tails.TailValue(chain.zero_complex(F2), chain.one_complex(F2, 0, 1), stride=2)
    text = tails.betti_value(t).render()
    assert "tail" in text and "stride 2" in text
