"""Convolution kernels: units, columns, composition, Euler bookkeeping."""

import pytest
from hypothesis import given, settings, strategies as st

from sheafkit import assemble, chain, funcat, gen, kernel, poset as pos, tails
from sheafkit.errors import BaseMismatch, TameClassError
from sheafkit.field import F2, QQ, GF

from . import oracles


@given(st.integers(0, 10**6))
def test_identity_kernel_is_a_unit(seed):
    rng = gen.rng_for(seed)
    p = gen.random_poset(rng, max_elems=4)
    f = gen.random_functor(rng, p, F2, cells=2)
    eta = kernel.unit_comparison(f)
    assert eta.is_quasi_iso()


@given(st.integers(0, 10**6))
def test_convolution_against_cells_reads_off_columns(seed):
    rng = gen.rng_for(seed)
    left = gen.random_poset(rng, max_elems=4, name="P")
    right = gen.random_poset(rng, max_elems=4, name="Q")
    k = gen.random_kernel(rng, left, right, F2, cells=2)
    at = rng.choice(left.elements)
    eta = kernel.corep_comparison(k, at)
    assert eta.is_quasi_iso()


@given(st.integers(0, 10**6))
@settings(max_examples=15)
def test_associator_is_an_objectwise_iso(seed):
    rng = gen.rng_for(seed)
    p = gen.random_poset(rng, max_elems=3, name="P")
    q = gen.random_poset(rng, max_elems=3, name="Q")
    r = gen.random_poset(rng, max_elems=3, name="R")
    f = gen.random_functor(rng, p, F2, cells=1, max_total=2)
    k = gen.random_kernel(rng, p, q, F2, cells=1, max_total=2)
    l = gen.random_kernel(rng, q, r, F2, cells=1, max_total=2)
    iso = kernel.associator(f, k, l)
    assert set(iso) == set(r.elements)
    for elem, m in iso.items():
        assert assemble.is_quasi_iso(m)


@given(st.integers(0, 10**6))
@settings(max_examples=15)
def test_two_step_convolution_matches_composed_kernel(seed):
    """Betti agreement between (F*K)*L and F*(K.L) at every element."""
    rng = gen.rng_for(seed)
    p = gen.random_poset(rng, max_elems=3, name="P")
    q = gen.random_poset(rng, max_elems=3, name="Q")
    r = gen.random_poset(rng, max_elems=3, name="R")
    f = gen.random_functor(rng, p, F2, cells=1, max_total=2)
    k = gen.random_kernel(rng, p, q, F2, cells=1, max_total=2)
    l = gen.random_kernel(rng, q, r, F2, cells=1, max_total=2)
    two = kernel.convolve(kernel.convolve(f, k), l)
    one = kernel.convolve(f, kernel.compose_kernels(k, l))
    for elem in r.elements:
        got = tails.betti_value(two.value(elem))
        want = tails.betti_value(one.value(elem))
        for n in range(-8, 6):
            assert got.in_degree(n) == want.in_degree(n)


@given(st.integers(0, 10**6))
@settings(max_examples=15)
def test_euler_profile_predicts_convolution_euler(seed):
    """The chain sum formula gives the exact Euler characteristic of each
    convolution stalk over the rationals."""
    rng = gen.rng_for(seed)
    p = gen.random_poset(rng, max_elems=4, name="P")
    q = gen.random_poset(rng, max_elems=4, name="Q")
    f = gen.random_functor(rng, p, QQ, cells=2, max_total=3)
    k = gen.random_kernel(rng, p, q, QQ, cells=2, max_total=3)
    conv = kernel.convolve(f, k)
    profile = kernel.euler_profile(f, k)
    for elem in q.elements:
        v = conv.value(elem)
        got = sum(
            (-1) ** n * b for n, b in tails.finite_part(v).betti().items()
        )
        assert got == profile[elem]


@given(st.integers(0, 10**6))
def test_convolution_is_additive_in_the_sheaf(seed):
    rng = gen.rng_for(seed)
    p = gen.random_poset(rng, max_elems=3, name="P")
    q = gen.random_poset(rng, max_elems=3, name="Q")
    f = gen.random_functor(rng, p, F2, cells=1, max_total=2)
    g = gen.random_functor(rng, p, F2, cells=1, max_total=2)
    k = gen.random_kernel(rng, p, q, F2, cells=1, max_total=2)
    both = kernel.convolve(funcat.sum_functors(f, g), k)
    fa = kernel.convolve(f, k)
    ga = kernel.convolve(g, k)
    for elem in q.elements:
        want = chain.betti_add(
            tails.finite_part(fa.value(elem)).betti(),
            tails.finite_part(ga.value(elem)).betti(),
        )
        assert tails.finite_part(both.value(elem)).betti() == want


@given(st.integers(0, 10**6))
def test_external_product_stalks_are_tensors(seed):
    rng = gen.rng_for(seed)
    left = gen.random_poset(rng, max_elems=3, name="P")
    right = gen.random_poset(rng, max_elems=3, name="Q")
    f0 = gen.random_functor(rng, pos.opposite(left), F2, cells=1, max_total=2)
    g = gen.random_functor(rng, right, F2, cells=1, max_total=2)
    k = kernel.external_product(f0, g, left)
    for p in left.elements:
        for q in right.elements:
            want = tails.tensor_value(f0.value(p), g.value(q))
            assert tails.values_equal(k.value(p, q), want)


def test_external_product_base_is_checked():
    left = pos.make_poset("P", ["a"], [])
    other = pos.make_poset("X", ["a", "b"], [])
    g = funcat.constant_functor(left, funcat.unit_complex(F2))
    f0 = funcat.constant_functor(other, funcat.unit_complex(F2))
    with pytest.raises(BaseMismatch):
        kernel.external_product(f0, g, left)


def test_euler_profile_rejects_tails():
    p = pos.make_poset("P", ["a"], [])
    t = tails.TailValue(chain.zero_complex(F2), chain.one_complex(F2, 0, 1))
    f = funcat.make_functor(p, F2, {"a": t})
    k = kernel.identity_kernel(p, F2)
    with pytest.raises(TameClassError):
        kernel.euler_profile(f, k)


@given(st.integers(0, 10**6))
@settings(max_examples=10)
def test_convolution_with_tailed_kernels_stays_tame(seed):
    """Tail valued kernels convolve within the tame class: every output
    stalk is a complex or a single stride tail."""
    rng = gen.rng_for(seed)
    p = gen.random_poset(rng, max_elems=3, name="P")
    f = gen.random_functor(rng, p, F2, cells=1, max_total=2)
    values = {}
    base = pos.product(pos.opposite(p), p)
    for a in p.elements:
        values[pos.pair_id(a, a)] = gen.random_tail(rng, F2, acyclic=True, stride=1)
    carrier = funcat.make_functor(base, F2, values, check=False)
    k = kernel.Kernel(p, p, carrier, name="tk")
    conv = kernel.convolve(f, k)
    for q in conv.support():
        assert tails.is_tame(conv.value(q))


def test_identity_kernel_support_is_the_diagonal_up_set():
    p = pos.make_poset("P", ["a", "b"], [("a", "b")])
    k = kernel.identity_kernel(p, F2)
    assert not tails.value_is_zero(k.value("a", "b"))
    assert not tails.value_is_zero(k.value("a", "a"))
    assert tails.value_is_zero(k.value("b", "a"))
