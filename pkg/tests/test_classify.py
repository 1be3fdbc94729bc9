"""Compactness and properness verdicts, cell presentations, kernel criterion."""

import pytest
from hypothesis import given, settings, strategies as st

from sheafkit import chain, classify, funcat, gen, kernel, poset as pos, tails, witness
from sheafkit.errors import NotCompact
from sheafkit.field import F2, GF


@given(st.integers(0, 10**6))
def test_finite_functors_are_compact_and_proper(seed):
    """Everything with finite stalks on a finite poset is compact and proper."""
    rng = gen.rng_for(seed)
    p = gen.random_poset(rng, max_elems=5)
    f = gen.random_functor(rng, p, F2, cells=2)
    if f.has_tails():
        return
    assert classify.is_compact(f).value
    assert classify.is_proper(f).value


@given(st.integers(0, 10**6))
def test_acyclic_tails_stay_compact_bad_tails_do_not(seed):
    rng = gen.rng_for(seed)
    p = pos.make_poset("P", ["a"], [])
    good = funcat.make_functor(
        p, F2, {"a": gen.random_tail(rng, F2, acyclic=True)}
    )
    assert classify.is_compact(good).value
    bad = funcat.make_functor(
        p, F2, {"a": gen.random_tail(rng, F2, acyclic=False)}
    )
    v = classify.is_compact(bad)
    assert not v.value
    assert v.offending == "a"
    assert v.offending_degree is not None


@given(st.integers(0, 10**6))
@settings(max_examples=15)
def test_cellularize_succeeds_exactly_on_compacts(seed):
    rng = gen.rng_for(seed)
    p = gen.random_poset(rng, max_elems=4)
    f = gen.random_compact_functor(rng, p, F2, cells=2)
    pres = classify.cellularize(f)
    summary = pres.verify()
    assert summary["augmentation_quasi_iso"]
    bad_value = gen.random_tail(rng, F2, acyclic=False)
    at = rng.choice(p.elements)
    bad = funcat.make_functor(p, F2, {at: bad_value}, check=False)
    with pytest.raises(NotCompact):
        classify.cellularize(bad)


@given(st.integers(0, 10**6))
@settings(max_examples=15)
def test_cell_count_is_bounded_by_chains_times_degrees(seed):
    """Cell bound: at most one cell per strict chain and nonzero stalk degree."""
    rng = gen.rng_for(seed)
    p = gen.random_poset(rng, max_elems=4)
    f = gen.random_compact_functor(rng, p, F2, cells=2)
    pres = classify.cellularize(f)
    n_chains = len(p.all_chains())
    degrees = set()
    for q in f.support():
        v = f.value(q)
        fin = tails.finite_part(v)
        degrees.update(fin.degrees)
        t = tails.tail_of(v)
        if t is not None:
            degrees.update(t[0].degrees)
    bound = n_chains * max(1, len(degrees))
    assert classify.cell_count(pres) <= bound


@given(st.integers(0, 10**6))
@settings(max_examples=10)
def test_kernel_criterion_matches_columnwise_convolution(seed):
    """check_kernel agrees with testing convolve(cell at p, K) for every p."""
    rng = gen.rng_for(seed)
    left = gen.random_poset(rng, max_elems=3, name="P")
    right = gen.random_poset(rng, max_elems=3, name="Q")
    k = gen.random_kernel(rng, left, right, F2, cells=2)
    kv = classify.check_kernel(k)
    operational = True
    for p in left.elements:
        cell = funcat.yoneda(left, p, funcat.unit_complex(F2))
        conv = kernel.convolve(cell, k)
        operational = operational and classify.is_compact(conv).value
    assert kv.preserves_compacts == operational


def test_kernel_offenders_name_column_and_degree():
    left = pos.make_poset("P", ["a", "b"], [("a", "b")])
    base = pos.product(pos.opposite(left), left)
    bad_tail = tails.TailValue(
        chain.zero_complex(F2), chain.one_complex(F2, 0, 1), anchor=-1, stride=1
    )
    values = {
        pos.pair_id("a", "a"): funcat.unit_complex(F2),
        pos.pair_id("b", "b"): bad_tail,
    }
    carrier = funcat.make_functor(base, F2, values, check=False)
    k = kernel.Kernel(left, left, carrier, name="bad")
    kv = classify.check_kernel(k)
    assert not kv.preserves_compacts
    assert kv.offenders
    p, q, d = kv.offenders[0]
    assert p == "b" and q == "b"
    assert isinstance(d, int)


@given(st.integers(0, 10**6))
@settings(max_examples=10)
def test_compactness_witness_agrees_with_is_compact(seed):
    rng = gen.rng_for(seed)
    p = gen.random_poset(rng, max_elems=3)
    f = gen.random_functor(rng, p, F2, cells=2)
    rep = classify.compactness_witness(f, "auto")
    verdict = classify.is_compact(f).value
    assert rep.verdict == verdict


def test_tower_constant_is_proper_not_compact(f2):
    t = witness.tower_const(funcat.unit_complex(f2))
    assert classify.is_proper(t).value
    assert not classify.is_compact(t).value


@given(st.integers(0, 10**6))
@settings(max_examples=10)
def test_cross_validation_report_agrees_with_itself(seed):
    rng = gen.rng_for(seed)
    left = gen.random_poset(rng, max_elems=3, name="P")
    right = gen.random_poset(rng, max_elems=3, name="Q")
    k = gen.random_kernel(rng, left, right, F2, cells=1, max_total=2)
    rep = classify.cross_validate_kernel(k, 5, seed)
    assert rep.verdict is True
