"""Totalization of shifted slot diagrams."""

import pytest
from hypothesis import given, strategies as st

from sheafkit import assemble, chain, gen, tails
from sheafkit.errors import ShapeError, StrideMismatch
from sheafkit.field import F2, GF


@given(st.integers(0, 10**6))
def test_single_slot_is_the_value_itself(seed):
    rng = gen.rng_for(seed)
    c = gen.random_complex(rng, F2, max_total=4)
    asm = assemble.single_assembly(c)
    assert tails.values_equal(asm.value, c)


@given(st.integers(0, 10**6))
def test_two_slot_identity_arrow_is_a_cone(seed):
    """Slot layout [(C,1), (C,0)] with the identity arrow is cone(id)."""
    rng = gen.rng_for(seed)
    c = gen.random_complex(rng, F2, max_total=4)
    if c.is_zero():
        c = chain.one_complex(F2, 0, 1)
    i = tails.tame_identity(c)
    asm = assemble.assemble(F2, [(c, 1), (c, 0)], [(0, 1, i, F2.scalar(1))])
    assert tails.finite_part(asm.value).is_acyclic()


@given(st.integers(0, 10**6))
def test_disjoint_slots_sum_betti(seed):
    rng = gen.rng_for(seed)
    a = gen.random_complex(rng, F2, max_total=3)
    b = gen.random_complex(rng, F2, max_total=3)
    asm = assemble.assemble(F2, [(a, 0), (b, 0)])
    want = chain.betti_add(a.betti(), b.betti())
    assert tails.finite_part(asm.value).betti() == want


def test_arrow_shift_gap_is_enforced():
    c = chain.one_complex(F2, 0, 1)
    i = tails.tame_identity(c)
    with pytest.raises(ShapeError):
        assemble.assemble(F2, [(c, 0), (c, 0)], [(0, 1, i, F2.scalar(1))])


def test_mixed_strides_are_rejected():
    fin = chain.zero_complex(F2)
    a = tails.TailValue(fin, chain.one_complex(F2, 0, 1), stride=1)
    b = tails.TailValue(fin, chain.one_complex(F2, 0, 1), stride=2)
    with pytest.raises(StrideMismatch):
        assemble.assemble(F2, [(a, 0), (b, 1)])


@given(st.integers(0, 10**6))
def test_cone_value_of_identity_tail_map_is_perfect(seed):
    """cone(id) on a tail value has acyclic finite part and acyclic base."""
    rng = gen.rng_for(seed)
    t = gen.random_tail(rng, F2)
    cn = assemble.cone_value(tails.tame_identity(t))
    assert tails.value_is_acyclic(cn)


@given(st.integers(0, 10**6))
def test_assembly_inclusion_is_a_chain_map(seed):
    """Including one slot of a two slot sum, then projecting back, gives id."""
    rng = gen.rng_for(seed)
    f = GF(5)
    a = gen.random_complex(rng, f, max_total=3)
    b = gen.random_complex(rng, f, max_total=3)
    if a.is_zero():
        a = chain.one_complex(f, 0, 1)
    big = assemble.assemble(f, [(a, 0), (b, 0)])
    sub = assemble.single_assembly(a)
    inc = assemble.assembly_inclusion(sub, big, {0: 0})
    prj = assemble.assembly_projection(big, sub, {0: 0})
    comp = tails.tame_compose(prj, inc)
    assert tails.tame_eq(comp, tails.tame_identity(a))


@given(st.integers(0, 10**6))
def test_tail_sector_assembles_alongside_finite(seed):
    rng = gen.rng_for(seed)
    t = gen.random_tail(rng, F2, stride=1)
    c = gen.random_complex(rng, F2, max_total=2)
    asm = assemble.assemble(F2, [(t, 0), (c, 0)])
    v = asm.value
    assert isinstance(v, tails.TailValue)
    dv = tails.betti_value(v)
    dt, dc = tails.betti_value(t), c.betti()
    for n in range(-6, 5):
        assert dv.in_degree(n) == dt.in_degree(n) + dc.get(n, 0)
