import pytest
from hypothesis import given, strategies as st

from rigidsurf.projective import (
    ProjectivePoint,
    height,
    incident,
    join,
    line,
    meet,
    min_entry_height,
    normalize_triple,
    point,
)

triples = st.tuples(
    st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50)
).filter(lambda v: v != (0, 0, 0))


@pytest.mark.parametrize(
    "raw, expected",
    [
        ((2, 4, 6), (1, 2, 3)),
        ((0, -3, 3), (0, 1, -1)),
        ((20, -9, -55), (20, -9, -55)),
        ((-7, 0, 0), (1, 0, 0)),
    ],
)
def test_normalize_examples(raw, expected):
    assert normalize_triple(raw) == expected


def test_normalize_rejects_zero():
    with pytest.raises(ValueError):
        normalize_triple((0, 0, 0))


@given(triples)
def test_normalize_idempotent(v):
    once = normalize_triple(v)
    assert normalize_triple(once) == once


@given(triples, st.integers(1, 20))
def test_normalize_scale_invariant(v, k):
    assert normalize_triple(v) == normalize_triple(tuple(k * x for x in v))


def test_incident_examples():
    assert incident(point(1, 0, 0), line(0, 0, 1))
    assert incident(point(2, 1, 0), line(1, -2, 1))
    assert incident(point(1, 4, 2), line(8, 9, -22))
    assert not incident(point(1, 1, 1), line(1, 0, 0))


def test_join_meet_examples():
    assert join(point(1, 0, 0), point(0, 1, 0)) == line(0, 0, 1)
    # the two closing lines with big coordinates cross on the middle axis
    y = meet(line(8, 9, -22), line(20, -9, -55))
    assert y == point(11, 0, 4)
    l = join(point(1, 1, 2), point(1, 4, 2))
    assert incident(point(1, 1, 2), l) and incident(point(1, 4, 2), l)


def test_join_meet_reject_equal_inputs():
    with pytest.raises(ValueError):
        join(point(1, 2, 3), point(2, 4, 6))
    with pytest.raises(ValueError):
        meet(line(1, 0, 0), line(1, 0, 0))


@given(triples, triples)
def test_join_incident_both(u, v):
    p, q = point(u), point(v)
    if p == q:
        return
    l = join(p, q)
    assert incident(p, l) and incident(q, l)


@given(triples, triples, triples)
def test_join_meet_duality(u, v, w):
    p, q, r = point(u), point(v), point(w)
    if len({p, q, r}) != 3:
        return
    l1, l2 = join(p, q), join(p, r)
    if l1 == l2:  # collinear triple
        return
    assert meet(l1, l2) == p


def test_heights():
    assert height(point(1, 0, 0)) == 1
    assert height(point(14, 25, 1)) == 25
    assert height(line(20, -9, -55)) == 55
    assert min_entry_height(point(1, 0, 0)) == 0
    assert min_entry_height(point(14, 25, 1)) == 1


def test_point_equality_is_structural():
    assert point(2, -2, 4) == point(-1, 1, -2)
    assert len({point(3, 0, 0), point(1, 0, 0)}) == 1
    assert point(1, 0, 0) != ProjectivePoint((0, 1, 0))
