import itertools

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from ninfty.engine.families import (
    Family,
    close_family,
    intersection,
    is_family,
    is_subfamily,
    subgroups_of,
    union,
)
from ninfty.engine.group_core import all_subgroups, make_builtin, subgroup_generated, whole_group
from ninfty.utils.errors import AmbientMismatchError

GROUPS = {name: make_builtin(name) for name in ("C4", "K4", "S3", "D4")}


def seeds_of(draw, group):
    subgroups = all_subgroups(group)
    picked = draw(st.sets(st.integers(min_value=0, max_value=len(subgroups) - 1), max_size=4))
    return [subgroups[i] for i in sorted(picked)]


@pytest.mark.parametrize("name", sorted(GROUPS))
@settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(data=st.data())
def test_close_family_is_a_closure_operator(name, data):
    group = GROUPS[name]
    small = seeds_of(data.draw, group)
    extra = seeds_of(data.draw, group)
    closed = close_family(group, small)

    assert set(small) <= closed.members
    assert close_family(group, closed.members) == closed
    assert closed.members <= close_family(group, small + extra).members
    assert is_family(group, closed.members)


def test_closure_adds_conjugates_and_subgroups(s3):
    transposition = subgroup_generated(s3, [1])
    closed = close_family(s3, [transposition])
    assert len(closed) == 4
    assert all(len(s) <= 2 for s in closed)


def test_is_family_reports_missing_subgroup(s3):
    c3 = subgroup_generated(s3, [3])
    check = is_family(s3, [c3])
    assert not check
    assert check.reason == "subgroup"
    assert check.missing.elements == (0,)


def test_is_family_reports_missing_conjugate(s3):
    trivial = subgroup_generated(s3, [])
    transposition = subgroup_generated(s3, [1])
    check = is_family(s3, [trivial, transposition])
    assert not check
    assert check.reason == "conjugate"
    assert check.member == transposition


def test_empty_and_full_families(s3):
    assert is_family(s3, [])
    assert is_family(s3, all_subgroups(s3))
    assert close_family(s3, [whole_group(s3)]).members == frozenset(all_subgroups(s3))
    assert len(Family.empty(s3)) == 0


def test_subgroups_of_member(s3):
    assert len(subgroups_of(s3, whole_group(s3))) == 6
    assert [s.elements for s in subgroups_of(s3, subgroup_generated(s3, [3]))] == [(0,), (0, 3, 4)]


def test_union_and_intersection_stay_families(s3):
    a = close_family(s3, [subgroup_generated(s3, [1])])
    b = close_family(s3, [subgroup_generated(s3, [3])])
    assert is_family(s3, union(a, b).members)
    assert intersection(a, b).members == {subgroup_generated(s3, [])}
    assert is_subfamily(intersection(a, b), a)
    assert not is_subfamily(a, b)


def test_ambient_mismatch(s3, c2):
    a = close_family(s3, [])
    b = close_family(c2, [])
    with pytest.raises(AmbientMismatchError):
        union(a, b)
    with pytest.raises(AmbientMismatchError):
        close_family(s3, [whole_group(c2)])


def all_families(group):
    subgroups = all_subgroups(group)
    return [
        Family(group, frozenset(combo))
        for r in range(len(subgroups) + 1)
        for combo in itertools.combinations(subgroups, r)
        if is_family(group, combo)
    ]


def test_subfamily_is_a_partial_order_on_k4():
    families = all_families(GROUPS["K4"])
    # empty, {1} with any set of the three C2, everything
    assert len(families) == 1 + 8 + 1
    for a in families:
        assert is_subfamily(a, a)
    for a, b in itertools.product(families, repeat=2):
        if is_subfamily(a, b) and is_subfamily(b, a):
            assert a == b
    for a, b, c in itertools.product(families, repeat=3):
        if is_subfamily(a, b) and is_subfamily(b, c):
            assert is_subfamily(a, c)
