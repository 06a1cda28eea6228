import pytest

from ninfty.engine.families import close_family, is_family

from ninfty.engine.graph_subgroups import (
    FamilyKind,
    all_graph_subgroups,
    check_arity,
    decompose_graph,
    extremal_family,
    graph_from_images,
    graph_of,
    is_graph_subgroup,
    trivial_graph,
)
from ninfty.engine.group_core import (
    Subgroup,
    all_subgroups,
    make_builtin,
    product_with_symmetric,
    subgroup_generated,
    trivial_subgroup,
    whole_group,
)
from ninfty.utils.errors import ArityError, CapExceededError, NotAGraphError

TEST_GROUPS = ["C1", "C2", "C3", "C4", "K4", "S3"]


@pytest.mark.parametrize("spec,n,count", [("C2", 2, 3), ("C2", 1, 2), ("C2", 3, 5), ("S3", 2, 10), ("C1", 4, 1)])
def test_graph_counts(spec, n, count):
    assert len(all_graph_subgroups(make_builtin(spec), n)) == count


@pytest.mark.parametrize("spec", TEST_GROUPS)
@pytest.mark.parametrize("n", range(5))
def test_graph_roundtrip(spec, n):
    group = make_builtin(spec)
    for datum, gamma in all_graph_subgroups(group, n):
        assert is_graph_subgroup(group, n, gamma)
        assert len(gamma) == len(datum.H)
        back = decompose_graph(group, n, gamma)
        assert back.H == datum.H
        assert back.rho.images == datum.rho.images
        assert graph_of(group, back) == gamma


@pytest.mark.parametrize(
    "spec,n", [("C1", 3), ("C2", 1), ("C2", 2), ("C2", 3), ("C3", 2), ("C3", 3), ("C4", 2), ("K4", 2), ("S3", 2)]
)
def test_graphs_are_exactly_the_free_subgroups(spec, n):
    group = make_builtin(spec)
    ambient = product_with_symmetric(group, n)
    graphs = {gamma for _, gamma in all_graph_subgroups(group, n)}
    free = {s for s in all_subgroups(ambient) if is_graph_subgroup(group, n, s)}
    assert graphs == free
    assert len(all_graph_subgroups(group, n)) == len(free)


def test_free_subgroups_of_c2_at_arity_two(c2):
    free = {gamma.elements for _, gamma in all_graph_subgroups(c2, 2)}
    assert free == {(0,), (0, 2), (0, 3)}


def test_non_graph_is_rejected(c2):
    ambient = product_with_symmetric(c2, 2)
    sigma = Subgroup(ambient, (0, 1))
    assert not is_graph_subgroup(c2, 2, sigma)
    with pytest.raises(NotAGraphError):
        decompose_graph(c2, 2, sigma)


def test_trivial_graph(c2):
    gamma = trivial_graph(c2, whole_group(c2), 2)
    assert gamma.elements == (0, 2)
    datum = decompose_graph(c2, 2, gamma)
    assert datum.as_mapping() == {0: (0, 1), 1: (0, 1)}


def test_diagonal_permutations(c2):
    diagonal = graph_from_images(c2, whole_group(c2), 2, (0, 1))
    datum = decompose_graph(c2, 2, diagonal)
    assert datum.permutation(1).images == (1, 0)
    assert datum.image(0) == 0


def test_arity_range():
    with pytest.raises(ArityError):
        check_arity(-1)
    with pytest.raises(CapExceededError) as info:
        check_arity(7)
    assert info.value.exit_code == 3
    assert "arity 7" in info.value.detail


def test_extremal_family_sizes(c2, s3):
    assert len(extremal_family(c2, 2, FamilyKind.TRIVIAL_GRAPHS)) == 2
    assert len(extremal_family(c2, 2, FamilyKind.ALL_GRAPHS)) == 3
    assert len(extremal_family(c2, 2, FamilyKind.REZK)) == 2
    assert len(extremal_family(c2, 2, FamilyKind.EVERYTHING)) == 5
    assert len(extremal_family(s3, 3, FamilyKind.TRIVIAL_GRAPHS)) == 6


def test_restricted_extremal_families(s3):
    h = {trivial_subgroup(s3), subgroup_generated(s3, [3])}
    assert len(extremal_family(s3, 2, FamilyKind.TRIVIAL_GRAPHS, h)) == 2
    h_graphs = extremal_family(s3, 2, FamilyKind.H_GRAPHS, h)
    assert {decompose_graph(s3, 2, m).H for m in h_graphs} == h
    with pytest.raises(ValueError):
        extremal_family(s3, 2, FamilyKind.H_GRAPHS)


def test_trivial_group_has_one_graph_per_arity():
    c1 = make_builtin("C1")
    for n in range(5):
        assert len(all_graph_subgroups(c1, n)) == 1


@pytest.mark.parametrize("spec", ["C2", "C3", "K4", "S3"])
@pytest.mark.parametrize("n", range(4))
@pytest.mark.parametrize("kind", [k for k in FamilyKind if k is not FamilyKind.H_GRAPHS])
def test_extremal_families_are_families(spec, n, kind):
    group = make_builtin(spec)
    family = extremal_family(group, n, kind)
    assert is_family(family.ambient, family.members)


@pytest.mark.parametrize("spec", ["C2", "S3"])
@pytest.mark.parametrize("n", range(4))
def test_h_graphs_are_families(spec, n):
    group = make_builtin(spec)
    h = frozenset(close_family(group, [subgroup_generated(group, [1])]).members)
    family = extremal_family(group, n, FamilyKind.H_GRAPHS, h)
    assert is_family(family.ambient, family.members)


@pytest.mark.parametrize("spec", ["C2", "C3", "S3"])
@pytest.mark.parametrize("n", range(4))
def test_rezk_members_project_to_the_identity(spec, n):
    group = make_builtin(spec)
    family = extremal_family(group, n, FamilyKind.REZK)
    for member in family.members:
        assert {family.ambient.split(z)[0] for z in member.elements} == {group.identity}
