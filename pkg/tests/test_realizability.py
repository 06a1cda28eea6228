import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from ninfty.engine.families import close_family, is_subfamily
from ninfty.engine.graph_subgroups import FamilyKind, all_graph_subgroups, extremal_family
from ninfty.engine.group_core import make_builtin, trivial_subgroup, whole_group
from ninfty.engine.realizability import (
    FamilySequence,
    block_images,
    compositions,
    constant_sequence,
    enumerate_realizable,
    is_realizable,
    make_sequence,
    realizable_closure,
    replay_witness,
    sequence_poset,
    truncated_complete_sequence,
    validate_n_infinity,
    wreath_compose,
)
from ninfty.utils.errors import (
    AmbientMismatchError,
    ArityError,
    MixedGroupError,
    NotAGraphError,
    SequenceValidationError,
)


def test_compositions_are_shortlex():
    assert compositions(2, 2) == [(2,), (0, 2), (1, 1), (2, 0)]
    assert compositions(0, 3) == [(0,), (0, 0), (0, 0, 0)]
    assert len(compositions(3, 3)) == 1 + 4 + 10


def test_block_images_swap_blocks(c2):
    # rho_2 = sign swaps the two singleton blocks
    assert block_images((1, 1), (0, 1), ((0, 0), (0, 0))) == (0, 1)
    # identity outer, sign on the second block of size 2
    assert block_images((1, 2), (0, 0), ((0, 0), (0, 1))) == (0, 1)


def test_example_witness_for_c2(c2):
    seq = truncated_complete_sequence(c2, 3, 3)
    result = is_realizable(seq)
    assert not result
    witness = result.witness
    assert witness.n == 3
    assert witness.parts == (1, 2)
    assert witness.H == whole_group(c2)
    assert witness.rho_k == (0, 0)
    assert witness.rho_parts == ((0, 0), (0, 1))
    assert witness.gamma.elements == (0, 7)
    assert replay_witness(seq, witness)


def test_example_witness_for_c4(c4):
    result = is_realizable(truncated_complete_sequence(c4, 3, 3))
    assert not result
    assert result.witness.parts == (1, 2)
    assert result.witness.H.elements == (0, 2)


def test_threads_do_not_change_the_witness(c2):
    seq = truncated_complete_sequence(c2, 3, 3)
    assert is_realizable(seq, threads=4).witness == is_realizable(seq, threads=1).witness


def test_restricting_h_hides_the_obstruction(c2):
    seq = truncated_complete_sequence(c2, 3, 3)
    assert is_realizable(seq, over=frozenset({trivial_subgroup(c2)}))


@pytest.mark.parametrize("spec", ["C2", "C3", "C4", "K4", "S3"])
@pytest.mark.parametrize("kind", [FamilyKind.TRIVIAL_GRAPHS, FamilyKind.ALL_GRAPHS])
def test_extremal_sequences_are_realizable(spec, kind):
    seq = constant_sequence(make_builtin(spec), 3, kind)
    assert is_realizable(seq)
    assert validate_n_infinity(seq)


@pytest.mark.slow
@pytest.mark.parametrize("spec", ["C2", "C3", "C4", "K4", "S3"])
@pytest.mark.parametrize("kind", [FamilyKind.TRIVIAL_GRAPHS, FamilyKind.ALL_GRAPHS])
def test_extremal_sequences_are_realizable_at_arity_four(spec, kind):
    assert is_realizable(constant_sequence(make_builtin(spec), 4, kind))


def test_wreath_compose_of_complete_sequence(c2):
    seq = constant_sequence(c2, 2, FamilyKind.ALL_GRAPHS)
    composed = wreath_compose(seq, 2, (1, 1))
    assert {s.elements for s in composed} == {(0,), (0, 2), (0, 3)}
    trivial = constant_sequence(c2, 2, FamilyKind.TRIVIAL_GRAPHS)
    assert {s.elements for s in wreath_compose(trivial, 2, (1, 1))} == {(0,), (0, 2)}


def test_wreath_compose_rejects_bad_decompositions(c2):
    seq = constant_sequence(c2, 2, FamilyKind.ALL_GRAPHS)
    with pytest.raises(ArityError):
        wreath_compose(seq, 2, (2, 1))
    with pytest.raises(ArityError):
        wreath_compose(seq, 2, (1,))


def test_closure_of_example_is_complete(c2):
    closed = realizable_closure(truncated_complete_sequence(c2, 3, 3))
    assert is_realizable(closed)
    assert closed.families == constant_sequence(c2, 3, FamilyKind.ALL_GRAPHS).families


@pytest.mark.parametrize("spec", ["C2", "C3", "S3"])
@settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(data=st.data())
def test_realizable_closure_laws(spec, data):
    group = make_builtin(spec)
    N = 2
    levels, bigger = [], []
    for n in range(N + 1):
        graphs = [gamma for _, gamma in all_graph_subgroups(group, n)]
        base = list(extremal_family(group, n, FamilyKind.TRIVIAL_GRAPHS).members)
        picked = data.draw(st.lists(st.sampled_from(graphs), max_size=2))
        more = data.draw(st.lists(st.sampled_from(graphs), max_size=1))
        levels.append(close_family(extremal_family(group, n, FamilyKind.TRIVIAL_GRAPHS).ambient, base + picked))
        bigger.append(close_family(levels[-1].ambient, list(levels[-1].members) + more))
    seq = FamilySequence(group, N, tuple(levels))
    closed = realizable_closure(seq)

    assert all(is_subfamily(a, b) for a, b in zip(seq.families, closed.families))
    assert realizable_closure(closed) == closed
    assert is_realizable(closed)
    wider = realizable_closure(FamilySequence(group, N, tuple(bigger)))
    assert all(is_subfamily(a, b) for a, b in zip(closed.families, wider.families))


def test_validate_n_infinity(c2):
    assert validate_n_infinity(constant_sequence(c2, 2, FamilyKind.ALL_GRAPHS)).ok
    assert validate_n_infinity(constant_sequence(c2, 2, FamilyKind.TRIVIAL_GRAPHS)).ok
    report = validate_n_infinity(constant_sequence(c2, 2, FamilyKind.REZK))
    kinds = {v.kind for v in report.violations}
    assert kinds == {"not_free", "missing_trivial_graph"}
    h = frozenset({trivial_subgroup(c2)})
    assert validate_n_infinity(constant_sequence(c2, 2, FamilyKind.TRIVIAL_GRAPHS, h), h).ok


def test_non_graph_members_are_rejected(c2):
    with pytest.raises(NotAGraphError):
        is_realizable(constant_sequence(c2, 2, FamilyKind.REZK))


def test_make_sequence_validates(c2, s3):
    trivial = constant_sequence(c2, 2, FamilyKind.TRIVIAL_GRAPHS)
    assert make_sequence(c2, trivial.families) == trivial
    with pytest.raises(AmbientMismatchError):
        make_sequence(s3, trivial.families)
    with pytest.raises(SequenceValidationError):
        make_sequence(c2, [])


def test_enumerate_c2_up_to_arity_two(c2):
    sequences = enumerate_realizable(c2, 2)
    assert len(sequences) == 2
    assert [len(f) for f in sequences[0].families] == [2, 2, 2]
    assert [len(f) for f in sequences[1].families] == [2, 2, 3]
    assert sequence_poset(sequences) == [(0, 1)]


def test_enumerated_sequences_are_realizable(c2, s3):
    for group in (c2, s3):
        for seq in enumerate_realizable(group, 2):
            assert is_realizable(seq)
            assert validate_n_infinity(seq)


def test_enumeration_is_deterministic(c2):
    assert enumerate_realizable(c2, 3) == enumerate_realizable(c2, 3, threads=3)


def test_h_mode_enumeration_contains_full_mode(c2):
    h = frozenset({trivial_subgroup(c2)})
    relative = enumerate_realizable(c2, 2, h_family=h)
    full = enumerate_realizable(c2, 2)
    assert len(relative) >= len(full)
    assert all(validate_n_infinity(seq, h) for seq in relative)


def test_poset_rejects_mixed_inputs(c2, c4):
    with pytest.raises(MixedGroupError):
        sequence_poset([constant_sequence(c2, 2, FamilyKind.ALL_GRAPHS), constant_sequence(c4, 2, FamilyKind.ALL_GRAPHS)])
