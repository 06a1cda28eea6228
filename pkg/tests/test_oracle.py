import pytest

from ninfty.engine.graph_subgroups import FamilyKind
from ninfty.engine.group_core import make_builtin, trivial_subgroup
from ninfty.engine.oracle import oracle_enumerate, oracle_is_realizable, oracle_wreath
from ninfty.engine.realizability import (
    compositions,
    constant_sequence,
    enumerate_realizable,
    is_realizable,
    truncated_complete_sequence,
    wreath_compose,
)
from ninfty.utils.serialization import canonical_json, load_group, sequence_json


def sample_sequences(group, N):
    return [
        constant_sequence(group, N, FamilyKind.TRIVIAL_GRAPHS),
        constant_sequence(group, N, FamilyKind.ALL_GRAPHS),
        truncated_complete_sequence(group, N, N),
        truncated_complete_sequence(group, N, 2),
    ]


def as_json(spec, sequences):
    return canonical_json([sequence_json(spec, s) for s in sequences])


@pytest.mark.parametrize("spec", ["C2", "C3", "K4", "S3"])
def test_wreath_composition_agrees(spec):
    group = make_builtin(spec)
    N = 3
    for seq in sample_sequences(group, N):
        for n in range(N + 1):
            for parts in compositions(n, N):
                assert wreath_compose(seq, len(parts), parts) == oracle_wreath(seq, parts), (n, parts)


@pytest.mark.parametrize("spec", ["C2", "C3", "C4", "K4", "S3"])
def test_realizability_verdicts_agree(spec):
    group = make_builtin(spec)
    for seq in sample_sequences(group, 3):
        assert bool(is_realizable(seq)) == oracle_is_realizable(seq)


def test_relative_verdicts_agree(c2):
    over = frozenset({trivial_subgroup(c2)})
    seq = truncated_complete_sequence(c2, 3, 3)
    assert bool(is_realizable(seq, over=over)) == oracle_is_realizable(seq, over) is True


@pytest.mark.parametrize("spec,N", [("C2", 2), ("C2", 3), ("C3", 2), ("C3", 3), ("K4", 2), ("S3", 2)])
def test_enumeration_agrees(spec, N):
    group = make_builtin(spec)
    assert as_json(spec, enumerate_realizable(group, N)) == as_json(spec, oracle_enumerate(group, N))


def test_relative_enumeration_agrees(c2):
    h = frozenset({trivial_subgroup(c2)})
    engine = enumerate_realizable(c2, 2, h_family=h)
    oracle = oracle_enumerate(c2, 2, h_family=h)
    assert engine == oracle


@pytest.mark.slow
@pytest.mark.parametrize("spec", ["C4", "K4", "S3", "D4", "C2xC2xC2"])
def test_enumeration_agrees_at_arity_three(spec):
    group = make_builtin(spec)
    assert as_json(spec, enumerate_realizable(group, 3)) == as_json(spec, oracle_enumerate(group, 3))


@pytest.mark.slow
def test_enumeration_agrees_for_table_groups(q8_file):
    group = load_group(str(q8_file))
    for N in (2, 3):
        assert enumerate_realizable(group, N) == oracle_enumerate(group, N)
