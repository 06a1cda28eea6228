import itertools
import json

import pytest

from ninfty.engine.graph_subgroups import FamilyKind
from ninfty.engine.group_core import make_builtin
from ninfty.engine.realizability import constant_sequence, truncated_complete_sequence
from ninfty.utils.config import get_settings
from ninfty.utils.serialization import canonical_json, sequence_json, write_text

# 1, -1, i, -i, j, -j, k, -k
_UNITS = ["1", "i", "j", "k"]
_UNIT_PRODUCTS = {
    ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
    ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
    ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
}


def _q8_element(index):
    return (1 if index % 2 == 0 else -1, _UNITS[index // 2])


def _q8_index(sign, unit):
    return 2 * _UNITS.index(unit) + (0 if sign == 1 else 1)


def q8_table():
    table = []
    for a in range(8):
        sa, ua = _q8_element(a)
        row = []
        for b in range(8):
            sb, ub = _q8_element(b)
            if ua == "1":
                s, u = 1, ub
            elif ub == "1":
                s, u = 1, ua
            else:
                s, u = _UNIT_PRODUCTS[(ua, ub)]
            row.append(_q8_index(sa * sb * s, u))
        table.append(row)
    return table


def a4_table():
    def even(p):
        return sum(1 for i in range(4) for j in range(i + 1, 4) if p[i] > p[j]) % 2 == 0

    perms = [p for p in itertools.permutations(range(4)) if even(p)]
    index = {p: i for i, p in enumerate(perms)}
    return [[index[tuple(a[j] for j in b)] for b in perms] for a in perms]


@pytest.fixture(autouse=True)
def isolated_settings(tmp_path, monkeypatch):
    monkeypatch.setenv("NINFTY_CACHE", str(tmp_path / "cache"))
    monkeypatch.delenv("NINFTY_NO_CACHE", raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def c2():
    return make_builtin("C2")


@pytest.fixture
def c4():
    return make_builtin("C4")


@pytest.fixture
def s3():
    return make_builtin("S3")


@pytest.fixture
def q8_file(tmp_path):
    path = tmp_path / "q8.json"
    write_text(path, json.dumps({"label": "Q8", "order": 8, "table": q8_table()}))
    return path


@pytest.fixture
def a4_file(tmp_path):
    path = tmp_path / "a4.json"
    write_text(path, json.dumps({"label": "A4", "order": 12, "table": a4_table()}))
    return path


@pytest.fixture
def write_sequence(tmp_path):
    """Write a FamilySequence as a sequence file for the builtin spec."""

    def write(name, spec, seq, mode="n_infinity", h_family=None):
        path = tmp_path / name
        write_text(path, canonical_json(sequence_json(spec, seq, mode, h_family)))
        return path

    return write


@pytest.fixture
def example_file(write_sequence, c2):
    """Complete below arity 3, trivial graphs at arity 3."""
    return write_sequence("example.json", "C2", truncated_complete_sequence(c2, 3, 3))


@pytest.fixture
def trivial_file(write_sequence, c2):
    return write_sequence("trivial.json", "C2", constant_sequence(c2, 3, FamilyKind.TRIVIAL_GRAPHS))


@pytest.fixture
def complete_file(write_sequence, c2):
    return write_sequence("complete.json", "C2", constant_sequence(c2, 2, FamilyKind.ALL_GRAPHS))


@pytest.fixture
def rezk_file(write_sequence, c2):
    return write_sequence("rezk.json", "C2", constant_sequence(c2, 2, FamilyKind.REZK))
