"""Families of subgroups: sets closed under subgroups and conjugation."""

from dataclasses import dataclass
from typing import Iterable, List, Optional

from ninfty.engine.group_core import (
    FiniteGroup,
    Subgroup,
    all_subgroups,
    conjugate,
    subgroup_as_group,
)
from ninfty.utils.errors import AmbientMismatchError
from ninfty.utils.logger import logger


@dataclass(frozen=True)
class Family:
    ambient: FiniteGroup
    members: frozenset

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, subgroup: Subgroup) -> bool:
        return subgroup in self.members

    def __iter__(self):
        return iter(self.sorted_members())

    def sorted_members(self) -> List[Subgroup]:
        return sorted(self.members, key=Subgroup.sort_key)

    @classmethod
    def empty(cls, ambient: FiniteGroup) -> "Family":
        return cls(ambient, frozenset())


@dataclass(frozen=True)
class FamilyCheck:
    """Outcome of is_family; falsy when a member misses a subgroup or conjugate."""

    ok: bool
    member: Optional[Subgroup] = None
    missing: Optional[Subgroup] = None
    reason: Optional[str] = None

    def __bool__(self) -> bool:
        return self.ok


def subgroups_of(ambient: FiniteGroup, member: Subgroup, cap: Optional[int] = None) -> List[Subgroup]:
    """All subgroups of member, as subgroups of ambient."""
    small, embedding = subgroup_as_group(ambient, member)
    return [
        Subgroup(ambient, tuple(sorted(embedding(x) for x in s.elements)))
        for s in all_subgroups(small, cap)
    ]


def _check_ambient(ambient: FiniteGroup, subgroups: Iterable[Subgroup]) -> None:
    for s in subgroups:
        if s.ambient != ambient:
            raise AmbientMismatchError(f"{s} does not live in {ambient.label}")


def close_family(ambient: FiniteGroup, seeds: Iterable[Subgroup], cap: Optional[int] = None) -> Family:
    """Smallest family containing seeds."""
    seeds = list(seeds)
    _check_ambient(ambient, seeds)
    members = set(seeds)
    pending = list(members)
    while pending:
        fresh = []
        for member in pending:
            candidates = subgroups_of(ambient, member, cap)
            candidates += [conjugate(ambient, member, g) for g in ambient.elements()]
            for c in candidates:
                if c not in members:
                    members.add(c)
                    fresh.append(c)
        pending = fresh
    if len(members) > len(seeds):
        logger.debug(f"closed {len(seeds)} seeds to {len(members)} members in {ambient.label}")
    return Family(ambient, frozenset(members))


def is_family(ambient: FiniteGroup, members: Iterable[Subgroup], cap: Optional[int] = None) -> FamilyCheck:
    members = set(members)
    _check_ambient(ambient, members)
    for member in sorted(members, key=Subgroup.sort_key):
        for s in subgroups_of(ambient, member, cap):
            if s not in members:
                return FamilyCheck(False, member, s, "subgroup")
        for g in ambient.elements():
            c = conjugate(ambient, member, g)
            if c not in members:
                return FamilyCheck(False, member, c, "conjugate")
    return FamilyCheck(True)


def _same_ambient(f1: Family, f2: Family) -> None:
    if f1.ambient != f2.ambient:
        raise AmbientMismatchError(
            f"families live in different groups: {f1.ambient.label} and {f2.ambient.label}"
        )


def union(f1: Family, f2: Family) -> Family:
    _same_ambient(f1, f2)
    return Family(f1.ambient, f1.members | f2.members)


def intersection(f1: Family, f2: Family) -> Family:
    _same_ambient(f1, f2)
    return Family(f1.ambient, f1.members & f2.members)


def is_subfamily(f1: Family, f2: Family) -> bool:
    _same_ambient(f1, f2)
    return f1.members <= f2.members
