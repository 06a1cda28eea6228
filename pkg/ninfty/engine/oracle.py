"""Brute-force reference implementations used to cross-check the engine.

Nothing here prunes or caches: wreath composites are assembled from
permutation objects, every weak composition is scanned and enumeration
walks all families reachable by single-subgroup extensions.
"""

import itertools
from typing import FrozenSet, List, Optional, Set, Tuple

from ninfty.engine.families import Family, close_family
from ninfty.engine.graph_subgroups import all_graph_subgroups, decompose_graph, trivial_graph
from ninfty.engine.group_core import (
    FiniteGroup,
    Permutation,
    Subgroup,
    all_subgroups,
    is_subgroup,
    make_subgroup,
    product_with_symmetric,
    symmetric_group,
)
from ninfty.engine.realizability import FamilySequence, validate_n_infinity
from ninfty.utils.logger import logger


def _block_move(parts: Tuple[int, ...], outer: Tuple[int, ...]) -> Permutation:
    offsets = [sum(parts[:i]) for i in range(len(parts))]
    images = []
    for i, p in enumerate(parts):
        images.extend(offsets[outer[i]] + t for t in range(p))
    return Permutation(tuple(images))


def _block_sum(parts: Tuple[int, ...], inner: List[Tuple[int, ...]]) -> Permutation:
    images: List[int] = []
    offset = 0
    for p, perm in zip(parts, inner):
        images.extend(offset + perm[t] for t in range(p))
        offset += p
    return Permutation(tuple(images))


def oracle_wreath(
    seq: FamilySequence,
    parts: Tuple[int, ...],
    over: Optional[FrozenSet[Subgroup]] = None,
) -> Set[Subgroup]:
    group = seq.group
    k, n = len(parts), sum(parts)
    ambient = product_with_symmetric(group, n)
    sym_k, sym_n = symmetric_group(k), symmetric_group(n)
    out: Set[Subgroup] = set()
    for outer in seq.families[k].members:
        datum_k = decompose_graph(group, k, outer)
        H = datum_k.H
        if over is not None and H not in over:
            continue
        block_choices = [
            [decompose_graph(group, p, m) for m in seq.families[p].members if decompose_graph(group, p, m).H == H]
            for p in parts
        ]
        for picked in itertools.product(*block_choices):
            elements = []
            consistent = True
            for h in H.elements:
                move = sym_k.perms[datum_k.image(h)]
                if any(parts[move[i]] != parts[i] or picked[move[i]].rho.images != picked[i].rho.images for i in range(k)):
                    consistent = False
                    break
                inner = [symmetric_group(p).perms[d.image(h)] for p, d in zip(parts, picked)]
                sigma = _block_move(parts, move).compose(_block_sum(parts, inner))
                elements.append(h * sym_n.order + sym_n.index_of(sigma.images))
            if not consistent:
                continue
            assert is_subgroup(ambient, elements), "oracle composite is not a subgroup"
            out.add(make_subgroup(ambient, elements))
    return out


def oracle_is_realizable(seq: FamilySequence, over: Optional[FrozenSet[Subgroup]] = None) -> bool:
    N = seq.max_arity
    for n in range(N + 1):
        for k in range(1, N + 1):
            for parts in itertools.product(range(n + 1), repeat=k):
                if sum(parts) != n:
                    continue
                if not oracle_wreath(seq, parts, over) <= seq.families[n].members:
                    return False
    return True


def _all_families(group: FiniteGroup, n: int, forced: FrozenSet[Subgroup]) -> List[Family]:
    ambient = product_with_symmetric(group, n)
    graphs = [gamma for _, gamma in all_graph_subgroups(group, n)]
    start = close_family(ambient, forced)
    seen = {start.members: start}
    queue = [start]
    while queue:
        family = queue.pop()
        for gamma in graphs:
            if gamma in family:
                continue
            bigger = close_family(ambient, family.members | {gamma})
            if bigger.members not in seen:
                seen[bigger.members] = bigger
                queue.append(bigger)
    return list(seen.values())


def oracle_enumerate(
    group: FiniteGroup,
    max_arity: int,
    h_family: Optional[FrozenSet[Subgroup]] = None,
) -> List[FamilySequence]:
    subgroups = h_family if h_family is not None else frozenset(all_subgroups(group))
    per_arity = [
        _all_families(group, n, frozenset(trivial_graph(group, H, n) for H in subgroups))
        for n in range(max_arity + 1)
    ]
    found = []
    for families in itertools.product(*per_arity):
        seq = FamilySequence(group, max_arity, tuple(families))
        if validate_n_infinity(seq, h_family).ok and oracle_is_realizable(seq, h_family):
            found.append(seq)
    logger.debug(f"oracle: {len(found)} realizable sequences for {group.label}, N = {max_arity}")
    return sorted(found, key=FamilySequence.sort_key)
