"""Wreath composition of families, the realizability decision, realizable
closure, N-infinity validation and enumeration of realizable sequences.

A sequence (F_0, ..., F_N) is realizable when for every decomposition
n = n_1 + ... + n_k (k >= 1, n_i >= 0) the wreath composite
F_k wr (F_{n_1} x ... x F_{n_k}) lies in F_n. Blocks in one rho_k(H)-orbit
must share their size and their block homomorphism; rho(h) sends position t
of block i to position rho_{n_i}(h)(t) of block rho_k(h)(i).
"""

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

import networkx as nx
from tqdm import tqdm

from ninfty.engine.families import Family, close_family, is_family, is_subfamily, subgroups_of
from ninfty.engine.graph_subgroups import (
    FamilyKind,
    all_graph_subgroups,
    check_arity,
    decompose_graph,
    extremal_family,
    graph_from_images,
    is_graph_subgroup,
    trivial_graph,
)
from ninfty.engine.group_core import (
    FiniteGroup,
    Subgroup,
    all_subgroups,
    conjugates,
    minimal_generating_set,
    product_with_symmetric,
    subgroup_as_group,
    symmetric_group,
)
from ninfty.utils.config import get_settings
from ninfty.utils.errors import (
    AmbientMismatchError,
    ArityError,
    MixedGroupError,
    NotAGraphError,
    SequenceValidationError,
)
from ninfty.utils.logger import logger
from ninfty.utils.workers import run_parallel

Images = Tuple[int, ...]

_convention_logged = False


@dataclass(frozen=True)
class FamilySequence:
    """(F_0, ..., F_N) with F_n a family of subgroups of G x Sigma_n."""

    group: FiniteGroup
    max_arity: int
    families: Tuple[Family, ...]

    def __getitem__(self, n: int) -> Family:
        return self.families[n]

    @cached_property
    def _admissible(self) -> Dict[int, Dict[Subgroup, List[Images]]]:
        table = {}
        for n, family in enumerate(self.families):
            per_h: Dict[Subgroup, List[Images]] = {}
            for member in family.members:
                if not is_graph_subgroup(self.group, n, member):
                    raise NotAGraphError(f"arity {n}: member {list(member.elements)} is not a graph subgroup")
                datum = decompose_graph(self.group, n, member)
                per_h.setdefault(datum.H, []).append(datum.rho.images)
            table[n] = {H: sorted(v) for H, v in per_h.items()}
        return table

    def admissible(self, n: int) -> Dict[Subgroup, List[Images]]:
        """Per subgroup H, the sorted rho images with Gamma(rho) in F_n."""
        return self._admissible[n]

    def sort_key(self):
        return tuple((len(f), tuple(s.elements for s in f.sorted_members())) for f in self.families)


@dataclass(frozen=True)
class Witness:
    """A wreath composite Gamma_rho missing from F_n."""

    n: int
    parts: Tuple[int, ...]
    H: Subgroup
    rho_k: Images
    rho_parts: Tuple[Images, ...]
    gamma: Subgroup

    @property
    def k(self) -> int:
        return len(self.parts)


@dataclass(frozen=True)
class RealizabilityResult:
    realizable: bool
    witness: Optional[Witness] = None

    def __bool__(self) -> bool:
        return self.realizable


@dataclass(frozen=True)
class Violation:
    arity: int
    kind: str  # "not_free" or "missing_trivial_graph"
    subgroup: Subgroup


@dataclass
class NInfinityReport:
    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def make_sequence(group: FiniteGroup, families: Sequence[Family], validate: bool = True) -> FamilySequence:
    families = tuple(families)
    if not families:
        raise SequenceValidationError("a sequence needs at least the arity-0 family")
    for n, family in enumerate(families):
        ambient = product_with_symmetric(group, n)
        if family.ambient != ambient:
            raise AmbientMismatchError(f"arity {n}: family lives in {family.ambient.label}, not {ambient.label}")
        if validate:
            check = is_family(ambient, family.members)
            if not check:
                raise SequenceValidationError(
                    f"arity {n}: member {list(check.member.elements)} misses its {check.reason} "
                    f"{list(check.missing.elements)}"
                )
    return FamilySequence(group, len(families) - 1, families)


def constant_sequence(
    group: FiniteGroup,
    max_arity: int,
    kind: FamilyKind,
    h_family: Optional[FrozenSet[Subgroup]] = None,
) -> FamilySequence:
    check_arity(max_arity)
    families = [extremal_family(group, n, kind, h_family) for n in range(max_arity + 1)]
    return FamilySequence(group, max_arity, tuple(families))


def truncated_complete_sequence(group: FiniteGroup, max_arity: int, cutoff: int) -> FamilySequence:
    """All graphs below cutoff, trivial graphs from cutoff on."""
    check_arity(max_arity)
    families = [
        extremal_family(group, n, FamilyKind.ALL_GRAPHS if n < cutoff else FamilyKind.TRIVIAL_GRAPHS)
        for n in range(max_arity + 1)
    ]
    return FamilySequence(group, max_arity, tuple(families))


def weak_compositions(n: int, k: int) -> Iterator[Tuple[int, ...]]:
    """Tuples of k non-negative integers summing to n, lexicographically."""
    if k == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in weak_compositions(n - first, k - 1):
            yield (first,) + rest


def compositions(n: int, max_parts: int) -> List[Tuple[int, ...]]:
    """Scan order: fewer parts first, then lexicographic."""
    return [parts for k in range(1, max_parts + 1) for parts in weak_compositions(n, k)]


def _block_orbits(rho_k_perms: Sequence[Tuple[int, ...]], k: int) -> List[List[int]]:
    parent = list(range(k))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for perm in rho_k_perms:
        for i, j in enumerate(perm):
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    orbits: Dict[int, List[int]] = {}
    for i in range(k):
        orbits.setdefault(find(i), []).append(i)
    return [orbits[r] for r in sorted(orbits)]


def block_images(parts: Sequence[int], rho_k: Images, rho_parts: Sequence[Images]) -> Images:
    """Sigma_n indices of the block-sum rho twisted by rho_k, aligned with H."""
    k, n = len(parts), sum(parts)
    sym_k, sym_n = symmetric_group(k), symmetric_group(n)
    part_syms = [symmetric_group(p) for p in parts]
    offsets = list(itertools.accumulate((0,) + tuple(parts[:-1])))
    out = []
    for idx, outer in enumerate(rho_k):
        outer_perm = sym_k.perms[outer]
        image = [0] * n
        for i in range(k):
            base = offsets[outer_perm[i]]
            inner = part_syms[i].perms[rho_parts[i][idx]]
            for t in range(parts[i]):
                image[offsets[i] + t] = base + inner[t]
        out.append(sym_n.index_of(image))
    return tuple(out)


def _assert_homomorphism(group: FiniteGroup, H: Subgroup, n: int, images: Images) -> None:
    small, _ = subgroup_as_group(group, H)
    sym = symmetric_group(n)
    for a in small.elements():
        for b in minimal_generating_set(small):
            assert images[small.mul(a, b)] == sym.mul(images[a], images[b]), (
                f"wreath composite on {list(H.elements)} is not a homomorphism"
            )


def iter_wreath(
    seq: FamilySequence,
    k: int,
    parts: Tuple[int, ...],
    over: Optional[FrozenSet[Subgroup]] = None,
) -> Iterator[Tuple[Subgroup, Images, Tuple[Images, ...], Subgroup]]:
    """Yield (H, rho_k, rho_parts, Gamma) in scan order."""
    global _convention_logged
    if not _convention_logged:
        logger.info("wreath composition requires equal block homomorphisms on each rho_k(H)-orbit")
        _convention_logged = True

    group, n = seq.group, sum(parts)
    sym_k = symmetric_group(k)
    outer = seq.admissible(k)
    for H in sorted(outer, key=Subgroup.sort_key):
        if over is not None and H not in over:
            continue
        inner = [seq.admissible(p).get(H, []) for p in parts]
        for rho_k in outer[H]:
            orbits = _block_orbits([sym_k.perms[x] for x in rho_k], k)
            if any(len({parts[i] for i in orbit}) > 1 for orbit in orbits):
                continue
            choices = [inner[orbit[0]] for orbit in orbits]
            for picked in itertools.product(*choices):
                rho_parts: List[Images] = [()] * k
                for orbit, images in zip(orbits, picked):
                    for i in orbit:
                        rho_parts[i] = images
                images = block_images(parts, rho_k, rho_parts)
                _assert_homomorphism(group, H, n, images)
                yield H, rho_k, tuple(rho_parts), graph_from_images(group, H, n, images)


def _check_composition(seq: FamilySequence, k: int, parts: Tuple[int, ...], n: int) -> None:
    if k < 1 or len(parts) != k or any(p < 0 for p in parts):
        raise ArityError(f"invalid decomposition {list(parts)} with k = {k}")
    if n > seq.max_arity or k > seq.max_arity:
        raise ArityError(f"decomposition {list(parts)} needs arity {max(n, k)} > {seq.max_arity}")


def wreath_compose(
    seq: FamilySequence,
    k: int,
    parts: Sequence[int],
    over: Optional[FrozenSet[Subgroup]] = None,
) -> FrozenSet[Subgroup]:
    parts = tuple(parts)
    _check_composition(seq, k, parts, sum(parts))
    return frozenset(gamma for *_, gamma in iter_wreath(seq, k, parts, over))


def _first_missing(seq: FamilySequence, n: int, parts: Tuple[int, ...], over) -> Optional[Witness]:
    target = seq.families[n]
    for H, rho_k, rho_parts, gamma in iter_wreath(seq, len(parts), parts, over):
        if gamma not in target:
            return Witness(n, parts, H, rho_k, rho_parts, gamma)
    return None


def _require_graphs(seq: FamilySequence) -> None:
    for n in range(seq.max_arity + 1):
        seq.admissible(n)


def replay_witness(seq: FamilySequence, witness: Witness) -> bool:
    """Recompute Gamma from the witness data and confirm it is absent from F_n."""
    images = block_images(witness.parts, witness.rho_k, witness.rho_parts)
    gamma = graph_from_images(seq.group, witness.H, witness.n, images)
    return gamma == witness.gamma and gamma not in seq.families[witness.n]


def is_realizable(
    seq: FamilySequence,
    over: Optional[FrozenSet[Subgroup]] = None,
    threads: Optional[int] = None,
) -> RealizabilityResult:
    """Check every containment in scan order and report the first failure."""
    _require_graphs(seq)
    N = seq.max_arity
    tasks = [(n, parts) for n in range(N + 1) for parts in compositions(n, N)]
    workers = threads if threads is not None else get_settings().threads
    progress = get_settings().progress

    witness = None
    if workers <= 1:
        for n, parts in tqdm(tasks, desc="containments", disable=not progress):
            witness = _first_missing(seq, n, parts, over)
            if witness is not None:
                break
    else:
        found = run_parallel(lambda task: _first_missing(seq, task[0], task[1], over), tasks, workers)
        witness = next((w for w in found if w is not None), None)

    if witness is None:
        logger.info(f"{seq.group.label}, N = {N}: realizable ({len(tasks)} decompositions)")
        return RealizabilityResult(True)
    assert replay_witness(seq, witness), "witness replay does not reproduce a missing subgroup"
    logger.info(
        f"{seq.group.label}, N = {N}: not realizable at n = {witness.n}, parts {list(witness.parts)}"
    )
    return RealizabilityResult(False, witness)


def realizable_closure(seq: FamilySequence, over: Optional[FrozenSet[Subgroup]] = None) -> FamilySequence:
    """Smallest realizable sequence containing seq levelwise."""
    _require_graphs(seq)
    N = seq.max_arity
    current = seq
    rounds = 0
    while True:
        rounds += 1
        additions: Dict[int, set] = {}
        for n in range(N + 1):
            target = current.families[n]
            for parts in compositions(n, N):
                for *_, gamma in iter_wreath(current, len(parts), parts, over):
                    if gamma not in target:
                        additions.setdefault(n, set()).add(gamma)
        if not additions:
            break
        families = list(current.families)
        for n, new in additions.items():
            families[n] = close_family(families[n].ambient, families[n].members | new)
        current = FamilySequence(seq.group, N, tuple(families))
    logger.debug(f"realizable closure reached its fixpoint after {rounds} rounds")
    return current


def validate_n_infinity(seq: FamilySequence, h_family: Optional[FrozenSet[Subgroup]] = None) -> NInfinityReport:
    """Freeness (graph members only) and H x 1 in F_n for H in the family.

    Full mode when h_family is None: every subgroup of G.
    """
    report = NInfinityReport()
    required = h_family if h_family is not None else frozenset(all_subgroups(seq.group))
    for n, family in enumerate(seq.families):
        for member in family.sorted_members():
            if not is_graph_subgroup(seq.group, n, member):
                report.violations.append(Violation(n, "not_free", member))
        for H in sorted(required, key=Subgroup.sort_key):
            gamma = trivial_graph(seq.group, H, n)
            if gamma not in family:
                report.violations.append(Violation(n, "missing_trivial_graph", gamma))
    return report


@dataclass(frozen=True)
class _ClassInfo:
    members: FrozenSet[Subgroup]
    below: FrozenSet[int]  # classes of proper subgroups


def _graph_classes(group: FiniteGroup, n: int) -> List[_ClassInfo]:
    ambient = product_with_symmetric(group, n)
    graphs = [gamma for _, gamma in all_graph_subgroups(group, n)]
    classes: List[FrozenSet[Subgroup]] = []
    index: Dict[Subgroup, int] = {}
    for gamma in sorted(graphs, key=Subgroup.sort_key):
        if gamma in index:
            continue
        orbit = frozenset(conjugates(ambient, gamma))
        for c in orbit:
            index[c] = len(classes)
        classes.append(orbit)
    infos = []
    for i, orbit in enumerate(classes):
        rep = min(orbit, key=Subgroup.sort_key)
        below = frozenset(index[s] for s in subgroups_of(ambient, rep)) - {i}
        infos.append(_ClassInfo(orbit, below))
    return infos


def candidate_families(group: FiniteGroup, n: int, forced: FrozenSet[Subgroup]) -> List[Family]:
    """Every family of graph subgroups of G x Sigma_n containing forced.

    Families are down-sets of the subconjugacy order on graph classes; classes
    come in increasing order so every sub-class is decided first.
    """
    ambient = product_with_symmetric(group, n)
    infos = _graph_classes(group, n)
    must = {i for i, info in enumerate(infos) if info.members & forced}
    out: List[Family] = []

    def extend(i: int, chosen: FrozenSet[int]) -> None:
        if i == len(infos):
            members = frozenset().union(*(infos[c].members for c in chosen)) if chosen else frozenset()
            out.append(Family(ambient, members))
            return
        allowed = infos[i].below <= chosen
        if i in must:
            if allowed:
                extend(i + 1, chosen | {i})
            return
        extend(i + 1, chosen)
        if allowed:
            extend(i + 1, chosen | {i})

    extend(0, frozenset())
    return out


def _containments_by_level(N: int) -> Dict[int, List[Tuple[int, Tuple[int, ...]]]]:
    levels: Dict[int, List[Tuple[int, Tuple[int, ...]]]] = {m: [] for m in range(N + 1)}
    for n in range(N + 1):
        for parts in compositions(n, N):
            levels[max((n, len(parts)) + parts)].append((n, parts))
    return levels


def forced_members(group: FiniteGroup, n: int, h_family: Optional[FrozenSet[Subgroup]]) -> FrozenSet[Subgroup]:
    subgroups = h_family if h_family is not None else all_subgroups(group)
    return frozenset(trivial_graph(group, H, n) for H in subgroups)


def enumerate_realizable(
    group: FiniteGroup,
    max_arity: int,
    h_family: Optional[FrozenSet[Subgroup]] = None,
    threads: Optional[int] = None,
) -> List[FamilySequence]:
    """All realizable N-infinity sequences (H-relative when h_family is given)."""
    check_arity(max_arity)
    N = max_arity
    candidates = [candidate_families(group, n, forced_members(group, n, h_family)) for n in range(N + 1)]
    levels = _containments_by_level(N)
    logger.info(
        f"{group.label}, N = {N}: candidate families per arity {[len(c) for c in candidates]}"
    )
    results: List[FamilySequence] = []
    pruned = 0
    bar = tqdm(desc=f"enumerate {group.label}", unit="seq", disable=not get_settings().progress)

    def passes(prefix: Tuple[Family, ...]) -> bool:
        m = len(prefix) - 1
        partial = FamilySequence(group, m, prefix)
        return all(_first_missing(partial, n, parts, h_family) is None for n, parts in levels[m])

    def search(prefix: Tuple[Family, ...]) -> None:
        nonlocal pruned
        m = len(prefix)
        if m == N + 1:
            results.append(FamilySequence(group, N, prefix))
            bar.update(1)
            return
        branches = [prefix + (family,) for family in candidates[m]]
        verdicts = run_parallel(passes, branches, threads)
        pruned += verdicts.count(False)
        for branch, ok in zip(branches, verdicts):
            if ok:
                search(branch)

    search(())
    bar.close()
    logger.info(f"{group.label}, N = {N}: {len(results)} realizable sequences, {pruned} branches pruned")
    return sorted(results, key=FamilySequence.sort_key)


def sequence_poset(sequences: Sequence[FamilySequence]) -> List[Tuple[int, int]]:
    """Hasse edges (i, j) meaning sequences[i] < sequences[j] levelwise."""
    if sequences:
        first = sequences[0]
        for seq in sequences[1:]:
            if seq.group != first.group or seq.max_arity != first.max_arity:
                raise MixedGroupError("poset inputs must share the group and the maximal arity")
    order = nx.DiGraph()
    order.add_nodes_from(range(len(sequences)))
    for i, a in enumerate(sequences):
        for j, b in enumerate(sequences):
            if i != j and a.families != b.families and all(
                is_subfamily(fa, fb) for fa, fb in zip(a.families, b.families)
            ):
                order.add_edge(i, j)
    hasse = nx.transitive_reduction(order)
    return sorted(hasse.edges())
