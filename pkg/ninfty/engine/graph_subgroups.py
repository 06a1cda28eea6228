"""Graph subgroups Gamma(H, rho) of G x Sigma_n and the extremal families."""

from dataclasses import dataclass
from enum import Enum
from functools import cached_property, lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ninfty.engine.families import Family
from ninfty.engine.group_core import (
    FiniteGroup,
    Homomorphism,
    Permutation,
    Subgroup,
    all_subgroups,
    homomorphisms,
    product_with_symmetric,
    subgroup_as_group,
    symmetric_group,
)
from ninfty.utils.config import get_settings
from ninfty.utils.errors import AmbientMismatchError, ArityError, CapExceededError, NotAGraphError


class FamilyKind(str, Enum):
    TRIVIAL_GRAPHS = "trivial_graphs"
    ALL_GRAPHS = "all_graphs"
    REZK = "rezk"
    EVERYTHING = "everything"
    H_GRAPHS = "h_graphs"


@dataclass(frozen=True)
class GraphDatum:
    """A subgroup H of G with a homomorphism rho: H -> Sigma_n.

    ``rho`` is defined on ``subgroup_as_group(G, H)``, so ``rho.images[i]``
    is the image of ``H.elements[i]``.
    """

    H: Subgroup
    rho: Homomorphism
    arity: int

    @cached_property
    def _position(self) -> Dict[int, int]:
        return {g: i for i, g in enumerate(self.H.elements)}

    def image(self, g: int) -> int:
        """Sigma_n index of rho(g) for an element g of H (ambient index)."""
        return self.rho.images[self._position[g]]

    def permutation(self, g: int) -> Permutation:
        return symmetric_group(self.arity).permutation(self.image(g))

    def as_mapping(self) -> Dict[int, Tuple[int, ...]]:
        sym = symmetric_group(self.arity)
        return {g: sym.perms[s] for g, s in zip(self.H.elements, self.rho.images)}


def check_arity(n: int) -> None:
    if n < 0:
        raise ArityError(f"arity {n} is negative")
    cap = get_settings().arity_cap
    if n > cap:
        raise CapExceededError("arity", n, cap)


def make_datum(group: FiniteGroup, H: Subgroup, arity: int, images: Sequence[int]) -> GraphDatum:
    small, _ = subgroup_as_group(group, H)
    return GraphDatum(H, Homomorphism(small, symmetric_group(arity), tuple(images)), arity)


def graph_from_images(group: FiniteGroup, H: Subgroup, arity: int, images: Sequence[int]) -> Subgroup:
    """Gamma for rho given by Sigma_n indices aligned with H.elements."""
    ambient = product_with_symmetric(group, arity)
    m = ambient.right.order
    return Subgroup(ambient, tuple(sorted(g * m + s for g, s in zip(H.elements, images))))


def graph_of(group: FiniteGroup, datum: GraphDatum) -> Subgroup:
    if datum.H.ambient != group:
        raise AmbientMismatchError(f"{datum.H} is not a subgroup of {group.label}")
    return graph_from_images(group, datum.H, datum.arity, datum.rho.images)


def trivial_graph(group: FiniteGroup, H: Subgroup, arity: int) -> Subgroup:
    """H x 1 inside G x Sigma_n."""
    identity = symmetric_group(arity).identity
    return graph_from_images(group, H, arity, [identity] * len(H))


def _check_product(group: FiniteGroup, n: int, S: Subgroup) -> int:
    ambient = product_with_symmetric(group, n)
    if S.ambient != ambient:
        raise AmbientMismatchError(f"{S} is not a subgroup of {ambient.label}")
    return ambient.right.order


def is_graph_subgroup(group: FiniteGroup, n: int, S: Subgroup) -> bool:
    """True iff S meets 1 x Sigma_n trivially (projection to G is injective)."""
    m = _check_product(group, n, S)
    return len({z // m for z in S.elements}) == len(S)


def decompose_graph(group: FiniteGroup, n: int, S: Subgroup) -> GraphDatum:
    if not is_graph_subgroup(group, n, S):
        raise NotAGraphError(f"{S} meets 1 x S{n} non-trivially")
    m = product_with_symmetric(group, n).right.order
    pairs = sorted(divmod(z, m) for z in S.elements)
    H = Subgroup(group, tuple(g for g, _ in pairs))
    return make_datum(group, H, n, [s for _, s in pairs])


def all_graph_subgroups(group: FiniteGroup, n: int) -> List[Tuple[GraphDatum, Subgroup]]:
    """One (datum, Gamma) per graph subgroup, H in canonical order then rho."""
    check_arity(n)
    return list(_all_graph_subgroups(group, n))


@lru_cache(maxsize=256)
def _all_graph_subgroups(group: FiniteGroup, n: int) -> Tuple[Tuple[GraphDatum, Subgroup], ...]:
    sym = symmetric_group(n)
    out = []
    for H in all_subgroups(group):
        small, _ = subgroup_as_group(group, H)
        for rho in homomorphisms(small, sym):
            datum = GraphDatum(H, rho, n)
            out.append((datum, graph_of(group, datum)))
    return tuple(out)


def extremal_family(
    group: FiniteGroup,
    n: int,
    kind: FamilyKind,
    h_family: Optional[Iterable[Subgroup]] = None,
) -> Family:
    """The constant families: trivial graphs, complete, Rezk, everything, H-graphs.

    ``h_family`` restricts ``trivial_graphs`` and selects the subgroups for
    ``h_graphs``; ``trivial_graphs`` without it uses every subgroup of G.
    """
    check_arity(n)
    kind = FamilyKind(kind)
    ambient = product_with_symmetric(group, n)
    allowed = set(h_family) if h_family is not None else set(all_subgroups(group))
    if kind is FamilyKind.TRIVIAL_GRAPHS:
        members = {trivial_graph(group, H, n) for H in allowed}
    elif kind is FamilyKind.ALL_GRAPHS:
        members = {gamma for _, gamma in all_graph_subgroups(group, n)}
    elif kind is FamilyKind.H_GRAPHS:
        if h_family is None:
            raise ValueError("h_graphs needs a family of subgroups of G")
        members = {gamma for datum, gamma in all_graph_subgroups(group, n) if datum.H in allowed}
    elif kind is FamilyKind.REZK:
        sym = symmetric_group(n)
        m = sym.order
        members = {
            Subgroup(ambient, tuple(group.identity * m + k for k in K.elements))
            for K in all_subgroups(sym)
        }
    else:
        members = set(all_subgroups(ambient))
    return Family(ambient, frozenset(members))
