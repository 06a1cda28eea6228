"""Norms N_K^H, admissible H-sets and the indexing-system closure audits."""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from ninfty.engine.families import close_family
from ninfty.engine.graph_subgroups import GraphDatum, graph_from_images, make_datum, trivial_graph
from ninfty.engine.group_core import (
    FiniteGroup,
    Homomorphism,
    Subgroup,
    all_subgroups,
    product_with_symmetric,
    subgroup_as_group,
    symmetric_group,
)
from ninfty.engine.realizability import (
    FamilySequence,
    Images,
    block_images,
    realizable_closure,
)
from ninfty.utils.errors import ArityError, NotASubgroupChainError
from ninfty.utils.logger import logger


@dataclass(frozen=True)
class NormSpec:
    """Pairs (H, K) with K <= H <= G, one per requested norm N_K^H."""

    pairs: Tuple[Tuple[Subgroup, Subgroup], ...]

    def __post_init__(self):
        for H, K in self.pairs:
            if not K.issubgroup(H):
                raise NotASubgroupChainError(f"{list(K.elements)} is not contained in {list(H.elements)}")


@dataclass(frozen=True)
class AdmissibleSet:
    H: Subgroup
    arity: int
    rho: Homomorphism


def _cosets(group: FiniteGroup, H: Subgroup, K: Subgroup) -> List[Tuple[int, ...]]:
    """Left cosets hK inside H, ordered by their minimal element."""
    if H.ambient != group or K.ambient != group or not K.issubgroup(H):
        raise NotASubgroupChainError(f"{list(K.elements)} <= {list(H.elements)} is not a subgroup chain in {group.label}")
    seen = set()
    cosets = []
    for h in H.elements:
        if h in seen:
            continue
        coset = tuple(sorted(group.mul(h, k) for k in K.elements))
        seen.update(coset)
        cosets.append(coset)
    return sorted(cosets)


def _coset_images(group: FiniteGroup, H: Subgroup, cosets: List[Tuple[int, ...]]) -> Images:
    where = {x: i for i, coset in enumerate(cosets) for x in coset}
    sym = symmetric_group(len(cosets))
    return tuple(
        sym.index_of([where[group.mul(h, coset[0])] for coset in cosets])
        for h in H.elements
    )


def coset_action(group: FiniteGroup, H: Subgroup, K: Subgroup) -> Tuple[int, Homomorphism]:
    """The H-set H/K: n = [H:K] and rho(h) permuting cosets by left multiplication."""
    cosets = _cosets(group, H, K)
    n = len(cosets)
    small, _ = subgroup_as_group(group, H)
    return n, Homomorphism(small, symmetric_group(n), _coset_images(group, H, cosets))


def norms_to_sequence(group: FiniteGroup, spec: NormSpec, max_arity: int) -> FamilySequence:
    """Smallest realizable N-infinity sequence admitting every norm in spec."""
    seeds: Dict[int, set] = {
        n: {trivial_graph(group, H, n) for H in all_subgroups(group)} for n in range(max_arity + 1)
    }
    for H, K in spec.pairs:
        n, rho = coset_action(group, H, K)
        if n > max_arity:
            raise ArityError(
                f"norm from {list(K.elements)} to {list(H.elements)} needs arity {n} > max arity {max_arity}"
            )
        seeds[n].add(graph_from_images(group, H, n, rho.images))
    families = tuple(
        close_family(product_with_symmetric(group, n), seeds[n]) for n in range(max_arity + 1)
    )
    return realizable_closure(FamilySequence(group, max_arity, families))


def admissible_sets(seq: FamilySequence, H: Subgroup) -> List[AdmissibleSet]:
    small, _ = subgroup_as_group(seq.group, H)
    out = []
    for n in range(seq.max_arity + 1):
        for images in seq.admissible(n).get(H, []):
            out.append(AdmissibleSet(H, n, Homomorphism(small, symmetric_group(n), images)))
    return out


@dataclass(frozen=True)
class AuditWitness:
    """A composite H-set whose graph is missing from F_arity."""

    H: Subgroup
    arity: int
    images: Images
    gamma: Subgroup
    inputs: Tuple[GraphDatum, ...]
    K: Optional[Subgroup] = None


@dataclass
class AuditResult:
    name: str
    checked: int = 0
    failures: int = 0
    skipped: int = 0
    witness: Optional[AuditWitness] = None

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def record(self, seq: FamilySequence, H: Subgroup, arity: int, images: Images, inputs, K=None) -> None:
        self.checked += 1
        gamma = graph_from_images(seq.group, H, arity, images)
        if gamma not in seq.families[arity]:
            self.failures += 1
            if self.witness is None:
                self.witness = AuditWitness(H, arity, images, gamma, tuple(inputs), K)


@dataclass
class AuditReport:
    coproduct: AuditResult = field(default_factory=lambda: AuditResult("coproduct"))
    product: AuditResult = field(default_factory=lambda: AuditResult("product"))
    self_induction: AuditResult = field(default_factory=lambda: AuditResult("self_induction"))

    @property
    def results(self) -> List[AuditResult]:
        return [self.coproduct, self.product, self.self_induction]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)


def induced_images(
    group: FiniteGroup,
    H: Subgroup,
    K: Subgroup,
    tau: Images,
    q: int,
    representatives: str = "min",
) -> Images:
    """The H-set H x_K T for a K-set T given by tau: K -> Sigma_q.

    With representatives r_i of H/K and h r_i = r_j kappa, rho(h) sends
    (block i, t) to (block j, tau(kappa)(t)).
    """
    cosets = _cosets(group, H, K)
    k = len(cosets)
    reps = [min(c) if representatives == "min" else max(c) for c in cosets]
    where = {x: i for i, coset in enumerate(cosets) for x in coset}
    position = {x: i for i, x in enumerate(K.elements)}
    sym_q, sym_n = symmetric_group(q), symmetric_group(k * q)
    out = []
    for h in H.elements:
        image = [0] * (k * q)
        for i, r in enumerate(reps):
            hr = group.mul(h, r)
            j = where[hr]
            kappa = group.mul(group.inv(reps[j]), hr)
            inner = sym_q.perms[tau[position[kappa]]]
            for t in range(q):
                image[i * q + t] = j * q + inner[t]
        out.append(sym_n.index_of(image))
    return tuple(out)


def audit_closure_properties(seq: FamilySequence, representatives: str = "min") -> AuditReport:
    """Coproduct, product and self-induction closure of the admissible sets.

    Composite arities beyond N are counted as skipped, never as failures.
    """
    group, N = seq.group, seq.max_arity
    report = AuditReport()
    subgroups = all_subgroups(group)
    identity2 = symmetric_group(2).identity

    for H in subgroups:
        adm = [seq.admissible(n).get(H, []) for n in range(N + 1)]
        for a in range(N + 1):
            for b in range(N + 1):
                if not adm[a] or not adm[b]:
                    continue
                if a + b > N:
                    report.coproduct.skipped += len(adm[a]) * len(adm[b])
                    continue
                for rho_a in adm[a]:
                    for rho_b in adm[b]:
                        images = block_images((a, b), (identity2,) * len(H), (rho_a, rho_b))
                        inputs = (make_datum(group, H, a, rho_a), make_datum(group, H, b, rho_b))
                        report.coproduct.record(seq, H, a + b, images, inputs)

        for k in range(1, N + 1):
            for q in range(N + 1):
                if not adm[k] or not adm[q]:
                    continue
                if k * q > N:
                    report.product.skipped += len(adm[k]) * len(adm[q])
                    continue
                for rho_k in adm[k]:
                    for tau in adm[q]:
                        images = block_images((q,) * k, rho_k, (tau,) * k)
                        inputs = (make_datum(group, H, k, rho_k), make_datum(group, H, q, tau))
                        report.product.record(seq, H, k * q, images, inputs)

        for K in subgroups:
            if K == H or not K.issubgroup(H):
                continue
            k, rho = coset_action(group, H, K)
            adm_k = [seq.admissible(n).get(K, []) for n in range(N + 1)]
            if k > N:
                report.self_induction.skipped += sum(len(t) for t in adm_k)
                continue
            if rho.images not in adm[k]:
                continue
            for q in range(N + 1):
                for tau in adm_k[q]:
                    if k * q > N:
                        report.self_induction.skipped += 1
                        continue
                    images = induced_images(group, H, K, tau, q, representatives)
                    inputs = (make_datum(group, H, k, rho.images), make_datum(group, K, q, tau))
                    report.self_induction.record(seq, H, k * q, images, inputs, K)

    for result in report.results:
        if result.skipped:
            logger.warning(f"{result.name} audit: {result.skipped} instances beyond arity {N} skipped")
        if result.failures:
            logger.info(f"{result.name} audit: {result.failures} of {result.checked} instances fail")
    return report
