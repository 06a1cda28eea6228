"""File formats: group tables, subgroup descriptors, sequence files, witnesses, DOT.

All JSON leaves through ``canonical_json`` so repeated runs are byte-identical.
"""

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, FrozenSet, Iterable, List, Literal, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, ValidationError

from ninfty.engine.families import Family, close_family, is_family
from ninfty.engine.graph_subgroups import check_arity, graph_from_images
from ninfty.engine.group_core import (
    FiniteGroup,
    Subgroup,
    extend_homomorphism,
    make_builtin,
    product_with_symmetric,
    subgroup_as_group,
    subgroup_generated,
    symmetric_group,
)
from ninfty.engine.norms import AuditReport, AuditWitness
from ninfty.engine.realizability import FamilySequence, Witness, validate_n_infinity
from ninfty.utils.config import get_settings
from ninfty.utils.errors import (
    CapExceededError,
    DescriptorError,
    GroupParseError,
    GroupValidationError,
    OutputError,
    SequenceValidationError,
)
from ninfty.utils.logger import logger


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class GroupFile(_Strict):
    label: str
    order: int
    table: List[List[int]]


class ElementList(_Strict):
    elements: List[int]


SubgroupDescriptor = Union[List[int], ElementList]


class PairList(_Strict):
    elements: List[Tuple[int, List[int]]]


class GraphBody(_Strict):
    H: List[int]
    rho: Dict[str, List[int]] = {}


class GraphShorthand(_Strict):
    graph: GraphBody


ProductDescriptor = Union[PairList, GraphShorthand]


class HFamilyMode(_Strict):
    h_family: List[SubgroupDescriptor]


class SequenceFile(_Strict):
    group: str
    max_arity: int
    mode: Union[Literal["n_infinity", "general"], HFamilyMode] = "n_infinity"
    families: List[List[ProductDescriptor]]


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_text(path: Union[str, Path], text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as e:
        raise OutputError(f"cannot write {path}: {e.strerror or e}")


def _read_json(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as e:
        raise DescriptorError(f"cannot read {path}: {e.strerror}")


def _first_error(e: ValidationError) -> str:
    err = e.errors()[0]
    where = ".".join(str(x) for x in err["loc"])
    return f"{where}: {err['msg']}" if where else err["msg"]


# --- groups ---------------------------------------------------------------


def _resolve(spec: str, base_dir: Optional[Path]) -> Optional[Path]:
    path = Path(spec)
    candidates = [path] if path.is_absolute() or base_dir is None else [base_dir / path, path]
    return next((p for p in candidates if p.is_file()), None)


def load_group(spec: str, base_dir: Optional[Path] = None) -> FiniteGroup:
    """A builtin spec (``C4``, ``S3xC2``, ...) or the path of a group JSON file."""
    path = _resolve(spec, base_dir)
    if path is None:
        if spec.endswith(".json") or "/" in spec:
            raise GroupParseError(f"group file {spec} not found")
        return make_builtin(spec)

    try:
        doc = GroupFile.model_validate_json(_read_json(path))
    except ValidationError as e:
        raise GroupValidationError(f"{path}: {_first_error(e)}")
    cap = get_settings().max_order
    if doc.order > cap:
        raise CapExceededError("group order", doc.order, cap)
    if doc.order != len(doc.table) or any(len(row) != doc.order for row in doc.table):
        raise GroupValidationError(f"{path}: table is not {doc.order} x {doc.order}")
    logger.debug(f"loaded group {doc.label} of order {doc.order} from {path}")
    return FiniteGroup(doc.table, doc.label)


# --- subgroup descriptors -------------------------------------------------


def _check_elements(group: FiniteGroup, elements: Iterable[int]) -> List[int]:
    elements = list(elements)
    for g in elements:
        if not 0 <= g < group.order:
            raise DescriptorError(f"element {g} is not in {group.label} (order {group.order})")
    return elements


def parse_subgroup(group: FiniteGroup, descriptor: SubgroupDescriptor) -> Subgroup:
    """Subgroup of G generated by the listed elements."""
    elements = descriptor.elements if isinstance(descriptor, ElementList) else descriptor
    return subgroup_generated(group, _check_elements(group, elements))


def parse_generators(group: FiniteGroup, text: str) -> Subgroup:
    """``"1,2"`` -> <1, 2>; the empty string is the trivial subgroup."""
    text = text.strip()
    try:
        gens = [int(x) for x in text.split(",")] if text else []
    except ValueError:
        raise DescriptorError(f"malformed generator list {text!r}")
    return subgroup_generated(group, _check_elements(group, gens))


def parse_norm(group: FiniteGroup, text: str) -> Tuple[Subgroup, Subgroup]:
    """``H:K`` with comma-separated generator lists."""
    if text.count(":") != 1:
        raise DescriptorError(f"norm {text!r} is not of the form H:K")
    h_text, k_text = text.split(":")
    return parse_generators(group, h_text), parse_generators(group, k_text)


def _sigma_index(n: int, perm: Sequence[int]) -> int:
    if len(perm) != n:
        raise DescriptorError(f"permutation {list(perm)} does not have length {n}")
    try:
        return symmetric_group(n).index_of(perm)
    except GroupValidationError as e:
        raise DescriptorError(e.detail)


def parse_product_descriptor(group: FiniteGroup, n: int, descriptor: ProductDescriptor) -> Subgroup:
    ambient = product_with_symmetric(group, n)
    if isinstance(descriptor, PairList):
        m = ambient.right.order
        _check_elements(group, [g for g, _ in descriptor.elements])
        gens = [g * m + _sigma_index(n, perm) for g, perm in descriptor.elements]
        return subgroup_generated(ambient, gens)

    body = descriptor.graph
    H = subgroup_generated(group, _check_elements(group, body.H))
    try:
        rho = {int(k): v for k, v in body.rho.items()}
    except ValueError:
        raise DescriptorError("rho keys must be element indices")
    for g in rho:
        if g not in H:
            raise DescriptorError(f"rho is given on {g}, which is not in H = {list(H.elements)}")

    small, _ = subgroup_as_group(group, H)
    position = {x: i for i, x in enumerate(H.elements)}
    sym = symmetric_group(n)
    gens = sorted(set(body.H) | set(rho))
    images = [_sigma_index(n, rho[g]) if g in rho else sym.identity for g in gens]
    extended = extend_homomorphism(small, sym, [position[g] for g in gens], images)
    if extended is None:
        raise DescriptorError(f"rho on H = {list(H.elements)} does not extend to a homomorphism")
    return graph_from_images(group, H, n, extended)


def load_h_family(group: FiniteGroup, path: Union[str, Path]) -> FrozenSet[Subgroup]:
    """An h-family file: a JSON list of subgroup descriptors, closed in G."""
    raw = _read_json(Path(path))
    try:
        doc = HFamilyMode.model_validate({"h_family": json.loads(raw)})
    except (ValidationError, json.JSONDecodeError) as e:
        detail = _first_error(e) if isinstance(e, ValidationError) else str(e)
        raise DescriptorError(f"{path}: {detail}")
    return _close_h_family(group, doc.h_family)


def _close_h_family(group: FiniteGroup, descriptors: Sequence[SubgroupDescriptor]) -> FrozenSet[Subgroup]:
    seeds = [parse_subgroup(group, d) for d in descriptors]
    return frozenset(close_family(group, seeds).members)


# --- sequences ------------------------------------------------------------


@dataclass(frozen=True)
class LoadedSequence:
    spec: str
    seq: FamilySequence
    mode: str
    h_family: Optional[FrozenSet[Subgroup]] = None

    @property
    def group(self) -> FiniteGroup:
        return self.seq.group


def _violation_detail(group: FiniteGroup, violation) -> str:
    elements = subgroup_json(group, violation.arity, violation.subgroup)
    if violation.kind == "not_free":
        return f"arity {violation.arity}: member {elements} is not free (meets 1 x S{violation.arity} non-trivially)"
    return f"arity {violation.arity}: trivial graph {elements} is missing"


def check_mode(loaded: LoadedSequence) -> None:
    """N-infinity conditions for n_infinity and h_family modes."""
    if loaded.mode == "general":
        return
    report = validate_n_infinity(loaded.seq, loaded.h_family)
    if not report.ok:
        first = next((v for v in report.violations if v.kind == "not_free"), report.violations[0])
        raise SequenceValidationError(_violation_detail(loaded.group, first))


def load_sequence(path: Union[str, Path], strict: bool = False) -> LoadedSequence:
    """Read a sequence file; levels are closed unless strict, where non-closure is an error."""
    path = Path(path)
    try:
        doc = SequenceFile.model_validate_json(_read_json(path))
    except ValidationError as e:
        raise DescriptorError(f"{path}: {_first_error(e)}")

    check_arity(doc.max_arity)
    if len(doc.families) != doc.max_arity + 1:
        raise SequenceValidationError(
            f"{path}: {len(doc.families)} families given for max arity {doc.max_arity}"
        )
    group = load_group(doc.group, base_dir=path.parent)

    families = []
    for n, level in enumerate(doc.families):
        ambient = product_with_symmetric(group, n)
        members = [parse_product_descriptor(group, n, d) for d in level]
        if strict:
            check = is_family(ambient, members)
            if not check:
                raise SequenceValidationError(
                    f"arity {n}: member {subgroup_json(group, n, check.member)} misses its "
                    f"{check.reason} {subgroup_json(group, n, check.missing)}"
                )
            families.append(Family(ambient, frozenset(members)))
        else:
            families.append(close_family(ambient, members))

    if isinstance(doc.mode, HFamilyMode):
        mode, h_family = "h_family", _close_h_family(group, doc.mode.h_family)
    else:
        mode, h_family = doc.mode, None
    loaded = LoadedSequence(doc.group, FamilySequence(group, doc.max_arity, tuple(families)), mode, h_family)
    check_mode(loaded)
    return loaded


def subgroup_json(group: FiniteGroup, n: int, subgroup: Subgroup) -> List[List[Any]]:
    """[[g, perm], ...] sorted by (g, perm)."""
    sym = symmetric_group(n)
    m = sym.order
    return [[z // m, list(sym.perms[z % m])] for z in subgroup.elements]


def family_json(group: FiniteGroup, n: int, family: Family) -> List[Dict[str, Any]]:
    return [{"elements": subgroup_json(group, n, s)} for s in family.sorted_members()]


def mode_json(mode: str, h_family: Optional[FrozenSet[Subgroup]]) -> Any:
    if mode != "h_family":
        return mode
    return {"h_family": [{"elements": list(H.elements)} for H in sorted(h_family, key=Subgroup.sort_key)]}


def sequence_json(spec: str, seq: FamilySequence, mode: str = "n_infinity", h_family=None) -> Dict[str, Any]:
    return {
        "group": spec,
        "max_arity": seq.max_arity,
        "mode": mode_json(mode, h_family),
        "families": [family_json(seq.group, n, f) for n, f in enumerate(seq.families)],
    }


def sequence_to_indices(seq: FamilySequence) -> List[List[List[int]]]:
    """Compact cache payload: element indices of G x Sigma_n per member."""
    return [[list(s.elements) for s in f.sorted_members()] for f in seq.families]


def sequence_from_indices(group: FiniteGroup, payload: Sequence[Sequence[Sequence[int]]]) -> FamilySequence:
    families = []
    for n, level in enumerate(payload):
        ambient = product_with_symmetric(group, n)
        families.append(Family(ambient, frozenset(Subgroup(ambient, tuple(els)) for els in level)))
    return FamilySequence(group, len(families) - 1, tuple(families))


def sequence_id(seq: FamilySequence) -> str:
    """Stable content hash of the group table and the families."""
    blob = json.dumps(
        {"table": seq.group.fingerprint, "families": sequence_to_indices(seq)},
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def rho_json(H: Subgroup, arity: int, images: Sequence[int]) -> Dict[str, List[int]]:
    sym = symmetric_group(arity)
    return {str(h): list(sym.perms[s]) for h, s in zip(H.elements, images)}


def witness_json(group: FiniteGroup, witness: Witness) -> Dict[str, Any]:
    return {
        "n": witness.n,
        "parts": list(witness.parts),
        "H": list(witness.H.elements),
        "rho_k": rho_json(witness.H, witness.k, witness.rho_k),
        "rho_parts": [rho_json(witness.H, p, imgs) for p, imgs in zip(witness.parts, witness.rho_parts)],
        "gamma": subgroup_json(group, witness.n, witness.gamma),
    }


def _audit_witness_json(group: FiniteGroup, witness: AuditWitness) -> Dict[str, Any]:
    out = {
        "H": list(witness.H.elements),
        "arity": witness.arity,
        "rho": rho_json(witness.H, witness.arity, witness.images),
        "gamma": subgroup_json(group, witness.arity, witness.gamma),
        "inputs": [
            {"H": list(d.H.elements), "arity": d.arity, "rho": rho_json(d.H, d.arity, d.rho.images)}
            for d in witness.inputs
        ],
    }
    if witness.K is not None:
        out["K"] = list(witness.K.elements)
    return out


def audit_json(group: FiniteGroup, report: AuditReport) -> Dict[str, Any]:
    out: Dict[str, Any] = {"passed": report.passed}
    for result in report.results:
        out[result.name] = {
            "passed": result.passed,
            "checked": result.checked,
            "failures": result.failures,
            "skipped": result.skipped,
            "witness": _audit_witness_json(group, result.witness) if result.witness else None,
        }
    return out


def poset_dot(sequences: Sequence[FamilySequence], edges: Sequence[Tuple[int, int]]) -> str:
    """Hasse diagram as DOT; nodes are sequence ids labelled with family sizes."""
    ids = [sequence_id(s) for s in sequences]
    lines = ["digraph nintfy_poset {"]
    for node, seq in zip(ids, sequences):
        sizes = ", ".join(str(len(f)) for f in seq.families)
        lines.append(f'  "{node}" [label="[{sizes}]"];')
    for i, j in edges:
        lines.append(f'  "{ids[i]}" -> "{ids[j]}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
