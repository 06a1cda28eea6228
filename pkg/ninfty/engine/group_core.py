"""Finite groups as Cayley tables, with subgroup and homomorphism enumeration.

Element indices are 0-based everywhere. Conventions for the builtin groups:

* ``C<n>``: element ``i`` is the residue ``i`` mod n.
* ``S<n>``: element ``i`` is the permutation of lexicographic rank ``i`` in
  0-based one-line notation; the product ``a*b`` is the composite ``a o b``
  (apply ``b`` first).
* ``D<n>``: order 2n, element ``j*n + i`` is ``r^i s^j``.
* ``AxB``: element ``(x, y)`` has index ``x*|B| + y``.
"""

import hashlib
import itertools
import math
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ninfty.utils.config import get_settings
from ninfty.utils.errors import (
    AmbientMismatchError,
    CapExceededError,
    GroupParseError,
    GroupValidationError,
)
from ninfty.utils.logger import logger


class FiniteGroup:
    """A finite group given by its Cayley table over element indices."""

    def __init__(self, table, label: str, assoc_cap: Optional[int] = None):
        array = np.asarray(table, dtype=np.int64)
        if array.ndim != 2 or array.shape[0] != array.shape[1] or array.shape[0] == 0:
            raise GroupValidationError(f"{label}: Cayley table must be a non-empty square array")
        self.order = int(array.shape[0])
        self.label = label
        self.identity, inverse = _validate_table(array, label, assoc_cap)
        array.flags.writeable = False
        inverse.flags.writeable = False
        self.table = array
        self.inverse = inverse
        # list mirrors of the tables for the inner loops
        self._rows: List[List[int]] = array.tolist()
        self._inv: List[int] = inverse.tolist()

    def mul(self, a: int, b: int) -> int:
        return self._rows[a][b]

    def inv(self, a: int) -> int:
        return self._inv[a]

    def elements(self) -> range:
        return range(self.order)

    def element_order(self, x: int) -> int:
        n, y = 1, x
        while y != self.identity:
            y = self._rows[y][x]
            n += 1
        return n

    @cached_property
    def fingerprint(self) -> str:
        digest = hashlib.sha256()
        digest.update(str(self.order).encode())
        digest.update(self.table.astype(np.int64).tobytes())
        return digest.hexdigest()

    @cached_property
    def _hash(self) -> int:
        return hash(self.fingerprint)

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return self.order == other.order and self.fingerprint == other.fingerprint

    def __repr__(self) -> str:
        return f"FiniteGroup({self.label!r}, order={self.order})"


def _validate_table(table: np.ndarray, label: str, assoc_cap: Optional[int]) -> Tuple[int, np.ndarray]:
    n = table.shape[0]
    if table.min() < 0 or table.max() >= n:
        raise GroupValidationError(f"{label}: table entries must lie in 0..{n - 1}")
    expected = np.arange(n)
    if not (np.sort(table, axis=1) == expected).all() or not (np.sort(table, axis=0) == expected[:, None]).all():
        raise GroupValidationError(f"{label}: table is not a Latin square")

    identities = [e for e in range(n) if (table[e] == expected).all() and (table[:, e] == expected).all()]
    if not identities:
        raise GroupValidationError(f"{label}: no identity element")
    identity = identities[0]

    # Latin rows guarantee exactly one right inverse per element.
    inverse = np.argmax(table == identity, axis=1)
    if not (table[inverse, expected] == identity).all():
        raise GroupValidationError(f"{label}: left and right inverses disagree")

    cap = assoc_cap if assoc_cap is not None else get_settings().assoc_check_cap
    if n <= cap:
        for a in range(n):
            # (a*b)*c versus a*(b*c) for all b, c
            if not (table[table[a], :] == table[a][table]).all():
                raise GroupValidationError(f"{label}: multiplication is not associative")
    else:
        size = get_settings().assoc_sample_size
        rng = np.random.default_rng(0)
        a, b, c = (rng.integers(0, n, size=size) for _ in range(3))
        if not (table[table[a, b], c] == table[a, table[b, c]]).all():
            raise GroupValidationError(f"{label}: multiplication is not associative (sampled)")
        logger.debug(f"{label}: associativity sampled on {size} triples (order {n} > {cap})")
    return identity, inverse


@dataclass(frozen=True)
class Permutation:
    """A permutation of {0, ..., n-1} in 0-based one-line notation."""

    images: Tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise GroupValidationError(f"not a permutation: {list(self.images)}")

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def compose(self, other: "Permutation") -> "Permutation":
        """self o other: apply other first."""
        return Permutation(tuple(self.images[j] for j in other.images))


class SymmetricGroup(FiniteGroup):
    def __init__(self, degree: int):
        perms = list(itertools.permutations(range(degree)))
        index = {p: i for i, p in enumerate(perms)}
        table = [[index[tuple(a[j] for j in b)] for b in perms] for a in perms]
        super().__init__(table, f"S{degree}")
        self.degree = degree
        self.perms: List[Tuple[int, ...]] = perms
        self._index = index

    def index_of(self, images: Sequence[int]) -> int:
        try:
            return self._index[tuple(images)]
        except KeyError:
            raise GroupValidationError(f"{list(images)} is not an element of S{self.degree}")

    def permutation(self, index: int) -> Permutation:
        return Permutation(self.perms[index])


class ProductGroup(FiniteGroup):
    def __init__(self, left: FiniteGroup, right: FiniteGroup, label: Optional[str] = None):
        n, m = left.order, right.order
        table = (left.table[:, None, :, None] * m + right.table[None, :, None, :]).reshape(n * m, n * m)
        super().__init__(table, label or f"{left.label}x{right.label}")
        self.left = left
        self.right = right

    def pair(self, x: int, y: int) -> int:
        return x * self.right.order + y

    def split(self, z: int) -> Tuple[int, int]:
        return divmod(z, self.right.order)


@dataclass(frozen=True)
class Subgroup:
    """A subgroup in canonical form: a strictly increasing tuple of indices."""

    ambient: FiniteGroup
    elements: Tuple[int, ...]

    @cached_property
    def members(self) -> frozenset:
        return frozenset(self.elements)

    @cached_property
    def _hash(self) -> int:
        return hash((self.ambient, self.elements))

    def __hash__(self) -> int:
        return self._hash

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x: int) -> bool:
        return x in self.members

    def issubgroup(self, other: "Subgroup") -> bool:
        return self.members <= other.members

    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        return (len(self.elements), self.elements)

    def __repr__(self) -> str:
        return f"Subgroup({self.ambient.label}, {list(self.elements)})"


@dataclass(frozen=True)
class Homomorphism:
    """A map of element indices respecting multiplication."""

    source: FiniteGroup
    target: FiniteGroup
    images: Tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.images[x]

    def is_valid(self) -> bool:
        if len(self.images) != self.source.order:
            return False
        if self.images[self.source.identity] != self.target.identity:
            return False
        s, t, img = self.source, self.target, self.images
        return all(
            img[s.mul(a, b)] == t.mul(img[a], img[b])
            for a in s.elements()
            for b in s.elements()
        )

    def compose(self, first: "Homomorphism") -> "Homomorphism":
        """self o first."""
        if first.target != self.source:
            raise AmbientMismatchError("cannot compose homomorphisms with mismatched groups")
        return Homomorphism(first.source, self.target, tuple(self.images[y] for y in first.images))

    @classmethod
    def identity_of(cls, group: FiniteGroup) -> "Homomorphism":
        return cls(group, group, tuple(group.elements()))


_SPEC_TOKEN = re.compile(r"^(?:(C|S|D)(\d+)|K4)$")


def _check_order(order: int, cap: int, what: str = "group order") -> None:
    if order > cap:
        raise CapExceededError(what, order, cap)


def _token_order(token: str) -> int:
    match = _SPEC_TOKEN.match(token)
    if not match:
        raise GroupParseError(f"cannot parse group spec component {token!r}")
    if token == "K4":
        return 4
    kind, n = match.group(1), int(match.group(2))
    if kind == "C":
        if n < 1:
            raise GroupParseError("cyclic group order must be at least 1")
        return n
    if kind == "D":
        if n < 1:
            raise GroupParseError("dihedral group parameter must be at least 1")
        return 2 * n
    return math.factorial(n)


def cyclic_group(n: int) -> FiniteGroup:
    r = np.arange(n)
    return FiniteGroup((r[:, None] + r[None, :]) % n, f"C{n}")


def dihedral_group(n: int) -> FiniteGroup:
    table = np.zeros((2 * n, 2 * n), dtype=np.int64)
    for j1, i1, j2, i2 in itertools.product(range(2), range(n), range(2), range(n)):
        rot = (i1 + (i2 if j1 == 0 else -i2)) % n
        table[j1 * n + i1, j2 * n + i2] = ((j1 + j2) % 2) * n + rot
    return FiniteGroup(table, f"D{n}")


@lru_cache(maxsize=None)
def symmetric_group(n: int) -> SymmetricGroup:
    return SymmetricGroup(n)


def _builtin_token(token: str) -> FiniteGroup:
    if token == "K4":
        c2 = cyclic_group(2)
        return ProductGroup(c2, c2, label="K4")
    kind, n = token[0], int(token[1:])
    if kind == "C":
        return cyclic_group(n)
    if kind == "D":
        return dihedral_group(n)
    return symmetric_group(n)


def make_builtin(spec: str, max_order: Optional[int] = None) -> FiniteGroup:
    """Build a group from ``C<n> | S<n> | D<n> | K4 | <spec>x<spec>``."""
    cap = max_order if max_order is not None else get_settings().max_order
    tokens = spec.strip().split("x")
    if not spec.strip() or any(not t for t in tokens):
        raise GroupParseError(f"malformed group spec {spec!r}")
    orders = [_token_order(t) for t in tokens]
    for order in orders:
        _check_order(order, cap)
    _check_order(math.prod(orders), cap)

    group = _builtin_token(tokens[0])
    for token in tokens[1:]:
        group = direct_product(group, _builtin_token(token), max_order=cap)[0]
    return group


def direct_product(a: FiniteGroup, b: FiniteGroup, max_order: Optional[int] = None):
    """Return (a x b, proj_a, proj_b, incl_a, incl_b)."""
    cap = max_order if max_order is not None else get_settings().max_order
    _check_order(a.order * b.order, cap)
    product = ProductGroup(a, b)
    m = b.order
    proj_a = Homomorphism(product, a, tuple(z // m for z in product.elements()))
    proj_b = Homomorphism(product, b, tuple(z % m for z in product.elements()))
    incl_a = Homomorphism(a, product, tuple(x * m + b.identity for x in a.elements()))
    incl_b = Homomorphism(b, product, tuple(a.identity * m + y for y in b.elements()))
    return product, proj_a, proj_b, incl_a, incl_b


@lru_cache(maxsize=None)
def product_with_symmetric(group: FiniteGroup, n: int) -> ProductGroup:
    """G x Sigma_n with index g * n! + sigma."""
    cap = get_settings().max_order
    _check_order(group.order * math.factorial(n), cap)
    return ProductGroup(group, symmetric_group(n))


def _closure(group: FiniteGroup, seed: Iterable[int], gens: Sequence[int]) -> frozenset:
    rows = group._rows
    els = set(seed)
    els.add(group.identity)
    frontier = list(els)
    while frontier:
        fresh = []
        for x in frontier:
            row = rows[x]
            for g in gens:
                y = row[g]
                if y not in els:
                    els.add(y)
                    fresh.append(y)
        frontier = fresh
    return frozenset(els)


def make_subgroup(group: FiniteGroup, elements: Iterable[int]) -> Subgroup:
    return Subgroup(group, tuple(sorted(set(elements))))


def subgroup_generated(group: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    gens = sorted(set(gens))
    for g in gens:
        if not 0 <= g < group.order:
            raise GroupValidationError(f"element {g} is not in {group.label}")
    return make_subgroup(group, _closure(group, [group.identity], gens))


def trivial_subgroup(group: FiniteGroup) -> Subgroup:
    return Subgroup(group, (group.identity,))


def whole_group(group: FiniteGroup) -> Subgroup:
    return Subgroup(group, tuple(group.elements()))


def is_subgroup(group: FiniteGroup, elements: Iterable[int]) -> bool:
    els = set(elements)
    if group.identity not in els:
        return False
    return all(group.mul(a, group.inv(b)) in els for a in els for b in els)


def all_subgroups(group: FiniteGroup, cap: Optional[int] = None) -> List[Subgroup]:
    """Every subgroup once, sorted by (order, element tuple)."""
    limit = cap if cap is not None else get_settings().subgroup_cap
    if group.order > limit:
        raise CapExceededError("subgroup enumeration for group order", group.order, limit)
    return list(_all_subgroups(group))


@lru_cache(maxsize=256)
def _all_subgroups(group: FiniteGroup) -> Tuple[Subgroup, ...]:
    cyclic: Dict[frozenset, int] = {}
    for x in group.elements():
        cyclic.setdefault(_closure(group, [group.identity], [x]), x)

    # subgroup -> generators that produced it
    found: Dict[frozenset, Tuple[int, ...]] = {els: (x,) for els, x in cyclic.items()}
    frontier = list(found)
    while frontier:
        fresh = []
        for els in frontier:
            gens = found[els]
            for x in cyclic.values():
                if x in els:
                    continue
                joined = _closure(group, els, gens + (x,))
                if joined not in found:
                    found[joined] = gens + (x,)
                    fresh.append(joined)
        frontier = fresh
    subgroups = [make_subgroup(group, els) for els in found]
    subgroups.sort(key=Subgroup.sort_key)
    logger.debug(f"{group.label}: {len(subgroups)} subgroups")
    return tuple(subgroups)


def _require_ambient(group: FiniteGroup, subgroup: Subgroup) -> None:
    if subgroup.ambient != group:
        raise AmbientMismatchError(f"subgroup lives in {subgroup.ambient.label}, not {group.label}")


def conjugate(group: FiniteGroup, subgroup: Subgroup, g: int) -> Subgroup:
    """g S g^-1 in canonical form."""
    _require_ambient(group, subgroup)
    row, inv_g = group._rows[g], group.inv(g)
    rows = group._rows
    return Subgroup(group, tuple(sorted(rows[row[s]][inv_g] for s in subgroup.elements)))


def conjugates(group: FiniteGroup, subgroup: Subgroup) -> List[Subgroup]:
    """The conjugacy class of subgroup, sorted canonically."""
    _require_ambient(group, subgroup)
    orbit = {conjugate(group, subgroup, g) for g in group.elements()}
    return sorted(orbit, key=Subgroup.sort_key)


def subgroup_classes(group: FiniteGroup, cap: Optional[int] = None) -> List[List[int]]:
    """Conjugacy classes of subgroups as lists of indices into all_subgroups."""
    subgroups = all_subgroups(group, cap)
    position = {s: i for i, s in enumerate(subgroups)}
    seen = set()
    classes = []
    for s in subgroups:
        if s in seen:
            continue
        orbit = conjugates(group, s)
        seen.update(orbit)
        classes.append(sorted(position[c] for c in orbit))
    return classes


@lru_cache(maxsize=4096)
def subgroup_as_group(group: FiniteGroup, subgroup: Subgroup) -> Tuple[FiniteGroup, Homomorphism]:
    """The subgroup as a group in its own right, plus the embedding."""
    _require_ambient(group, subgroup)
    els = subgroup.elements
    position = {x: i for i, x in enumerate(els)}
    table = [[position[group.mul(a, b)] for b in els] for a in els]
    small = FiniteGroup(table, f"{group.label}<{len(els)}>")
    return small, Homomorphism(small, group, els)


@lru_cache(maxsize=4096)
def minimal_generating_set(group: FiniteGroup) -> Tuple[int, ...]:
    """Greedy: repeatedly add the element that grows the generated subgroup most."""
    gens: List[int] = []
    current = frozenset([group.identity])
    while len(current) < group.order:
        best, best_size = None, -1
        for x in group.elements():
            if x in current:
                continue
            size = len(_closure(group, current, gens + [x]))
            if size > best_size:
                best, best_size = x, size
        gens.append(best)
        current = _closure(group, current, gens)
    return tuple(gens)


def extend_homomorphism(source: FiniteGroup, target: FiniteGroup, gens: Sequence[int], images: Sequence[int]) -> Optional[Tuple[int, ...]]:
    """Extend generator images to a homomorphism, or None on contradiction."""
    assigned = {source.identity: target.identity}
    srows, trows = source._rows, target._rows
    frontier = [source.identity]
    while frontier:
        fresh = []
        for b in frontier:
            img_b = trows[assigned[b]]
            row = srows[b]
            for g, t in zip(gens, images):
                c, img = row[g], img_b[t]
                known = assigned.get(c)
                if known is None:
                    assigned[c] = img
                    fresh.append(c)
                elif known != img:
                    return None
        frontier = fresh
    return tuple(assigned[x] for x in source.elements())


def homomorphisms(source: FiniteGroup, target: FiniteGroup, cap: Optional[int] = None) -> List[Homomorphism]:
    """All homomorphisms source -> target, sorted by image array."""
    limit = cap if cap is not None else get_settings().subgroup_cap
    if source.order > limit:
        raise CapExceededError("homomorphism source order", source.order, limit)
    return list(_homomorphisms(source, target))


@lru_cache(maxsize=4096)
def _homomorphisms(source: FiniteGroup, target: FiniteGroup) -> Tuple[Homomorphism, ...]:
    gens = minimal_generating_set(source)
    target_orders = [target.element_order(t) for t in target.elements()]
    candidates = [
        [t for t in target.elements() if source.element_order(g) % target_orders[t] == 0]
        for g in gens
    ]
    found = set()
    for choice in itertools.product(*candidates):
        images = extend_homomorphism(source, target, gens, choice)
        if images is not None:
            found.add(images)
    return tuple(Homomorphism(source, target, images) for images in sorted(found))
