"""Finite distributive lattices realized as rings of sets.

Every finite distributive lattice embeds into a powerset (Birkhoff), so a
lattice here is a family of subsets of a labelled ground set that is closed
under union and intersection. Elements are plain ``int`` bitmasks: bit ``i``
is set iff ground point ``i`` belongs to the element. Covers are
``frozenset``s of such masks.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from itertools import combinations
from typing import Iterable, Iterator, Sequence

Element = int
Cover = frozenset  # frozenset[Element]

# Materializing a powerset is refused above this many ground points.
MAX_MATERIALIZED_POINTS = 20


class LatticeError(ValueError):
    """Structural error: bad ground set, non-closed family, foreign element."""


def popcount(e: Element) -> int:
    return bin(e).count("1")


def iter_bits(e: Element) -> Iterator[int]:
    while e:
        low = e & -e
        yield low.bit_length() - 1
        e ^= low


def element_key(e: Element) -> tuple:
    """Canonical sort key: by size, then by sorted point indices."""
    return (popcount(e), tuple(iter_bits(e)))


@dataclass(frozen=True)
class GroundSet:
    points: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(str(p) for p in self.points))
        if not self.points:
            raise LatticeError("ground set must be nonempty")
        if len(set(self.points)) != len(self.points):
            raise LatticeError(f"ground labels must be distinct: {self.points}")

    @classmethod
    def of_size(cls, n: int) -> "GroundSet":
        return cls(tuple(str(i) for i in range(n)))

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def full(self) -> Element:
        return (1 << len(self.points)) - 1

    def index(self, label: str) -> int:
        try:
            return self.points.index(str(label))
        except ValueError:
            raise LatticeError(f"unknown point label {label!r}") from None

    def element(self, labels: Iterable[str]) -> Element:
        e = 0
        for lab in labels:
            e |= 1 << self.index(lab)
        return e

    def labels(self, e: Element) -> list[str]:
        return [self.points[i] for i in iter_bits(e)]

    def check(self, e: Element) -> Element:
        if e < 0 or e >> len(self.points):
            raise LatticeError(f"element {e:#b} is not a subset of a {self.size}-point ground set")
        return e


def meet(a: Element, b: Element) -> Element:
    return a & b


def join(a: Element, b: Element) -> Element:
    return a | b


def close_family(seeds: Iterable[Element], full: Element, maps: Sequence = (),
                 complement: bool = False) -> frozenset:
    """Smallest family containing ``seeds``, 0 and ``full`` that is closed
    under meet, join, every callable in ``maps`` and (optionally) complement.

    The maps must be lattice automorphisms, so closing the seeds under them
    first is enough. The lattice generated by a set S is then the family of
    joins of meets of S; with complements it is every union of atoms of the
    partition cut out by S.
    """
    orbit = set(seeds)
    todo = list(orbit)
    while todo and maps:
        x = todo.pop()
        for f in maps:
            y = f(x)
            if y not in orbit:
                orbit.add(y)
                todo.append(y)
    if complement:
        atoms = [full]
        for s in orbit:
            atoms = [c for p in atoms for c in (p & s, p & ~s) if c]
        found = {0}
        for a in atoms:
            found |= {f | a for f in found}
        return frozenset(found)
    meets = {full}
    for s in orbit:
        meets |= {m & s for m in meets}
    found = {0}
    for m in meets:
        if m not in found:
            found |= {f | m for f in found}
    return frozenset(found)


class FiniteDistributiveLattice:
    """A 0-1 sublattice of the powerset of ``ground``.

    ``elements=None`` stands for the whole powerset, which is then never
    materialized unless asked for; windowed shift lattices with thousands of
    atoms rely on this.
    """

    __slots__ = ("ground", "_elements", "_sorted", "_hash")

    def __init__(self, ground: GroundSet, elements: Iterable[Element] | None = None,
                 check: bool = True):
        self.ground = ground
        self._sorted = None
        self._hash = None
        if elements is None:
            self._elements = None
            return
        els = frozenset(elements)
        if check:
            full = ground.full
            for e in els:
                ground.check(e)
            if 0 not in els or full not in els:
                raise LatticeError("lattice must contain bottom (empty set) and top (ground set)")
            for a in els:
                for b in els:
                    if a & b not in els or a | b not in els:
                        raise LatticeError(
                            f"family not closed: {ground.labels(a)} and {ground.labels(b)}")
        self._elements = els

    @classmethod
    def powerset(cls, ground: GroundSet) -> "FiniteDistributiveLattice":
        return cls(ground, None)

    @classmethod
    def trivial(cls, ground: GroundSet) -> "FiniteDistributiveLattice":
        return cls(ground, (0, ground.full), check=False)

    @classmethod
    def from_labels(cls, ground: Sequence[str], elements: Iterable[Iterable[str]]):
        g = ground if isinstance(ground, GroundSet) else GroundSet(tuple(ground))
        return cls(g, [g.element(e) for e in elements])

    @property
    def bottom(self) -> Element:
        return 0

    @property
    def top(self) -> Element:
        return self.ground.full

    @property
    def is_powerset(self) -> bool:
        return self._elements is None or len(self._elements) == 1 << self.ground.size

    @property
    def elements(self) -> tuple[Element, ...]:
        """All elements in canonical order."""
        if self._sorted is None:
            if self._elements is None:
                if self.ground.size > MAX_MATERIALIZED_POINTS:
                    raise LatticeError(
                        f"refusing to materialize the powerset of {self.ground.size} points")
                self._elements = frozenset(range(1 << self.ground.size))
            self._sorted = tuple(sorted(self._elements, key=element_key))
        return self._sorted

    @property
    def materializable(self) -> bool:
        return self._elements is not None or self.ground.size <= MAX_MATERIALIZED_POINTS

    def element_set(self) -> frozenset:
        if self._elements is None:
            self.elements
        return self._elements

    def nonbottom(self) -> tuple[Element, ...]:
        return self.elements[1:]

    def __contains__(self, e: Element) -> bool:
        if self._elements is None:
            return 0 <= e <= self.ground.full
        return e in self._elements

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        if self._elements is None:
            return 1 << self.ground.size
        return len(self._elements)

    def __eq__(self, other):
        if not isinstance(other, FiniteDistributiveLattice):
            return NotImplemented
        if self.ground != other.ground:
            return False
        if self._elements is None or other._elements is None:
            return self.is_powerset and other.is_powerset
        return self._elements == other._elements

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ground, self.element_set()))
        return self._hash

    def __repr__(self):
        if self._elements is None:
            return f"FiniteDistributiveLattice(powerset of {self.ground.size} points)"
        shown = ["{" + ",".join(self.ground.labels(e)) + "}" for e in self.elements]
        return f"FiniteDistributiveLattice({', '.join(shown)})"

    def issubset(self, other: "FiniteDistributiveLattice") -> bool:
        if other._elements is None:
            return True
        return self.element_set() <= other.element_set()

    def is_complemented(self) -> bool:
        if self._elements is None:
            return True
        full = self.top
        return all(full ^ e in self._elements for e in self._elements)

    def atoms(self) -> tuple[Element, ...]:
        """Minimal nonbottom elements."""
        if self._elements is None:
            return tuple(1 << i for i in range(self.ground.size))
        nb = self.nonbottom()
        return tuple(a for a in nb if not any(b != a and b & a == b for b in nb))

    def meet(self, a: Element, b: Element) -> Element:
        self._require(a, b)
        return a & b

    def join(self, a: Element, b: Element) -> Element:
        self._require(a, b)
        return a | b

    def _require(self, *es):
        for e in es:
            if e not in self:
                raise LatticeError(f"element {e:#b} is not in this lattice")

    def labels(self, e: Element) -> list[str]:
        return self.ground.labels(e)

    def to_json(self) -> dict:
        return {"ground": list(self.ground.points),
                "elements": [self.labels(e) for e in self.elements]}

    @classmethod
    def from_json(cls, data: dict) -> "FiniteDistributiveLattice":
        try:
            ground = GroundSet(tuple(data["ground"]))
            elements = data["elements"]
        except (KeyError, TypeError) as exc:
            raise LatticeError(f"lattice JSON needs 'ground' and 'elements': {exc}") from None
        if ground.size == 0:
            raise LatticeError("0 != 1 requires a nonempty ground set")
        return cls(ground, [ground.element(e) for e in elements])


def generate_sublattice(host: FiniteDistributiveLattice, generators: Iterable[Element]):
    gens = list(generators)
    for g in gens:
        if g not in host:
            raise LatticeError(f"generator {host.labels(g)} is not in the host lattice")
    return FiniteDistributiveLattice(host.ground, close_family(gens, host.top), check=False)


def intersect_lattices(lattices: Sequence[FiniteDistributiveLattice]) -> FiniteDistributiveLattice:
    if not lattices:
        raise LatticeError("cannot intersect an empty list of lattices")
    ground = lattices[0].ground
    if any(L.ground != ground for L in lattices):
        raise LatticeError("lattices live on different ground sets")
    explicit = [L.element_set() for L in lattices if L._elements is not None]
    if not explicit:
        return FiniteDistributiveLattice.powerset(ground)
    return FiniteDistributiveLattice(ground, reduce(frozenset.intersection, explicit), check=False)


# -- covers ------------------------------------------------------------------

def is_cover(host: FiniteDistributiveLattice, members: Iterable[Element]) -> bool:
    members = list(members)
    if not members or any(m not in host for m in members):
        return False
    return reduce(int.__or__, members, 0) == host.top


def make_cover(host: FiniteDistributiveLattice, members: Iterable[Element]) -> Cover:
    members = frozenset(members)
    if not members:
        raise LatticeError("a cover must be nonempty")
    for m in members:
        if m not in host:
            raise LatticeError(f"cover member {host.labels(m)} is not in the lattice")
    if reduce(int.__or__, members, 0) != host.top:
        raise LatticeError("members do not join to top")
    return frozenset(members)


def refines(beta: Iterable[Element], alpha: Iterable[Element]) -> bool:
    """``beta`` refines ``alpha``: every member of beta lies in some member of alpha."""
    alpha = tuple(alpha)
    return all(any(b & a == b for a in alpha) for b in beta)


def equivalent(alpha, beta) -> bool:
    return refines(alpha, beta) and refines(beta, alpha)


def cover_join(alpha: Iterable[Element], beta: Iterable[Element]) -> Cover:
    """All pairwise meets. Bottom is dropped whenever something else remains."""
    beta = tuple(beta)
    out = {a & b for a in alpha for b in beta}
    if len(out) > 1:
        out.discard(0)
    return frozenset(out)


def join_all(covers: Iterable[Iterable[Element]], top: Element) -> Cover:
    return reduce(cover_join, covers, frozenset({top}))


def maximal(cover: Iterable[Element]) -> Cover:
    """Antichain of maximal members; equivalent to ``cover`` under refinement."""
    cover = set(cover)
    return frozenset(a for a in cover if not any(b != a and a & b == a for b in cover))


def is_partition(cover: Iterable[Element]) -> bool:
    seen = 0
    for a in cover:
        if seen & a:
            return False
        seen |= a
    return True


def format_cover(ground: GroundSet, cover: Iterable[Element]) -> str:
    parts = ["{" + ",".join(ground.labels(e)) + "}" for e in sorted(cover, key=element_key)]
    return "{" + ", ".join(parts) + "}"


def subsets_upto(items: Sequence, k: int):
    for r in range(1, min(k, len(items)) + 1):
        yield from combinations(items, r)
