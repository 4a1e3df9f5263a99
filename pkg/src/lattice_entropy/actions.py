"""Z^d actions on set lattices by commuting point permutations.

A permutation ``p`` of the ground points (``p[i]`` is the image of ``i``)
acts on lattice elements by preimage, ``x -> p^{-1}(x)``. This is the
opposite action g.x of the representation, so ``(f + g).x == g.(f.x)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from itertools import product
from math import lcm
from typing import Iterable, Sequence

from .lattice import (Cover, Element, FiniteDistributiveLattice, GroundSet,
                      LatticeError, close_family, cover_join, iter_bits)

Perm = tuple  # tuple[int, ...]


def identity_perm(n: int) -> Perm:
    return tuple(range(n))


def compose(p: Perm, q: Perm) -> Perm:
    """``p after q``."""
    return tuple(p[q[i]] for i in range(len(q)))


def invert(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


def perm_power(p: Perm, k: int) -> Perm:
    if k < 0:
        p, k = invert(p), -k
    out = identity_perm(len(p))
    base = p
    while k:
        if k & 1:
            out = compose(base, out)
        base = compose(base, base)
        k >>= 1
    return out


def perm_order(p: Perm) -> int:
    seen, order = set(), 1
    for i in range(len(p)):
        if i in seen:
            continue
        j, n = i, 0
        while j not in seen:
            seen.add(j)
            j = p[j]
            n += 1
        order = lcm(order, n)
    return order


def preimage(p: Perm, e: Element) -> Element:
    out = 0
    for i, j in enumerate(p):
        if e >> j & 1:
            out |= 1 << i
    return out


def image(p: Perm, e: Element) -> Element:
    out = 0
    for i in iter_bits(e):
        out |= 1 << p[i]
    return out


def _memo_preimage(p: Perm):
    cache: dict = {}

    def f(e):
        r = cache.get(e)
        if r is None:
            r = preimage(p, e)
            if len(cache) < 1 << 16:
                cache[e] = r
        return r

    return f


def is_permutation(p: Sequence[int], n: int) -> bool:
    return len(p) == n and sorted(p) == list(range(n))


@dataclass(frozen=True)
class LatticeAutomorphism:
    """Element map induced by a point permutation (forward = preimage)."""

    perm: Perm

    def forward(self, e: Element) -> Element:
        return preimage(self.perm, e)

    def inverse(self, e: Element) -> Element:
        return image(self.perm, e)

    def violations(self, lattice: FiniteDistributiveLattice, m=None, tol=1e-9) -> list[str]:
        out = []
        for e in lattice.elements:
            f = self.forward(e)
            if f not in lattice or self.inverse(e) not in lattice:
                out.append(f"{lattice.labels(e)} is mapped outside the lattice")
            elif m is not None and abs(m(f) - m(e)) > tol:
                out.append(f"m not preserved at {lattice.labels(e)}")
        return out


class GroupAction:
    """Action of Z^d generated by ``len(perms)`` commuting permutations.

    ``boolean`` marks a complemented host: invariant sublattices generated
    under this action are then closed under complement too.
    """

    def __init__(self, n_points: int, perms: Sequence[Perm], boolean: bool = False):
        self.n_points = n_points
        self.perms = tuple(tuple(p) for p in perms)
        self.boolean = boolean
        for p in self.perms:
            if not is_permutation(p, n_points):
                raise LatticeError(f"{p} is not a permutation of {n_points} points")
        for p in self.perms:
            for q in self.perms:
                if compose(p, q) != compose(q, p):
                    raise LatticeError("action generators must commute")
        self.orders = tuple(perm_order(p) for p in self.perms)
        self._perm_cache: dict = {}

    @classmethod
    def trivial(cls, n_points: int, dimension: int = 1, boolean: bool = False) -> "GroupAction":
        return cls(n_points, [identity_perm(n_points)] * dimension, boolean)

    @property
    def dimension(self) -> int:
        return len(self.perms)

    def group_perm(self, g: Sequence[int]) -> Perm:
        if len(g) != self.dimension:
            raise LatticeError(f"group element {g} has wrong dimension {self.dimension}")
        key = tuple(k % o for k, o in zip(g, self.orders))
        hit = self._perm_cache.get(key)
        if hit is None:
            hit = identity_perm(self.n_points)
            for p, k in zip(self.perms, key):
                hit = compose(perm_power(p, k), hit)
            self._perm_cache[key] = hit
        return hit

    def act(self, g: Sequence[int], e: Element) -> Element:
        return preimage(self.group_perm(g), e)

    def automorphisms(self) -> list[LatticeAutomorphism]:
        return [LatticeAutomorphism(p) for p in self.perms]

    def maps(self) -> list:
        """Generator maps and their inverses, as (memoized) element functions."""
        if not hasattr(self, "_maps"):
            self._maps = []
            for p in self.perms:
                self._maps.append(_memo_preimage(p))
                self._maps.append(_memo_preimage(invert(p)))
        return self._maps

    def group_elements(self) -> list[tuple]:
        """Representatives of the finite quotient group Z^d / stabilizer."""
        seen, out = set(), []
        for g in product(*(range(o) for o in self.orders)):
            p = self.group_perm(g)
            if p not in seen:
                seen.add(p)
                out.append(g)
        return out

    def violations(self, lattice: FiniteDistributiveLattice, m=None) -> list[str]:
        out = []
        for a in self.automorphisms():
            out.extend(a.violations(lattice, m))
        return out

    def to_json(self, labels: Sequence[str]) -> dict:
        return {"dimension": self.dimension, "boolean": self.boolean,
                "generators": [{"perm": {labels[i]: labels[p[i]] for i in range(len(p))}}
                               for p in self.perms]}

    @classmethod
    def from_json(cls, data: dict, labels: Sequence[str]) -> "GroupAction":
        index = {lab: i for i, lab in enumerate(labels)}
        perms = []
        for gen in data.get("generators", []):
            mapping = gen["perm"]
            p = list(range(len(labels)))
            for src, dst in mapping.items():
                p[index[src]] = index[dst]
            perms.append(tuple(p))
        dim = data.get("dimension", len(perms) or 1)
        if not perms:
            perms = [identity_perm(len(labels))] * dim
        if len(perms) != dim:
            raise LatticeError(f"dimension {dim} but {len(perms)} generators")
        return cls(len(labels), perms, bool(data.get("boolean", False)))


@dataclass(frozen=True)
class FolnerBox:
    n: int
    d: int = 1

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise ValueError("box side and dimension must be >= 1")

    @property
    def members(self) -> list[tuple]:
        return list(product(range(self.n), repeat=self.d))

    def __len__(self):
        return self.n ** self.d


def translate(F: Iterable[tuple], g: Sequence[int]) -> set:
    return {tuple(a + b for a, b in zip(f, g)) for f in F}


def folner_defect(F: Iterable[tuple], g: Sequence[int]) -> float:
    """|F symmetric-difference (F + g)| / |F|."""
    F = set(F)
    return len(F ^ translate(F, g)) / len(F)


def act_on_cover(action: GroupAction, g: Sequence[int], alpha: Iterable[Element]) -> Cover:
    p = action.group_perm(g)
    return frozenset(preimage(p, a) for a in alpha)


def orbit_join(action: GroupAction, alpha: Iterable[Element], F: Iterable[tuple] | FolnerBox) -> Cover:
    """Join of the translates g.alpha over g in F (empty F gives {top})."""
    members = F.members if isinstance(F, FolnerBox) else list(F)
    top = (1 << action.n_points) - 1
    translates = []
    seen = set()
    for g in members:
        c = act_on_cover(action, g, alpha)
        if c not in seen:
            seen.add(c)
            translates.append(c)
    return reduce(cover_join, translates, frozenset({top}))


def orbit_translates(action: GroupAction, alpha: Iterable[Element]) -> set:
    """All distinct covers g.alpha over the (finite) group."""
    return {act_on_cover(action, g, alpha) for g in action.group_elements()}


@dataclass(frozen=True)
class DynamicalLattice:
    """A measured lattice with localization together with a Z^d action."""

    measured: "MeasuredLattice"
    action: GroupAction

    @property
    def lattice(self) -> FiniteDistributiveLattice:
        return self.measured.lattice

    @property
    def m(self):
        return self.measured.m

    @property
    def omega(self):
        return self.measured.omega


def generate_invariant_sublattice(action: GroupAction, generators: Iterable[Element],
                                  host: FiniteDistributiveLattice | None = None,
                                  boolean: bool | None = None) -> FiniteDistributiveLattice:
    boolean = action.boolean if boolean is None else boolean
    gens = list(generators)
    full = (1 << action.n_points) - 1
    if host is not None:
        for g in gens:
            if g not in host:
                raise LatticeError(f"generator {host.labels(g)} is not in the host lattice")
        if boolean and not host.is_complemented():
            raise LatticeError("boolean closure requested on a non-complemented host")
    fam = close_family(gens, full, action.maps(), boolean)
    if host is not None and host._elements is not None and not fam <= host._elements:
        raise LatticeError("invariant closure leaves the host lattice; is the host invariant?")
    ground = host.ground if host is not None else GroundSet.of_size(action.n_points)
    return FiniteDistributiveLattice(ground, fam, check=False)
