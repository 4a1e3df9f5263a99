"""Measurement functions, localization functions and morphisms of measured
lattices with localization."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterator, Mapping, Sequence

from .lattice import (Cover, Element, FiniteDistributiveLattice, LatticeError,
                      close_family, element_key, format_cover, iter_bits)

MASS_TOL = 1e-9


# -- measurement functions -----------------------------------------------------

class PointMeasure:
    """Additive measure given by nonnegative weights on ground points."""

    additive = True
    indicator = False

    def __init__(self, weights: Sequence):
        self.weights = tuple(weights)
        if any(w < 0 for w in self.weights):
            raise LatticeError("point weights must be nonnegative")
        self._cache: dict = {}

    def __call__(self, e: Element):
        if e in self._cache:
            return self._cache[e]
        w = self.weights
        if e & (e - 1) == 0:
            v = w[e.bit_length() - 1] if e else 0
        else:
            v = sum(w[i] for i in iter_bits(e))
        if len(self._cache) < 1 << 16:
            self._cache[e] = v
        return v

    def __repr__(self):
        return f"PointMeasure({list(self.weights)})"


class NonemptyIndicator:
    """m(a) = 1 for a nonempty, 0 for the empty set."""

    additive = False
    indicator = True

    def __call__(self, e: Element):
        return 1 if e else 0

    def __repr__(self):
        return "NonemptyIndicator()"


class TabulatedMeasurement:
    """Arbitrary table of values; elements missing from the table raise."""

    additive = False
    indicator = False

    def __init__(self, values: Mapping[Element, float]):
        self.values = dict(values)

    def __call__(self, e: Element):
        try:
            return self.values[e]
        except KeyError:
            raise LatticeError(f"measurement undefined on element {e:#b}") from None

    def __repr__(self):
        return f"TabulatedMeasurement({len(self.values)} values)"


@dataclass(frozen=True)
class Violation:
    axiom: str
    elements: tuple
    detail: str

    def __str__(self):
        return f"{self.axiom}: {self.detail}"


def check_measurement_axioms(V: FiniteDistributiveLattice, m, tol: float = MASS_TOL) -> list[Violation]:
    """Axiom (a): m(0) = 0 and m(1) != 0. Axiom (b): m(a) = 0 implies
    m(a v b) = m(b) for every b."""
    out = []
    lab = V.labels
    if abs(m(V.bottom)) > tol:
        out.append(Violation("axiom (a)", (V.bottom,), f"m(bottom) = {m(V.bottom)} != 0"))
    if abs(m(V.top)) <= tol:
        out.append(Violation("axiom (a)", (V.top,), "m(top) = 0"))
    for e in V.elements:
        if m(e) < -tol:
            out.append(Violation("nonnegativity", (e,), f"m({lab(e)}) = {m(e)} < 0"))
    null = [a for a in V.elements if abs(m(a)) <= tol]
    for a in null:
        for b in V.elements:
            if abs(m(a | b) - m(b)) > tol:
                out.append(Violation(
                    "axiom (b)", (a, b),
                    f"m({lab(a)}) = 0 but m({lab(a | b)}) = {m(a | b)} != m({lab(b)}) = {m(b)}"))
    return out


# -- localization ----------------------------------------------------------------

class GeneratedLocalization:
    """Omega(alpha) = smallest sublattice of ``host`` containing alpha, closed
    under the lattice automorphisms in ``maps`` (both directions) and, if
    ``complement``, under complement."""

    def __init__(self, host: FiniteDistributiveLattice, maps: Sequence[Callable] = (),
                 complement: bool = False):
        if complement and not host.is_complemented():
            raise LatticeError("complement-closed localization needs a boolean host")
        self.host = host
        self.maps = tuple(maps)
        self.complement = complement
        self._cache: dict = {}

    def __call__(self, alpha) -> FiniteDistributiveLattice:
        key = frozenset(alpha)
        hit = self._cache.get(key)
        if hit is None:
            fam = close_family(key, self.host.top, self.maps, self.complement)
            if self.host._elements is not None and not fam <= self.host._elements:
                raise LatticeError("generated sublattice leaves the host lattice")
            hit = FiniteDistributiveLattice(self.host.ground, fam, check=False)
            self._cache[key] = hit
        return hit

    @property
    def name(self) -> str:
        return "generated-subalgebra" if self.complement else "generated-topology"

    def __repr__(self):
        return f"GeneratedLocalization({self.name}, {len(self.maps)} maps)"


class TabulatedLocalization:
    """Hand-built Omega; covers missing from the table fall back to the host."""

    def __init__(self, host: FiniteDistributiveLattice, table: Mapping[Cover, FiniteDistributiveLattice]):
        self.host = host
        self.table = {frozenset(k): v for k, v in table.items()}

    def __call__(self, alpha) -> FiniteDistributiveLattice:
        return self.table.get(frozenset(alpha), self.host)

    name = "tabulated"


class AmbientLocalization:
    """Omega(alpha) = the whole host lattice (no localization)."""

    def __init__(self, host: FiniteDistributiveLattice):
        self.host = host

    def __call__(self, alpha) -> FiniteDistributiveLattice:
        return self.host

    name = "ambient"


@dataclass(frozen=True)
class MeasuredLattice:
    lattice: FiniteDistributiveLattice
    m: object
    omega: Callable = None

    def __post_init__(self):
        if self.omega is None:
            object.__setattr__(self, "omega", AmbientLocalization(self.lattice))

    def validate(self) -> list[Violation]:
        return check_measurement_axioms(self.lattice, self.m)


def is_local_sublattice(host: MeasuredLattice, W: FiniteDistributiveLattice) -> bool:
    if not W.issubset(host.lattice):
        raise LatticeError("W is not a sublattice of the host")
    for alpha in enumerate_covers(W, len(W)):
        if not host.omega(alpha).issubset(W):
            return False
    return True


# -- cover enumeration -----------------------------------------------------------

def enumerate_covers(V: FiniteDistributiveLattice, max_size: int) -> Iterator[Cover]:
    """Every cover of V without the bottom element and with at most
    ``max_size`` members, by size, then lexicographically in canonical order."""
    if max_size < 1:
        raise ValueError("max_size must be >= 1")
    els = V.nonbottom()
    top = V.top
    for r in range(1, min(max_size, len(els)) + 1):
        for combo in combinations(els, r):
            u = 0
            for e in combo:
                u |= e
            if u == top:
                yield frozenset(combo)


def antichain_covers(V: FiniteDistributiveLattice, max_size: int | None = None) -> list[Cover]:
    """Covers of V whose members are pairwise incomparable (no bottom)."""
    els = V.nonbottom()
    top = V.top
    limit = len(els) if max_size is None else max_size
    out = []

    def rec(start, chosen, union):
        if union == top:
            out.append(frozenset(chosen))
        if len(chosen) == limit:
            return
        for j in range(start, len(els)):
            e = els[j]
            if all(e & c != e and e & c != c for c in chosen):
                chosen.append(e)
                rec(j + 1, chosen, union | e)
                chosen.pop()

    rec(0, [], 0)
    return out


# -- morphisms -------------------------------------------------------------------

@dataclass
class LatticeMorphism:
    """Morphism ``source -> target`` recorded as the lattice embedding
    target.lattice -> source.lattice (note the opposite direction)."""

    source: MeasuredLattice
    target: MeasuredLattice
    embedding: dict = field(default_factory=dict)

    def __call__(self, e: Element) -> Element:
        return self.embedding[e]

    def image_cover(self, alpha) -> Cover:
        return frozenset(self.embedding[a] for a in alpha)

    def image_lattice(self, L: FiniteDistributiveLattice) -> FiniteDistributiveLattice:
        return FiniteDistributiveLattice(self.source.lattice.ground,
                                         (self.embedding[e] for e in L.element_set()), check=False)

    def then(self, other: "LatticeMorphism") -> "LatticeMorphism":
        """Composite ``self.source -> other.target``; embeddings compose in reverse."""
        return LatticeMorphism(self.source, other.target,
                               {e: self.embedding[other.embedding[e]] for e in other.embedding})

    @classmethod
    def identity(cls, obj: MeasuredLattice) -> "LatticeMorphism":
        return cls(obj, obj, {e: e for e in obj.lattice.elements})


def check_morphism(phi: LatticeMorphism, cover_budget: int | None = None,
                   tol: float = MASS_TOL) -> list[Violation]:
    out = []
    V, W = phi.source, phi.target
    emb = phi.embedding
    Wl = W.lattice
    missing = [e for e in Wl.elements if e not in emb]
    if missing:
        return [Violation("totality", tuple(missing), f"{len(missing)} target elements unmapped")]
    images = [emb[e] for e in Wl.elements]
    if len(set(images)) != len(images):
        out.append(Violation("injectivity", (), "embedding is not injective"))
    for img in images:
        if img not in V.lattice:
            out.append(Violation("range", (img,), "image outside the source lattice"))
            return out
    if emb[Wl.bottom] != V.lattice.bottom or emb[Wl.top] != V.lattice.top:
        out.append(Violation("bounds", (), "bottom/top not preserved"))
    for a in Wl.elements:
        for b in Wl.elements:
            if emb[a & b] != emb[a] & emb[b]:
                out.append(Violation("meet", (a, b), f"meet of {Wl.labels(a)}, {Wl.labels(b)} not preserved"))
            if emb[a | b] != emb[a] | emb[b]:
                out.append(Violation("join", (a, b), f"join of {Wl.labels(a)}, {Wl.labels(b)} not preserved"))
    for a in Wl.elements:
        if abs(V.m(emb[a]) - W.m(a)) > tol:
            out.append(Violation("measurement", (a,),
                                 f"m_source(Phi({Wl.labels(a)})) = {V.m(emb[a])} != m_target = {W.m(a)}"))
    budget = len(Wl) if cover_budget is None else cover_budget
    for alpha in enumerate_covers(Wl, budget):
        lhs = V.omega(phi.image_cover(alpha))
        rhs = phi.image_lattice(W.omega(alpha))
        if lhs != rhs:
            out.append(Violation("localization", tuple(alpha),
                                 f"Omega not preserved at cover {format_cover(Wl.ground, alpha)}"))
    return out


def dyadic(x) -> bool:
    return isinstance(x, Fraction) and (x.denominator & (x.denominator - 1)) == 0


def element_label_key(ground, e: Element) -> str:
    return "[" + ",".join(ground.labels(e)) + "]"


def sort_elements(es):
    return sorted(es, key=element_key)


# -- JSON ------------------------------------------------------------------------

def parse_element_key(ground, key: str) -> Element:
    """``"[a,b]"`` -> bitmask."""
    body = key.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise LatticeError(f"element key {key!r} must look like [a,b]")
    labels = [s.strip() for s in body[1:-1].split(",") if s.strip()]
    return ground.element(labels)


def cover_key(ground, cover) -> str:
    return ";".join(element_label_key(ground, e) for e in sort_elements(cover))


def parse_cover_key(ground, key: str) -> Cover:
    return frozenset(parse_element_key(ground, part) for part in key.split(";") if part.strip())


def measured_from_json(data: dict, maps: Sequence[Callable] = ()) -> MeasuredLattice:
    """``{"lattice": ..., "m": {"[a,b]": 0.5, ...}, "omega": ...}``; the
    bottom element may be left out of ``m``."""
    try:
        L = FiniteDistributiveLattice.from_json(data["lattice"])
        raw = data["m"]
    except (KeyError, TypeError) as exc:
        raise LatticeError(f"measured lattice JSON needs 'lattice' and 'm': {exc}") from None
    g = L.ground
    values = {parse_element_key(g, k): v for k, v in raw.items()}
    values.setdefault(0, 0)
    for e in values:
        if e not in L:
            raise LatticeError(f"m is given on {g.labels(e)}, which is not in the lattice")
    om = data.get("omega")
    if om is None or om == "ambient":
        omega = AmbientLocalization(L)
    elif om == "generated-subalgebra":
        omega = GeneratedLocalization(L, maps, complement=True)
    elif om == "generated-topology":
        omega = GeneratedLocalization(L, maps, complement=False)
    elif isinstance(om, dict):
        omega = TabulatedLocalization(L, {parse_cover_key(g, k): FiniteDistributiveLattice.from_json(
            {"ground": list(g.points), "elements": v} if isinstance(v, list) else v)
            for k, v in om.items()})
    else:
        raise LatticeError(f"unknown omega rule {om!r}")
    return MeasuredLattice(L, TabulatedMeasurement(values), omega)


def measured_to_json(V: MeasuredLattice) -> dict:
    L = V.lattice
    out = {"lattice": L.to_json(),
           "m": {element_label_key(L.ground, e): V.m(e) for e in L.elements}}
    name = getattr(V.omega, "name", None)
    if name in ("generated-subalgebra", "generated-topology", "ambient"):
        out["omega"] = name
    return out
