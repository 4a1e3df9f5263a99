"""Finite topological and probability systems, their measured lattices, and
checks of the categorical laws on finite instances."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations, product
from typing import Iterable, Sequence

from .actions import (DynamicalLattice, GroupAction, compose, identity_perm,
                      invert, preimage)
from .entropy import DEFAULT, EXACT, EntropyConfig, MDLEntropy, f_alpha_w, h_mdl
from .lattice import (Element, FiniteDistributiveLattice, GroundSet, LatticeError,
                      close_family, element_key, format_cover, intersect_lattices,
                      iter_bits)
from .measured import (GeneratedLocalization, LatticeMorphism, MeasuredLattice,
                       NonemptyIndicator, PointMeasure, Violation,
                       check_measurement_axioms, check_morphism, enumerate_covers,
                       is_local_sublattice)
from .shifts import ShiftError, ShiftSystem, shift_entropy_table

TOP, PSP = "top", "psp"
ENTROPY_TOL = 1e-9


class FunctorError(ValueError):
    """Invalid system or factor map."""


# -- systems ---------------------------------------------------------------------

def _check_action(lattice, action):
    if action.n_points != lattice.ground.size:
        raise FunctorError("action and lattice live on different point sets")
    bad = action.violations(lattice)
    if bad:
        raise FunctorError(f"action does not preserve the lattice: {bad[0]}")


@dataclass(frozen=True)
class FiniteTopSystem:
    opens: FiniteDistributiveLattice
    action: GroupAction

    kind = TOP

    def __post_init__(self):
        _check_action(self.opens, self.action)

    @property
    def ground(self) -> GroundSet:
        return self.opens.ground

    @property
    def lattice(self):
        return self.opens


@dataclass(frozen=True)
class FiniteProbSystem:
    algebra: FiniteDistributiveLattice
    mu: tuple
    action: GroupAction

    kind = PSP

    def __post_init__(self):
        mu = tuple(self.mu)
        object.__setattr__(self, "mu", mu)
        if not self.algebra.is_complemented():
            raise FunctorError("the algebra of a probability system must be complement-closed")
        if len(mu) != self.algebra.ground.size or any(x < 0 for x in mu):
            raise FunctorError("mu needs one nonnegative weight per point")
        if abs(sum(mu) - 1) > 1e-9:
            raise FunctorError(f"mu sums to {sum(mu)}, not 1")
        _check_action(self.algebra, self.action)
        m = PointMeasure(mu)
        bad = self.action.violations(self.algebra, m)
        if bad:
            raise FunctorError(f"action is not measure preserving: {bad[0]}")

    @property
    def ground(self) -> GroundSet:
        return self.algebra.ground

    @property
    def lattice(self):
        return self.algebra


def system_from_json(data: dict):
    """``{"type": "top"|"psp", "ground": [...], "lattice": [[...], ...],
    "mu": [...] or {label: w}, "action": {...}}``"""
    try:
        kind = data["type"]
        lattice = FiniteDistributiveLattice.from_json({"ground": data["ground"],
                                                       "elements": data["lattice"]})
    except (KeyError, TypeError) as exc:
        raise FunctorError(f"finite system needs 'type', 'ground' and 'lattice': {exc}") from None
    labels = lattice.ground.points
    action = GroupAction.from_json(data.get("action", {}), labels)
    if kind == TOP:
        return FiniteTopSystem(lattice, action)
    if kind == PSP:
        mu = data.get("mu")
        if mu is None:
            mu = [Fraction(1, len(labels))] * len(labels)
        elif isinstance(mu, dict):
            mu = [mu.get(lab, 0) for lab in labels]
        return FiniteProbSystem(lattice, tuple(mu), action)
    raise FunctorError(f"unknown system type {kind!r}")


def system_to_json(system) -> dict:
    out = {"type": system.kind, "ground": list(system.ground.points),
           "lattice": [system.lattice.labels(e) for e in system.lattice.elements],
           "action": system.action.to_json(system.ground.points)}
    if system.kind == PSP:
        out["mu"] = [float(x) for x in system.mu]
    return out


# -- functors ----------------------------------------------------------------------

def m_top(system: FiniteTopSystem) -> DynamicalLattice:
    omega = GeneratedLocalization(system.opens, system.action.maps(), complement=False)
    return DynamicalLattice(MeasuredLattice(system.opens, NonemptyIndicator(), omega), system.action)


def m_psp(system: FiniteProbSystem) -> DynamicalLattice:
    omega = GeneratedLocalization(system.algebra, system.action.maps(), complement=True)
    return DynamicalLattice(MeasuredLattice(system.algebra, PointMeasure(system.mu), omega),
                            system.action)


def functor(kind: str):
    return {TOP: m_top, PSP: m_psp}[kind]


def apply_functor(system) -> DynamicalLattice:
    return functor(system.kind)(system)


# -- factor maps -----------------------------------------------------------------

def pull_back(point_map: Sequence[int], e: Element) -> Element:
    out = 0
    for i, j in enumerate(point_map):
        if e >> j & 1:
            out |= 1 << i
    return out


@dataclass
class FactorMap:
    """Equivariant surjection ``source -> target`` of point sets."""

    source: object
    target: object
    point_map: tuple

    def __post_init__(self):
        self.point_map = tuple(self.point_map)
        problems = self.problems()
        if problems:
            raise FunctorError(problems[0])

    def problems(self) -> list[str]:
        src, tgt, f = self.source, self.target, self.point_map
        out = []
        if src.kind != tgt.kind:
            return [f"source is {src.kind} but target is {tgt.kind}"]
        if len(f) != src.ground.size or any(not 0 <= j < tgt.ground.size for j in f):
            return ["point map has the wrong domain or range"]
        if set(f) != set(range(tgt.ground.size)):
            out.append("point map is not surjective")
        if src.action.dimension != tgt.action.dimension:
            return out + ["source and target actions have different dimensions"]
        for p, q in zip(src.action.perms, tgt.action.perms):
            if any(f[p[i]] != q[f[i]] for i in range(len(f))):
                out.append("point map does not intertwine the actions")
                break
        for U in tgt.lattice.elements:
            if pull_back(f, U) not in src.lattice:
                what = "continuous" if src.kind == TOP else "measurable"
                out.append(f"point map is not {what}: preimage of {tgt.lattice.labels(U)}")
                break
        if src.kind == PSP:
            for a in tgt.lattice.elements:
                lhs = sum(src.mu[i] for i in iter_bits(pull_back(f, a)))
                rhs = sum(tgt.mu[i] for i in iter_bits(a))
                if abs(lhs - rhs) > 1e-9:
                    out.append(f"point map does not preserve mu on {tgt.lattice.labels(a)}")
                    break
        return out

    def then(self, other: "FactorMap") -> "FactorMap":
        """``other after self``: source -> other.target."""
        return FactorMap(self.source, other.target,
                         tuple(other.point_map[j] for j in self.point_map))

    @classmethod
    def identity(cls, system) -> "FactorMap":
        return cls(system, system, identity_perm(system.ground.size))


def apply_functor_to_morphism(kind: str, phi: FactorMap,
                              source: DynamicalLattice | None = None,
                              target: DynamicalLattice | None = None) -> LatticeMorphism:
    """Preimage embedding of the target lattice into the source lattice."""
    if phi.source.kind != kind:
        raise FunctorError(f"factor map is between {phi.source.kind} systems, not {kind}")
    M = functor(kind)
    source = source or M(phi.source)
    target = target or M(phi.target)
    emb = {U: pull_back(phi.point_map, U) for U in phi.target.lattice.elements}
    return LatticeMorphism(source.measured, target.measured, emb)


def morphism_violations(kind: str, phi: FactorMap, cover_budget: int | None = None) -> list[Violation]:
    return check_morphism(apply_functor_to_morphism(kind, phi), cover_budget)


def composition_law_holds(kind: str, phi: FactorMap, psi: FactorMap) -> bool:
    """M(psi o phi) == M(phi) then M(psi), compared as embeddings."""
    direct = apply_functor_to_morphism(kind, phi.then(psi))
    staged = apply_functor_to_morphism(kind, phi).then(apply_functor_to_morphism(kind, psi))
    return direct.embedding == staged.embedding


# -- quotient enumeration ----------------------------------------------------------

def set_partitions(n: int):
    """Restricted growth strings: ``labels[i]`` is the block of point i."""
    labels = [0] * n

    def rec(i, k):
        if i == n:
            yield tuple(labels), k
            return
        for b in range(k + 1):
            labels[i] = b
            yield from rec(i + 1, max(k, b + 1))

    if n == 0:
        yield (), 0
        return
    yield from rec(1, 1)


def _induced_perm(labels, k, p):
    out = [None] * k
    for i, b in enumerate(labels):
        c = labels[p[i]]
        if out[b] is None:
            out[b] = c
        elif out[b] != c:
            return None
    return tuple(out)


@lru_cache(maxsize=None)
def all_topologies(k: int) -> tuple:
    """Every topology on k labelled points, as frozensets of bitmasks."""
    full = (1 << k) - 1
    start = frozenset({0, full})
    seen = {start}
    stack = [start]
    while stack:
        F = stack.pop()
        for x in range(1, full):
            if x not in F:
                G = close_family(F | {x}, full)
                if G not in seen:
                    seen.add(G)
                    stack.append(G)
    return tuple(sorted(seen, key=lambda F: (len(F), sorted(F))))


@lru_cache(maxsize=None)
def all_partition_algebras(k: int) -> tuple:
    full = (1 << k) - 1
    out = []
    for labels, nb in set_partitions(k):
        blocks = [sum(1 << i for i, b in enumerate(labels) if b == j) for j in range(nb)]
        out.append(close_family(blocks, full, complement=True))
    return tuple(out)


@dataclass(frozen=True)
class Quotient:
    labels: tuple          # point -> block
    blocks: int
    perms: tuple           # induced generator perms on blocks
    structure: frozenset   # target lattice on blocks


def enumerate_quotients(system, budget: int | None = None):
    """Factors of ``system`` up to relabelling of the target points.

    Yields Quotient records, then ``None`` if the budget ran out first.
    """
    L = system.lattice
    n = system.ground.size
    perms = system.action.perms
    examined = 0
    for labels, k in set_partitions(n):
        induced = []
        for p in perms:
            q = _induced_perm(labels, k, p)
            if q is None:
                break
            induced.append(q)
        else:
            full_k = (1 << k) - 1
            final = {U for U in range(full_k + 1) if pull_back(labels, U) in L}
            pool = all_topologies(k) if system.kind == TOP else all_partition_algebras(k)
            for T in pool:
                if not T <= final:
                    continue
                if any(preimage(q, U) not in T for q in induced for U in T):
                    continue
                examined += 1
                if budget is not None and examined > budget:
                    yield None
                    return
                yield Quotient(labels, k, tuple(induced), T)


def quotient_factor(system, quotient: Quotient) -> FactorMap:
    ground = GroundSet(tuple(f"q{j}" for j in range(quotient.blocks)))
    lattice = FiniteDistributiveLattice(ground, quotient.structure, check=False)
    action = GroupAction(quotient.blocks, quotient.perms, boolean=system.action.boolean)
    if system.kind == TOP:
        target = FiniteTopSystem(lattice, action)
    else:
        mu = [0] * quotient.blocks
        for i, b in enumerate(quotient.labels):
            mu[b] += system.mu[i]
        target = FiniteProbSystem(lattice, tuple(mu), action)
    return FactorMap(system, target, quotient.labels)


def enumerate_factors(system, budget: int | None = None) -> list[FactorMap]:
    out = []
    for q in enumerate_quotients(system, budget):
        if q is None:
            break
        out.append(quotient_factor(system, q))
    return out


# -- localization minimality -------------------------------------------------------

@dataclass
class SpacialIndex:
    """Preimage lattices of all enumerated factors of one system."""

    lattices: list
    witnesses: list
    complete: bool

    @classmethod
    def build(cls, system, budget: int | None = None) -> "SpacialIndex":
        lattices, witnesses, seen = [], [], {}
        complete = True
        for q in enumerate_quotients(system, budget):
            if q is None:
                complete = False
                break
            image = frozenset(pull_back(q.labels, U) for U in q.structure)
            if image not in seen:
                seen[image] = len(lattices)
                lattices.append(image)
                witnesses.append(q)
        return cls(lattices, witnesses, complete)

    def realized(self, alpha) -> tuple[frozenset, Quotient | None]:
        """Intersection of the spacial lattices containing alpha, and a
        factor whose image is exactly that intersection (if any)."""
        alpha = frozenset(alpha)
        hits = [(image, q) for image, q in zip(self.lattices, self.witnesses) if alpha <= image]
        if not hits:
            return frozenset(), None
        out = frozenset.intersection(*(image for image, _ in hits))
        witness = next((q for image, q in hits if image == out), None)
        return out, witness


@dataclass
class MinimalityReport:
    status: str                      # equal | counterexample | inconclusive
    omega: tuple
    realized: tuple
    witness: tuple | None = None     # block labels of a factor realizing Omega(alpha)
    factors_examined: int = 0
    detail: str = ""

    def to_json(self) -> dict:
        return {"status": self.status, "omega": [list(e) for e in self.omega],
                "realized": [list(e) for e in self.realized],
                "witness": list(self.witness) if self.witness else None,
                "factors_examined": self.factors_examined, "detail": self.detail}


def check_localization_minimality(system, kind: str | None, alpha,
                                  factor_enumeration_budget: int | None = None,
                                  index: SpacialIndex | None = None) -> MinimalityReport:
    """Compare Omega(alpha) with the intersection of all spacial sublattices
    (preimage lattices of factors) containing alpha."""
    kind = kind or system.kind
    if kind != system.kind:
        raise FunctorError(f"system is {system.kind}, not {kind}")
    alpha = frozenset(alpha)
    L = system.lattice
    for a in alpha:
        if a not in L:
            raise FunctorError(f"cover member {L.labels(a)} is not in the lattice")
    index = index or SpacialIndex.build(system, factor_enumeration_budget)
    omega = apply_functor(system).omega(alpha).element_set()
    realized, witness = index.realized(alpha)
    lab = lambda fam: tuple(tuple(L.labels(e)) for e in sorted(fam, key=element_key))
    rep = MinimalityReport("equal", lab(omega), lab(realized),
                           witness.labels if witness else None, len(index.lattices))
    if not index.complete:
        rep.status = "inconclusive"
        rep.detail = "factor enumeration budget exhausted"
    elif realized != omega:
        rep.status = "counterexample"
        extra = sorted(realized ^ omega, key=element_key)
        side = "realized only" if extra[0] in realized else "Omega only"
        rep.detail = f"element {L.labels(extra[0])} ({side})"
    return rep


# -- coproduct stability -----------------------------------------------------------

def check_coproduct_stability(dyn: DynamicalLattice, lattices: Sequence[FiniteDistributiveLattice]) -> list[str]:
    """The intersection of local invariant sublattices is local and invariant."""
    out = []
    meet = intersect_lattices(list(lattices))
    for L in list(lattices) + [meet]:
        if dyn.action.violations(L):
            out.append(f"not invariant: {L}")
    if not is_local_sublattice(dyn.measured, meet):
        out.append("intersection is not local")
    return out


# -- trivial measurement functor ------------------------------------------------------

POINT = GroundSet(("*",))


def m_zero() -> MeasuredLattice:
    return MeasuredLattice(FiniteDistributiveLattice.trivial(POINT), PointMeasure([1]))


def unique_arrow(dyn: DynamicalLattice) -> LatticeMorphism:
    """The component M(A) -> M0(A): 0 -> bottom, 1 -> top."""
    return LatticeMorphism(dyn.measured, m_zero(), {0: 0, 1: dyn.lattice.top})


def naturality_violations(phi: FactorMap) -> list[str]:
    """Square: M(phi) followed by the target arrow equals the source arrow
    followed by M0(phi) (the identity of {0, 1})."""
    kind = phi.source.kind
    src, tgt = apply_functor(phi.source), apply_functor(phi.target)
    Mphi = apply_functor_to_morphism(kind, phi, src, tgt)
    left = Mphi.then(unique_arrow(tgt))
    right = unique_arrow(src)
    out = []
    if left.embedding != right.embedding:
        out.append("naturality square does not commute")
    for arrow in (unique_arrow(src), unique_arrow(tgt)):
        out.extend(str(v) for v in check_morphism(arrow))
    return out


# -- entropy of systems ------------------------------------------------------------

def system_entropy(system, config: EntropyConfig = DEFAULT) -> MDLEntropy:
    return h_mdl(apply_functor(system), config)


@dataclass
class InequalityResult:
    label: str
    kind: str
    source: float
    target: float
    holds: bool
    certificate: str
    windows_checked: int = 0
    detail: str = ""

    def to_json(self) -> dict:
        return {"label": self.label, "kind": self.kind, "source": self.source,
                "target": self.target, "holds": self.holds,
                "certificate": self.certificate, "windows_checked": self.windows_checked,
                "detail": self.detail}


@dataclass
class ShiftFactor:
    """Symbol code ``source -> target`` between shifts (one-block map)."""

    source: ShiftSystem
    target: ShiftSystem
    symbol_map: dict

    def __post_init__(self):
        a, b = self.source.alphabet, self.target.alphabet
        if set(self.symbol_map) != set(a) or not set(self.symbol_map.values()) <= set(b):
            raise FunctorError("symbol map must send every source symbol into the target alphabet")
        if set(self.symbol_map.values()) != set(b):
            raise FunctorError("symbol map is not surjective")
        if self.target.kind == "point":
            return
        if self.source.kind == "bernoulli" and self.target.kind == "bernoulli":
            push = {s: 0 for s in b}
            for s, w in zip(a, self.source.weights):
                push[self.symbol_map[s]] += w
            if any(abs(push[s] - w) > 1e-9 for s, w in zip(b, self.target.weights)):
                raise FunctorError("symbol map does not push the weights forward")
            return
        raise FunctorError("shift factors are supported onto Bernoulli or point systems")


def _finite_pair(label, phi: FactorMap, config) -> InequalityResult:
    hs, ht = system_entropy(phi.source, config), system_entropy(phi.target, config)
    bad = [n for (n, s, _), (_, t, _) in zip(hs.windows, ht.windows) if s < t - ENTROPY_TOL]
    holds = hs.value >= ht.value - ENTROPY_TOL and not bad
    certs = {hs.certificate, ht.certificate} | {c for *_, c in hs.windows + ht.windows}
    cert = EXACT if certs <= {EXACT} else sorted(certs)[0]
    detail = f"window {bad[0]} violates the inequality" if bad else ""
    return InequalityResult(label, phi.source.kind, hs.value, ht.value, holds, cert,
                            len(hs.windows), detail)


def _shift_pair(label, phi: ShiftFactor, config) -> InequalityResult:
    ts, tt = shift_entropy_table(phi.source, config), shift_entropy_table(phi.target, config)
    bad = [r.n for r, s in zip(ts.rows, tt.rows) if r.ratio < s.ratio - ENTROPY_TOL]
    holds = ts.limit.value >= tt.limit.value - ENTROPY_TOL and not bad
    cert = EXACT if {ts.limit.certificate, tt.limit.certificate} == {EXACT} else "upper-bound"
    return InequalityResult(label, "shift", ts.limit.value, tt.limit.value, holds, cert,
                            len(ts.rows), f"window {bad[0]} violates the inequality" if bad else "")


@dataclass
class InequalityReport:
    left: list = field(default_factory=list)
    right: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.holds for r in self.left + self.right)

    def violations(self) -> list:
        return [r for r in self.left + self.right if not r.holds]

    def to_json(self) -> dict:
        return {"passed": self.passed, "left": [r.to_json() for r in self.left],
                "right": [r.to_json() for r in self.right]}


def entropic_inequality_suite(pairs: Iterable, config: EntropyConfig = DEFAULT) -> InequalityReport:
    """Left inequality on every (label, factor) pair; right inequality against
    the trivial measurement functor for every finite source."""
    report = InequalityReport()
    for label, phi in pairs:
        if isinstance(phi, ShiftFactor):
            report.left.append(_shift_pair(label, phi, config))
            continue
        res = _finite_pair(label, phi, config)
        report.left.append(res)
        problems = naturality_violations(phi)
        report.right.append(InequalityResult(
            label, phi.source.kind, res.source, 0.0,
            res.source >= -ENTROPY_TOL and not problems, res.certificate,
            detail="; ".join(problems)))
    return report


def ornstein_weiss_violations(system, alpha, config: EntropyConfig = DEFAULT,
                              side: int = 3) -> tuple[list[str], int, set]:
    """Monotonicity, subadditivity and right invariance of F -> h_W(alpha^F)
    over all nonempty F in the box {0..side-1}^d, with W = Omega(alpha)."""
    dyn = apply_functor(system)
    W = dyn.omega(alpha)
    d = system.action.dimension
    box = list(product(range(side), repeat=d))
    Fs = [frozenset(c) for r in range(1, len(box) + 1) for c in combinations(box, r)]
    cache: dict = {}
    certs = set()

    def f(F):
        F = frozenset(F)
        if F not in cache:
            est = f_alpha_w(system.action, alpha, W, dyn.m, F, config, method="auto")
            certs.add(est.certificate)
            cache[F] = est.value
        return cache[F]

    out, checks = [], 0
    gens = [tuple(1 if i == j else 0 for i in range(d)) for j in range(d)]
    gens += [tuple(-x for x in g) for g in gens]
    for F in Fs:
        for g in gens:
            checks += 1
            Fg = frozenset(tuple(a + b for a, b in zip(x, g)) for x in F)
            if abs(f(Fg) - f(F)) > ENTROPY_TOL:
                out.append(f"right invariance fails at F={sorted(F)}, g={g}")
    for F in Fs:
        for G in Fs:
            checks += 1
            if F <= G and f(F) > f(G) + ENTROPY_TOL:
                out.append(f"monotonicity fails at {sorted(F)} <= {sorted(G)}")
            if f(F | G) > f(F) + f(G) + ENTROPY_TOL:
                out.append(f"subadditivity fails at {sorted(F)}, {sorted(G)}")
    return out, checks, certs


# -- corpora ----------------------------------------------------------------------

def _automorphisms(lattice: FiniteDistributiveLattice, mu=None) -> list[tuple]:
    n = lattice.ground.size
    els = lattice.element_set()
    out = []
    for p in permutations(range(n)):
        if mu is not None and any(mu[p[i]] != mu[i] for i in range(n)):
            continue
        if all(preimage(p, e) in els for e in els):
            out.append(p)
    return out


def _generated_group(gens, n) -> frozenset:
    group = {identity_perm(n)}
    frontier = list(group)
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = compose(g, x)
            if y not in group:
                group.add(y)
                frontier.append(y)
    return frozenset(group)


def abelian_actions(lattice, n, mu=None, boolean=False) -> list[GroupAction]:
    """One action per abelian subgroup of Aut generated by at most two elements."""
    auts = _automorphisms(lattice, mu)
    ident = identity_perm(n)
    seen, out = set(), []
    for i, p in enumerate(auts):
        for q in auts[i:]:
            if compose(p, q) != compose(q, p):
                continue
            group = _generated_group([p, q], n)
            if group in seen:
                continue
            seen.add(group)
            gens = [g for g in (p, q) if g != ident]
            if len(gens) == 2 and gens[0] == gens[1]:
                gens = gens[:1]
            out.append(GroupAction(n, gens or [ident], boolean))
    return out


def _canonical(family, n) -> tuple:
    return min(tuple(sorted(preimage(p, e) for e in family)) for p in permutations(range(n)))


@lru_cache(maxsize=None)
def topologies_up_to_iso(n: int) -> tuple:
    reps = {}
    for T in all_topologies(n):
        reps.setdefault(_canonical(T, n), T)
    return tuple(reps.values())


@lru_cache(maxsize=None)
def algebras_up_to_iso(n: int) -> tuple:
    reps = {}
    for A in all_partition_algebras(n):
        reps.setdefault(_canonical(A, n), A)
    return tuple(reps.values())


def small_systems(max_points: int, kinds=(TOP, PSP)) -> list:
    """Every TOP and PSP system up to isomorphism on at most ``max_points``
    points (uniform mu), with every abelian action by at most two generators."""
    out = []
    for n in range(1, max_points + 1):
        ground = GroundSet(tuple("abcdefgh"[:n]))
        if TOP in kinds:
            for T in topologies_up_to_iso(n):
                L = FiniteDistributiveLattice(ground, T, check=False)
                for act in abelian_actions(L, n):
                    out.append(FiniteTopSystem(L, act))
        if PSP in kinds:
            mu = tuple([Fraction(1, n)] * n)
            for A in algebras_up_to_iso(n):
                L = FiniteDistributiveLattice(ground, A, check=False)
                for act in abelian_actions(L, n, boolean=True):
                    out.append(FiniteProbSystem(L, mu, act))
    return out


def random_system(rng: random.Random, kind: str, n: int | None = None, max_points: int = 4):
    n = n or rng.randint(2, max_points)
    ground = GroundSet(tuple("abcdefgh"[:n]))
    full = (1 << n) - 1
    seeds = rng.sample(range(1, full), k=min(rng.randint(1, 3), full - 1))
    L = FiniteDistributiveLattice(ground, close_family(seeds, full, complement=kind == PSP),
                                  check=False)
    acts = abelian_actions(L, n, boolean=kind == PSP)
    act = rng.choice(acts)
    if kind == TOP:
        return FiniteTopSystem(L, act)
    # mu constant on orbits of the group so that the action preserves it
    group = _generated_group(act.perms, n)
    orbit = list(range(n))
    for g in group:
        for i in range(n):
            a, b = orbit[i], orbit[g[i]]
            if a != b:
                orbit = [min(a, b) if o in (a, b) else o for o in orbit]
    weights = {o: Fraction(rng.randint(1, 4)) for o in set(orbit)}
    raw = [weights[orbit[i]] for i in range(n)]
    if rng.random() < 0.3:
        zero = rng.choice(sorted(set(orbit)))
        raw = [Fraction(0) if orbit[i] == zero else raw[i] for i in range(n)]
        if not any(raw):
            raw = [Fraction(1)] * n
    total = sum(raw)
    return FiniteProbSystem(L, tuple(x / total for x in raw), act)


def random_corpus(seed: int, count: int, max_points: int = 4) -> list:
    rng = random.Random(seed)
    return [random_system(rng, TOP if i % 2 == 0 else PSP, max_points=max_points)
            for i in range(count)]


def builtin_systems() -> dict:
    """Named small systems used by the verification suites."""
    g3 = GroundSet(("a", "b", "c"))
    g4 = GroundSet(("a", "b", "c", "d"))
    g2 = GroundSet(("x", "y"))
    cycle3 = GroupAction(3, [(1, 2, 0)])
    swap_cd = (0, 1, 3, 2)
    rot4 = (1, 2, 3, 0)
    disc3 = FiniteDistributiveLattice(g3, range(8), check=False)
    disc4 = FiniteDistributiveLattice(g4, range(16), check=False)
    chain3 = FiniteDistributiveLattice.from_labels(g3, [[], ["a"], ["a", "b"], ["a", "b", "c"]])
    pair_alg4 = FiniteDistributiveLattice.from_labels(
        g4, [[], ["a", "b"], ["c", "d"], ["a", "b", "c", "d"]])
    half = Fraction(1, 2)
    return {
        "top-discrete-2-swap": FiniteTopSystem(FiniteDistributiveLattice(g2, range(4), check=False),
                                               GroupAction(2, [(1, 0)])),
        "top-discrete-3-cycle": FiniteTopSystem(disc3, cycle3),
        "top-discrete-3-trivial": FiniteTopSystem(disc3, GroupAction.trivial(3)),
        "top-chain-3": FiniteTopSystem(chain3, GroupAction.trivial(3)),
        "top-indiscrete-3": FiniteTopSystem(FiniteDistributiveLattice.trivial(g3), cycle3),
        "top-discrete-4-rot": FiniteTopSystem(disc4, GroupAction(4, [rot4])),
        "psp-uniform-3": FiniteProbSystem(disc3, (Fraction(1, 3),) * 3,
                                          GroupAction.trivial(3, boolean=True)),
        "psp-uniform-3-cycle": FiniteProbSystem(disc3, (Fraction(1, 3),) * 3,
                                                GroupAction(3, [(1, 2, 0)], boolean=True)),
        "psp-uniform-4": FiniteProbSystem(disc4, (Fraction(1, 4),) * 4,
                                          GroupAction.trivial(4, boolean=True)),
        "psp-uniform-4-rot": FiniteProbSystem(disc4, (Fraction(1, 4),) * 4,
                                              GroupAction(4, [rot4], boolean=True)),
        "psp-pairs-4-swap": FiniteProbSystem(pair_alg4, (Fraction(1, 8), Fraction(3, 8), half / 2, half / 2),
                                             GroupAction(4, [swap_cd], boolean=True)),
    }


def builtin_factor_pairs(extra_random: int = 0, seed: int = 0) -> list:
    """(label, factor) pairs: every enumerated factor of the small built-in
    systems, plus one shift-to-point pair."""
    pairs = []
    for name, system in builtin_systems().items():
        if len(system.lattice) > 8:
            continue
        for k, phi in enumerate(enumerate_factors(system)):
            pairs.append((f"{name}/factor{k}", phi))
    for j, system in enumerate(random_corpus(seed, extra_random, max_points=3)):
        for k, phi in enumerate(enumerate_factors(system)):
            pairs.append((f"random{seed}-{j}/factor{k}", phi))
    bern = ShiftSystem.bernoulli([Fraction(1, 2), Fraction(1, 2)])
    pairs.append(("bernoulli-to-point", ShiftFactor(bern, ShiftSystem.point(), {"0": "*", "1": "*"})))
    return pairs


def factor_chains(system) -> list[tuple[FactorMap, FactorMap]]:
    """Composable pairs (phi, psi) among the enumerated factors and their own factors."""
    out = []
    for phi in enumerate_factors(system):
        for psi in enumerate_factors(phi.target):
            out.append((phi, psi))
    return out
